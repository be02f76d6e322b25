#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sscc/apps.hpp"
#include "sscc/config.hpp"
#include "sscc/error.hpp"
#include "sscc/matrix.hpp"
#include "sscc/mds.hpp"
#include "sscc/poly.hpp"
#include "sscc/predictor.hpp"
#include "sscc/scheduler.hpp"
#include "sscc/trace.hpp"

namespace py = pybind11;

namespace {

sscc::DenseMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows[0].empty()) throw py::value_error("matrix must have at least one row and column");
    sscc::DenseMatrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) throw py::value_error("matrix rows must share one length");
        for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = rows[r][c];
    }
    return m;
}

std::vector<std::vector<double>> matrix_to_rows(const sscc::DenseMatrix& m) {
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) rows[r][c] = m.at(r, c);
    return rows;
}

py::dict assignment_to_dict(const sscc::Assignment& asg) {
    py::dict d;
    d["chunks"] = asg.chunksPerPartition;
    d["m"] = asg.m;
    std::vector<std::vector<std::size_t>> perWorker;
    perWorker.reserve(asg.workers());
    for (std::size_t w = 0; w < asg.workers(); ++w) perWorker.push_back(asg.chunks_of(w));
    d["worker_chunks"] = perWorker;
    return d;
}

} // namespace

PYBIND11_MODULE(_sscc, m) {
    m.doc() = "Coded matrix computation with adaptive work assignment: MDS and polynomial "
              "codes, squeeze schedulers, speed predictors, and a deterministic cluster "
              "simulator.";

    py::register_exception<sscc::Error>(m, "SsccError");

    m.def("chebyshev_points", &sscc::chebyshev_points, py::arg("n"),
          "Distinct evaluation points in (-1, 1), dealt out in the strided order the "
          "generators use.");

    m.def(
        "apportion_speeds",
        [](const std::vector<double>& speeds, std::uint64_t total) {
            return sscc::apportion_speeds(speeds, total);
        },
        py::arg("speeds"), py::arg("total"),
        "Largest-remainder integer speeds u summing exactly to `total`; zero marks a dead "
        "worker.");

    m.def(
        "general_s2c2",
        [](const std::vector<std::uint64_t>& u, std::size_t m_) {
            return assignment_to_dict(sscc::general_s2c2(u, m_));
        },
        py::arg("u"), py::arg("m"),
        "Proportional cyclic chunk assignment: dict with the circle size, the recovery "
        "threshold, and each worker's chunk ids.");

    m.def(
        "basic_s2c2",
        [](const std::vector<bool>& alive, std::size_t m_) {
            return assignment_to_dict(sscc::basic_s2c2(alive, m_));
        },
        py::arg("alive"), py::arg("m"),
        "Homogeneous special case: every live worker takes m of the (live count) chunks.");

    m.def(
        "mds_matvec",
        [](const std::vector<std::vector<double>>& a, const std::vector<double>& x, std::size_t n,
           std::size_t k, std::size_t chunks, bool chebyshevBasis,
           std::optional<std::vector<std::size_t>> responders) {
            const sscc::DenseMatrix mat = matrix_from_rows(a);
            const auto g =
                chebyshevBasis ? sscc::chebyshev_basis_generator(n, k) : sscc::vandermonde_generator(n, k);
            const auto [plan, blocks] = sscc::pad_and_partition(mat, k, chunks);
            const auto parts = sscc::mds_encode(blocks, g);
            const auto grid = sscc::chunk_grid(plan, chunks);
            std::vector<std::size_t> allChunks(grid.chunksPerPartition);
            for (std::size_t c = 0; c < allChunks.size(); ++c) allChunks[c] = c;
            std::vector<std::size_t> who;
            if (responders) {
                who = *responders;
            } else {
                who.resize(n);
                for (std::size_t w = 0; w < n; ++w) who[w] = w;
            }
            std::vector<std::vector<sscc::ChunkResponse>> perChunk(grid.chunksPerPartition);
            for (std::size_t w : who) {
                if (w >= parts.size()) throw py::value_error("responder id outside the code");
                for (auto& r : sscc::worker_matvec(parts[w], x, allChunks, grid))
                    perChunk[r.chunk].push_back(std::move(r));
            }
            const sscc::MdsDecoder dec(g);
            std::vector<std::vector<sscc::DenseVector>> decoded(grid.chunksPerPartition);
            for (std::size_t c = 0; c < grid.chunksPerPartition; ++c) decoded[c] = dec.decode_chunk(perChunk[c]);
            return sscc::assemble(decoded, plan, grid);
        },
        py::arg("a"), py::arg("x"), py::arg("n"), py::arg("k"), py::arg("chunks") = 1,
        py::arg("chebyshev_basis") = false, py::arg("responders") = py::none(),
        "A @ x through the coded path: encode into n partitions, compute on the chosen "
        "responders (all workers by default), decode every chunk, assemble.");

    m.def(
        "hessian",
        [](const std::vector<std::vector<double>>& a, const std::vector<double>& diag, std::size_t n,
           std::size_t split, bool chebyshev, bool useS2c2, const std::vector<double>& speeds,
           std::size_t cTarget) {
            const auto scheme = chebyshev ? sscc::PolyScheme::chebyshev(n, split, split)
                                          : sscc::PolyScheme::integer_points(n, split, split);
            sscc::HessianOptions opts;
            opts.useS2c2 = useS2c2;
            opts.speeds = speeds;
            opts.cTarget = cTarget;
            return matrix_to_rows(sscc::hessian_job(matrix_from_rows(a), diag, scheme, opts));
        },
        py::arg("a"), py::arg("diag"), py::arg("n"), py::arg("split"), py::arg("chebyshev") = true,
        py::arg("use_s2c2") = false, py::arg("speeds") = std::vector<double>{}, py::arg("c_target") = 0,
        "A^T diag(x) A through the polynomial code with a `split` x `split` block layout, "
        "optionally squeezed onto heterogeneous workers.");

    m.def(
        "ar1_fit",
        [](const std::vector<double>& series) {
            const auto model = sscc::ar1_fit(series);
            return py::make_tuple(model.mu, model.phi);
        },
        py::arg("series"), "Least-squares AR(1) fit; returns (mu, phi).");

    m.def(
        "ar1_predict",
        [](double mu, double phi, double current) { return sscc::ar1_predict({mu, phi}, current); },
        py::arg("mu"), py::arg("phi"), py::arg("current"));

    {
        const sscc::TrainConfig defaults;
        m.def(
            "lstm_train",
            [](const std::vector<std::vector<double>>& traces, std::size_t epochs, double learningRate,
               double gradClip, std::uint64_t seed, double trainFraction) {
                sscc::TrainConfig cfg;
                cfg.epochs = epochs;
                cfg.learningRate = learningRate;
                cfg.gradClip = gradClip;
                cfg.seed = seed;
                cfg.trainFraction = trainFraction;
                const auto result = sscc::lstm_train(traces, cfg);
                py::dict d;
                d["model_json"] = sscc::lstm_to_json(result.model);
                d["train_mape"] = result.trainMape;
                d["test_mape"] = result.testMape;
                return d;
            },
            py::arg("traces"), py::arg("epochs") = defaults.epochs,
            py::arg("learning_rate") = defaults.learningRate, py::arg("grad_clip") = defaults.gradClip,
            py::arg("seed") = defaults.seed, py::arg("train_fraction") = defaults.trainFraction,
            "Trains the 4-hidden-unit LSTM one-step speed predictor; returns the model as "
            "JSON plus pooled train/test MAPE percentages.");
    }

    m.def(
        "lstm_predict_next",
        [](const std::string& modelJson, const std::vector<double>& history) {
            if (history.empty()) throw py::value_error("history must not be empty");
            const sscc::LstmModel model = sscc::lstm_from_json(modelJson);
            sscc::LstmState state;
            double pred = 0.0;
            for (double v : history) pred = sscc::lstm_step(model, state, model.normalize(v));
            return pred;
        },
        py::arg("model_json"), py::arg("history"),
        "Feeds the whole speed history through a trained model and returns the one-step "
        "prediction after its last value.");

    m.def(
        "mape",
        [](const std::vector<double>& pred, const std::vector<double>& actual) {
            return sscc::mape(pred, actual);
        },
        py::arg("pred"), py::arg("actual"), "Mean absolute percentage error, in percent.");

    m.def(
        "gen_speed_trace",
        [](std::size_t workers, std::size_t iterations, double baseLo, double baseHi, double noisePct,
           double changeProb,
           const std::vector<std::tuple<std::size_t, double, std::size_t, std::size_t>>& stragglers,
           std::uint64_t seed) {
            sscc::TraceGenParams params;
            params.workers = workers;
            params.iterations = iterations;
            params.baseLo = baseLo;
            params.baseHi = baseHi;
            params.noisePct = noisePct;
            params.changeProb = changeProb;
            for (const auto& [worker, factor, iterBegin, iterEnd] : stragglers)
                params.stragglers.push_back({worker, factor, iterBegin, iterEnd});
            return sscc::gen_speed_trace(params, seed);
        },
        py::arg("workers") = 10, py::arg("iterations") = 120, py::arg("base_lo") = 50.0,
        py::arg("base_hi") = 150.0, py::arg("noise_pct") = 0.10, py::arg("change_prob") = 0.04,
        py::arg("stragglers") = std::vector<std::tuple<std::size_t, double, std::size_t, std::size_t>>{},
        py::arg("seed") = 1,
        "Piecewise-constant regime speeds with multiplicative noise; speeds[iter][worker]. "
        "Stragglers are (worker, factor, iter_begin, iter_end) slowdown windows.");

    m.def(
        "run_experiment",
        [](const std::string& configJson) {
            const sscc::ExperimentConfig cfg = sscc::parse_config_text(configJson);
            const sscc::ExperimentArtifacts artifacts = sscc::run_experiment(cfg);
            py::dict d;
            d["summary_json"] = sscc::summary_json(cfg, artifacts);
            std::ostringstream metrics;
            sscc::write_metrics_csv(metrics, artifacts.primary);
            d["metrics_csv"] = metrics.str();
            if (artifacts.baseline) {
                std::ostringstream baseline;
                sscc::write_metrics_csv(baseline, *artifacts.baseline);
                d["baseline_metrics_csv"] = baseline.str();
            }
            return d;
        },
        py::arg("config_json"),
        "Runs one experiment config (same JSON schema as the sscc-bench CLI) and returns "
        "the summary JSON and per-iteration metrics CSV as strings.");

    m.def(
        "config_defaults",
        [] { return sscc::config_to_json(sscc::ExperimentConfig{}); },
        "The experiment config JSON with every default materialized.");
}
