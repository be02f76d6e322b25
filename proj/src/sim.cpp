#include "sscc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sscc/error.hpp"
#include "sscc/matrix_io.hpp"

namespace sscc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Max absolute deviation scaled by max(1, |want|_inf). The floor of 1 turns
/// the check absolute when the exact values are themselves tiny.
double rel_gap(std::span<const double> got, std::span<const double> want) {
    if (got.size() != want.size()) return kInf;
    double scale = 1.0;
    double diff = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        scale = std::max(scale, std::abs(want[i]));
        diff = std::max(diff, std::abs(got[i] - want[i]));
    }
    return diff / scale;
}

DenseMatrix hessian_direct(const DenseMatrix& a, const DenseVector& x) {
    DenseMatrix h(a.cols(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const auto row = a.row(r);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double v = x[r] * row[i];
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < a.cols(); ++j) h.at(i, j) += v * row[j];
        }
    }
    return h;
}

std::size_t largest_divisor_at_most(std::size_t value, std::size_t cap) {
    for (std::size_t c = std::min(cap, value); c > 1; --c)
        if (value % c == 0) return c;
    return 1;
}

/// Per-phase accounting, merged into the IterationRecord by absorb().
struct PhaseStats {
    std::vector<double> assignedRows;
    std::vector<double> usedRows;
    std::vector<double> wastedRows;
    std::vector<double> arrival;
    std::vector<bool> timedOut;
    double finish = 0.0;
    double compute = 0.0;
    double decodeCost = 0.0;
    double deadlineValue = 0.0;
    bool armed = false;
    bool reassigned = false;

    explicit PhaseStats(std::size_t n)
        : assignedRows(n, 0.0), usedRows(n, 0.0), wastedRows(n, 0.0), arrival(n, 0.0), timedOut(n, false) {}
};

} // namespace

StrategyKind strategy_kind_from_string(const std::string& name) {
    if (name == "mds") return StrategyKind::Mds;
    if (name == "s2c2_basic") return StrategyKind::S2c2Basic;
    if (name == "s2c2_general") return StrategyKind::S2c2General;
    if (name == "poly") return StrategyKind::Poly;
    if (name == "replication") return StrategyKind::ReplicationUncoded;
    if (name == "overdecomp") return StrategyKind::OverDecomposition;
    fail(ErrorKind::InvalidValue, "unknown strategy kind: " + name);
}

const char* to_string(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::Mds: return "mds";
    case StrategyKind::S2c2Basic: return "s2c2_basic";
    case StrategyKind::S2c2General: return "s2c2_general";
    case StrategyKind::Poly: return "poly";
    case StrategyKind::ReplicationUncoded: return "replication";
    case StrategyKind::OverDecomposition: return "overdecomp";
    }
    return "unknown";
}

std::string strategy_label(const Strategy& s) {
    std::ostringstream out;
    switch (s.kind) {
    case StrategyKind::Mds:
        out << "mds_n" << s.n << "_k" << s.k;
        break;
    case StrategyKind::S2c2Basic:
        out << "s2c2_basic_n" << s.n << "_k" << s.k;
        break;
    case StrategyKind::S2c2General:
        out << "s2c2_general_n" << s.n << "_k" << s.k;
        break;
    case StrategyKind::Poly:
        out << "poly_n" << s.n << "_a" << s.a << "_b" << s.b;
        if (s.polyS2c2) out << "_s2c2";
        break;
    case StrategyKind::ReplicationUncoded:
        out << "replication_r" << s.replication;
        break;
    case StrategyKind::OverDecomposition:
        out << "overdecomp_x" << s.overFactor;
        break;
    }
    return out.str();
}

struct Simulator::Impl {
    Strategy strat;
    CostModel cost;
    SpeedTrace trace;
    AppKind app;
    Dataset data;
    std::uint64_t seed = 0;
    std::ostream* log = nullptr;

    std::size_t n = 0;
    AppState state;
    DenseMatrix at; ///< A transposed, for the gradient phase of LR/SVM

    std::unique_ptr<CodedMatVec> opA;
    std::unique_ptr<CodedMatVec> opAt;

    PolyScheme scheme;
    std::vector<PolyEncodedPair> polyParts;
    std::optional<PolyDecoder> polyDecoder;
    DenseVector hessianX;
    DenseMatrix hessianExact;
    std::size_t productRows = 0;
    std::size_t polyChunks = 1;
    std::size_t polyRightCols = 0;

    struct UncodedSide {
        PartitionPlan plan;
        std::vector<DenseMatrix> parts;
    };
    UncodedSide sideA;
    UncodedSide sideAt;

    std::optional<SpeedPredictor> predictor;
    std::vector<std::vector<double>> history;
    std::vector<bool> aliveMask;

    std::vector<double> speeds;    ///< actual speeds of the current iteration
    std::vector<double> predicted; ///< predicted speeds of the current iteration
    Assignment asg;                ///< current S2C2 assignment (when haveAsg)
    bool haveAsg = false;
    std::vector<bool> timedOutNow;
    IterationRecord* rec = nullptr;
    std::size_t curIter = 0;
    std::size_t curPhase = 0;

    struct PhaseOp;

    Impl(Strategy s, CostModel c, SpeedTrace tr, AppKind appKind, Dataset ds, std::uint64_t sd, std::ostream* lg)
        : strat(std::move(s)), cost(c), trace(std::move(tr)), app(appKind), data(std::move(ds)), seed(sd),
          log(lg), n(strat.n) {
        validate();
        build();
    }

    bool uses_timeout() const {
        return strat.kind == StrategyKind::S2c2Basic || strat.kind == StrategyKind::S2c2General ||
               (strat.kind == StrategyKind::Poly && strat.polyS2c2);
    }

    bool uses_predictor() const {
        return strat.kind == StrategyKind::S2c2General || strat.kind == StrategyKind::OverDecomposition ||
               (strat.kind == StrategyKind::Poly && strat.polyS2c2);
    }

    void validate() const {
        if (n == 0) fail(ErrorKind::InvalidValue, "strategy needs at least one worker");
        if (trace.empty()) fail(ErrorKind::InvalidValue, "speed trace is empty");
        for (const auto& row : trace)
            if (row.size() != n) fail(ErrorKind::LengthMismatch, "trace width does not match the worker count");
        if (cost.rowCost <= 0.0) fail(ErrorKind::InvalidValue, "rowCost must be positive");
        if (cost.perMessageLatency < 0.0 || cost.bytesPerSecond < 0.0 || cost.decodeSecondsPerChunk < 0.0)
            fail(ErrorKind::InvalidValue, "cost model fields must be nonnegative");
        if (strat.theta < 0.0) fail(ErrorKind::InvalidValue, "theta must be nonnegative");
        if (strat.cTarget == 0) fail(ErrorKind::InvalidValue, "cTarget must be positive");

        switch (strat.kind) {
        case StrategyKind::Mds:
        case StrategyKind::S2c2Basic:
        case StrategyKind::S2c2General:
            if (strat.k == 0 || strat.k > n) fail(ErrorKind::InvalidValue, "k must satisfy 1 <= k <= n");
            break;
        case StrategyKind::Poly:
            if (strat.a == 0 || strat.b == 0 || strat.a * strat.b > n)
                fail(ErrorKind::InvalidValue, "poly splits need a*b <= n");
            if (strat.a != strat.b) fail(ErrorKind::InvalidValue, "the Hessian product needs a == b");
            break;
        case StrategyKind::ReplicationUncoded:
            if (strat.replication < 2 || strat.replication > n)
                fail(ErrorKind::InvalidValue, "replication factor must be in [2, n]");
            break;
        case StrategyKind::OverDecomposition:
            if (strat.overFactor == 0) fail(ErrorKind::InvalidValue, "overFactor must be positive");
            if (strat.overReplication < 1.0 || strat.overReplication > 2.0)
                fail(ErrorKind::InvalidValue, "overReplication must be in [1, 2]");
            break;
        }

        if ((app == AppKind::Hessian) != (strat.kind == StrategyKind::Poly))
            fail(ErrorKind::InvalidValue, "the hessian app pairs with the poly strategy and nothing else does");
        if ((app == AppKind::Lr || app == AppKind::Svm) && data.y.size() != data.a.rows())
            fail(ErrorKind::LengthMismatch, "label count does not match the data rows");
        if ((app == AppKind::PageRank || app == AppKind::GraphFilter) && data.a.rows() != data.a.cols())
            fail(ErrorKind::BadShape, "graph apps need a square matrix");
        if (app == AppKind::Hessian && data.a.cols() % strat.a != 0)
            fail(ErrorKind::BadShape, "matrix columns must divide evenly by a");
    }

    void build() {
        state = initial_app_state(app, data.a, seed);
        history.resize(n);
        aliveMask.assign(n, true);
        timedOutNow.assign(n, false);
        const bool needsTranspose = app == AppKind::Lr || app == AppKind::Svm;
        if (needsTranspose) at = data.a.transposed();

        switch (strat.kind) {
        case StrategyKind::Mds:
        case StrategyKind::S2c2Basic:
        case StrategyKind::S2c2General: {
            const GeneratorMatrix g = strat.generator == GeneratorKind::Vandermonde
                                          ? vandermonde_generator(n, strat.k)
                                          : chebyshev_basis_generator(n, strat.k);
            opA = std::make_unique<CodedMatVec>(data.a, g, strat.cTarget);
            if (needsTranspose) opAt = std::make_unique<CodedMatVec>(at, g, strat.cTarget);
            break;
        }
        case StrategyKind::Poly: {
            scheme = strat.chebyshevPoints ? PolyScheme::chebyshev(n, strat.a, strat.b)
                                           : PolyScheme::integer_points(n, strat.a, strat.b);
            const auto leftBlocks = split_rows(data.a.transposed(), strat.a);
            const auto rightBlocks = split_cols(data.a, strat.b);
            polyParts = poly_encode(leftBlocks, rightBlocks, scheme);
            polyDecoder.emplace(scheme);
            productRows = data.a.cols() / strat.a;
            polyChunks = strat.polyS2c2 ? largest_divisor_at_most(productRows, strat.cTarget) : 1;
            polyRightCols = polyParts.front().rightTilde.cols();
            hessianX = make_positive_vector(data.a.rows(), seed);
            hessianExact = hessian_direct(data.a, hessianX);
            break;
        }
        case StrategyKind::ReplicationUncoded: {
            auto [planA, partsA] = pad_and_partition(data.a, n, 1);
            sideA = {planA, std::move(partsA)};
            if (needsTranspose) {
                auto [planT, partsT] = pad_and_partition(at, n, 1);
                sideAt = {planT, std::move(partsT)};
            }
            break;
        }
        case StrategyKind::OverDecomposition: {
            const std::size_t tasks = strat.overFactor * n;
            auto [planA, partsA] = pad_and_partition(data.a, tasks, 1);
            sideA = {planA, std::move(partsA)};
            if (needsTranspose) {
                auto [planT, partsT] = pad_and_partition(at, tasks, 1);
                sideAt = {planT, std::move(partsT)};
            }
            break;
        }
        }

        if (uses_predictor() && strat.predictor != PredictorKind::Oracle) {
            if (strat.predictor == PredictorKind::Lstm) {
                predictor.emplace(SpeedPredictor::lstm(lstm_train(per_worker_series(trace), TrainConfig{}).model));
            } else {
                predictor.emplace(SpeedPredictor(strat.predictor));
            }
        }
    }

    double comm(double payloadDoubles) const {
        double t = cost.perMessageLatency;
        if (cost.bytesPerSecond > 0.0) t += 8.0 * payloadDoubles / cost.bytesPerSecond;
        return t;
    }

    double compute_seconds(double rows, double speed) const {
        if (speed <= 0.0) return kInf;
        return rows * cost.rowCost / speed;
    }

    void log_line(double t, long long worker, const char* event, const std::string& detail) const {
        if (log == nullptr) return;
        *log << format_double(t) << ',' << worker << ',' << event << ',' << detail << '\n';
    }

    std::string tag() const {
        return "iter=" + std::to_string(curIter) + " phase=" + std::to_string(curPhase);
    }

    /// Logs the assign/start/send/receive chain of one response. `launch` is
    /// when the master issues the work, commIn how long the request takes.
    void emit_response_events(std::size_t w, double rows, double launch, double commIn, double computeSec,
                              double commOut) const {
        if (log == nullptr) return;
        const auto id = static_cast<long long>(w);
        const std::string detail = tag() + " rows=" + format_double(rows);
        log_line(launch, id, "assign", detail);
        if (computeSec == kInf) return;
        log_line(launch + commIn, id, "start", detail);
        log_line(launch + commIn + computeSec, id, "send", detail);
        log_line(launch + commIn + computeSec + commOut, id, "receive", detail);
    }

    std::vector<double> predict() {
        if (strat.predictor == PredictorKind::Oracle) return speeds;
        if (curIter == 0) return std::vector<double>(n, 1.0);
        return predictor->predict_next(history);
    }

    void prepare_iteration() {
        speeds = trace[curIter % trace.size()];
        predicted.assign(n, 1.0);
        haveAsg = false;
        timedOutNow.assign(n, false);
        switch (strat.kind) {
        case StrategyKind::Mds:
        case StrategyKind::ReplicationUncoded:
            break;
        case StrategyKind::S2c2Basic: {
            for (std::size_t w = 0; w < n; ++w) predicted[w] = aliveMask[w] ? 1.0 : 0.0;
            asg = general_s2c2(apportion_speeds(predicted, strat.cTarget), strat.k);
            haveAsg = true;
            break;
        }
        case StrategyKind::S2c2General: {
            predicted = predict();
            asg = general_s2c2(apportion_speeds(predicted, strat.cTarget), strat.k);
            haveAsg = true;
            break;
        }
        case StrategyKind::Poly: {
            if (strat.polyS2c2) {
                predicted = predict();
                asg = general_s2c2(apportion_speeds(predicted, polyChunks), scheme.recovery_threshold());
                haveAsg = true;
            }
            break;
        }
        case StrategyKind::OverDecomposition:
            predicted = predict();
            break;
        }
    }

    void absorb(const PhaseStats& ph) {
        if (log != nullptr) {
            for (std::size_t w = 0; w < n; ++w) {
                if (ph.assignedRows[w] <= 0.0) continue;
                log_line(ph.finish, static_cast<long long>(w), "account",
                         tag() + " used=" + format_double(ph.usedRows[w]) +
                             " wasted=" + format_double(ph.wastedRows[w]));
            }
            log_line(ph.finish + ph.decodeCost, -1, "decode", tag() + " cost=" + format_double(ph.decodeCost));
        }
        rec->latencyCompute += ph.compute;
        rec->latencyComm += ph.finish - ph.compute;
        rec->latencyDecode += ph.decodeCost;
        rec->latencyTotal += ph.finish + ph.decodeCost;
        rec->reassigned = rec->reassigned || ph.reassigned;
        if (ph.armed) rec->deadline = ph.deadlineValue;
        for (std::size_t w = 0; w < n; ++w) {
            auto& pw = rec->perWorker[w];
            pw.assignedRows += ph.assignedRows[w];
            pw.usedRows += ph.usedRows[w];
            pw.wastedRows += ph.wastedRows[w];
            pw.responseTime = std::max(pw.responseTime, ph.arrival[w]);
            if (ph.timedOut[w]) timedOutNow[w] = true;
        }
        ++curPhase;
    }

    /// Timeout bookkeeping shared by the MDS-coded and polynomial S2C2
    /// phases. Expects round-1 arrivals in ph.arrival; fills used/wasted
    /// rows, finish and compute, and hands back which round-1 responses to
    /// keep plus the chunk reassignments for the second round.
    struct TimeoutResult {
        std::vector<char> responded;
        AssignmentDelta delta;
        std::vector<double> extraRows;
        std::vector<double> round2At;
        bool late = false;
    };

    TimeoutResult apply_timeout(const std::vector<double>& rowsOf, double rowsPerChunk, double valuesPerRow,
                                PhaseStats& ph) {
        const std::size_t m = asg.m;
        std::vector<std::pair<double, std::size_t>> byTime;
        for (std::size_t w = 0; w < n; ++w)
            if (rowsOf[w] > 0.0) byTime.emplace_back(ph.arrival[w], w);
        std::sort(byTime.begin(), byTime.end());

        std::size_t finite = 0;
        for (const auto& [t, w] : byTime) finite += t < kInf ? 1 : 0;
        if (finite < m) fail(ErrorKind::Undecodable, "fewer than m workers ever respond");

        std::vector<double> firstM;
        firstM.reserve(m);
        for (std::size_t i = 0; i < m; ++i) firstM.push_back(byTime[i].first);
        const double dl = deadline(firstM, TimeoutPolicy{strat.theta});
        ph.armed = true;
        ph.deadlineValue = dl;

        // The deadline only filters workers beyond the first m: those first
        // responses are what it was measured from. The master also cannot
        // declare anyone late before it has seen m responses, so when the
        // quantized allocation pushes the m-th arrival past the nominal
        // deadline, the cutoff slides out to that arrival.
        const double cutoff = std::max(dl, byTime[m - 1].first);
        TimeoutResult out;
        out.responded.assign(n, 0);
        out.extraRows.assign(n, 0.0);
        out.round2At.assign(n, 0.0);
        std::vector<bool> respondedMask(n, false);
        for (const auto& [t, w] : byTime) {
            if (t <= cutoff) {
                respondedMask[w] = true;
                out.responded[w] = 1;
                ph.usedRows[w] += rowsOf[w];
            } else {
                out.late = true;
                ph.timedOut[w] = true;
                ph.wastedRows[w] += speeds[w] > 0.0 ? rowsOf[w] : 0.0;
            }
        }
        log_line(cutoff, -1, "deadline",
                 tag() + " nominal=" + format_double(dl) + " late=" +
                     std::to_string(byTime.size() - std::count(out.responded.begin(), out.responded.end(), 1)));

        if (!out.late) {
            const auto [t, w] = byTime.back();
            ph.finish = t;
            ph.compute = compute_seconds(rowsOf[w], speeds[w]);
            return out;
        }

        ph.reassigned = true;
        out.delta = reassign_pending(asg, respondedMask, speeds);
        double finish = 0.0;
        double criticalCompute = 0.0;
        for (std::size_t w = 0; w < n; ++w) {
            if (!respondedMask[w]) continue;
            if (ph.arrival[w] >= finish) {
                finish = ph.arrival[w];
                criticalCompute = compute_seconds(rowsOf[w], speeds[w]);
            }
        }
        for (std::size_t w = 0; w < n; ++w) {
            const double extra = static_cast<double>(out.delta.extraChunks[w].size()) * rowsPerChunk;
            if (extra <= 0.0) continue;
            const double computeSec = compute_seconds(extra, speeds[w]);
            const double t2 = cutoff + cost.perMessageLatency + computeSec + comm(extra * valuesPerRow);
            out.extraRows[w] = extra;
            out.round2At[w] = t2;
            ph.assignedRows[w] += extra;
            ph.usedRows[w] += extra;
            ph.arrival[w] = std::max(ph.arrival[w], t2);
            emit_response_events(w, extra, cutoff, cost.perMessageLatency, computeSec, comm(extra * valuesPerRow));
            if (t2 >= finish) {
                finish = t2;
                criticalCompute = computeSec;
            }
        }
        ph.finish = finish;
        ph.compute = criticalCompute;
        return out;
    }

    DenseVector mds_phase(const CodedMatVec& op, const DenseVector& x, PhaseStats& ph) {
        const auto& plan = op.plan();
        const auto& grid = op.grid();
        const double rows = static_cast<double>(plan.rowsPerPartition);
        const std::size_t m = op.generator().k;
        const double inPayload = static_cast<double>(x.size());

        for (std::size_t w = 0; w < n; ++w) {
            ph.assignedRows[w] = rows;
            const double computeSec = compute_seconds(rows, speeds[w]);
            ph.arrival[w] = computeSec == kInf ? kInf : comm(inPayload) + computeSec + comm(rows);
            emit_response_events(w, rows, 0.0, comm(inPayload), computeSec, comm(rows));
        }

        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t u, std::size_t v) {
            return ph.arrival[u] != ph.arrival[v] ? ph.arrival[u] < ph.arrival[v] : u < v;
        });
        if (!(ph.arrival[order[m - 1]] < kInf)) fail(ErrorKind::Undecodable, "fewer than k workers ever respond");
        ph.finish = ph.arrival[order[m - 1]];
        ph.compute = compute_seconds(rows, speeds[order[m - 1]]);

        std::vector<std::size_t> allChunks(grid.chunksPerPartition);
        std::iota(allChunks.begin(), allChunks.end(), 0);
        std::vector<std::vector<ChunkResponse>> perChunk(grid.chunksPerPartition);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t w = order[i];
            if (i < m) {
                ph.usedRows[w] = rows;
                auto responses = worker_matvec(op.partition(w), x, allChunks, grid);
                for (auto& r : responses) perChunk[r.chunk].push_back(std::move(r));
            } else {
                ph.wastedRows[w] = speeds[w] > 0.0 ? rows : 0.0;
            }
        }

        std::vector<std::vector<DenseVector>> decoded(grid.chunksPerPartition);
        for (std::size_t c = 0; c < grid.chunksPerPartition; ++c) decoded[c] = op.decoder().decode_chunk(perChunk[c]);
        ph.decodeCost = cost.decodeSecondsPerChunk * static_cast<double>(grid.chunksPerPartition);
        return assemble(decoded, plan, grid);
    }

    DenseVector s2c2_phase(const CodedMatVec& op, const DenseVector& x, PhaseStats& ph) {
        const auto& plan = op.plan();
        const auto& grid = op.grid();
        const double inPayload = static_cast<double>(x.size());

        std::vector<std::vector<std::size_t>> mine(n);
        std::vector<double> rowsOf(n, 0.0);
        for (std::size_t w = 0; w < n; ++w) {
            mine[w] = asg.chunks_of(w);
            rowsOf[w] = static_cast<double>(mine[w].size() * grid.rowsPerChunk);
            ph.assignedRows[w] = rowsOf[w];
            if (rowsOf[w] <= 0.0) continue;
            const double computeSec = compute_seconds(rowsOf[w], speeds[w]);
            ph.arrival[w] = computeSec == kInf ? kInf : comm(inPayload) + computeSec + comm(rowsOf[w]);
            emit_response_events(w, rowsOf[w], 0.0, comm(inPayload), computeSec, comm(rowsOf[w]));
        }

        const std::vector<double> roundOne = ph.arrival;
        const TimeoutResult round = apply_timeout(rowsOf, static_cast<double>(grid.rowsPerChunk), 1.0, ph);

        struct Entry {
            double t;
            std::size_t w;
            std::vector<ChunkResponse> responses;
        };
        std::vector<Entry> entries;
        for (std::size_t w = 0; w < n; ++w) {
            if (round.responded[w])
                entries.push_back({roundOne[w], w, worker_matvec(op.partition(w), x, mine[w], grid)});
            if (round.extraRows[w] > 0.0)
                entries.push_back(
                    {round.round2At[w], w, worker_matvec(op.partition(w), x, round.delta.extraChunks[w], grid)});
        }
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            return a.t != b.t ? a.t < b.t : a.w < b.w;
        });

        std::vector<std::vector<ChunkResponse>> perChunk(grid.chunksPerPartition);
        for (auto& e : entries)
            for (auto& r : e.responses) perChunk[r.chunk].push_back(std::move(r));
        std::vector<std::vector<DenseVector>> decoded(grid.chunksPerPartition);
        for (std::size_t c = 0; c < grid.chunksPerPartition; ++c) decoded[c] = op.decoder().decode_chunk(perChunk[c]);
        ph.decodeCost = cost.decodeSecondsPerChunk * static_cast<double>(grid.chunksPerPartition);
        return assemble(decoded, plan, grid);
    }

    double migration_time(double rows, double cols) const {
        double t = strat.migrationSeconds;
        if (cost.bytesPerSecond > 0.0) t += 8.0 * rows * cols / cost.bytesPerSecond;
        return t;
    }

    DenseVector replication_phase(const UncodedSide& side, const DenseVector& x, PhaseStats& ph) {
        const double rows = static_cast<double>(side.plan.rowsPerPartition);
        const double cols = static_cast<double>(side.parts.front().cols());
        const double inPayload = static_cast<double>(x.size());

        for (std::size_t w = 0; w < n; ++w) {
            ph.assignedRows[w] = rows;
            const double computeSec = compute_seconds(rows, speeds[w]);
            ph.arrival[w] = computeSec == kInf ? kInf : comm(inPayload) + computeSec + comm(rows);
            emit_response_events(w, rows, 0.0, comm(inPayload), computeSec, comm(rows));
        }

        std::vector<double> sorted(ph.arrival);
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[(n - 1) / 2];
        const double detect = strat.detectFactor * median;

        std::vector<std::size_t> stragglers;
        for (std::size_t w = 0; w < n; ++w)
            if (ph.arrival[w] > detect) stragglers.push_back(w);
        std::sort(stragglers.begin(), stragglers.end(), [&](std::size_t u, std::size_t v) {
            return ph.arrival[u] != ph.arrival[v] ? ph.arrival[u] > ph.arrival[v] : u < v;
        });
        if (stragglers.size() > strat.maxSpeculative) stragglers.resize(strat.maxSpeculative);

        std::vector<double> completion(ph.arrival);
        std::vector<double> winnerSpeed(n);
        for (std::size_t w = 0; w < n; ++w) winnerSpeed[w] = speeds[w];
        std::vector<double> availableAt(ph.arrival);

        for (const std::size_t s : stragglers) {
            double bestFinish = kInf;
            bool bestReplica = false;
            std::size_t bestHelper = n;
            for (std::size_t h = 0; h < n; ++h) {
                if (h == s || speeds[h] <= 0.0) continue;
                const bool replicaHolder = (h + n - s) % n < strat.replication;
                const double start = std::max(detect, availableAt[h]);
                const double mig = replicaHolder ? 0.0 : migration_time(rows, cols);
                const double f =
                    start + cost.perMessageLatency + mig + compute_seconds(rows, speeds[h]) + comm(rows);
                if (f < bestFinish || (f == bestFinish && replicaHolder && !bestReplica)) {
                    bestFinish = f;
                    bestReplica = replicaHolder;
                    bestHelper = h;
                }
            }
            if (bestHelper == n) continue;
            ph.reassigned = true;
            availableAt[bestHelper] = bestFinish;
            ph.assignedRows[bestHelper] += rows;
            ph.arrival[bestHelper] = std::max(ph.arrival[bestHelper], bestFinish);
            log_line(detect, static_cast<long long>(bestHelper), "speculate",
                     tag() + " partition=" + std::to_string(s) + " rows=" + format_double(rows) +
                         (bestReplica ? "" : " migrated=1"));
            if (bestFinish < completion[s]) {
                completion[s] = bestFinish;
                winnerSpeed[s] = speeds[bestHelper];
                ph.usedRows[bestHelper] += rows;
                ph.wastedRows[s] += speeds[s] > 0.0 ? rows : 0.0;
                ph.timedOut[s] = true;
            } else {
                ph.wastedRows[bestHelper] += rows;
            }
        }

        double finish = 0.0;
        double criticalCompute = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            if (!ph.timedOut[p]) ph.usedRows[p] += rows;
            if (completion[p] >= kInf)
                fail(ErrorKind::Undecodable, "partition " + std::to_string(p) + " never completes");
            if (completion[p] >= finish) {
                finish = completion[p];
                criticalCompute = compute_seconds(rows, winnerSpeed[p]);
            }
        }
        ph.finish = finish;
        ph.compute = criticalCompute;

        DenseVector y;
        y.reserve(side.plan.originalRows);
        for (std::size_t p = 0; p < n && y.size() < side.plan.originalRows; ++p) {
            const DenseVector part = matvec(side.parts[p], x);
            for (double v : part) {
                if (y.size() == side.plan.originalRows) break;
                y.push_back(v);
            }
        }
        return y;
    }

    DenseVector overdecomp_phase(const UncodedSide& side, const DenseVector& x, PhaseStats& ph) {
        const std::size_t tasks = side.parts.size();
        const double taskRows = static_cast<double>(side.plan.rowsPerPartition);
        const double cols = static_cast<double>(side.parts.front().cols());
        const double inPayload = static_cast<double>(x.size());

        const SpeedVector quota = apportion_speeds(predicted, tasks);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t u, std::size_t v) {
            return predicted[u] != predicted[v] ? predicted[u] > predicted[v] : u < v;
        });

        const std::size_t secondaries = std::min<std::size_t>(
            tasks, static_cast<std::size_t>(std::llround((strat.overReplication - 1.0) * static_cast<double>(tasks))));
        std::vector<bool> taken(tasks, false);
        std::vector<std::size_t> count(n, 0);
        std::vector<std::size_t> migrated(n, 0);
        auto primary = [&](std::size_t t) { return t % n; };
        auto secondary = [&](std::size_t t) { return (t % n + 1) % n; };

        for (const std::size_t w : order) {
            for (std::size_t t = 0; t < tasks && count[w] < quota[w]; ++t)
                if (!taken[t] && primary(t) == w) {
                    taken[t] = true;
                    ++count[w];
                }
            for (std::size_t t = 0; t < secondaries && count[w] < quota[w]; ++t)
                if (!taken[t] && secondary(t) == w) {
                    taken[t] = true;
                    ++count[w];
                }
        }
        for (const std::size_t w : order) {
            for (std::size_t t = 0; t < tasks && count[w] < quota[w]; ++t)
                if (!taken[t]) {
                    taken[t] = true;
                    ++count[w];
                    ++migrated[w];
                }
        }

        double finish = 0.0;
        double criticalCompute = 0.0;
        for (std::size_t w = 0; w < n; ++w) {
            if (count[w] == 0) continue;
            const double rows = static_cast<double>(count[w]) * taskRows;
            ph.assignedRows[w] = rows;
            ph.usedRows[w] = rows;
            const double computeSec = compute_seconds(rows, speeds[w]);
            const double migSec = static_cast<double>(migrated[w]) * migration_time(taskRows, cols);
            ph.arrival[w] = computeSec == kInf ? kInf : comm(inPayload) + migSec + computeSec + comm(rows);
            emit_response_events(w, rows, 0.0, comm(inPayload) + migSec, computeSec, comm(rows));
            if (migrated[w] > 0)
                log_line(0.0, static_cast<long long>(w), "migrate", tag() + " tasks=" + std::to_string(migrated[w]));
            if (ph.arrival[w] >= kInf)
                fail(ErrorKind::Undecodable, "worker " + std::to_string(w) + " holds tasks but never responds");
            if (ph.arrival[w] >= finish) {
                finish = ph.arrival[w];
                criticalCompute = computeSec;
            }
        }
        ph.finish = finish;
        ph.compute = criticalCompute;

        DenseVector y;
        y.reserve(side.plan.originalRows);
        for (std::size_t t = 0; t < tasks && y.size() < side.plan.originalRows; ++t) {
            const DenseVector part = matvec(side.parts[t], x);
            for (double v : part) {
                if (y.size() == side.plan.originalRows) break;
                y.push_back(v);
            }
        }
        return y;
    }

    DenseMatrix poly_phase(PhaseStats& ph) {
        const std::size_t m = scheme.recovery_threshold();
        const PolyComputeMode mode = PolyComputeMode::hessian(hessianX);
        const double inPayload = static_cast<double>(hessianX.size());
        const double perRow = static_cast<double>(polyRightCols);

        struct Entry {
            double t;
            std::size_t w;
            std::vector<RowEvaluation> evals;
        };
        std::vector<Entry> entries;

        if (!strat.polyS2c2) {
            const double rows = static_cast<double>(productRows);
            for (std::size_t w = 0; w < n; ++w) {
                ph.assignedRows[w] = rows;
                const double computeSec = compute_seconds(rows, speeds[w]);
                ph.arrival[w] = computeSec == kInf ? kInf : comm(inPayload) + computeSec + comm(rows * perRow);
                emit_response_events(w, rows, 0.0, comm(inPayload), computeSec, comm(rows * perRow));
            }
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t u, std::size_t v) {
                return ph.arrival[u] != ph.arrival[v] ? ph.arrival[u] < ph.arrival[v] : u < v;
            });
            if (!(ph.arrival[order[m - 1]] < kInf))
                fail(ErrorKind::Undecodable, "fewer than a*b workers ever respond");
            ph.finish = ph.arrival[order[m - 1]];
            ph.compute = compute_seconds(rows, speeds[order[m - 1]]);
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t w = order[i];
                if (i < m) {
                    ph.usedRows[w] = rows;
                    entries.push_back(
                        {ph.arrival[w], w, poly_worker_compute(polyParts[w], {0, productRows}, mode)});
                } else {
                    ph.wastedRows[w] = speeds[w] > 0.0 ? rows : 0.0;
                }
            }
            ph.decodeCost = cost.decodeSecondsPerChunk * static_cast<double>(productRows);
        } else {
            const ChunkGrid grid{polyChunks, productRows / polyChunks};
            std::vector<std::vector<std::size_t>> mine(n);
            std::vector<double> rowsOf(n, 0.0);
            for (std::size_t w = 0; w < n; ++w) {
                mine[w] = asg.chunks_of(w);
                rowsOf[w] = static_cast<double>(mine[w].size() * grid.rowsPerChunk);
                ph.assignedRows[w] = rowsOf[w];
                if (rowsOf[w] <= 0.0) continue;
                const double computeSec = compute_seconds(rowsOf[w], speeds[w]);
                ph.arrival[w] = computeSec == kInf ? kInf : comm(inPayload) + computeSec + comm(rowsOf[w] * perRow);
                emit_response_events(w, rowsOf[w], 0.0, comm(inPayload), computeSec, comm(rowsOf[w] * perRow));
            }
            const std::vector<double> roundOne = ph.arrival;
            const TimeoutResult round = apply_timeout(rowsOf, static_cast<double>(grid.rowsPerChunk), perRow, ph);
            auto evalChunks = [&](std::size_t w, const std::vector<std::size_t>& chunks) {
                std::vector<RowEvaluation> evals;
                for (const std::size_t c : chunks) {
                    auto part = poly_worker_compute(polyParts[w], chunk_rows(grid, c), mode);
                    evals.insert(evals.end(), std::make_move_iterator(part.begin()),
                                 std::make_move_iterator(part.end()));
                }
                return evals;
            };
            for (std::size_t w = 0; w < n; ++w) {
                if (round.responded[w]) entries.push_back({roundOne[w], w, evalChunks(w, mine[w])});
                if (round.extraRows[w] > 0.0)
                    entries.push_back({round.round2At[w], w, evalChunks(w, round.delta.extraChunks[w])});
            }
            ph.decodeCost = cost.decodeSecondsPerChunk * static_cast<double>(productRows);
        }

        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            return a.t != b.t ? a.t < b.t : a.w < b.w;
        });
        std::vector<std::vector<RowEvaluation>> byRow(productRows);
        for (auto& e : entries)
            for (auto& ev : e.evals) byRow[ev.rowIndex].push_back(std::move(ev));
        std::map<std::size_t, std::vector<DenseVector>> rowsMap;
        for (std::size_t r = 0; r < productRows; ++r) rowsMap[r] = polyDecoder->decode_row(byRow[r]);
        const auto blocks = poly_blocks_from_rows(rowsMap, scheme, productRows);
        return hessian_assemble(blocks, strat.a);
    }

    DenseVector run_phase(bool transpose, const DenseVector& x) {
        const DenseMatrix& m = transpose ? at : data.a;
        const DenseVector exact = matvec(m, x);
        PhaseStats ph(n);
        DenseVector got;
        switch (strat.kind) {
        case StrategyKind::Mds:
            got = mds_phase(transpose ? *opAt : *opA, x, ph);
            break;
        case StrategyKind::S2c2Basic:
        case StrategyKind::S2c2General:
            got = s2c2_phase(transpose ? *opAt : *opA, x, ph);
            break;
        case StrategyKind::ReplicationUncoded:
            got = replication_phase(transpose ? sideAt : sideA, x, ph);
            break;
        case StrategyKind::OverDecomposition:
            got = overdecomp_phase(transpose ? sideAt : sideA, x, ph);
            break;
        case StrategyKind::Poly:
            fail(ErrorKind::InvalidValue, "poly strategy drives only the hessian app");
        }
        const double gap = rel_gap(got, exact);
        if (!(gap <= 1e-6))
            fail(ErrorKind::Undecodable, "decoded result deviates from the direct product by " + format_double(gap));
        absorb(ph);
        return got;
    }

    void run_hessian() {
        PhaseStats ph(n);
        const DenseMatrix h = poly_phase(ph);
        const double gap = rel_gap(h.data(), hessianExact.data());
        if (!(gap <= 1e-6))
            fail(ErrorKind::Undecodable, "decoded Hessian deviates from the direct product by " + format_double(gap));
        absorb(ph);
        state.w = h.data();
        ++state.iter;
    }

    bool compute_mispredicted() const {
        if (strat.kind == StrategyKind::S2c2Basic) {
            for (std::size_t w = 0; w < n; ++w)
                if (timedOutNow[w]) return true;
            return false;
        }
        if (!uses_predictor()) return false;
        for (std::size_t w = 0; w < n; ++w) {
            if (rec->perWorker[w].assignedRows <= 0.0) continue;
            const double actual = speeds[w];
            const double pred = predicted[w];
            if (actual <= 0.0) {
                if (pred > 0.0) return true;
                continue;
            }
            if (std::abs(pred - actual) / actual > strat.theta) return true;
        }
        return false;
    }

    void finish_iteration() {
        for (std::size_t w = 0; w < n; ++w) {
            const bool observed = rec->perWorker[w].assignedRows > 0.0;
            const double measured = observed || history[w].empty() ? speeds[w] : history[w].back();
            history[w].push_back(measured);
        }
        if (strat.kind == StrategyKind::S2c2Basic)
            for (std::size_t w = 0; w < n; ++w)
                if (timedOutNow[w]) aliveMask[w] = false;
        rec->mispredicted = compute_mispredicted();
    }

    IterationRecord run_iteration(std::size_t iter);
};

struct Simulator::Impl::PhaseOp final : LinearOp {
    Impl* sim;
    bool transpose;

    PhaseOp(Impl* s, bool t) : sim(s), transpose(t) {}
    std::size_t rows() const override { return transpose ? sim->data.a.cols() : sim->data.a.rows(); }
    std::size_t cols() const override { return transpose ? sim->data.a.rows() : sim->data.a.cols(); }
    DenseVector apply(const DenseVector& x) override { return sim->run_phase(transpose, x); }
};

IterationRecord Simulator::Impl::run_iteration(std::size_t iter) {
    curIter = iter;
    curPhase = 0;
    IterationRecord out;
    out.iter = iter;
    out.perWorker.resize(n);
    rec = &out;
    prepare_iteration();

    switch (app) {
    case AppKind::Lr: {
        PhaseOp a(this, false);
        PhaseOp t(this, true);
        lr_step(state, a, t, data.y);
        break;
    }
    case AppKind::Svm: {
        PhaseOp a(this, false);
        PhaseOp t(this, true);
        svm_step(state, a, t, data.y);
        break;
    }
    case AppKind::PageRank: {
        PhaseOp a(this, false);
        pagerank_step(state, a);
        break;
    }
    case AppKind::GraphFilter: {
        PhaseOp a(this, false);
        graph_filter_step(state, a, 1);
        break;
    }
    case AppKind::Hessian:
        run_hessian();
        break;
    }

    finish_iteration();
    rec = nullptr;
    return out;
}

Simulator::Simulator(Strategy strategy, CostModel cost, SpeedTrace speeds, AppKind app, Dataset dataset,
                     std::uint64_t seed, std::ostream* eventLog)
    : impl_(std::make_unique<Impl>(std::move(strategy), cost, std::move(speeds), app, std::move(dataset), seed,
                                   eventLog)) {}

Simulator::~Simulator() = default;

IterationRecord Simulator::run_iteration(std::size_t iter) { return impl_->run_iteration(iter); }

const AppState& Simulator::state() const { return impl_->state; }

AppState& Simulator::state() { return impl_->state; }

MetricsReport Simulator::run(std::size_t iterations) {
    MetricsReport report;
    report.strategyName = strategy_label(impl_->strat);
    report.workers = impl_->n;
    report.wastedRowsPerWorker.assign(impl_->n, 0.0);
    std::size_t mispredictions = 0;
    for (std::size_t it = 0; it < iterations; ++it) {
        IterationRecord r = impl_->run_iteration(it);
        report.totalLatency += r.latencyTotal;
        if (r.mispredicted) ++mispredictions;
        for (std::size_t w = 0; w < impl_->n; ++w) {
            report.wastedRowsPerWorker[w] += r.perWorker[w].wastedRows;
            report.totalWastedRows += r.perWorker[w].wastedRows;
            report.totalComputedRows += r.perWorker[w].usedRows + r.perWorker[w].wastedRows;
        }
        report.records.push_back(std::move(r));
    }
    if (iterations > 0) {
        report.meanLatency = report.totalLatency / static_cast<double>(iterations);
        report.mispredictionRate = static_cast<double>(mispredictions) / static_cast<double>(iterations);
    }
    if (report.totalComputedRows > 0.0) report.wasteFraction = report.totalWastedRows / report.totalComputedRows;
    return report;
}

std::vector<double> wasted_rows(const MetricsReport& report) { return report.wastedRowsPerWorker; }

double total_wasted_rows(const MetricsReport& report) { return report.totalWastedRows; }

MetricsReport run_strategy(const Strategy& strategy, const CostModel& cost, const SpeedTrace& speeds,
                           AppKind app, const Dataset& dataset, std::size_t iterations, std::uint64_t seed,
                           std::ostream* eventLog) {
    Simulator sim(strategy, cost, speeds, app, dataset, seed, eventLog);
    return sim.run(iterations);
}

} // namespace sscc
