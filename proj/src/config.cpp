#include "sscc/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "sscc/error.hpp"
#include "sscc/matrix_io.hpp"
#include "sscc/rng.hpp"

namespace sscc {

namespace {

using Json = nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& why) {
    fail(ErrorKind::InvalidValue, path + ": " + why);
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void check_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) fail(ErrorKind::UnknownKey, join(path, it.key()));
    }
}

const Json* maybe(const Json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double get_double(const Json& obj, const std::string& path, const char* key, double dflt) {
    const Json* v = maybe(obj, key);
    if (v == nullptr) return dflt;
    if (!v->is_number()) bad(join(path, key), "expected a number");
    return v->get<double>();
}

std::uint64_t get_uint(const Json& obj, const std::string& path, const char* key, std::uint64_t dflt) {
    const Json* v = maybe(obj, key);
    if (v == nullptr) return dflt;
    if (!v->is_number_integer() || (v->is_number_integer() && v->get<long long>() < 0))
        bad(join(path, key), "expected a nonnegative integer");
    return v->get<std::uint64_t>();
}

std::size_t get_size(const Json& obj, const std::string& path, const char* key, std::size_t dflt) {
    return static_cast<std::size_t>(get_uint(obj, path, key, dflt));
}

std::string get_string(const Json& obj, const std::string& path, const char* key, const std::string& dflt) {
    const Json* v = maybe(obj, key);
    if (v == nullptr) return dflt;
    if (!v->is_string()) bad(join(path, key), "expected a string");
    return v->get<std::string>();
}

bool get_bool(const Json& obj, const std::string& path, const char* key, bool dflt) {
    const Json* v = maybe(obj, key);
    if (v == nullptr) return dflt;
    if (!v->is_boolean()) bad(join(path, key), "expected a boolean");
    return v->get<bool>();
}

GeneratorKind generator_from_string(const std::string& name, const std::string& path) {
    if (name == "vandermonde") return GeneratorKind::Vandermonde;
    if (name == "chebyshev") return GeneratorKind::Custom;
    bad(path, "unknown generator '" + name + "' (expected vandermonde or chebyshev)");
}

const char* generator_to_string(GeneratorKind kind) {
    return kind == GeneratorKind::Vandermonde ? "vandermonde" : "chebyshev";
}

Strategy parse_scheme(const Json& j, const std::string& path, const Strategy& defaults) {
    if (!j.is_object()) bad(path, "expected an object");
    check_keys(j, path,
               {"kind", "n", "k", "a", "b", "generator", "poly_s2c2", "chebyshev_points", "predictor",
                "c_target", "theta", "replication", "max_speculative", "detect_factor", "over_factor",
                "over_replication", "migration_seconds"});
    Strategy s = defaults;
    const std::string kindName = get_string(j, path, "kind", "");
    if (kindName.empty()) bad(join(path, "kind"), "required");
    try {
        s.kind = strategy_kind_from_string(kindName);
    } catch (const Error&) {
        bad(join(path, "kind"), "unknown strategy '" + kindName + "'");
    }

    s.n = get_size(j, path, "n", s.n);
    s.k = get_size(j, path, "k", s.k);
    s.a = get_size(j, path, "a", s.a);
    s.b = get_size(j, path, "b", s.b);
    s.polyS2c2 = get_bool(j, path, "poly_s2c2", s.polyS2c2);
    s.chebyshevPoints = get_bool(j, path, "chebyshev_points", s.chebyshevPoints);
    s.cTarget = get_size(j, path, "c_target", s.cTarget);
    s.theta = get_double(j, path, "theta", s.theta);
    s.replication = get_size(j, path, "replication", s.replication);
    s.maxSpeculative = get_size(j, path, "max_speculative", s.maxSpeculative);
    s.detectFactor = get_double(j, path, "detect_factor", s.detectFactor);
    s.overFactor = get_size(j, path, "over_factor", s.overFactor);
    s.overReplication = get_double(j, path, "over_replication", s.overReplication);
    s.migrationSeconds = get_double(j, path, "migration_seconds", s.migrationSeconds);

    if (const Json* g = maybe(j, "generator"))
        s.generator = generator_from_string(g->is_string() ? g->get<std::string>() : "", join(path, "generator"));
    if (const Json* p = maybe(j, "predictor")) {
        const std::string name = p->is_string() ? p->get<std::string>() : "";
        try {
            s.predictor = predictor_kind_from_string(name);
        } catch (const Error&) {
            bad(join(path, "predictor"), "unknown predictor '" + name + "'");
        }
    }

    if (s.n == 0) bad(join(path, "n"), "must be positive");
    switch (s.kind) {
    case StrategyKind::Mds:
    case StrategyKind::S2c2Basic:
    case StrategyKind::S2c2General:
        if (s.k == 0 || s.k > s.n) bad(join(path, "k"), "k must satisfy 1 <= k <= n");
        break;
    case StrategyKind::Poly:
        if (s.a == 0 || s.b == 0) bad(join(path, "a"), "poly splits must be positive");
        if (s.a * s.b > s.n) bad(join(path, "a"), "a*b must not exceed n");
        break;
    case StrategyKind::ReplicationUncoded:
        if (s.replication < 2 || s.replication > s.n) bad(join(path, "replication"), "must be in [2, n]");
        break;
    case StrategyKind::OverDecomposition:
        if (s.overFactor == 0) bad(join(path, "over_factor"), "must be positive");
        if (s.overReplication < 1.0 || s.overReplication > 2.0)
            bad(join(path, "over_replication"), "must be in [1, 2]");
        break;
    }
    if (s.cTarget == 0) bad(join(path, "c_target"), "must be positive");
    if (s.theta < 0.0) bad(join(path, "theta"), "must be nonnegative");
    if (s.detectFactor < 1.0) bad(join(path, "detect_factor"), "must be at least 1");
    if (s.migrationSeconds < 0.0) bad(join(path, "migration_seconds"), "must be nonnegative");
    return s;
}

MatrixSourceConfig parse_matrix(const Json& j, const std::string& path, std::uint64_t fallbackSeed) {
    if (!j.is_object()) bad(path, "expected an object");
    check_keys(j, path, {"kind", "path", "rows", "cols", "seed"});
    MatrixSourceConfig m;
    m.seed = fallbackSeed;
    const std::string kind = get_string(j, path, "kind", "synthetic");
    if (kind == "synthetic") {
        m.kind = MatrixSourceConfig::Kind::Synthetic;
    } else if (kind == "file") {
        m.kind = MatrixSourceConfig::Kind::File;
    } else {
        bad(join(path, "kind"), "expected synthetic or file");
    }
    m.path = get_string(j, path, "path", "");
    m.rows = get_size(j, path, "rows", m.rows);
    m.cols = get_size(j, path, "cols", m.cols);
    m.seed = get_uint(j, path, "seed", m.seed);
    if (m.kind == MatrixSourceConfig::Kind::File && m.path.empty()) bad(join(path, "path"), "required for file sources");
    if (m.kind == MatrixSourceConfig::Kind::Synthetic && (m.rows == 0 || m.cols == 0))
        bad(join(path, "rows"), "synthetic matrices need positive rows and cols");
    return m;
}

std::vector<StragglerSpec> parse_stragglers(const Json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected an array");
    std::vector<StragglerSpec> out;
    std::size_t index = 0;
    for (const Json& e : j) {
        const std::string epath = path + "[" + std::to_string(index++) + "]";
        if (!e.is_object()) bad(epath, "expected an object");
        check_keys(e, epath, {"worker", "factor", "iter_begin", "iter_end"});
        StragglerSpec spec;
        spec.worker = get_size(e, epath, "worker", 0);
        spec.factor = get_double(e, epath, "factor", 5.0);
        spec.iterBegin = get_size(e, epath, "iter_begin", 0);
        spec.iterEnd = get_size(e, epath, "iter_end", 0);
        if (spec.factor <= 0.0) bad(join(epath, "factor"), "must be positive");
        if (spec.iterEnd < spec.iterBegin) bad(join(epath, "iter_end"), "must be >= iter_begin");
        out.push_back(spec);
    }
    return out;
}

SpeedModelConfig parse_speed_model(const Json& j, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    check_keys(j, path,
               {"kind", "value", "path", "base", "base_lo", "base_hi", "noise_pct", "change_prob", "stragglers"});
    SpeedModelConfig m;
    const std::string kind = get_string(j, path, "kind", "constant");
    if (kind == "constant") {
        m.kind = SpeedModelConfig::Kind::Constant;
    } else if (kind == "trace") {
        m.kind = SpeedModelConfig::Kind::Trace;
    } else if (kind == "stochastic") {
        m.kind = SpeedModelConfig::Kind::Stochastic;
    } else if (kind == "straggler_injection") {
        m.kind = SpeedModelConfig::Kind::StragglerInjection;
    } else {
        bad(join(path, "kind"), "expected constant, trace, stochastic, or straggler_injection");
    }
    m.value = get_double(j, path, "value", m.value);
    m.path = get_string(j, path, "path", "");
    m.baseLo = get_double(j, path, "base_lo", m.baseLo);
    m.baseHi = get_double(j, path, "base_hi", m.baseHi);
    m.noisePct = get_double(j, path, "noise_pct", m.noisePct);
    m.changeProb = get_double(j, path, "change_prob", m.changeProb);
    if (const Json* b = maybe(j, "base")) {
        if (!b->is_array()) bad(join(path, "base"), "expected an array of speeds");
        for (const Json& v : *b) {
            if (!v.is_number()) bad(join(path, "base"), "expected an array of numbers");
            m.base.push_back(v.get<double>());
        }
        for (double v : m.base)
            if (v < 0.0) bad(join(path, "base"), "speeds must be nonnegative");
    }
    if (const Json* s = maybe(j, "stragglers")) m.stragglers = parse_stragglers(*s, join(path, "stragglers"));

    if (m.kind == SpeedModelConfig::Kind::Trace && m.path.empty()) bad(join(path, "path"), "required for trace models");
    if (m.kind == SpeedModelConfig::Kind::Constant && m.value <= 0.0) bad(join(path, "value"), "must be positive");
    if (m.kind == SpeedModelConfig::Kind::Stochastic) {
        if (m.baseLo <= 0.0 || m.baseHi < m.baseLo) bad(join(path, "base_lo"), "need 0 < base_lo <= base_hi");
        if (m.noisePct < 0.0 || m.noisePct >= 1.0) bad(join(path, "noise_pct"), "must be in [0, 1)");
        if (m.changeProb < 0.0 || m.changeProb > 1.0) bad(join(path, "change_prob"), "must be in [0, 1]");
    }
    return m;
}

CostModel parse_cost_model(const Json& j, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    check_keys(j, path, {"row_cost", "per_message_latency", "bytes_per_second", "decode_seconds_per_chunk"});
    CostModel c;
    c.rowCost = get_double(j, path, "row_cost", c.rowCost);
    c.perMessageLatency = get_double(j, path, "per_message_latency", c.perMessageLatency);
    c.bytesPerSecond = get_double(j, path, "bytes_per_second", c.bytesPerSecond);
    c.decodeSecondsPerChunk = get_double(j, path, "decode_seconds_per_chunk", c.decodeSecondsPerChunk);
    if (c.rowCost <= 0.0) bad(join(path, "row_cost"), "must be positive");
    if (c.perMessageLatency < 0.0 || c.bytesPerSecond < 0.0 || c.decodeSecondsPerChunk < 0.0)
        bad(path, "latency, bandwidth, and decode cost must be nonnegative");
    return c;
}

void validate_app_strategy(AppKind app, const Strategy& s, const std::string& path) {
    const bool poly = s.kind == StrategyKind::Poly;
    if ((app == AppKind::Hessian) != poly)
        bad(join(path, "kind"), "the hessian app pairs with the poly scheme and nothing else does");
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& e) {
        fail(ErrorKind::Io, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail(ErrorKind::InvalidValue, "config root must be a JSON object");
    check_keys(j, "",
               {"schema", "seed", "iterations", "app", "eta", "lambda", "alpha", "scheme", "baseline", "matrix",
                "speed_model", "predictor", "c_target", "theta", "cost_model", "output"});
    if (const Json* s = maybe(j, "schema")) {
        if (!s->is_number_integer() || s->get<long long>() != 1)
            fail(ErrorKind::SchemaMismatch, "config schema must be 1");
    }

    ExperimentConfig cfg;
    cfg.seed = get_uint(j, "", "seed", cfg.seed);
    cfg.iterations = get_size(j, "", "iterations", cfg.iterations);
    if (cfg.iterations == 0) bad("iterations", "must be positive");

    const std::string appName = get_string(j, "", "app", "lr");
    try {
        cfg.app = app_kind_from_string(appName);
    } catch (const Error&) {
        bad("app", "unknown app '" + appName + "'");
    }

    cfg.eta = get_double(j, "", "eta", cfg.eta);
    cfg.lambda = get_double(j, "", "lambda", cfg.lambda);
    cfg.alpha = get_double(j, "", "alpha", cfg.alpha);
    if (cfg.eta <= 0.0) bad("eta", "must be positive");
    if (cfg.lambda < 0.0) bad("lambda", "must be nonnegative");
    if (cfg.alpha <= 0.0 || cfg.alpha >= 1.0) bad("alpha", "must be in (0, 1)");

    Strategy defaults;
    defaults.cTarget = get_size(j, "", "c_target", 20);
    if (defaults.cTarget == 0) bad("c_target", "must be positive");
    defaults.theta = get_double(j, "", "theta", 0.15);
    if (defaults.theta < 0.0) bad("theta", "must be nonnegative");
    if (const Json* p = maybe(j, "predictor")) {
        const std::string name = p->is_string() ? p->get<std::string>() : "";
        try {
            defaults.predictor = predictor_kind_from_string(name);
        } catch (const Error&) {
            bad("predictor", "unknown predictor '" + name + "'");
        }
    }

    const Json* scheme = maybe(j, "scheme");
    if (scheme == nullptr) bad("scheme", "required");
    cfg.scheme = parse_scheme(*scheme, "scheme", defaults);
    if (const Json* b = maybe(j, "baseline")) {
        cfg.baseline = parse_scheme(*b, "baseline", defaults);
        if (cfg.baseline->n != cfg.scheme.n)
            bad("baseline.n", "must match scheme.n so both runs share one cluster");
    }

    cfg.matrix.seed = cfg.seed;
    if (const Json* m = maybe(j, "matrix")) cfg.matrix = parse_matrix(*m, "matrix", cfg.seed);
    if (const Json* s = maybe(j, "speed_model")) cfg.speedModel = parse_speed_model(*s, "speed_model");
    if (const Json* c = maybe(j, "cost_model")) cfg.cost = parse_cost_model(*c, "cost_model");

    cfg.output = get_string(j, "", "output", cfg.output);
    if (cfg.output.empty() || cfg.output.find('/') != std::string::npos)
        bad("output", "must be a nonempty name without path separators");

    validate_app_strategy(cfg.app, cfg.scheme, "scheme");
    if (cfg.baseline) validate_app_strategy(cfg.app, *cfg.baseline, "baseline");

    if (cfg.matrix.kind == MatrixSourceConfig::Kind::Synthetic) {
        if ((cfg.app == AppKind::PageRank || cfg.app == AppKind::GraphFilter) && cfg.matrix.rows != cfg.matrix.cols)
            bad("matrix.cols", "graph apps need a square matrix; set cols equal to rows");
        if (cfg.app == AppKind::Hessian && cfg.matrix.cols % cfg.scheme.a != 0)
            bad("matrix.cols", "must divide evenly by scheme.a");
    }
    if (cfg.speedModel.kind == SpeedModelConfig::Kind::StragglerInjection && !cfg.speedModel.base.empty() &&
        cfg.speedModel.base.size() != cfg.scheme.n)
        bad("speed_model.base", "length must equal scheme.n");
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

namespace {

Json scheme_to_json(const Strategy& s) {
    Json j;
    j["kind"] = to_string(s.kind);
    j["n"] = s.n;
    j["predictor"] = to_string(s.predictor);
    j["c_target"] = s.cTarget;
    j["theta"] = s.theta;
    switch (s.kind) {
    case StrategyKind::Mds:
    case StrategyKind::S2c2Basic:
    case StrategyKind::S2c2General:
        j["k"] = s.k;
        j["generator"] = generator_to_string(s.generator);
        break;
    case StrategyKind::Poly:
        j["a"] = s.a;
        j["b"] = s.b;
        j["poly_s2c2"] = s.polyS2c2;
        j["chebyshev_points"] = s.chebyshevPoints;
        break;
    case StrategyKind::ReplicationUncoded:
        j["replication"] = s.replication;
        j["max_speculative"] = s.maxSpeculative;
        j["detect_factor"] = s.detectFactor;
        j["migration_seconds"] = s.migrationSeconds;
        break;
    case StrategyKind::OverDecomposition:
        j["over_factor"] = s.overFactor;
        j["over_replication"] = s.overReplication;
        j["migration_seconds"] = s.migrationSeconds;
        break;
    }
    return j;
}

} // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
    Json j;
    j["schema"] = 1;
    j["seed"] = cfg.seed;
    j["iterations"] = cfg.iterations;
    j["app"] = to_string(cfg.app);
    j["eta"] = cfg.eta;
    j["lambda"] = cfg.lambda;
    j["alpha"] = cfg.alpha;
    j["scheme"] = scheme_to_json(cfg.scheme);
    if (cfg.baseline) j["baseline"] = scheme_to_json(*cfg.baseline);

    Json m;
    m["kind"] = cfg.matrix.kind == MatrixSourceConfig::Kind::Synthetic ? "synthetic" : "file";
    if (cfg.matrix.kind == MatrixSourceConfig::Kind::File) {
        m["path"] = cfg.matrix.path;
    } else {
        m["rows"] = cfg.matrix.rows;
        m["cols"] = cfg.matrix.cols;
        m["seed"] = cfg.matrix.seed;
    }
    j["matrix"] = m;

    Json s;
    switch (cfg.speedModel.kind) {
    case SpeedModelConfig::Kind::Constant:
        s["kind"] = "constant";
        s["value"] = cfg.speedModel.value;
        break;
    case SpeedModelConfig::Kind::Trace:
        s["kind"] = "trace";
        s["path"] = cfg.speedModel.path;
        break;
    case SpeedModelConfig::Kind::Stochastic:
        s["kind"] = "stochastic";
        s["base_lo"] = cfg.speedModel.baseLo;
        s["base_hi"] = cfg.speedModel.baseHi;
        s["noise_pct"] = cfg.speedModel.noisePct;
        s["change_prob"] = cfg.speedModel.changeProb;
        break;
    case SpeedModelConfig::Kind::StragglerInjection:
        s["kind"] = "straggler_injection";
        if (cfg.speedModel.base.empty())
            s["value"] = cfg.speedModel.value;
        else
            s["base"] = cfg.speedModel.base;
        break;
    }
    if (!cfg.speedModel.stragglers.empty()) {
        Json arr = Json::array();
        for (const auto& sp : cfg.speedModel.stragglers) {
            Json e;
            e["worker"] = sp.worker;
            e["factor"] = sp.factor;
            e["iter_begin"] = sp.iterBegin;
            e["iter_end"] = sp.iterEnd;
            arr.push_back(e);
        }
        s["stragglers"] = arr;
    }
    j["speed_model"] = s;

    Json c;
    c["row_cost"] = cfg.cost.rowCost;
    c["per_message_latency"] = cfg.cost.perMessageLatency;
    c["bytes_per_second"] = cfg.cost.bytesPerSecond;
    c["decode_seconds_per_chunk"] = cfg.cost.decodeSecondsPerChunk;
    j["cost_model"] = c;

    j["output"] = cfg.output;
    return j.dump(2) + "\n";
}

Dataset build_dataset(const ExperimentConfig& cfg) {
    if (cfg.matrix.kind == MatrixSourceConfig::Kind::File) {
        const bool binary = cfg.matrix.path.size() > 4 &&
                            cfg.matrix.path.compare(cfg.matrix.path.size() - 4, 4, ".bin") == 0;
        Dataset d;
        d.a = binary ? read_matrix_binary(cfg.matrix.path) : read_matrix_csv(cfg.matrix.path);
        if (cfg.app == AppKind::Lr || cfg.app == AppKind::Svm) {
            // Labels for file-sourced features: a seeded random hyperplane,
            // same recipe as the synthetic generator.
            Rng rng(cfg.matrix.seed, 0x1abe1);
            DenseVector w(d.a.cols());
            for (double& v : w) v = rng.uniform(-1.0, 1.0);
            const DenseVector z = matvec(d.a, w);
            d.y.resize(z.size());
            for (std::size_t i = 0; i < z.size(); ++i) d.y[i] = z[i] >= 0.0 ? 1.0 : -1.0;
        }
        return d;
    }
    switch (cfg.app) {
    case AppKind::Lr:
    case AppKind::Svm:
        return make_classification_dataset(cfg.matrix.rows, cfg.matrix.cols, cfg.matrix.seed);
    case AppKind::PageRank:
        return {make_link_matrix(cfg.matrix.rows, cfg.matrix.seed), {}};
    case AppKind::GraphFilter:
        return {make_laplacian(cfg.matrix.rows, cfg.matrix.seed), {}};
    case AppKind::Hessian:
        return {make_positive_matrix(cfg.matrix.rows, cfg.matrix.cols, cfg.matrix.seed), {}};
    }
    fail(ErrorKind::InvalidValue, "unhandled app kind");
}

SpeedTrace build_speed_trace(const ExperimentConfig& cfg) {
    const std::size_t n = cfg.scheme.n;
    switch (cfg.speedModel.kind) {
    case SpeedModelConfig::Kind::Constant:
        return SpeedTrace(cfg.iterations, std::vector<double>(n, cfg.speedModel.value));
    case SpeedModelConfig::Kind::Trace: {
        SpeedTrace t = read_trace_csv(cfg.speedModel.path);
        if (t.empty() || t.front().size() != n)
            fail(ErrorKind::InvalidValue, "speed_model.path: trace width does not match scheme.n");
        return t;
    }
    case SpeedModelConfig::Kind::StragglerInjection: {
        const std::vector<double> row =
            cfg.speedModel.base.empty() ? std::vector<double>(n, cfg.speedModel.value) : cfg.speedModel.base;
        SpeedTrace t(cfg.iterations, row);
        inject_stragglers(t, cfg.speedModel.stragglers);
        return t;
    }
    case SpeedModelConfig::Kind::Stochastic: {
        TraceGenParams p;
        p.workers = n;
        p.iterations = cfg.iterations;
        p.baseLo = cfg.speedModel.baseLo;
        p.baseHi = cfg.speedModel.baseHi;
        p.noisePct = cfg.speedModel.noisePct;
        p.changeProb = cfg.speedModel.changeProb;
        p.stragglers = cfg.speedModel.stragglers;
        return gen_speed_trace(p, cfg.seed);
    }
    }
    fail(ErrorKind::InvalidValue, "unhandled speed model kind");
}

ExperimentArtifacts run_experiment(const ExperimentConfig& cfg, std::ostream* eventLog) {
    const Dataset data = build_dataset(cfg);
    const SpeedTrace trace = build_speed_trace(cfg);
    ExperimentArtifacts artifacts;
    {
        Simulator sim(cfg.scheme, cfg.cost, trace, cfg.app, data, cfg.seed, eventLog);
        sim.state().eta = cfg.eta;
        sim.state().lambda = cfg.lambda;
        sim.state().alpha = cfg.alpha;
        artifacts.primary = sim.run(cfg.iterations);
    }
    if (cfg.baseline) {
        Simulator sim(*cfg.baseline, cfg.cost, trace, cfg.app, data, cfg.seed, nullptr);
        sim.state().eta = cfg.eta;
        sim.state().lambda = cfg.lambda;
        sim.state().alpha = cfg.alpha;
        artifacts.baseline = sim.run(cfg.iterations);
    }
    return artifacts;
}

namespace {

constexpr const char* kSchemaLine = "# schema=1";
constexpr const char* kMetricsHeader =
    "iter,strategy,latency_total,latency_compute,latency_comm,latency_decode,wasted_rows,mispredicted,reassigned";
constexpr const char* kWasteHeader = "worker,assigned_rows,used_rows,wasted_rows";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_number(const std::string& text, const char* what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        fail(ErrorKind::SchemaMismatch, std::string("bad ") + what + " value '" + text + "'");
    return v;
}

bool parse_flag(const std::string& text, const char* what) {
    if (text == "0") return false;
    if (text == "1") return true;
    fail(ErrorKind::SchemaMismatch, std::string("bad ") + what + " flag '" + text + "' (expected 0 or 1)");
}

void expect_schema(std::istream& in, const char* header) {
    std::string line;
    if (!std::getline(in, line) || line != kSchemaLine)
        fail(ErrorKind::SchemaMismatch, "missing '# schema=1' header line");
    if (!std::getline(in, line) || line != header)
        fail(ErrorKind::SchemaMismatch, std::string("expected header '") + header + "'");
}

} // namespace

void write_metrics_csv(std::ostream& out, const MetricsReport& report) {
    out << kSchemaLine << '\n' << kMetricsHeader << '\n';
    for (const IterationRecord& r : report.records) {
        double wasted = 0.0;
        for (const WorkerIterStats& w : r.perWorker) wasted += w.wastedRows;
        out << r.iter << ',' << report.strategyName << ',' << format_double(r.latencyTotal) << ','
            << format_double(r.latencyCompute) << ',' << format_double(r.latencyComm) << ','
            << format_double(r.latencyDecode) << ',' << format_double(wasted) << ',' << (r.mispredicted ? 1 : 0)
            << ',' << (r.reassigned ? 1 : 0) << '\n';
    }
}

std::vector<ResultRow> read_metrics_csv(std::istream& in) {
    expect_schema(in, kMetricsHeader);
    std::vector<ResultRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 9)
            fail(ErrorKind::SchemaMismatch, "metrics row has " + std::to_string(fields.size()) + " fields, want 9");
        ResultRow r;
        r.iter = static_cast<std::size_t>(parse_number(fields[0], "iter"));
        r.strategy = fields[1];
        r.latencyTotal = parse_number(fields[2], "latency_total");
        r.latencyCompute = parse_number(fields[3], "latency_compute");
        r.latencyComm = parse_number(fields[4], "latency_comm");
        r.latencyDecode = parse_number(fields[5], "latency_decode");
        r.wastedRows = parse_number(fields[6], "wasted_rows");
        r.mispredicted = parse_flag(fields[7], "mispredicted");
        r.reassigned = parse_flag(fields[8], "reassigned");
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ResultRow> read_metrics_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open metrics file " + path);
    return read_metrics_csv(in);
}

void write_waste_csv(std::ostream& out, const MetricsReport& report) {
    out << kSchemaLine << '\n' << kWasteHeader << '\n';
    std::vector<double> assigned(report.workers, 0.0);
    std::vector<double> used(report.workers, 0.0);
    for (const IterationRecord& r : report.records) {
        for (std::size_t w = 0; w < report.workers; ++w) {
            assigned[w] += r.perWorker[w].assignedRows;
            used[w] += r.perWorker[w].usedRows;
        }
    }
    for (std::size_t w = 0; w < report.workers; ++w) {
        out << w << ',' << format_double(assigned[w]) << ',' << format_double(used[w]) << ','
            << format_double(report.wastedRowsPerWorker[w]) << '\n';
    }
}

std::vector<WasteRow> read_waste_csv(std::istream& in) {
    expect_schema(in, kWasteHeader);
    std::vector<WasteRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 4)
            fail(ErrorKind::SchemaMismatch, "waste row has " + std::to_string(fields.size()) + " fields, want 4");
        WasteRow r;
        r.worker = static_cast<std::size_t>(parse_number(fields[0], "worker"));
        r.assignedRows = parse_number(fields[1], "assigned_rows");
        r.usedRows = parse_number(fields[2], "used_rows");
        r.wastedRows = parse_number(fields[3], "wasted_rows");
        rows.push_back(r);
    }
    return rows;
}

std::string summary_json(const ExperimentConfig& cfg, const ExperimentArtifacts& artifacts) {
    Json j;
    j["schema"] = 1;
    j["strategy"] = artifacts.primary.strategyName;
    j["app"] = to_string(cfg.app);
    j["iterations"] = cfg.iterations;
    j["seed"] = cfg.seed;
    j["workers"] = artifacts.primary.workers;
    j["mean_latency"] = artifacts.primary.meanLatency;
    j["total_latency"] = artifacts.primary.totalLatency;
    j["total_wasted_rows"] = artifacts.primary.totalWastedRows;
    j["waste_fraction"] = artifacts.primary.wasteFraction;
    j["misprediction_rate"] = artifacts.primary.mispredictionRate;
    if (artifacts.baseline) {
        Json b;
        b["strategy"] = artifacts.baseline->strategyName;
        b["mean_latency"] = artifacts.baseline->meanLatency;
        b["total_wasted_rows"] = artifacts.baseline->totalWastedRows;
        j["baseline"] = b;
        if (artifacts.primary.meanLatency > 0.0 && artifacts.baseline->meanLatency > 0.0) {
            j["normalized_latency"] = artifacts.primary.meanLatency / artifacts.baseline->meanLatency;
            j["speedup"] = artifacts.baseline->meanLatency / artifacts.primary.meanLatency;
        }
    }
    return j.dump(2) + "\n";
}

std::string latency_report_csv(std::span<const MetricsInput> inputs, const std::string& baselineStrategy) {
    std::ostringstream out;
    out << kSchemaLine << '\n'
        << "source,strategy,iterations,mean_latency_total,mean_latency_compute,mean_latency_comm,"
           "mean_latency_decode,normalized_latency,total_wasted_rows,misprediction_rate,reassignment_rate\n";
    if (inputs.empty()) return out.str();

    struct Row {
        std::string source;
        std::string strategy;
        std::size_t iters = 0;
        double total = 0.0, compute = 0.0, comm = 0.0, decode = 0.0, wasted = 0.0;
        double mispredicted = 0.0, reassigned = 0.0;
    };
    std::vector<Row> rows;
    for (const MetricsInput& input : inputs) {
        Row r;
        r.source = input.source;
        r.iters = input.rows.size();
        for (const ResultRow& rr : input.rows) {
            r.strategy = rr.strategy;
            r.total += rr.latencyTotal;
            r.compute += rr.latencyCompute;
            r.comm += rr.latencyComm;
            r.decode += rr.latencyDecode;
            r.wasted += rr.wastedRows;
            r.mispredicted += rr.mispredicted ? 1.0 : 0.0;
            r.reassigned += rr.reassigned ? 1.0 : 0.0;
        }
        rows.push_back(std::move(r));
    }

    double baseMean = 0.0;
    bool found = baselineStrategy.empty();
    if (found && rows.front().iters > 0) baseMean = rows.front().total / static_cast<double>(rows.front().iters);
    for (const Row& r : rows) {
        if (!found && r.strategy == baselineStrategy && r.iters > 0) {
            baseMean = r.total / static_cast<double>(r.iters);
            found = true;
        }
    }
    if (!found) fail(ErrorKind::InvalidValue, "baseline strategy '" + baselineStrategy + "' not among the inputs");

    for (const Row& r : rows) {
        const double iters = r.iters > 0 ? static_cast<double>(r.iters) : 1.0;
        const double mean = r.total / iters;
        out << r.source << ',' << r.strategy << ',' << r.iters << ',' << format_double(mean) << ','
            << format_double(r.compute / iters) << ',' << format_double(r.comm / iters) << ','
            << format_double(r.decode / iters) << ',' << format_double(baseMean > 0.0 ? mean / baseMean : 0.0)
            << ',' << format_double(r.wasted) << ',' << format_double(r.mispredicted / iters) << ','
            << format_double(r.reassigned / iters) << '\n';
    }
    return out.str();
}

std::string waste_report_csv(std::span<const WasteInput> inputs) {
    std::ostringstream out;
    out << kSchemaLine << '\n' << "source,strategy,worker,assigned_rows,used_rows,wasted_rows\n";
    for (const WasteInput& input : inputs) {
        for (const WasteRow& r : input.rows) {
            out << input.source << ',' << input.strategy << ',' << r.worker << ','
                << format_double(r.assignedRows) << ',' << format_double(r.usedRows) << ','
                << format_double(r.wastedRows) << '\n';
        }
    }
    return out.str();
}

} // namespace sscc
