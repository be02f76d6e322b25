#include "sscc/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "sscc/error.hpp"
#include "sscc/rng.hpp"

namespace sscc {
namespace {

constexpr std::size_t kH = LstmModel::kHidden;

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

template <typename Params, typename F>
void for_each_param(Params& p, F&& f) {
    for (auto* gate : {&p.input, &p.forget, &p.output, &p.cell}) {
        for (std::size_t h = 0; h < kH; ++h) f(gate->w[h]);
        for (std::size_t h = 0; h < kH; ++h)
            for (std::size_t j = 0; j < kH; ++j) f(gate->u[h][j]);
        for (std::size_t h = 0; h < kH; ++h) f(gate->b[h]);
    }
    for (std::size_t h = 0; h < kH; ++h) f(p.wy[h]);
    f(p.by);
}

template <typename F>
void for_each_param_pair(LstmParams& a, const LstmParams& b, F&& f) {
    const std::pair<LstmGate*, const LstmGate*> gates[] = {{&a.input, &b.input},
                                                           {&a.forget, &b.forget},
                                                           {&a.output, &b.output},
                                                           {&a.cell, &b.cell}};
    for (auto [ga, gb] : gates) {
        for (std::size_t h = 0; h < kH; ++h) f(ga->w[h], gb->w[h]);
        for (std::size_t h = 0; h < kH; ++h)
            for (std::size_t j = 0; j < kH; ++j) f(ga->u[h][j], gb->u[h][j]);
        for (std::size_t h = 0; h < kH; ++h) f(ga->b[h], gb->b[h]);
    }
    for (std::size_t h = 0; h < kH; ++h) f(a.wy[h], b.wy[h]);
    f(a.by, b.by);
}

struct StepCache {
    double x = 0.0;
    std::array<double, kH> hPrev{}, cPrev{}, i{}, f{}, o{}, g{}, c{}, hc{}, h{};
    double y = 0.0;
};

StepCache forward_step(const LstmParams& p, const std::array<double, kH>& hPrev,
                       const std::array<double, kH>& cPrev, double x) {
    StepCache s;
    s.x = x;
    s.hPrev = hPrev;
    s.cPrev = cPrev;
    for (std::size_t h = 0; h < kH; ++h) {
        double ai = p.input.w[h] * x + p.input.b[h];
        double af = p.forget.w[h] * x + p.forget.b[h];
        double ao = p.output.w[h] * x + p.output.b[h];
        double ag = p.cell.w[h] * x + p.cell.b[h];
        for (std::size_t j = 0; j < kH; ++j) {
            ai += p.input.u[h][j] * hPrev[j];
            af += p.forget.u[h][j] * hPrev[j];
            ao += p.output.u[h][j] * hPrev[j];
            ag += p.cell.u[h][j] * hPrev[j];
        }
        s.i[h] = logistic(ai);
        s.f[h] = logistic(af);
        s.o[h] = logistic(ao);
        s.g[h] = std::tanh(ag);
        s.c[h] = s.f[h] * cPrev[h] + s.i[h] * s.g[h];
        s.hc[h] = std::tanh(s.c[h]);
        s.h[h] = s.o[h] * s.hc[h];
    }
    s.y = p.by;
    for (std::size_t h = 0; h < kH; ++h) s.y += p.wy[h] * s.h[h];
    return s;
}

std::size_t train_cut(std::size_t length, double trainFraction) {
    const auto cut = static_cast<std::size_t>(static_cast<double>(length) * trainFraction);
    return std::min(length, cut);
}

} // namespace

double measure_speed(double rows, double seconds) {
    if (seconds <= 0.0) fail(ErrorKind::NonPositiveTime, "response time must be positive");
    return rows / seconds;
}

double mape(std::span<const double> pred, std::span<const double> actual) {
    if (pred.size() != actual.size())
        fail(ErrorKind::LengthMismatch, std::to_string(pred.size()) + " predictions vs " +
                                            std::to_string(actual.size()) + " actuals");
    if (pred.empty()) fail(ErrorKind::EmptyList, "mape of nothing");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (actual[i] == 0.0) fail(ErrorKind::ZeroActual, "actual value at index " + std::to_string(i) + " is zero");
        sum += std::abs(pred[i] - actual[i]) / std::abs(actual[i]);
    }
    return 100.0 * sum / static_cast<double>(pred.size());
}

Ar1Model ar1_fit(std::span<const double> series) {
    if (series.size() < 2)
        fail(ErrorKind::TooShort, "AR(1) needs at least 2 samples, got " + std::to_string(series.size()));
    Ar1Model model;
    double sum = 0.0;
    for (double s : series) sum += s;
    model.mu = sum / static_cast<double>(series.size());

    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double d = series[i] - model.mu;
        den += d * d;
        if (i + 1 < series.size()) num += d * (series[i + 1] - model.mu);
    }
    model.phi = den > 0.0 ? std::clamp(num / den, -1.0, 1.0) : 0.0;
    return model;
}

double ar1_predict(const Ar1Model& model, double current) {
    return model.mu + model.phi * (current - model.mu);
}

double lstm_step(const LstmModel& model, LstmState& state, double x) {
    const StepCache s = forward_step(model.params, state.h, state.c, x);
    state.h = s.h;
    state.c = s.c;
    return model.denormalize(s.y);
}

double lstm_loss_and_gradients(const LstmModel& model, std::span<const std::vector<double>> traces,
                               double trainFraction, LstmParams& grads) {
    if (trainFraction <= 0.0 || trainFraction > 1.0)
        fail(ErrorKind::InvalidValue, "trainFraction must be in (0, 1]");
    grads = LstmParams{};
    const LstmParams& p = model.params;

    // Count one-step targets first so every dy carries the final 1/N factor.
    std::size_t totalTargets = 0;
    for (const auto& trace : traces) {
        const std::size_t cut = train_cut(trace.size(), trainFraction);
        if (cut >= 2) totalTargets += cut - 1;
    }
    if (totalTargets == 0) fail(ErrorKind::TooShort, "no one-step training pairs in any trace");

    double loss = 0.0;
    std::vector<StepCache> steps;
    for (const auto& trace : traces) {
        const std::size_t cut = train_cut(trace.size(), trainFraction);
        if (cut < 2) continue;
        const std::size_t T = cut - 1;

        steps.clear();
        steps.reserve(T);
        std::array<double, kH> h{}, c{};
        for (std::size_t t = 0; t < T; ++t) {
            steps.push_back(forward_step(p, h, c, model.normalize(trace[t])));
            h = steps.back().h;
            c = steps.back().c;
        }

        std::array<double, kH> dhNext{}, dcNext{};
        for (std::size_t t = T; t-- > 0;) {
            const StepCache& s = steps[t];
            const double err = s.y - model.normalize(trace[t + 1]);
            loss += 0.5 * err * err;
            const double dy = err / static_cast<double>(totalTargets);

            std::array<double, kH> dh, dc, dai, daf, dao, dag;
            grads.by += dy;
            for (std::size_t hIdx = 0; hIdx < kH; ++hIdx) {
                grads.wy[hIdx] += dy * s.h[hIdx];
                dh[hIdx] = dy * p.wy[hIdx] + dhNext[hIdx];
                const double dOut = dh[hIdx] * s.hc[hIdx];
                dao[hIdx] = dOut * s.o[hIdx] * (1.0 - s.o[hIdx]);
                dc[hIdx] = dh[hIdx] * s.o[hIdx] * (1.0 - s.hc[hIdx] * s.hc[hIdx]) + dcNext[hIdx];
                const double dForget = dc[hIdx] * s.cPrev[hIdx];
                daf[hIdx] = dForget * s.f[hIdx] * (1.0 - s.f[hIdx]);
                const double dIn = dc[hIdx] * s.g[hIdx];
                dai[hIdx] = dIn * s.i[hIdx] * (1.0 - s.i[hIdx]);
                const double dCell = dc[hIdx] * s.i[hIdx];
                dag[hIdx] = dCell * (1.0 - s.g[hIdx] * s.g[hIdx]);
                dcNext[hIdx] = dc[hIdx] * s.f[hIdx];
            }

            dhNext = {};
            const std::pair<LstmGate*, const std::array<double, kH>*> parts[] = {
                {&grads.input, &dai}, {&grads.forget, &daf}, {&grads.output, &dao}, {&grads.cell, &dag}};
            const LstmGate* gates[] = {&p.input, &p.forget, &p.output, &p.cell};
            for (std::size_t gi = 0; gi < 4; ++gi) {
                LstmGate& grad = *parts[gi].first;
                const auto& da = *parts[gi].second;
                const LstmGate& gate = *gates[gi];
                for (std::size_t hIdx = 0; hIdx < kH; ++hIdx) {
                    grad.w[hIdx] += da[hIdx] * s.x;
                    grad.b[hIdx] += da[hIdx];
                    for (std::size_t j = 0; j < kH; ++j) {
                        grad.u[hIdx][j] += da[hIdx] * s.hPrev[j];
                        dhNext[j] += da[hIdx] * gate.u[hIdx][j];
                    }
                }
            }
        }
    }
    return loss / static_cast<double>(totalTargets);
}

LstmTrainResult lstm_train(std::span<const std::vector<double>> traces, const TrainConfig& cfg) {
    if (cfg.trainFraction <= 0.0 || cfg.trainFraction >= 1.0)
        fail(ErrorKind::InvalidValue, "trainFraction must be in (0, 1)");
    std::size_t combined = 0;
    for (const auto& trace : traces) combined += trace.size();
    if (combined < 20)
        fail(ErrorKind::TooShort, "combined trace length " + std::to_string(combined) + " < 20");

    LstmTrainResult result;
    LstmModel& model = result.model;

    double maxTrain = 0.0;
    for (const auto& trace : traces) {
        const std::size_t cut = train_cut(trace.size(), cfg.trainFraction);
        for (std::size_t t = 0; t < cut; ++t) maxTrain = std::max(maxTrain, trace[t]);
    }
    if (maxTrain <= 0.0) fail(ErrorKind::InvalidValue, "training speeds must include a positive value");
    model.scale = maxTrain;

    // Weights uniform in [-0.5, 0.5]/sqrt(H), biases zero. Fixed draw order:
    // per gate w then u (row-major), gates in i,f,o,g order, then wy.
    Rng rng(cfg.seed);
    const double span = 0.5 / std::sqrt(static_cast<double>(kH));
    for (auto* gate : {&model.params.input, &model.params.forget, &model.params.output, &model.params.cell}) {
        for (std::size_t h = 0; h < kH; ++h) gate->w[h] = rng.uniform(-span, span);
        for (std::size_t h = 0; h < kH; ++h)
            for (std::size_t j = 0; j < kH; ++j) gate->u[h][j] = rng.uniform(-span, span);
    }
    for (std::size_t h = 0; h < kH; ++h) model.params.wy[h] = rng.uniform(-span, span);

    LstmParams grads;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        lstm_loss_and_gradients(model, traces, cfg.trainFraction, grads);
        double normSq = 0.0;
        for_each_param(grads, [&](double& g) { normSq += g * g; });
        const double norm = std::sqrt(normSq);
        const double step = cfg.learningRate * std::min(1.0, cfg.gradClip / std::max(norm, 1e-12));
        for_each_param_pair(model.params, grads, [&](double& w, const double& g) { w -= step * g; });
    }

    // Pooled one-step MAPE over the train and test regions of all traces.
    std::vector<double> trainPred, trainAct, testPred, testAct;
    for (const auto& trace : traces) {
        const std::size_t cut = train_cut(trace.size(), cfg.trainFraction);
        LstmState state;
        for (std::size_t t = 0; t + 1 < trace.size(); ++t) {
            const double pred = lstm_step(model, state, model.normalize(trace[t]));
            if (t + 1 < cut) {
                trainPred.push_back(pred);
                trainAct.push_back(trace[t + 1]);
            } else if (t + 1 >= cut) {
                testPred.push_back(pred);
                testAct.push_back(trace[t + 1]);
            }
        }
    }
    result.trainMape = trainPred.empty() ? 0.0 : mape(trainPred, trainAct);
    result.testMape = testPred.empty() ? 0.0 : mape(testPred, testAct);
    return result;
}

namespace {

template <typename Predict>
PredictorEval pooled_eval(std::span<const std::vector<double>> traces, double trainFraction, Predict predict) {
    if (trainFraction <= 0.0 || trainFraction >= 1.0)
        fail(ErrorKind::InvalidValue, "trainFraction must be in (0, 1)");
    std::vector<double> trainPred, trainAct, testPred, testAct;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const auto& trace = traces[i];
        const std::size_t cut = train_cut(trace.size(), trainFraction);
        for (std::size_t t = 0; t + 1 < trace.size(); ++t) {
            const double pred = predict(i, trace[t]);
            if (t + 1 < cut) {
                trainPred.push_back(pred);
                trainAct.push_back(trace[t + 1]);
            } else {
                testPred.push_back(pred);
                testAct.push_back(trace[t + 1]);
            }
        }
    }
    PredictorEval eval;
    eval.trainMape = trainPred.empty() ? 0.0 : mape(trainPred, trainAct);
    eval.testMape = testPred.empty() ? 0.0 : mape(testPred, testAct);
    return eval;
}

} // namespace

PredictorEval evaluate_last_value(std::span<const std::vector<double>> traces, double trainFraction) {
    return pooled_eval(traces, trainFraction, [](std::size_t, double prev) { return prev; });
}

PredictorEval evaluate_ar1(std::span<const std::vector<double>> traces, double trainFraction) {
    std::vector<std::optional<Ar1Model>> models(traces.size());
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const std::size_t cut = train_cut(traces[i].size(), trainFraction);
        if (cut >= 2) models[i] = ar1_fit(std::span<const double>(traces[i].data(), cut));
    }
    return pooled_eval(traces, trainFraction, [&](std::size_t i, double prev) {
        return models[i] ? ar1_predict(*models[i], prev) : prev;
    });
}

PredictorKind predictor_kind_from_string(const std::string& name) {
    if (name == "last_value") return PredictorKind::LastValue;
    if (name == "ar1") return PredictorKind::Ar1;
    if (name == "lstm") return PredictorKind::Lstm;
    if (name == "oracle") return PredictorKind::Oracle;
    fail(ErrorKind::InvalidValue, "unknown predictor '" + name + "'");
}

const char* to_string(PredictorKind kind) {
    switch (kind) {
    case PredictorKind::LastValue: return "last_value";
    case PredictorKind::Ar1: return "ar1";
    case PredictorKind::Lstm: return "lstm";
    case PredictorKind::Oracle: return "oracle";
    }
    return "?";
}

SpeedPredictor::SpeedPredictor(PredictorKind kind) : kind_(kind) {
    if (kind == PredictorKind::Lstm)
        fail(ErrorKind::InvalidValue, "LSTM predictor needs a model; use SpeedPredictor::lstm");
}

SpeedPredictor SpeedPredictor::lstm(LstmModel model) {
    SpeedPredictor p(PredictorKind::LastValue);
    p.kind_ = PredictorKind::Lstm;
    p.model_ = std::move(model);
    return p;
}

std::vector<double> SpeedPredictor::predict_next(std::span<const std::vector<double>> histories) {
    if (kind_ == PredictorKind::Oracle)
        fail(ErrorKind::InvalidValue, "the oracle predictor is resolved by the simulator, not predicted");
    if (states_.empty() && kind_ == PredictorKind::Lstm) {
        states_.resize(histories.size());
        consumed_.assign(histories.size(), 0);
        lastPrediction_.assign(histories.size(), 0.0);
    }
    if (kind_ == PredictorKind::Lstm && states_.size() != histories.size())
        fail(ErrorKind::LengthMismatch, "worker count changed between predict_next calls");

    std::vector<double> predictions(histories.size());
    for (std::size_t w = 0; w < histories.size(); ++w) {
        const auto& history = histories[w];
        if (history.empty()) fail(ErrorKind::EmptyHistory, "worker " + std::to_string(w) + " has no history");
        switch (kind_) {
        case PredictorKind::LastValue:
            predictions[w] = history.back();
            break;
        case PredictorKind::Ar1:
            predictions[w] = history.size() >= 2 ? ar1_predict(ar1_fit(history), history.back())
                                                 : history.back();
            break;
        case PredictorKind::Lstm:
            while (consumed_[w] < history.size()) {
                lastPrediction_[w] = lstm_step(*model_, states_[w], model_->normalize(history[consumed_[w]]));
                ++consumed_[w];
            }
            predictions[w] = lastPrediction_[w];
            break;
        case PredictorKind::Oracle:
            break;
        }
    }
    return predictions;
}

void SpeedPredictor::reset() {
    states_.clear();
    consumed_.clear();
    lastPrediction_.clear();
}

namespace {

nlohmann::json gate_to_json(const LstmGate& gate) {
    nlohmann::json j;
    j["w"] = gate.w;
    j["u"] = gate.u;
    j["b"] = gate.b;
    return j;
}

LstmGate gate_from_json(const nlohmann::json& j) {
    LstmGate gate;
    const auto& w = j.at("w");
    const auto& u = j.at("u");
    const auto& b = j.at("b");
    if (w.size() != kH || u.size() != kH || b.size() != kH)
        fail(ErrorKind::SchemaMismatch, "gate arrays must have 4 rows");
    for (std::size_t h = 0; h < kH; ++h) {
        gate.w[h] = w.at(h).get<double>();
        gate.b[h] = b.at(h).get<double>();
        if (u.at(h).size() != kH) fail(ErrorKind::SchemaMismatch, "recurrent rows must have 4 entries");
        for (std::size_t c = 0; c < kH; ++c) gate.u[h][c] = u.at(h).at(c).get<double>();
    }
    return gate;
}

} // namespace

std::string lstm_to_json(const LstmModel& model) {
    nlohmann::json j;
    j["schema"] = 1;
    j["type"] = "lstm";
    j["hidden"] = kH;
    j["scale"] = model.scale;
    j["gates"]["input"] = gate_to_json(model.params.input);
    j["gates"]["forget"] = gate_to_json(model.params.forget);
    j["gates"]["output"] = gate_to_json(model.params.output);
    j["gates"]["cell"] = gate_to_json(model.params.cell);
    j["wy"] = model.params.wy;
    j["by"] = model.params.by;
    return j.dump(2) + "\n";
}

LstmModel lstm_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(ErrorKind::SchemaMismatch, "model file is not valid JSON");
    try {
        if (j.at("schema").get<int>() != 1 || j.at("type").get<std::string>() != "lstm" ||
            j.at("hidden").get<std::size_t>() != kH)
            fail(ErrorKind::SchemaMismatch, "expected schema-1 lstm model with hidden=4");
        LstmModel model;
        model.scale = j.at("scale").get<double>();
        model.params.input = gate_from_json(j.at("gates").at("input"));
        model.params.forget = gate_from_json(j.at("gates").at("forget"));
        model.params.output = gate_from_json(j.at("gates").at("output"));
        model.params.cell = gate_from_json(j.at("gates").at("cell"));
        const auto& wy = j.at("wy");
        if (wy.size() != kH) fail(ErrorKind::SchemaMismatch, "wy must have 4 entries");
        for (std::size_t h = 0; h < kH; ++h) model.params.wy[h] = wy.at(h).get<double>();
        model.params.by = j.at("by").get<double>();
        return model;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::SchemaMismatch, std::string("model file: ") + e.what());
    }
}

std::string ar1_to_json(const Ar1Model& model) {
    nlohmann::json j;
    j["schema"] = 1;
    j["type"] = "ar1";
    j["mu"] = model.mu;
    j["phi"] = model.phi;
    return j.dump(2) + "\n";
}

Ar1Model ar1_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(ErrorKind::SchemaMismatch, "model file is not valid JSON");
    try {
        if (j.at("schema").get<int>() != 1 || j.at("type").get<std::string>() != "ar1")
            fail(ErrorKind::SchemaMismatch, "expected schema-1 ar1 model");
        return {j.at("mu").get<double>(), j.at("phi").get<double>()};
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::SchemaMismatch, std::string("model file: ") + e.what());
    }
}

} // namespace sscc
