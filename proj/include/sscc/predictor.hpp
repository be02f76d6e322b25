#ifndef SSCC_PREDICTOR_HPP
#define SSCC_PREDICTOR_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sscc {

/// speed = rows / seconds.
double measure_speed(double rows, double seconds);

/// 100 * mean(|pred - actual| / |actual|).
double mape(std::span<const double> pred, std::span<const double> actual);

struct Ar1Model {
    double mu = 0.0;
    double phi = 0.0;
};

/// mu = sample mean; phi = lag-1 autocovariance over variance, clamped to
/// [-1, 1]; a zero-variance series fits phi = 0.
Ar1Model ar1_fit(std::span<const double> series);

/// One-step forecast: mu + phi * (current - mu).
double ar1_predict(const Ar1Model& model, double current);

/// Gate parameters: 4 input weights, 4x4 recurrent weights, 4 biases.
struct LstmGate {
    std::array<double, 4> w{};
    std::array<std::array<double, 4>, 4> u{};
    std::array<double, 4> b{};
};

/// All trainable weights of the 1-in 1-out, 4-hidden LSTM.
struct LstmParams {
    LstmGate input, forget, output, cell;
    std::array<double, 4> wy{};
    double by = 0.0;
};

struct LstmModel {
    static constexpr std::size_t kHidden = 4;
    LstmParams params;
    double scale = 1.0; ///< speeds divide by this on the way in, multiply on the way out

    double normalize(double speed) const { return speed / scale; }
    double denormalize(double y) const { return y * scale; }
};

/// Per-worker recurrent state, carried across iterations.
struct LstmState {
    std::array<double, 4> h{};
    std::array<double, 4> c{};
};

/// Advances the cell by one step on a normalized input and returns the
/// de-normalized speed prediction:
///   i,f,o = logistic(W x + U h + b), g = tanh(...),
///   c' = f.c + i.g, h' = o.tanh(c'), y = Wy h' + by.
double lstm_step(const LstmModel& model, LstmState& state, double x);

struct TrainConfig {
    std::size_t epochs = 12000;
    double learningRate = 0.3;
    double gradClip = 1.0;
    std::uint64_t seed = 1;
    double trainFraction = 0.8;
};

struct LstmTrainResult {
    LstmModel model;
    double trainMape = 0.0;
    double testMape = 0.0;
};

/// Trains on the leading trainFraction of every trace by full-batch gradient
/// descent with backpropagation through time, MSE loss, and global-norm
/// gradient clipping. Weights start uniform in [-0.5, 0.5]/sqrt(hidden),
/// seeded; biases start at zero. MAPEs are measured by running each full
/// trace and pooling one-step predictions from the train/test regions.
LstmTrainResult lstm_train(std::span<const std::vector<double>> traces, const TrainConfig& cfg);

/// Loss and parameter gradients of the training objective at the given
/// model; exposed so the gradient check can compare against finite
/// differences. Loss is 0.5 * mean squared error over all one-step targets.
double lstm_loss_and_gradients(const LstmModel& model, std::span<const std::vector<double>> traces,
                               double trainFraction, LstmParams& grads);

struct PredictorEval {
    double trainMape = 0.0;
    double testMape = 0.0;
};

/// One-step last-value baseline, pooled over the same per-trace train/test
/// split lstm_train uses: predictions in the leading trainFraction count as
/// train, the rest as test.
PredictorEval evaluate_last_value(std::span<const std::vector<double>> traces, double trainFraction = 0.8);

/// AR(1) baseline: fits on each trace's training prefix, then predicts every
/// step of the full trace from the previous actual value.
PredictorEval evaluate_ar1(std::span<const std::vector<double>> traces, double trainFraction = 0.8);

enum class PredictorKind { LastValue, Ar1, Lstm, Oracle };

PredictorKind predictor_kind_from_string(const std::string& name);
const char* to_string(PredictorKind kind);

/// Batched next-iteration speed prediction with per-worker state. The LSTM
/// shares one weight set across workers and keeps one recurrent state per
/// worker. Oracle has no client-side logic: the simulator substitutes the
/// true next speeds, so calling predict_next on an Oracle predictor throws.
class SpeedPredictor {
public:
    explicit SpeedPredictor(PredictorKind kind);
    static SpeedPredictor lstm(LstmModel model);

    PredictorKind kind() const { return kind_; }

    /// histories[w] = all measured speeds of worker w so far, oldest first.
    /// Feeds only the unseen suffix to stateful predictors.
    std::vector<double> predict_next(std::span<const std::vector<double>> histories);

    void reset();

private:
    PredictorKind kind_;
    std::optional<LstmModel> model_;
    std::vector<LstmState> states_;
    std::vector<std::size_t> consumed_;
    std::vector<double> lastPrediction_;
};

/// JSON (de)serialization of trained models; schema versioned.
std::string lstm_to_json(const LstmModel& model);
LstmModel lstm_from_json(const std::string& text);
std::string ar1_to_json(const Ar1Model& model);
Ar1Model ar1_from_json(const std::string& text);

} // namespace sscc

#endif
