#ifndef SSCC_SIM_HPP
#define SSCC_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sscc/apps.hpp"
#include "sscc/matrix.hpp"
#include "sscc/poly.hpp"
#include "sscc/predictor.hpp"
#include "sscc/scheduler.hpp"
#include "sscc/trace.hpp"

namespace sscc {

enum class StrategyKind { Mds, S2c2Basic, S2c2General, Poly, ReplicationUncoded, OverDecomposition };

StrategyKind strategy_kind_from_string(const std::string& name);
const char* to_string(StrategyKind kind);

/// Straggler-mitigation strategy and its parameters. Fields apply to the
/// kinds noted; the rest are ignored.
struct Strategy {
    StrategyKind kind = StrategyKind::Mds;

    std::size_t n = 10; ///< workers
    std::size_t k = 7;  ///< MDS source blocks (Mds, S2c2Basic, S2c2General)

    std::size_t a = 2, b = 2;  ///< Poly splits
    bool polyS2c2 = false;     ///< Poly: squeeze row assignment with S2C2

    PredictorKind predictor = PredictorKind::LastValue; ///< S2c2General, Poly+S2C2, OverDecomposition
    std::size_t cTarget = 20;                           ///< chunk circle size for S2C2 assignment
    double theta = 0.15;                                ///< timeout slack

    GeneratorKind generator = GeneratorKind::Vandermonde; ///< MDS generator family
    bool chebyshevPoints = false;                         ///< Poly evaluation points

    std::size_t replication = 3;    ///< ReplicationUncoded copies per partition
    std::size_t maxSpeculative = 6; ///< speculative tasks per iteration cap
    double detectFactor = 1.5;      ///< straggler detection multiple of the median arrival

    std::size_t overFactor = 4;     ///< OverDecomposition task grain multiplier
    double overReplication = 1.42;  ///< storage copies per task (fraction above 1 gets a 2nd replica)
    double migrationSeconds = 0.0;  ///< charge per task served from a non-replica worker
};

std::string strategy_label(const Strategy& s);

/// Virtual-time cost parameters. bytesPerSecond == 0 means free bandwidth.
struct CostModel {
    double rowCost = 1.0;             ///< seconds per assigned row at unit speed
    double perMessageLatency = 0.0;   ///< seconds per message each way
    double bytesPerSecond = 0.0;      ///< link bandwidth (0 = infinite)
    double decodeSecondsPerChunk = 0.0;
};

struct WorkerIterStats {
    double assignedRows = 0.0; ///< rows handed to the worker (including reassigned extras)
    double responseTime = 0.0; ///< when its last response lands at the master
    double usedRows = 0.0;
    double wastedRows = 0.0;
};

struct IterationRecord {
    std::size_t iter = 0;
    std::vector<WorkerIterStats> perWorker;
    double latencyCompute = 0.0;
    double latencyComm = 0.0;
    double latencyDecode = 0.0;
    double latencyTotal = 0.0;
    bool mispredicted = false;
    bool reassigned = false;
    double deadline = 0.0; ///< last timeout deadline computed this iteration (0 = none)
};

struct MetricsReport {
    std::string strategyName;
    std::size_t workers = 0;
    std::vector<IterationRecord> records;
    double totalLatency = 0.0;
    double meanLatency = 0.0;
    std::vector<double> wastedRowsPerWorker;
    double totalWastedRows = 0.0;
    double totalComputedRows = 0.0;
    double wasteFraction = 0.0;
    double mispredictionRate = 0.0;
};

/// Per-worker and total computed-but-unused rows.
std::vector<double> wasted_rows(const MetricsReport& report);
double total_wasted_rows(const MetricsReport& report);

/// Deterministic virtual-time simulation of the master/worker iteration
/// loop. The app's linear algebra really runs (encoded partitions, per-chunk
/// responses, decode), so every iteration's decoded result is checked
/// against the direct product; a mismatch aborts rather than reporting
/// latencies for wrong answers.
class Simulator {
public:
    Simulator(Strategy strategy, CostModel cost, SpeedTrace speeds, AppKind app, Dataset dataset,
              std::uint64_t seed, std::ostream* eventLog = nullptr);
    ~Simulator();

    IterationRecord run_iteration(std::size_t iter);
    MetricsReport run(std::size_t iterations);

    const AppState& state() const;

    /// Mutable access, for setting app hyperparameters before the first
    /// iteration (eta, lambda, alpha).
    AppState& state();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper: construct, run, report.
MetricsReport run_strategy(const Strategy& strategy, const CostModel& cost, const SpeedTrace& speeds,
                           AppKind app, const Dataset& dataset, std::size_t iterations, std::uint64_t seed,
                           std::ostream* eventLog = nullptr);

} // namespace sscc

#endif
