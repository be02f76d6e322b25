#ifndef SSCC_CONFIG_HPP
#define SSCC_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sscc/apps.hpp"
#include "sscc/sim.hpp"
#include "sscc/trace.hpp"

namespace sscc {

/// Where the app matrix comes from. Synthetic data is app-specific:
/// classification rows for LR/SVM, a link matrix for PageRank, a Laplacian
/// for graph filtering, a positive matrix for the Hessian job.
struct MatrixSourceConfig {
    enum class Kind { Synthetic, File };

    Kind kind = Kind::Synthetic;
    std::string path;
    std::size_t rows = 120;
    std::size_t cols = 24;
    std::uint64_t seed = 1;
};

/// Per-(worker, iteration) speeds. Constant and straggler-injection models
/// repeat one row; the stochastic model draws a fresh seeded trace.
struct SpeedModelConfig {
    enum class Kind { Constant, Trace, Stochastic, StragglerInjection };

    Kind kind = Kind::Constant;
    double value = 100.0;          ///< Constant / injection base when `base` is empty
    std::string path;              ///< Trace
    std::vector<double> base;      ///< StragglerInjection per-worker base speeds
    double baseLo = 50.0;          ///< Stochastic
    double baseHi = 150.0;
    double noisePct = 0.10;
    double changeProb = 0.04;
    std::vector<StragglerSpec> stragglers; ///< Stochastic and StragglerInjection
};

struct ExperimentConfig {
    Strategy scheme;
    std::optional<Strategy> baseline; ///< second run the summary normalizes against
    AppKind app = AppKind::Lr;
    std::size_t iterations = 15;
    double eta = 0.1;
    double lambda = 0.01;
    double alpha = 0.85;
    MatrixSourceConfig matrix;
    SpeedModelConfig speedModel;
    CostModel cost;
    std::uint64_t seed = 1;
    std::string output = "experiment"; ///< file name prefix inside the out dir
};

/// Strict JSON parsing: unknown keys and out-of-range values are diagnosed
/// with their full key path. Defaults: theta 0.15, alpha 0.85, C_target 20,
/// 15 iterations, constant speed 100, synthetic 120x24 matrix.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);

/// Inverse of parse_config_text with every default materialized; the
/// round-trip parse(to_json(cfg)) == cfg holds for valid configs.
std::string config_to_json(const ExperimentConfig& cfg);

Dataset build_dataset(const ExperimentConfig& cfg);
SpeedTrace build_speed_trace(const ExperimentConfig& cfg);

struct ExperimentArtifacts {
    MetricsReport primary;
    std::optional<MetricsReport> baseline;
};

/// Runs the configured experiment (and the baseline strategy, if one is
/// named) on the same dataset, trace, and seed. Nothing is written to disk;
/// the CLI owns file placement so failed runs leave no partial outputs.
ExperimentArtifacts run_experiment(const ExperimentConfig& cfg, std::ostream* eventLog = nullptr);

/// One parsed line of the per-iteration metrics CSV.
struct ResultRow {
    std::size_t iter = 0;
    std::string strategy;
    double latencyTotal = 0.0;
    double latencyCompute = 0.0;
    double latencyComm = 0.0;
    double latencyDecode = 0.0;
    double wastedRows = 0.0;
    bool mispredicted = false;
    bool reassigned = false;
};

void write_metrics_csv(std::ostream& out, const MetricsReport& report);
std::vector<ResultRow> read_metrics_csv(std::istream& in);
std::vector<ResultRow> read_metrics_csv_file(const std::string& path);

void write_waste_csv(std::ostream& out, const MetricsReport& report);

/// Per-worker rows of a waste CSV: (worker, assigned, used, wasted).
struct WasteRow {
    std::size_t worker = 0;
    double assignedRows = 0.0;
    double usedRows = 0.0;
    double wastedRows = 0.0;
};
std::vector<WasteRow> read_waste_csv(std::istream& in);

std::string summary_json(const ExperimentConfig& cfg, const ExperimentArtifacts& artifacts);

/// Inputs to the report builder: a source label (file stem) plus its rows.
struct MetricsInput {
    std::string source;
    std::vector<ResultRow> rows;
};

/// Tidy per-run latency table. Every input becomes one row with mean
/// latencies and rates, normalized against the run whose strategy label
/// equals `baselineStrategy` (empty = the first input).
std::string latency_report_csv(std::span<const MetricsInput> inputs, const std::string& baselineStrategy = "");

struct WasteInput {
    std::string source;
    std::string strategy;
    std::vector<WasteRow> rows;
};

/// Tidy per-worker waste table across runs.
std::string waste_report_csv(std::span<const WasteInput> inputs);

} // namespace sscc

#endif
