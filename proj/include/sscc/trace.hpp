#ifndef SSCC_TRACE_HPP
#define SSCC_TRACE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sscc {

/// speeds[iter][worker], rows per second. Strictly positive except where a
/// straggler injection drives a worker near zero.
using SpeedTrace = std::vector<std::vector<double>>;

/// Divides a worker's speed by `factor` on iterations [iterBegin, iterEnd).
struct StragglerSpec {
    std::size_t worker = 0;
    double factor = 5.0;
    std::size_t iterBegin = 0;
    std::size_t iterEnd = 0;
};

struct TraceGenParams {
    std::size_t workers = 10;
    std::size_t iterations = 120;
    double baseLo = 50.0;  ///< regime level range, rows/s
    double baseHi = 150.0;
    double noisePct = 0.10;  ///< multiplicative noise amplitude
    double changeProb = 0.04; ///< per-iteration probability of a new regime level
    std::vector<StragglerSpec> stragglers;
};

/// Piecewise-constant regime levels with multiplicative noise, one
/// independent substream per worker so traces do not shift when the worker
/// count changes. Deterministic under seed.
SpeedTrace gen_speed_trace(const TraceGenParams& params, std::uint64_t seed);

/// Applies straggler slowdowns to an existing trace.
void inject_stragglers(SpeedTrace& trace, const std::vector<StragglerSpec>& stragglers);

/// Column view: series[worker][iter], the shape predictors consume.
std::vector<std::vector<double>> per_worker_series(const SpeedTrace& trace);

/// Trace CSV: header `iter,worker,speed`, then one row per entry.
void write_trace_csv(std::ostream& out, const SpeedTrace& trace);
void write_trace_csv(const std::string& path, const SpeedTrace& trace);
SpeedTrace read_trace_csv(std::istream& in, const std::string& context = "<stream>");
SpeedTrace read_trace_csv(const std::string& path);

} // namespace sscc

#endif
