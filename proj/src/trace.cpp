#include "sscc/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>

#include "sscc/error.hpp"
#include "sscc/matrix_io.hpp"
#include "sscc/rng.hpp"

namespace sscc {

SpeedTrace gen_speed_trace(const TraceGenParams& params, std::uint64_t seed) {
    if (params.workers == 0 || params.iterations == 0)
        fail(ErrorKind::ZeroDimension, "trace needs at least one worker and one iteration");
    if (params.baseLo <= 0.0 || params.baseHi < params.baseLo)
        fail(ErrorKind::InvalidValue, "base speed range must be positive and ordered");
    if (params.noisePct < 0.0 || params.noisePct >= 1.0)
        fail(ErrorKind::InvalidValue, "noisePct must be in [0, 1)");
    if (params.changeProb < 0.0 || params.changeProb > 1.0)
        fail(ErrorKind::InvalidValue, "changeProb must be a probability");

    SpeedTrace trace(params.iterations, std::vector<double>(params.workers, 0.0));
    for (std::size_t w = 0; w < params.workers; ++w) {
        Rng rng(seed, w);
        double level = rng.uniform(params.baseLo, params.baseHi);
        for (std::size_t iter = 0; iter < params.iterations; ++iter) {
            if (iter > 0 && rng.uniform() < params.changeProb)
                level = rng.uniform(params.baseLo, params.baseHi);
            const double noise = 1.0 + params.noisePct * (2.0 * rng.uniform() - 1.0);
            trace[iter][w] = level * noise;
        }
    }
    inject_stragglers(trace, params.stragglers);
    return trace;
}

void inject_stragglers(SpeedTrace& trace, const std::vector<StragglerSpec>& stragglers) {
    for (const auto& s : stragglers) {
        if (s.factor <= 0.0) fail(ErrorKind::InvalidValue, "straggler factor must be positive");
        if (!trace.empty() && s.worker >= trace[0].size())
            fail(ErrorKind::InvalidValue, "straggler worker " + std::to_string(s.worker) + " out of range");
        for (std::size_t iter = s.iterBegin; iter < s.iterEnd && iter < trace.size(); ++iter)
            trace[iter][s.worker] /= s.factor;
    }
}

std::vector<std::vector<double>> per_worker_series(const SpeedTrace& trace) {
    if (trace.empty()) return {};
    std::vector<std::vector<double>> series(trace[0].size(), std::vector<double>(trace.size()));
    for (std::size_t iter = 0; iter < trace.size(); ++iter)
        for (std::size_t w = 0; w < trace[iter].size(); ++w) series[w][iter] = trace[iter][w];
    return series;
}

void write_trace_csv(std::ostream& out, const SpeedTrace& trace) {
    out << "iter,worker,speed\n";
    for (std::size_t iter = 0; iter < trace.size(); ++iter)
        for (std::size_t w = 0; w < trace[iter].size(); ++w)
            out << iter << ',' << w << ',' << format_double(trace[iter][w]) << '\n';
}

void write_trace_csv(const std::string& path, const SpeedTrace& trace) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot open " + path + " for writing");
    write_trace_csv(out, trace);
    if (!out) fail(ErrorKind::Io, "failed writing " + path);
}

SpeedTrace read_trace_csv(std::istream& in, const std::string& context) {
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Io, context + ": empty trace file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "iter,worker,speed")
        fail(ErrorKind::SchemaMismatch, context + ": expected header 'iter,worker,speed', got '" + line + "'");

    struct Entry {
        std::size_t iter, worker;
        double speed;
    };
    std::vector<Entry> entries;
    std::size_t maxIter = 0, maxWorker = 0;
    std::size_t lineNo = 1;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Entry e;
        char trailing;
        if (std::sscanf(line.c_str(), "%zu,%zu,%lf%c", &e.iter, &e.worker, &e.speed, &trailing) != 3)
            fail(ErrorKind::Io, context + ":" + std::to_string(lineNo) + ": bad trace row '" + line + "'");
        maxIter = std::max(maxIter, e.iter);
        maxWorker = std::max(maxWorker, e.worker);
        entries.push_back(e);
    }
    if (entries.empty()) fail(ErrorKind::Io, context + ": trace has no data rows");

    SpeedTrace trace(maxIter + 1, std::vector<double>(maxWorker + 1,
                                                      std::numeric_limits<double>::quiet_NaN()));
    for (const auto& e : entries) trace[e.iter][e.worker] = e.speed;
    for (std::size_t iter = 0; iter < trace.size(); ++iter)
        for (std::size_t w = 0; w < trace[iter].size(); ++w)
            if (std::isnan(trace[iter][w]))
                fail(ErrorKind::Io, context + ": missing entry for iter " + std::to_string(iter) +
                                        ", worker " + std::to_string(w));
    return trace;
}

SpeedTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path + " for reading");
    return read_trace_csv(in, path);
}

} // namespace sscc
