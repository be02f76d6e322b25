#include "sscc/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "sscc/error.hpp"

namespace sscc {

std::size_t Assignment::total_chunks() const {
    std::size_t total = 0;
    for (const auto& iv : intervals) total += iv.len;
    return total;
}

std::vector<std::size_t> Assignment::chunks_of(std::size_t worker) const {
    const auto& iv = intervals.at(worker);
    std::vector<std::size_t> chunks;
    chunks.reserve(iv.len);
    for (std::size_t i = 0; i < iv.len; ++i) chunks.push_back((iv.begin + i) % chunksPerPartition);
    return chunks;
}

bool Assignment::covers(std::size_t worker, std::size_t chunk) const {
    const auto& iv = intervals.at(worker);
    if (iv.len == 0) return false;
    const std::size_t offset = (chunk + chunksPerPartition - iv.begin % chunksPerPartition) % chunksPerPartition;
    return offset < iv.len;
}

std::vector<RowRange> chunks_to_rows(const Assignment& asg, std::size_t worker, const ChunkGrid& grid) {
    if (grid.chunksPerPartition != asg.chunksPerPartition)
        fail(ErrorKind::DimensionMismatch, "assignment uses C=" + std::to_string(asg.chunksPerPartition) +
                                               ", grid has C=" + std::to_string(grid.chunksPerPartition));
    const auto& iv = asg.intervals.at(worker);
    std::vector<RowRange> ranges;
    if (iv.len == 0) return ranges;
    const std::size_t c = asg.chunksPerPartition;
    const std::size_t begin = iv.begin % c;
    const std::size_t straight = std::min(iv.len, c - begin);
    ranges.push_back({begin * grid.rowsPerChunk, (begin + straight) * grid.rowsPerChunk});
    if (straight < iv.len) ranges.push_back({0, (iv.len - straight) * grid.rowsPerChunk});
    return ranges;
}

SpeedVector quantize_speeds(std::span<const double> speeds, std::uint64_t cTarget, double deadFraction) {
    if (speeds.empty()) fail(ErrorKind::EmptyList, "no speeds to quantize");
    if (cTarget == 0) fail(ErrorKind::InvalidValue, "C target must be positive");
    double maxSpeed = 0.0;
    for (double s : speeds) {
        if (s < 0.0 || !std::isfinite(s)) fail(ErrorKind::InvalidValue, "speeds must be finite and non-negative");
        maxSpeed = std::max(maxSpeed, s);
    }
    const double threshold = deadFraction * maxSpeed;
    if (maxSpeed <= 0.0) fail(ErrorKind::AllDead, "every speed is zero");

    double sum = 0.0;
    for (double s : speeds) sum += s;

    SpeedVector u(speeds.size(), 0);
    bool anyLive = false;
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        if (speeds[i] <= threshold) continue;
        u[i] = static_cast<std::uint64_t>(std::llround(speeds[i] * static_cast<double>(cTarget) / sum));
        anyLive = anyLive || u[i] > 0;
    }
    if (!anyLive) fail(ErrorKind::AllDead, "quantization rounded every worker to zero");
    return u;
}

SpeedVector apportion_speeds(std::span<const double> speeds, std::uint64_t total, double deadFraction) {
    if (speeds.empty()) fail(ErrorKind::EmptyList, "no speeds to apportion");
    if (total == 0) fail(ErrorKind::InvalidValue, "total must be positive");
    double maxSpeed = 0.0;
    for (double s : speeds) {
        if (s < 0.0 || !std::isfinite(s)) fail(ErrorKind::InvalidValue, "speeds must be finite and non-negative");
        maxSpeed = std::max(maxSpeed, s);
    }
    if (maxSpeed <= 0.0) fail(ErrorKind::AllDead, "every speed is zero");
    const double threshold = deadFraction * maxSpeed;

    double liveSum = 0.0;
    for (double s : speeds)
        if (s > threshold) liveSum += s;

    // Floor of the exact share, then hand out the leftover singly by largest
    // fractional remainder (ties to the lower worker index).
    SpeedVector u(speeds.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainder;
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        if (speeds[i] <= threshold) continue;
        const double share = speeds[i] * static_cast<double>(total) / liveSum;
        const double floored = std::floor(share);
        u[i] = static_cast<std::uint64_t>(floored);
        assigned += u[i];
        remainder.push_back({share - floored, i});
    }
    std::sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t j = 0; assigned < total; ++j) {
        ++u[remainder[j % remainder.size()].second];
        ++assigned;
    }
    return u;
}

Assignment general_s2c2(const SpeedVector& u, std::size_t m) {
    std::size_t live = 0;
    std::uint64_t c = 0;
    for (std::uint64_t ui : u) {
        if (ui > 0) ++live;
        c += ui;
    }
    if (live < m)
        fail(ErrorKind::InsufficientCapacity, std::to_string(live) + " live workers cannot cover m=" +
                                                  std::to_string(m));

    Assignment asg;
    asg.chunksPerPartition = static_cast<std::size_t>(c);
    asg.m = m;
    asg.intervals.assign(u.size(), {});
    const std::size_t totalChunks = m * asg.chunksPerPartition;
    if (totalChunks == 0) return asg;

    // Fastest first, ties by worker index.
    std::vector<std::size_t> order(u.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u[a] > u[b]; });

    std::size_t chunkEnd = 0;
    std::size_t remaining = totalChunks;
    std::uint64_t speedLeft = c;
    for (std::size_t worker : order) {
        if (u[worker] == 0 || remaining == 0) break;
        std::size_t take = static_cast<std::size_t>(
            static_cast<std::uint64_t>(u[worker]) * static_cast<std::uint64_t>(remaining) / speedLeft);
        // A worker cannot usefully hold more than all C chunks; the excess
        // carries to the next (slower) workers through `remaining`.
        take = std::min(take, asg.chunksPerPartition);
        asg.intervals[worker] = {chunkEnd % asg.chunksPerPartition, take};
        chunkEnd += take;
        remaining -= take;
        speedLeft -= u[worker];
    }
    if (remaining != 0)
        fail(ErrorKind::InsufficientCapacity, "could not place " + std::to_string(remaining) +
                                                  " of " + std::to_string(totalChunks) + " chunks");
    return asg;
}

Assignment basic_s2c2(const std::vector<bool>& alive, std::size_t m) {
    SpeedVector u(alive.size(), 0);
    for (std::size_t i = 0; i < alive.size(); ++i) u[i] = alive[i] ? 1 : 0;
    return general_s2c2(u, m);
}

CoverageReport verify_coverage(const Assignment& asg) {
    CoverageReport report;
    report.perChunkCoverage.assign(asg.chunksPerPartition, 0);
    for (const auto& iv : asg.intervals) {
        // len <= C, so an interval touches each chunk at most once and
        // interval counts are distinct-worker counts.
        for (std::size_t i = 0; i < iv.len; ++i)
            ++report.perChunkCoverage[(iv.begin + i) % asg.chunksPerPartition];
    }
    report.decodable = true;
    for (std::size_t chunk = 0; chunk < asg.chunksPerPartition; ++chunk) {
        if (report.perChunkCoverage[chunk] < asg.m) {
            report.decodable = false;
            report.deficit.push_back({chunk, asg.m - report.perChunkCoverage[chunk]});
        }
    }
    return report;
}

double deadline(std::span<const double> firstMTimes, const TimeoutPolicy& policy) {
    if (firstMTimes.empty()) fail(ErrorKind::EmptyList, "deadline needs at least one response time");
    double mean = 0.0;
    for (double t : firstMTimes) mean += t;
    mean /= static_cast<double>(firstMTimes.size());
    return (1.0 + policy.theta) * mean;
}

bool AssignmentDelta::empty() const {
    for (const auto& chunks : extraChunks)
        if (!chunks.empty()) return false;
    return true;
}

std::size_t AssignmentDelta::total_chunks() const {
    std::size_t total = 0;
    for (const auto& chunks : extraChunks) total += chunks.size();
    return total;
}

AssignmentDelta reassign_pending(const Assignment& asg, const std::vector<bool>& responded,
                                 std::span<const double> measuredSpeeds) {
    if (responded.size() != asg.workers() || measuredSpeeds.size() != asg.workers())
        fail(ErrorKind::LengthMismatch, "responded/speed lists must match the assignment's worker count");

    AssignmentDelta delta;
    delta.extraChunks.assign(asg.workers(), {});

    std::vector<std::size_t> responders;
    for (std::size_t w = 0; w < asg.workers(); ++w)
        if (responded[w]) responders.push_back(w);
    std::stable_sort(responders.begin(), responders.end(), [&](std::size_t a, std::size_t b) {
        return measuredSpeeds[a] > measuredSpeeds[b];
    });

    // Responded coverage per chunk, counting only work already delivered.
    std::vector<std::size_t> coverage(asg.chunksPerPartition, 0);
    for (std::size_t w : responders)
        for (std::size_t i = 0; i < asg.intervals[w].len; ++i)
            ++coverage[(asg.intervals[w].begin + i) % asg.chunksPerPartition];

    std::size_t cursor = 0; // round-robin over responders, shared across chunks
    for (std::size_t chunk = 0; chunk < asg.chunksPerPartition; ++chunk) {
        while (coverage[chunk] < asg.m) {
            bool placed = false;
            for (std::size_t step = 0; step < responders.size(); ++step) {
                const std::size_t w = responders[(cursor + step) % responders.size()];
                if (asg.covers(w, chunk)) continue;
                const auto& extra = delta.extraChunks[w];
                if (std::find(extra.begin(), extra.end(), chunk) != extra.end()) continue;
                delta.extraChunks[w].push_back(chunk);
                ++coverage[chunk];
                cursor = (cursor + step + 1) % responders.size();
                placed = true;
                break;
            }
            if (!placed)
                fail(ErrorKind::Undecodable, "chunk " + std::to_string(chunk) + " cannot reach coverage " +
                                                 std::to_string(asg.m) + " with " +
                                                 std::to_string(responders.size()) + " responders");
        }
    }
    return delta;
}

void dump_assignment(std::ostream& out, const Assignment& asg, const ChunkGrid* grid) {
    out << "worker,chunkBegin,len,rows\n";
    for (std::size_t w = 0; w < asg.workers(); ++w) {
        const auto& iv = asg.intervals[w];
        out << w << ',' << iv.begin << ',' << iv.len << ',';
        if (grid) {
            const auto ranges = chunks_to_rows(asg, w, *grid);
            for (std::size_t i = 0; i < ranges.size(); ++i) {
                if (i) out << ';';
                out << '[' << ranges[i].begin << ':' << ranges[i].end << ')';
            }
        }
        out << '\n';
    }
}

} // namespace sscc
