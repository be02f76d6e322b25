#ifndef SSCC_SCHEDULER_HPP
#define SSCC_SCHEDULER_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sscc/matrix.hpp"

namespace sscc {

/// Quantized per-worker speeds u_i. Zero marks a dead or ignored worker.
using SpeedVector = std::vector<std::uint64_t>;

/// Chunks [begin, begin+len) taken modulo the chunk circle size C.
struct CyclicInterval {
    std::size_t begin = 0;
    std::size_t len = 0;

    bool operator==(const CyclicInterval&) const = default;
};

/// Work assignment for one iteration: each worker computes a cyclic interval
/// of chunks out of the C chunks of its own partition. Decodability needs
/// every chunk covered by at least m distinct workers; the assignment
/// produced by the schedulers covers each chunk exactly m times.
struct Assignment {
    std::size_t chunksPerPartition = 0; ///< C
    std::size_t m = 0;                  ///< recovery threshold (k, or a*b)
    std::vector<CyclicInterval> intervals;

    std::size_t workers() const { return intervals.size(); }
    std::size_t total_chunks() const;

    /// Chunk ids assigned to one worker, in cyclic order.
    std::vector<std::size_t> chunks_of(std::size_t worker) const;

    /// Whether a worker's interval covers the chunk.
    bool covers(std::size_t worker, std::size_t chunk) const;

    bool operator==(const Assignment&) const = default;
};

/// Partition-local row spans of one worker's interval: at most two, because a
/// cyclic interval wraps at most once.
std::vector<RowRange> chunks_to_rows(const Assignment& asg, std::size_t worker, const ChunkGrid& grid);

/// Integer speeds for the chunk circle: u_i = round(s_i * cTarget / sum s).
/// Speeds below deadFraction * max(s) count as dead and map to zero.
SpeedVector quantize_speeds(std::span<const double> speeds, std::uint64_t cTarget,
                            double deadFraction = 1e-6);

/// Largest-remainder apportionment: like quantize_speeds but the result sums
/// to exactly `total`, which keeps the chunk grid identical across iterations
/// of one experiment.
SpeedVector apportion_speeds(std::span<const double> speeds, std::uint64_t total,
                             double deadFraction = 1e-6);

/// Algorithm: proportional cyclic chunk assignment for heterogeneous workers.
///   C = sum u_i, totalChunks = m * C.
///   Workers sorted by u descending (ties by index); worker i takes
///   c_i = floor(u_i * remaining / sum of u over not-yet-served workers),
///   capped at C, as the next consecutive cyclic interval.
/// The floor self-corrects (remaining is recomputed), the last live worker
/// absorbs the residue, and every chunk ends up covered exactly m times.
Assignment general_s2c2(const SpeedVector& u, std::size_t m);

/// Homogeneous special case: u_i = 1 for live workers. Every live worker
/// gets exactly m of the C = (live count) chunks.
Assignment basic_s2c2(const std::vector<bool>& alive, std::size_t m);

struct CoverageReport {
    std::vector<std::size_t> perChunkCoverage;
    bool decodable = false;
    std::vector<std::pair<std::size_t, std::size_t>> deficit; ///< (chunk, missing count)
};

CoverageReport verify_coverage(const Assignment& asg);

struct TimeoutPolicy {
    double theta = 0.15;
};

/// Response-time budget for the slow tail: (1 + theta) * mean(firstMTimes).
double deadline(std::span<const double> firstMTimes, const TimeoutPolicy& policy);

/// Extra chunks per worker handed out by reassign_pending.
struct AssignmentDelta {
    std::vector<std::vector<std::size_t>> extraChunks; ///< indexed by worker

    bool empty() const;
    std::size_t total_chunks() const;
};

/// Completes coverage after timeouts: chunks whose responded coverage is
/// below m are dealt to responded workers, fastest first in round-robin,
/// never giving a worker a chunk it already computed. Every worker stores its
/// full partition, so any responder can take any chunk.
AssignmentDelta reassign_pending(const Assignment& asg, const std::vector<bool>& responded,
                                 std::span<const double> measuredSpeeds);

/// Diagnostic dump: worker, chunkBegin, len, and row spans when a grid is given.
void dump_assignment(std::ostream& out, const Assignment& asg, const ChunkGrid* grid = nullptr);

} // namespace sscc

#endif
