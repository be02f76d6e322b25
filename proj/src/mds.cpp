#include "sscc/mds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sscc/error.hpp"

namespace sscc {
namespace {

void check_code_shape(std::size_t n, std::size_t k) {
    if (n == 0 || k == 0) fail(ErrorKind::ZeroDimension, "code parameters must be positive");
    if (n < k)
        fail(ErrorKind::BadShape, "(n, k) = (" + std::to_string(n) + ", " + std::to_string(k) +
                                      ") needs n >= k");
}

void check_distinct(std::span<const double> points) {
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j])
                fail(ErrorKind::DuplicatePoints, "points " + std::to_string(i) + " and " +
                                                     std::to_string(j) + " coincide");
}

} // namespace

std::vector<double> chebyshev_points(std::size_t n) {
    if (n == 0) fail(ErrorKind::ZeroDimension, "point count must be positive");
    // Hand the angles out with a stride coprime to n rather than left to
    // right. Decoding is well conditioned only when the responders' points
    // cover the whole interval, and the subsets that matter in practice are
    // runs of consecutive worker ids (the fastest k under near-equal speeds,
    // or the covering arc of a chunk). The stride spreads any such run
    // across [-1, 1]; a golden-ratio fraction of n keeps the spread even.
    std::size_t stride = 1;
    if (n > 2) {
        const double target = 0.381966011250105 * static_cast<double>(n);
        double best = static_cast<double>(n);
        for (std::size_t s = 1; s < n; ++s) {
            if (std::gcd(s, n) != 1) continue;
            const double d = std::abs(static_cast<double>(s) - target);
            if (d < best) {
                best = d;
                stride = s;
            }
        }
    }
    constexpr double pi = 3.14159265358979323846;
    std::vector<double> points(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t slot = (i * stride) % n;
        points[i] = std::cos((2.0 * static_cast<double>(slot) + 1.0) * pi / (2.0 * static_cast<double>(n)));
    }
    return points;
}

GeneratorMatrix vandermonde_generator(std::size_t n, std::size_t k, std::span<const double> points) {
    check_code_shape(n, k);
    if (points.size() != n)
        fail(ErrorKind::LengthMismatch, "need " + std::to_string(n) + " points, got " +
                                            std::to_string(points.size()));
    check_distinct(points);
    GeneratorMatrix g;
    g.n = n;
    g.k = k;
    g.kind = GeneratorKind::Vandermonde;
    g.points.assign(points.begin(), points.end());
    g.coeffs = DenseMatrix(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        double power = 1.0;
        for (std::size_t j = 0; j < k; ++j) {
            g.coeffs.at(i, j) = power;
            power *= points[i];
        }
    }
    return g;
}

GeneratorMatrix vandermonde_generator(std::size_t n, std::size_t k) {
    const auto points = chebyshev_points(n);
    return vandermonde_generator(n, k, points);
}

GeneratorMatrix chebyshev_basis_generator(std::size_t n, std::size_t k) {
    check_code_shape(n, k);
    const auto points = chebyshev_points(n);
    GeneratorMatrix g;
    g.n = n;
    g.k = k;
    g.kind = GeneratorKind::Custom;
    g.points = points;
    g.coeffs = DenseMatrix(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        // T_0 = 1, T_1 = p, T_j = 2 p T_{j-1} - T_{j-2}
        double prev = 1.0;
        double cur = points[i];
        g.coeffs.at(i, 0) = prev;
        if (k > 1) g.coeffs.at(i, 1) = cur;
        for (std::size_t j = 2; j < k; ++j) {
            const double next = 2.0 * points[i] * cur - prev;
            g.coeffs.at(i, j) = next;
            prev = cur;
            cur = next;
        }
    }
    return g;
}

GeneratorMatrix custom_generator(DenseMatrix coeffs) {
    check_code_shape(coeffs.rows(), coeffs.cols());
    GeneratorMatrix g;
    g.n = coeffs.rows();
    g.k = coeffs.cols();
    g.kind = GeneratorKind::Custom;
    g.coeffs = std::move(coeffs);
    return g;
}

std::vector<EncodedPartition> mds_encode(std::span<const DenseMatrix> blocks, const GeneratorMatrix& g) {
    if (blocks.size() != g.k)
        fail(ErrorKind::DimensionMismatch, "generator expects " + std::to_string(g.k) + " blocks, got " +
                                               std::to_string(blocks.size()));
    const std::size_t rows = blocks[0].rows();
    const std::size_t cols = blocks[0].cols();
    for (const auto& b : blocks)
        if (b.rows() != rows || b.cols() != cols)
            fail(ErrorKind::BadShape, "source blocks must share one shape");

    std::vector<EncodedPartition> parts;
    parts.reserve(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        EncodedPartition part;
        part.workerId = i;
        part.data = DenseMatrix(rows, cols);
        auto& out = part.data.data();
        for (std::size_t j = 0; j < g.k; ++j) {
            const double coeff = g.coeffs.at(i, j);
            if (coeff == 0.0) continue;
            const auto& src = blocks[j].data();
            for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] += coeff * src[idx];
        }
        parts.push_back(std::move(part));
    }
    return parts;
}

std::vector<ChunkResponse> worker_matvec(const EncodedPartition& part, const DenseVector& x,
                                         std::span<const std::size_t> chunks, const ChunkGrid& grid) {
    if (part.data.rows() != grid.chunksPerPartition * grid.rowsPerChunk)
        fail(ErrorKind::BadShape, "partition has " + std::to_string(part.data.rows()) +
                                      " rows, grid expects " +
                                      std::to_string(grid.chunksPerPartition * grid.rowsPerChunk));
    std::vector<ChunkResponse> responses;
    responses.reserve(chunks.size());
    for (std::size_t chunk : chunks) {
        ChunkResponse r;
        r.workerId = part.workerId;
        r.chunk = chunk;
        r.values = matvec_range(part.data, x, chunk_rows(grid, chunk));
        responses.push_back(std::move(r));
    }
    return responses;
}

MdsDecoder::MdsDecoder(GeneratorMatrix g) : g_(std::move(g)) {}

std::vector<DenseVector> MdsDecoder::decode_chunk(std::span<const ChunkResponse> responses) const {
    // First k distinct workers in arrival order, then sorted so the solve is
    // independent of who happened to arrive first.
    std::vector<std::size_t> picked;
    std::vector<const ChunkResponse*> byWorker(g_.n, nullptr);
    for (const auto& r : responses) {
        if (picked.size() == g_.k) break;
        if (r.workerId >= g_.n)
            fail(ErrorKind::ChunkOutOfRange, "worker " + std::to_string(r.workerId) + " outside code of size " +
                                                 std::to_string(g_.n));
        if (byWorker[r.workerId]) continue;
        byWorker[r.workerId] = &r;
        picked.push_back(r.workerId);
    }
    if (picked.size() < g_.k)
        fail(ErrorKind::InsufficientResponses, "have " + std::to_string(picked.size()) +
                                                   " distinct responses, need " + std::to_string(g_.k));
    std::sort(picked.begin(), picked.end());

    const std::size_t width = byWorker[picked[0]]->values.size();
    for (std::size_t id : picked)
        if (byWorker[id]->values.size() != width)
            fail(ErrorKind::LengthMismatch, "responses disagree on chunk width");

    auto solverIt = cache_.find(picked);
    if (solverIt == cache_.end()) {
        DenseMatrix sub(g_.k, g_.k);
        for (std::size_t r = 0; r < g_.k; ++r)
            for (std::size_t c = 0; c < g_.k; ++c) sub.at(r, c) = g_.coeffs.at(picked[r], c);
        solverIt = cache_.emplace(picked, std::make_shared<LuSolver>(sub)).first;
    }
    const LuSolver& solver = *solverIt->second;

    // Stack responses as columns-of-right-hand-sides: one solve per local row.
    DenseMatrix rhs(g_.k, width);
    for (std::size_t r = 0; r < g_.k; ++r) {
        const auto& values = byWorker[picked[r]]->values;
        for (std::size_t c = 0; c < width; ++c) rhs.at(r, c) = values[c];
    }
    const DenseMatrix solved = solver.solve_columns(rhs);

    std::vector<DenseVector> blocks(g_.k, DenseVector(width));
    for (std::size_t j = 0; j < g_.k; ++j)
        for (std::size_t c = 0; c < width; ++c) blocks[j][c] = solved.at(j, c);
    return blocks;
}

std::vector<DenseVector> mds_decode_chunk(const GeneratorMatrix& g, std::span<const ChunkResponse> responses) {
    return MdsDecoder(g).decode_chunk(responses);
}

DenseVector assemble(std::span<const std::vector<DenseVector>> decodedChunks, const PartitionPlan& plan,
                     const ChunkGrid& grid) {
    if (decodedChunks.size() != grid.chunksPerPartition)
        fail(ErrorKind::MissingChunk, "have " + std::to_string(decodedChunks.size()) + " chunks, grid has " +
                                          std::to_string(grid.chunksPerPartition));
    DenseVector y(plan.originalRows, 0.0);
    for (std::size_t c = 0; c < grid.chunksPerPartition; ++c) {
        const auto& blocks = decodedChunks[c];
        if (blocks.size() != plan.k)
            fail(ErrorKind::MissingChunk, "chunk " + std::to_string(c) + " decoded into " +
                                              std::to_string(blocks.size()) + " blocks, expected " +
                                              std::to_string(plan.k));
        for (std::size_t j = 0; j < plan.k; ++j) {
            if (blocks[j].size() != grid.rowsPerChunk)
                fail(ErrorKind::LengthMismatch, "chunk " + std::to_string(c) + " block " + std::to_string(j) +
                                                    " has " + std::to_string(blocks[j].size()) + " rows");
            const std::size_t base = j * plan.rowsPerPartition + c * grid.rowsPerChunk;
            for (std::size_t r = 0; r < grid.rowsPerChunk; ++r) {
                const std::size_t global = base + r;
                if (global < plan.originalRows) y[global] = blocks[j][r];
            }
        }
    }
    return y;
}

} // namespace sscc
