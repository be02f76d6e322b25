#include "sscc/poly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sscc/error.hpp"
#include "sscc/mds.hpp"

namespace sscc {
namespace {

void check_scheme(const PolyScheme& scheme) {
    if (scheme.a == 0 || scheme.b == 0 || scheme.n == 0)
        fail(ErrorKind::ZeroDimension, "scheme parameters must be positive");
    if (scheme.n < scheme.recovery_threshold())
        fail(ErrorKind::TooFewWorkers, "n=" + std::to_string(scheme.n) + " workers cannot reach threshold " +
                                           std::to_string(scheme.recovery_threshold()));
    if (scheme.points.size() != scheme.n)
        fail(ErrorKind::LengthMismatch, "scheme needs one point per worker");
    for (std::size_t i = 0; i < scheme.points.size(); ++i)
        for (std::size_t j = i + 1; j < scheme.points.size(); ++j)
            if (scheme.points[i] == scheme.points[j])
                fail(ErrorKind::DuplicatePoints, "points " + std::to_string(i) + " and " + std::to_string(j) +
                                                     " coincide");
}

} // namespace

PolyScheme PolyScheme::integer_points(std::size_t n, std::size_t a, std::size_t b) {
    PolyScheme scheme{n, a, b, {}};
    scheme.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) scheme.points[i] = static_cast<double>(i);
    check_scheme(scheme);
    return scheme;
}

PolyScheme PolyScheme::chebyshev(std::size_t n, std::size_t a, std::size_t b) {
    PolyScheme scheme{n, a, b, chebyshev_points(n)};
    check_scheme(scheme);
    return scheme;
}

std::vector<PolyEncodedPair> poly_encode(std::span<const DenseMatrix> aBlocks,
                                         std::span<const DenseMatrix> bBlocks, const PolyScheme& scheme) {
    check_scheme(scheme);
    if (aBlocks.size() != scheme.a || bBlocks.size() != scheme.b)
        fail(ErrorKind::BadShape, "expected " + std::to_string(scheme.a) + " left and " +
                                      std::to_string(scheme.b) + " right blocks");
    const std::size_t leftRows = aBlocks[0].rows();
    const std::size_t inner = aBlocks[0].cols();
    const std::size_t rightCols = bBlocks[0].cols();
    for (const auto& blk : aBlocks)
        if (blk.rows() != leftRows || blk.cols() != inner)
            fail(ErrorKind::BadShape, "left blocks must share one shape");
    for (const auto& blk : bBlocks)
        if (blk.rows() != inner || blk.cols() != rightCols)
            fail(ErrorKind::BadShape, "right blocks must be " + std::to_string(inner) + " x " +
                                          std::to_string(rightCols));

    std::vector<PolyEncodedPair> pairs;
    pairs.reserve(scheme.n);
    for (std::size_t i = 0; i < scheme.n; ++i) {
        const double p = scheme.points[i];
        PolyEncodedPair pair;
        pair.workerId = i;
        pair.leftTilde = DenseMatrix(leftRows, inner);
        double power = 1.0;
        for (std::size_t j = 0; j < scheme.a; ++j) {
            const auto& src = aBlocks[j].data();
            auto& dst = pair.leftTilde.data();
            for (std::size_t idx = 0; idx < dst.size(); ++idx) dst[idx] += power * src[idx];
            power *= p;
        }
        pair.rightTilde = DenseMatrix(inner, rightCols);
        const double stride = std::pow(p, static_cast<double>(scheme.a));
        power = 1.0;
        for (std::size_t l = 0; l < scheme.b; ++l) {
            const auto& src = bBlocks[l].data();
            auto& dst = pair.rightTilde.data();
            for (std::size_t idx = 0; idx < dst.size(); ++idx) dst[idx] += power * src[idx];
            power *= stride;
        }
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

std::vector<RowEvaluation> poly_worker_compute(const PolyEncodedPair& pair, RowRange rows,
                                               const PolyComputeMode& mode) {
    const DenseMatrix& left = pair.leftTilde;
    const DenseMatrix& right = pair.rightTilde;
    if (left.cols() != right.rows())
        fail(ErrorKind::DimensionMismatch, "left is " + std::to_string(left.rows()) + "x" +
                                               std::to_string(left.cols()) + ", right is " +
                                               std::to_string(right.rows()) + "x" + std::to_string(right.cols()));
    if (mode.diag && mode.diag->size() != left.cols())
        fail(ErrorKind::DimensionMismatch, "diagonal has " + std::to_string(mode.diag->size()) +
                                               " entries, inner dimension is " + std::to_string(left.cols()));
    if (rows.begin > rows.end || rows.end > left.rows())
        fail(ErrorKind::BadShape, "row range outside the local product");

    std::vector<RowEvaluation> evals;
    evals.reserve(rows.size());
    for (std::size_t r = rows.begin; r < rows.end; ++r) {
        RowEvaluation eval;
        eval.workerId = pair.workerId;
        eval.rowIndex = r;
        eval.values.assign(right.cols(), 0.0);
        const auto leftRow = left.row(r);
        for (std::size_t inner = 0; inner < left.cols(); ++inner) {
            const double scale = mode.diag ? leftRow[inner] * (*mode.diag)[inner] : leftRow[inner];
            if (scale == 0.0) continue;
            const auto rightRow = right.row(inner);
            for (std::size_t c = 0; c < right.cols(); ++c) eval.values[c] += scale * rightRow[c];
        }
        evals.push_back(std::move(eval));
    }
    return evals;
}

PolyDecoder::PolyDecoder(PolyScheme scheme) : scheme_(std::move(scheme)) { check_scheme(scheme_); }

std::vector<DenseVector> PolyDecoder::decode_row(std::span<const RowEvaluation> evals) const {
    const std::size_t threshold = scheme_.recovery_threshold();

    std::vector<std::size_t> picked;
    std::vector<const RowEvaluation*> byWorker(scheme_.n, nullptr);
    for (const auto& eval : evals) {
        if (picked.size() == threshold) break;
        if (eval.workerId >= scheme_.n)
            fail(ErrorKind::ChunkOutOfRange, "worker " + std::to_string(eval.workerId) +
                                                 " outside scheme of size " + std::to_string(scheme_.n));
        if (eval.rowIndex != evals[0].rowIndex)
            fail(ErrorKind::BadShape, "decode_row got evaluations for different rows");
        if (byWorker[eval.workerId]) continue;
        byWorker[eval.workerId] = &eval;
        picked.push_back(eval.workerId);
    }
    if (picked.size() < threshold)
        fail(ErrorKind::InsufficientResponses, "have " + std::to_string(picked.size()) +
                                                   " distinct evaluations, need " + std::to_string(threshold));
    std::sort(picked.begin(), picked.end());

    const std::size_t width = byWorker[picked[0]]->values.size();
    for (std::size_t id : picked)
        if (byWorker[id]->values.size() != width)
            fail(ErrorKind::LengthMismatch, "evaluations disagree on width");

    auto solverIt = cache_.find(picked);
    if (solverIt == cache_.end()) {
        DenseMatrix vand(threshold, threshold);
        for (std::size_t r = 0; r < threshold; ++r) {
            double power = 1.0;
            for (std::size_t c = 0; c < threshold; ++c) {
                vand.at(r, c) = power;
                power *= scheme_.points[picked[r]];
            }
        }
        solverIt = cache_.emplace(picked, std::make_shared<LuSolver>(vand)).first;
    }

    DenseMatrix rhs(threshold, width);
    for (std::size_t r = 0; r < threshold; ++r) {
        const auto& values = byWorker[picked[r]]->values;
        for (std::size_t c = 0; c < width; ++c) rhs.at(r, c) = values[c];
    }
    const DenseMatrix coeffs = solverIt->second->solve_columns(rhs);

    std::vector<DenseVector> blocks(threshold, DenseVector(width));
    for (std::size_t q = 0; q < threshold; ++q)
        for (std::size_t c = 0; c < width; ++c) blocks[q][c] = coeffs.at(q, c);
    return blocks;
}

std::map<std::size_t, std::vector<DenseVector>> poly_decode_rows(const PolyScheme& scheme,
                                                                 std::span<const RowEvaluation> evals) {
    PolyDecoder decoder(scheme);
    std::map<std::size_t, std::vector<RowEvaluation>> byRow;
    for (const auto& eval : evals) byRow[eval.rowIndex].push_back(eval);
    std::map<std::size_t, std::vector<DenseVector>> decoded;
    for (const auto& [row, rowEvals] : byRow) decoded[row] = decoder.decode_row(rowEvals);
    return decoded;
}

std::vector<DenseMatrix> poly_blocks_from_rows(const std::map<std::size_t, std::vector<DenseVector>>& rows,
                                               const PolyScheme& scheme, std::size_t rowCount) {
    const std::size_t threshold = scheme.recovery_threshold();
    if (rowCount == 0) fail(ErrorKind::ZeroDimension, "rowCount must be positive");
    auto first = rows.find(0);
    if (first == rows.end()) fail(ErrorKind::MissingBlock, "row 0 was never decoded");
    const std::size_t width = first->second.at(0).size();

    std::vector<DenseMatrix> blocks(threshold, DenseMatrix(rowCount, width));
    for (std::size_t r = 0; r < rowCount; ++r) {
        const auto it = rows.find(r);
        if (it == rows.end()) fail(ErrorKind::MissingBlock, "row " + std::to_string(r) + " was never decoded");
        if (it->second.size() != threshold)
            fail(ErrorKind::MissingBlock, "row " + std::to_string(r) + " has " +
                                              std::to_string(it->second.size()) + " coefficients");
        for (std::size_t q = 0; q < threshold; ++q) {
            if (it->second[q].size() != width)
                fail(ErrorKind::LengthMismatch, "row " + std::to_string(r) + " width changed");
            for (std::size_t c = 0; c < width; ++c) blocks[q].at(r, c) = it->second[q][c];
        }
    }
    return blocks;
}

DenseMatrix hessian_assemble(std::span<const DenseMatrix> blocks, std::size_t a) {
    if (a == 0) fail(ErrorKind::ZeroDimension, "a must be positive");
    if (blocks.size() != a * a)
        fail(ErrorKind::MissingBlock, "need " + std::to_string(a * a) + " blocks, have " +
                                          std::to_string(blocks.size()));
    const std::size_t blockDim = blocks[0].rows();
    if (blockDim == 0) fail(ErrorKind::MissingBlock, "block 0 is empty");
    for (const auto& blk : blocks)
        if (blk.rows() != blockDim || blk.cols() != blockDim)
            fail(ErrorKind::MissingBlock, "blocks must all be " + std::to_string(blockDim) + " square");

    DenseMatrix h(a * blockDim, a * blockDim);
    for (std::size_t l = 0; l < a; ++l)
        for (std::size_t j = 0; j < a; ++j) {
            const DenseMatrix& blk = blocks[j + a * l];
            for (std::size_t r = 0; r < blockDim; ++r)
                for (std::size_t c = 0; c < blockDim; ++c)
                    h.at(j * blockDim + r, l * blockDim + c) = blk.at(r, c);
        }
    return h;
}

} // namespace sscc
