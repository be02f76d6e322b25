#ifndef SSCC_POLY_HPP
#define SSCC_POLY_HPP

#include <map>
#include <memory>
#include <span>

#include "sscc/linalg.hpp"
#include "sscc/matrix.hpp"

namespace sscc {

/// Polynomial code for bilinear computations: A split into a row-blocks with
/// exponents 0..a-1, B into b column-blocks with exponents 0, a, 2a, ...
/// Each worker evaluates both at its own point, multiplies locally, and any
/// a*b distinct worker results per row recover all block products A_j B_l
/// (coefficient index j + a*l) by interpolation.
struct PolyScheme {
    std::size_t n = 0;
    std::size_t a = 0;
    std::size_t b = 0;
    std::vector<double> points;

    std::size_t recovery_threshold() const { return a * b; }

    /// Points 0, 1, ..., n-1. Fine up to a*b of about 6; beyond that the
    /// interpolation matrix is too ill conditioned to trust.
    static PolyScheme integer_points(std::size_t n, std::size_t a, std::size_t b);

    /// Chebyshev-spaced points, for larger recovery thresholds.
    static PolyScheme chebyshev(std::size_t n, std::size_t a, std::size_t b);
};

/// Worker i's encoded operands, evaluated at points[i].
struct PolyEncodedPair {
    std::size_t workerId = 0;
    DenseMatrix leftTilde;  ///< sum_j A_j p^j
    DenseMatrix rightTilde; ///< sum_l B_l p^(a l)
};

std::vector<PolyEncodedPair> poly_encode(std::span<const DenseMatrix> aBlocks,
                                         std::span<const DenseMatrix> bBlocks, const PolyScheme& scheme);

/// One row of one worker's local product.
struct RowEvaluation {
    std::size_t workerId = 0;
    std::size_t rowIndex = 0;
    DenseVector values;
};

/// Product mode computes rows of leftTilde * rightTilde. Hessian mode wires
/// the diagonal in: rows of leftTilde * diag(x) * rightTilde, for pairs that
/// encode A-transpose on the left and A on the right.
struct PolyComputeMode {
    static PolyComputeMode product() { return {}; }
    static PolyComputeMode hessian(const DenseVector& x) { return {&x}; }

    const DenseVector* diag = nullptr;
};

std::vector<RowEvaluation> poly_worker_compute(const PolyEncodedPair& pair, RowRange rows,
                                               const PolyComputeMode& mode = {});

/// Interpolates coefficient blocks from per-row evaluations, caching the LU
/// factorization of each worker subset.
class PolyDecoder {
public:
    explicit PolyDecoder(PolyScheme scheme);

    const PolyScheme& scheme() const { return scheme_; }

    /// All evaluations must carry the same rowIndex. Picks the first a*b
    /// distinct workers in the order given; returns the a*b coefficient rows,
    /// index j + a*l holding this row of A_j B_l.
    std::vector<DenseVector> decode_row(std::span<const RowEvaluation> evals) const;

    std::size_t cache_size() const { return cache_.size(); }
    void clear_cache() { cache_.clear(); }

private:
    PolyScheme scheme_;
    mutable std::map<std::vector<std::size_t>, std::shared_ptr<LuSolver>> cache_;
};

/// Decodes every row present in `evals` (grouped by rowIndex).
std::map<std::size_t, std::vector<DenseVector>> poly_decode_rows(const PolyScheme& scheme,
                                                                 std::span<const RowEvaluation> evals);

/// Stacks decoded per-row coefficient slices back into the a*b block matrices.
/// Rows 0..rowCount-1 must all be present for every coefficient.
std::vector<DenseMatrix> poly_blocks_from_rows(const std::map<std::size_t, std::vector<DenseVector>>& rows,
                                               const PolyScheme& scheme, std::size_t rowCount);

/// Tiles the a*a Hessian blocks (index j + a*l at tile row j, tile column l)
/// into the full d x d matrix A^T diag(x) A.
DenseMatrix hessian_assemble(std::span<const DenseMatrix> blocks, std::size_t a);

} // namespace sscc

#endif
