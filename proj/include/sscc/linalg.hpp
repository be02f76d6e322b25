#ifndef SSCC_LINALG_HPP
#define SSCC_LINALG_HPP

#include <span>

#include "sscc/matrix.hpp"

namespace sscc {

/// Dense LU factorization with partial pivoting for the small square systems
/// that show up in decoding (k x k coefficient matrices).
///
/// solve() runs two steps of iterative refinement with the residual
/// accumulated in long double. That is cheap at these sizes and buys several
/// digits when the coefficient matrix is a less friendly generator submatrix.
class LuSolver {
public:
    /// Factors a square matrix. Throws Error(SingularSubmatrix) when a pivot
    /// collapses relative to the largest entry of the input.
    explicit LuSolver(const DenseMatrix& a);

    std::size_t size() const { return n_; }

    DenseVector solve(std::span<const double> b) const;

    /// Solves for several right-hand sides given as columns of B.
    DenseMatrix solve_columns(const DenseMatrix& b) const;

private:
    DenseVector solve_once(std::span<const double> b) const;

    std::size_t n_ = 0;
    std::vector<double> lu_;
    std::vector<std::size_t> perm_;
    DenseMatrix original_;
};

/// One-shot convenience wrapper over LuSolver.
DenseVector solve_linear(const DenseMatrix& a, const DenseVector& b);

} // namespace sscc

#endif
