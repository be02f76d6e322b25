#include "sscc/linalg.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "sscc/error.hpp"

namespace sscc {

LuSolver::LuSolver(const DenseMatrix& a) : n_(a.rows()), original_(a) {
    if (a.rows() != a.cols())
        fail(ErrorKind::BadShape, "LU needs a square matrix, got " + std::to_string(a.rows()) + "x" +
                                      std::to_string(a.cols()));
    lu_ = a.data();
    perm_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;

    double maxAbs = 0.0;
    for (double v : lu_) maxAbs = std::max(maxAbs, std::abs(v));
    const double tiny = maxAbs * 1e-13;

    for (std::size_t col = 0; col < n_; ++col) {
        std::size_t pivot = col;
        double best = std::abs(lu_[col * n_ + col]);
        for (std::size_t r = col + 1; r < n_; ++r) {
            const double cand = std::abs(lu_[r * n_ + col]);
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best <= tiny)
            fail(ErrorKind::SingularSubmatrix, "pivot " + std::to_string(col) + " collapsed (|p| = " +
                                                   std::to_string(best) + ")");
        if (pivot != col) {
            for (std::size_t c = 0; c < n_; ++c) std::swap(lu_[pivot * n_ + c], lu_[col * n_ + c]);
            std::swap(perm_[pivot], perm_[col]);
        }
        const double inv = 1.0 / lu_[col * n_ + col];
        for (std::size_t r = col + 1; r < n_; ++r) {
            const double factor = lu_[r * n_ + col] * inv;
            lu_[r * n_ + col] = factor;
            for (std::size_t c = col + 1; c < n_; ++c) lu_[r * n_ + c] -= factor * lu_[col * n_ + c];
        }
    }
}

DenseVector LuSolver::solve_once(std::span<const double> b) const {
    DenseVector x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_[i * n_ + j] * x[j];
    for (std::size_t i = n_; i-- > 0;) {
        for (std::size_t j = i + 1; j < n_; ++j) x[i] -= lu_[i * n_ + j] * x[j];
        x[i] /= lu_[i * n_ + i];
    }
    return x;
}

DenseVector LuSolver::solve(std::span<const double> b) const {
    if (b.size() != n_)
        fail(ErrorKind::DimensionMismatch, "solve: rhs has " + std::to_string(b.size()) +
                                               " entries, system is " + std::to_string(n_));
    DenseVector x = solve_once(b);
    DenseVector residual(n_);
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t r = 0; r < n_; ++r) {
            long double acc = b[r];
            const auto row = original_.row(r);
            for (std::size_t c = 0; c < n_; ++c)
                acc -= static_cast<long double>(row[c]) * static_cast<long double>(x[c]);
            residual[r] = static_cast<double>(acc);
        }
        const DenseVector correction = solve_once(residual);
        for (std::size_t i = 0; i < n_; ++i) x[i] += correction[i];
    }
    return x;
}

DenseMatrix LuSolver::solve_columns(const DenseMatrix& b) const {
    if (b.rows() != n_)
        fail(ErrorKind::DimensionMismatch, "solve_columns: B has " + std::to_string(b.rows()) +
                                               " rows, system is " + std::to_string(n_));
    DenseMatrix x(n_, b.cols());
    DenseVector rhs(n_);
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t r = 0; r < n_; ++r) rhs[r] = b.at(r, c);
        const DenseVector col = solve(rhs);
        for (std::size_t r = 0; r < n_; ++r) x.at(r, c) = col[r];
    }
    return x;
}

DenseVector solve_linear(const DenseMatrix& a, const DenseVector& b) {
    return LuSolver(a).solve(b);
}

} // namespace sscc
