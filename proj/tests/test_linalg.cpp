#include <doctest.h>

#include <cmath>

#include "sscc/error.hpp"
#include "sscc/linalg.hpp"
#include "sscc/rng.hpp"

using namespace sscc;

TEST_CASE("LU solves a hand-checked 3x3 system") {
    const auto a = DenseMatrix::from_rows({{2, 1, -1}, {-3, -1, 2}, {-2, 1, 2}});
    const LuSolver lu(a);
    const auto x = lu.solve(DenseVector{8, -11, -3});
    CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(x[2] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("LU detects singular input") {
    const auto a = DenseMatrix::from_rows({{1, 2}, {2, 4}});
    CHECK_THROWS_AS(LuSolver{a}, Error);
}

TEST_CASE("LU requires a pivot even when the first entry is zero") {
    const auto a = DenseMatrix::from_rows({{0, 1}, {1, 0}});
    const LuSolver lu(a);
    const auto x = lu.solve(DenseVector{3, 5});
    CHECK(x[0] == doctest::Approx(5.0));
    CHECK(x[1] == doctest::Approx(3.0));
}

TEST_CASE("refined solve stays accurate on an ill-conditioned Vandermonde block") {
    // Monomial Vandermonde at points 1..9: condition number around 1e11, so a
    // raw LU solve loses ten digits. Iterative refinement with long-double
    // residuals floors out near cond * 1e-19, a few times 1e-8 here.
    const std::size_t n = 9;
    DenseMatrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double p = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            v.at(i, j) = p;
            p *= static_cast<double>(i + 1);
        }
    }
    Rng rng(5);
    DenseVector want(n);
    for (double& w : want) w = rng.uniform(-1.0, 1.0);
    DenseVector b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b[i] += v.at(i, j) * want[j];

    const auto got = LuSolver(v).solve(b);
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(got[j] - want[j]));
    CHECK(err < 1e-6);
}

TEST_CASE("solve_columns matches per-column solves") {
    const auto a = DenseMatrix::from_rows({{4, 1}, {1, 3}});
    const auto b = DenseMatrix::from_rows({{1, 0}, {0, 1}});
    const LuSolver lu(a);
    const auto inv = lu.solve_columns(b);
    const auto c0 = lu.solve(DenseVector{1, 0});
    const auto c1 = lu.solve(DenseVector{0, 1});
    CHECK(inv.at(0, 0) == c0[0]);
    CHECK(inv.at(1, 0) == c0[1]);
    CHECK(inv.at(0, 1) == c1[0]);
    CHECK(inv.at(1, 1) == c1[1]);
}

TEST_CASE("solve rejects wrong-size right-hand sides") {
    const auto a = DenseMatrix::from_rows({{1, 0}, {0, 1}});
    CHECK_THROWS_AS(LuSolver(a).solve(DenseVector{1, 2, 3}), Error);
}
