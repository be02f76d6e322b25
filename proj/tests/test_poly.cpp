#include <doctest.h>

#include <cmath>
#include <numeric>

#include "sscc/apps.hpp"
#include "sscc/error.hpp"
#include "sscc/poly.hpp"
#include "sscc/rng.hpp"

using namespace sscc;

namespace {

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    DenseMatrix a(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) a.at(r, c) = rng.uniform(-2.0, 2.0);
    return a;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    double m = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a.at(r, c) - b.at(r, c)));
    return m;
}

/// Direct dense A^T diag(x) A, the oracle for every hessian check.
DenseMatrix hessian_direct(const DenseMatrix& a, const DenseVector& x) {
    DenseMatrix h(a.cols(), a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < a.rows(); ++r) s += a.at(r, i) * x[r] * a.at(r, j);
            h.at(i, j) = s;
        }
    return h;
}

} // namespace

TEST_CASE("worker operands are the expected polynomial evaluations") {
    // a = b = 2, integer points. Worker 2 stores A0 + 2 A1 and B0 + 4 B1.
    const auto scheme = PolyScheme::integer_points(5, 2, 2);
    const auto a0 = DenseMatrix::from_rows({{1, 0}});
    const auto a1 = DenseMatrix::from_rows({{0, 1}});
    const auto b0 = DenseMatrix::from_rows({{1}, {0}});
    const auto b1 = DenseMatrix::from_rows({{0}, {1}});
    const auto pairs = poly_encode(std::vector<DenseMatrix>{a0, a1}, std::vector<DenseMatrix>{b0, b1}, scheme);

    CHECK(pairs[2].leftTilde == DenseMatrix::from_rows({{1, 2}}));
    CHECK(pairs[2].rightTilde == DenseMatrix::from_rows({{1}, {4}}));
    // worker 0 evaluates at 0, so it stores the first blocks uncoded
    CHECK(pairs[0].leftTilde == a0);
    CHECK(pairs[0].rightTilde == b0);
}

TEST_CASE("a=b=1 stores everything uncoded with threshold one") {
    const auto scheme = PolyScheme::integer_points(3, 1, 1);
    CHECK(scheme.recovery_threshold() == 1);
    const auto a = random_matrix(2, 2, 1);
    const auto b = random_matrix(2, 2, 2);
    const auto pairs = poly_encode(std::vector<DenseMatrix>{a}, std::vector<DenseMatrix>{b}, scheme);
    for (const auto& p : pairs) {
        CHECK(p.leftTilde == a);
        CHECK(p.rightTilde == b);
    }
}

TEST_CASE("scalar block products trace the cubic through every worker") {
    // (1 + 2p)(3 + 4p^2) = 3 + 6p + 4p^2 + 8p^3
    const auto scheme = PolyScheme::integer_points(4, 2, 2);
    const auto pairs = poly_encode(
        std::vector<DenseMatrix>{DenseMatrix::from_rows({{1}}), DenseMatrix::from_rows({{2}})},
        std::vector<DenseMatrix>{DenseMatrix::from_rows({{3}}), DenseMatrix::from_rows({{4}})}, scheme);
    for (std::size_t i = 0; i < 4; ++i) {
        const auto rows = poly_worker_compute(pairs[i], {0, 1});
        REQUIRE(rows.size() == 1);
        const double p = static_cast<double>(i);
        CHECK(rows[0].values[0] == doctest::Approx(3 + 6 * p + 4 * p * p + 8 * p * p * p).epsilon(1e-12));
    }
}

TEST_CASE("empty row range computes nothing") {
    const auto scheme = PolyScheme::integer_points(4, 2, 2);
    const auto pairs = poly_encode(
        std::vector<DenseMatrix>{random_matrix(2, 2, 3), random_matrix(2, 2, 4)},
        std::vector<DenseMatrix>{random_matrix(2, 2, 5), random_matrix(2, 2, 6)}, scheme);
    CHECK(poly_worker_compute(pairs[0], {1, 1}).empty());
}

TEST_CASE("hessian mode with all-ones diagonal equals plain product mode") {
    const auto scheme = PolyScheme::integer_points(5, 2, 2);
    const auto a = random_matrix(6, 4, 7);
    const auto at = a.transposed();
    const auto pairs = poly_encode(split_rows(at, 2), split_cols(a, 2), scheme);
    const DenseVector ones(6, 1.0);
    for (const auto& p : pairs) {
        const auto viaProduct = poly_worker_compute(p, {0, 2}, PolyComputeMode::product());
        const auto viaHessian = poly_worker_compute(p, {0, 2}, PolyComputeMode::hessian(ones));
        REQUIRE(viaProduct.size() == viaHessian.size());
        for (std::size_t r = 0; r < viaProduct.size(); ++r) {
            for (std::size_t c = 0; c < viaProduct[r].values.size(); ++c)
                CHECK(viaHessian[r].values[c] ==
                      doctest::Approx(viaProduct[r].values[c]).epsilon(1e-12));
        }
    }
}

TEST_CASE("cubic samples interpolate back to their coefficients") {
    // p(i) = 3 + 6i + 4i^2 + 8i^3 at i = 0..3 gives 3, 21, 95, 273; the
    // decoder must hand back the four coefficients in block order.
    const auto scheme = PolyScheme::integer_points(4, 2, 2);
    const PolyDecoder dec(scheme);
    std::vector<RowEvaluation> evals;
    const double samples[] = {3, 21, 95, 273};
    for (std::size_t i = 0; i < 4; ++i) evals.push_back({i, 0, {samples[i]}});
    const auto coeffs = dec.decode_row(evals);
    REQUIRE(coeffs.size() == 4);
    CHECK(coeffs[0][0] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(coeffs[1][0] == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(coeffs[2][0] == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(coeffs[3][0] == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("threshold-one decode returns the evaluation itself") {
    const auto scheme = PolyScheme::integer_points(2, 1, 1);
    const PolyDecoder dec(scheme);
    const std::vector<RowEvaluation> evals{{1, 0, {42.0}}};
    const auto coeffs = dec.decode_row(evals);
    REQUIRE(coeffs.size() == 1);
    CHECK(coeffs[0][0] == 42.0);
}

TEST_CASE("duplicate workers cannot meet the response threshold") {
    const auto scheme = PolyScheme::integer_points(4, 2, 2);
    const PolyDecoder dec(scheme);
    std::vector<RowEvaluation> evals;
    for (std::size_t i = 0; i < 4; ++i) evals.push_back({i % 2, 0, {1.0}});
    CHECK_THROWS_AS(dec.decode_row(evals), Error);
}

TEST_CASE("hessian_job with a=1 is a direct normal-matrix build") {
    const auto a = DenseMatrix::from_rows({{1, 2}, {3, 4}});
    const auto scheme = PolyScheme::integer_points(1, 1, 1);
    const auto h = hessian_job(a, {1.0, 1.0}, scheme);
    CHECK(h == DenseMatrix::from_rows({{10, 14}, {14, 20}}));
}

TEST_CASE("zero diagonal zeroes the hessian") {
    const auto a = random_matrix(4, 2, 9);
    const auto scheme = PolyScheme::integer_points(4, 2, 2);
    const auto h = hessian_job(a, DenseVector(4, 0.0), scheme);
    for (double v : h.data()) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("any nine workers recover the 3x3-split hessian") {
    // Degree a*b-1 = 8 is past what integer evaluation points can carry, so
    // this split runs on the Chebyshev scheme.
    const auto a = random_matrix(6, 6, 11);
    const auto x = make_positive_vector(6, 12);
    const auto want = hessian_direct(a, x);
    const auto scheme = PolyScheme::chebyshev(12, 3, 3);

    const auto at = a.transposed();
    const auto pairs = poly_encode(split_rows(at, 3), split_cols(a, 3), scheme);
    const std::size_t productRows = 2;

    // a few spread-out 9-subsets; the full enumeration lives in the acceptance suite
    const std::vector<std::vector<std::size_t>> picks = {
        {0, 1, 2, 3, 4, 5, 6, 7, 8},
        {3, 4, 5, 6, 7, 8, 9, 10, 11},
        {0, 2, 4, 5, 6, 8, 9, 10, 11},
    };
    for (const auto& pick : picks) {
        std::vector<RowEvaluation> evals;
        for (std::size_t w : pick)
            for (auto& e : poly_worker_compute(pairs[w], {0, productRows}, PolyComputeMode::hessian(x)))
                evals.push_back(std::move(e));
        const auto rows = poly_decode_rows(scheme, evals);
        const auto blocks = poly_blocks_from_rows(rows, scheme, productRows);
        const auto got = hessian_assemble(blocks, 3);
        CHECK(max_abs_diff(got, want) < 1e-8);
    }
}

TEST_CASE("squeezed row assignment covers the published load split") {
    // Five workers at speeds 2,2,2,2,1 on a 9-row product grid: the four
    // fast nodes take 8 rows each and the slow one takes 4.
    HessianOptions opts;
    opts.useS2c2 = true;
    opts.speeds = {2, 2, 2, 2, 1};
    opts.cTarget = 9;
    const auto scheme = PolyScheme::integer_points(5, 2, 2);
    const auto loads = hessian_row_loads(9, scheme, opts);
    CHECK(loads == std::vector<std::size_t>{8, 8, 8, 8, 4});
}

TEST_CASE("squeezed hessian equals the direct computation") {
    // 18 columns split in two give a 9-row product grid, so the circle can
    // match the published 2,2,2,2,1 split: loads 8,8,8,8,4 at coverage 4.
    const auto a = random_matrix(12, 18, 21);
    const auto x = make_positive_vector(12, 22);
    const auto scheme = PolyScheme::integer_points(5, 2, 2);
    HessianOptions opts;
    opts.useS2c2 = true;
    opts.speeds = {2, 2, 2, 2, 1};
    opts.cTarget = 9;
    const auto got = hessian_job(a, x, scheme, opts);
    CHECK(max_abs_diff(got, hessian_direct(a, x)) < 1e-8);
}

TEST_CASE("chebyshev points stay distinct and bounded") {
    const auto scheme = PolyScheme::chebyshev(12, 3, 3);
    REQUIRE(scheme.points.size() == 12);
    for (double p : scheme.points) CHECK(std::abs(p) < 1.0);
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = i + 1; j < 12; ++j) CHECK(scheme.points[i] != scheme.points[j]);
}

TEST_CASE("scheme validation") {
    CHECK_THROWS_AS(PolyScheme::integer_points(3, 2, 2), Error); // n < a*b
    const auto a = random_matrix(4, 4, 1);
    const auto scheme = PolyScheme::integer_points(4, 2, 2);
    // left split must match a, right split must match b
    CHECK_THROWS_AS(poly_encode(split_rows(a, 4), split_cols(a, 2), scheme), Error);
}
