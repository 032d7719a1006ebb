#include <doctest.h>

#include "optiprecond/linalg.hpp"
#include "oracles.hpp"

using namespace optiprecond;
using doctest::Approx;

namespace {
MatrixXd mat2(double a, double b, double c, double d) {
    MatrixXd m(2, 2);
    m << a, b, c, d;
    return m;
}
}  // namespace

TEST_CASE("sym_eig sorts eigenvalues nonincreasing") {
    auto e = sym_eig<double>(MatrixXd::Identity(3, 3));
    CHECK(e.values.isApprox(VectorXd::Ones(3)));

    MatrixXd d = Eigen::Vector2d(1.0, 4.0).asDiagonal();
    e = sym_eig(d);
    CHECK(e.values(0) == Approx(4.0));
    CHECK(e.values(1) == Approx(1.0));
    CHECK(std::abs(e.vectors(1, 0)) == Approx(1.0));
    CHECK(std::abs(e.vectors(0, 1)) == Approx(1.0));

    e = sym_eig(mat2(1, 0.5, 0.5, 2));
    CHECK(e.values(0) == Approx((3 + std::sqrt(2.0)) / 2).epsilon(1e-12));
    CHECK(e.values(1) == Approx((3 - std::sqrt(2.0)) / 2).epsilon(1e-12));
}

TEST_CASE("sym_eig reconstructs random matrices") {
    std::mt19937_64 rng(1);
    for (int n : {1, 3, 7, 20}) {
        MatrixXd m = oracle::random_pd(n, rng);
        auto e = sym_eig(m);
        MatrixXd back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
        CHECK((back - m).norm() <= 1e-10 * m.norm());
        for (int i = 0; i + 1 < n; ++i) CHECK(e.values(i) >= e.values(i + 1));
    }
}

TEST_CASE("cholesky") {
    auto c = cholesky<double>(MatrixXd::Identity(2, 2));
    CHECK(c.success);
    CHECK(c.lower.isApprox(MatrixXd::Identity(2, 2)));
    CHECK_FALSE(cholesky(mat2(1, 2, 2, 1)).success);
    c = cholesky(mat2(4, 2, 2, 2));
    CHECK(c.success);
    CHECK((c.lower - mat2(2, 0, 1, 1)).norm() <= 1e-14);
    // smallest pivot must exceed 1e-13 times the largest diagonal
    CHECK_FALSE(cholesky(mat2(1, 0, 0, 1e-14)).success);
}

TEST_CASE("condition_number") {
    CHECK(condition_number<double>(MatrixXd::Identity(5, 5)) == Approx(1.0));
    CHECK(condition_number<double>(Eigen::Vector2d(9, 1).asDiagonal()) == Approx(9.0));
    CHECK(condition_number(mat2(1, 0.5, 0.5, 2)) == Approx(2.7839).epsilon(1e-4));
    CHECK_THROWS_AS(condition_number(mat2(1, 2, 2, 1)), NotPositiveDefinite);
}

TEST_CASE("psd_inverse, psd_sqrt, proximity_delta") {
    CHECK(psd_inverse<double>(Eigen::Vector2d(2, 4).asDiagonal()).isApprox(mat2(0.5, 0, 0, 0.25)));
    CHECK(psd_inverse(mat2(4, 2, 2, 2)).isApprox(mat2(0.5, -0.5, -0.5, 1)));
    CHECK(psd_sqrt<double>(Eigen::Vector2d(4, 9).asDiagonal()).isApprox(mat2(2, 0, 0, 3)));
    MatrixXd r = psd_sqrt(mat2(2, 1, 1, 2));
    CHECK((r * r - mat2(2, 1, 1, 2)).norm() < 1e-10);
    CHECK(psd_inv_sqrt(mat2(2, 1, 1, 2)).isApprox(psd_inverse(r)));
    CHECK_THROWS(psd_sqrt(mat2(1, 2, 2, 1)));

    MatrixXd id = MatrixXd::Identity(2, 2);
    CHECK(proximity_delta(id, id) == Approx(0.0));
    CHECK(proximity_delta(MatrixXd(2.0 * id), MatrixXd(0.5 * id)) == Approx(0.0));
    CHECK(proximity_delta(mat2(1.1, 0, 0, 1), id) == Approx(0.1));
}

TEST_CASE("log_det and trace_product") {
    CHECK(log_det<double>(MatrixXd::Identity(3, 3)) == Approx(0.0));
    CHECK(log_det<double>(VectorXd::Constant(2, std::exp(1.0)).asDiagonal()) == Approx(2.0));
    CHECK(log_det(mat2(4, 2, 2, 2)) == Approx(std::log(4.0)));
    CHECK_THROWS_AS(log_det(mat2(1, 2, 2, 1)), NotPositiveDefinite);

    CHECK(trace_product<double>(MatrixXd::Identity(3, 3), MatrixXd::Identity(3, 3)) == Approx(3.0));
    CHECK(trace_product(mat2(1, 0, 0, 2), mat2(3, 0, 0, 4)) == Approx(11.0));
    std::mt19937_64 rng(3);
    MatrixXd a = oracle::random_pd(4, rng), b = oracle::random_pd(4, rng);
    double loop = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) loop += a(i, j) * b(j, i);
    CHECK(trace_product(a, b) == Approx(loop));
    CHECK(trace_product(a, b) == Approx(trace_product(b, a)));
}

TEST_CASE("congruence works in long double too") {
    Mat<long double> m(2, 2);
    m << 4, 1, 1, 9;
    Vec<long double> d(2);
    d << 4, 9;
    Mat<long double> c = congruence<long double>(m, d);
    CHECK(static_cast<double>(c(0, 0)) == Approx(1.0));
    CHECK(static_cast<double>(c(0, 1)) == Approx(1.0 / 6.0));
}
