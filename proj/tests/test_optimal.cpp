#include <doctest.h>

#include "optiprecond/io.hpp"
#include "optiprecond/optimal.hpp"
#include "oracles.hpp"

using namespace optiprecond;
using doctest::Approx;

TEST_CASE("optimal_right") {
    MatrixXd diag = Eigen::Vector3d(9, 1, 0.04).asDiagonal();
    for (Method m : {Method::automatic, Method::potential_reduction, Method::dsdp}) {
        OptimalRequest req;
        req.method = m;
        CHECK(optimal_right(diag, req).report.kappa_after == Approx(1.0).epsilon(1e-6));
    }
    MatrixXd m(2, 2);
    m << 1, 0.5, 0.5, 2;
    OptimalRequest req;
    req.name = "sample";
    Solution s = optimal_right(m, req);
    CHECK(s.report.kappa_after == Approx(oracle::grid_right_2x2(m)).epsilon(1e-3));
    CHECK(s.report.matrix == "sample");
    CHECK(s.scaling.values.maxCoeff() == Approx(1.0));
    req.method = Method::bisection;
    req.epsilon = 1e-4;
    CHECK(optimal_right(m, req).report.kappa_after <= oracle::grid_right_2x2(m) + 1e-4);
}

TEST_CASE("optimal_left") {
    Solution s = optimal_left(MatrixXd::Identity(3, 3));
    CHECK(s.report.kappa_after == Approx(1.0).epsilon(1e-6));
    CHECK(s.scaling.values.isApprox(VectorXd::Ones(3), 1e-5));
    CHECK(s.scaling.side == Side::left);

    MatrixXd q = Eigen::HouseholderQR<MatrixXd>(MatrixXd::Random(3, 3)).householderQ();
    MatrixXd rows = Eigen::Vector3d(5, 1, 0.2).asDiagonal() * q;
    CHECK(optimal_left(rows).report.kappa_after == Approx(1.0).epsilon(1e-6));

    RectMatrix t = read_matrix_market(std::string(OPTIPRECOND_FIXTURES) + "/Trefethen_20b.mtx");
    s = optimal_left(t);
    CHECK(s.report.kappa_before == Approx(921.2).epsilon(1e-3));
    CHECK(s.report.kappa_after <= 8.8);
}

TEST_CASE("bisect_two_sided") {
    OptimalRequest req;
    req.epsilon = 1e-3;
    Solution s = bisect_two_sided(MatrixXd(Eigen::Vector3d(4, 0.1, 2).asDiagonal()), req);
    CHECK(s.report.kappa_after <= 1.0 + req.epsilon);
    CHECK(s.scaling.side == Side::two_sided);
    CHECK(s.scaling.left_values.size() == 3);

    std::mt19937_64 rng(17);
    MatrixXd a;
    do a = oracle::gaussian(3, 3, rng);
    while (oracle::cond_rect(a) > 30.0);
    s = bisect_two_sided(a, req);
    const double ref = oracle::grid_two_sided(a);
    CHECK(s.report.kappa_after == Approx(ref).epsilon(std::max(req.epsilon, 1e-2)));
    const double direct = condition_number<double>(scaled_gram(a, s.scaling));
    CHECK(direct == Approx(s.report.kappa_after).epsilon(1e-9));

    OptimalRequest half = req;
    half.epsilon = req.epsilon / 2;
    const long k1 = s.report.iterations, k2 = bisect_two_sided(a, half).report.iterations;
    CHECK(k2 <= k1 + 1);
    CHECK(k1 <= bisection_bound(s.report.kappa_before, req.epsilon) + 1);
}

TEST_CASE("alternate_two_sided") {
    Solution s = alternate_two_sided(MatrixXd(Eigen::Vector3d(4, 0.1, 2).asDiagonal()));
    CHECK(s.report.kappa_after == Approx(1.0).epsilon(1e-6));
    CHECK(s.report.iterations == 1);

    std::mt19937_64 rng(18);
    for (int t = 0; t < 3; ++t) {
        MatrixXd a = oracle::gaussian(10, 6, rng);
        const double alt = alternate_two_sided(a).report.kappa_after;
        const double left = optimal_left(a).report.kappa_after;
        const double right = optimal_right(MatrixXd(a.transpose() * a)).report.kappa_after;
        CHECK(alt <= std::min(left, right) * (1 + 1e-6));
    }
    MatrixXd a;
    do a = oracle::gaussian(3, 3, rng);
    while (oracle::cond_rect(a) > 30.0);
    OptimalRequest req;
    CHECK(alternate_two_sided(a).report.kappa_after >= bisect_two_sided(a, req).report.kappa_after - req.epsilon);
}

TEST_CASE("bisection_bound") {
    CHECK(bisection_bound(2.0, 1e-3) == 10);
    CHECK(bisection_bound(1.0005, 1e-3) == 0);
    CHECK(bisection_bound(1025.0, 1.0) == 10);
}
