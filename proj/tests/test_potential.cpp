#include <doctest.h>

#include "optiprecond/potential.hpp"
#include "oracles.hpp"

using namespace optiprecond;
using doctest::Approx;

namespace {
CenterState full_center(const MatrixXd& m, double kappa) {
    MatrixXd D = full_center_coefficient(kappa) * m;
    MatrixXd x = psd_inverse<double>(m - D), y = psd_inverse<double>(kappa * D - m);
    return make_state(m, D, x, y, x - kappa * y, kappa, false);
}
}  // namespace

TEST_CASE("potential and the full center") {
    CHECK(full_center_coefficient(4.0) == Approx(0.71713).epsilon(1e-5));
    MatrixXd one = MatrixXd::Ones(1, 1);
    CHECK(potential(one, MatrixXd::Constant(1, 1, 0.71713), 4.0) == Approx(-0.970119).epsilon(1e-5));
    std::mt19937_64 rng(11);
    MatrixXd m = oracle::random_pd(4, rng);
    CenterState st = full_center(m, 5.0);
    CHECK(st.max_delta() <= 1e-10);
}

TEST_CASE("geometric_mean") {
    std::mt19937_64 rng(12);
    MatrixXd p = oracle::random_pd(4, rng), q = oracle::random_pd(4, rng);
    MatrixXd u = geometric_mean(p, q);
    CHECK((u * q * u - p).norm() <= 1e-9 * p.norm());
    CHECK((u - u.transpose()).norm() == Approx(0.0));
}

TEST_CASE("delta_kappa") {
    for (int n : {1, 3}) {
        MatrixXd id = MatrixXd::Identity(n, n);
        CenterState st;
        st.kappa = 2.0;
        st.D = 2.0 / 3.0 * id;
        st.S = st.kappa * st.D - id;
        CHECK(delta_kappa(st, 0.1) == Approx(0.1 / (2 * n)));
        CHECK(delta_kappa(st, 0.2) == Approx(2 * delta_kappa(st, 0.1)));
    }
    const double d = 0.71713;
    CenterState st = make_center_state(MatrixXd::Ones(1, 1), MatrixXd::Constant(1, 1, d), 4.0, true);
    CHECK(d / (4 * d - 1) == Approx(0.38378).epsilon(1e-4));
    CHECK(delta_kappa(st, 0.1) == Approx(0.1 / (d / (4 * d - 1))));
}

TEST_CASE("shift_state") {
    std::mt19937_64 rng(13);
    MatrixXd m = oracle::random_pd(5, rng);
    CenterState st = full_center(m, 6.0);
    CenterState same = shift_state(st, 0.0);
    CHECK(same.S == st.S);
    CHECK(same.Z == st.Z);
    CHECK(same.kappa == st.kappa);

    const double beta = 0.2, dk = delta_kappa(st, beta);
    CenterState sh = shift_state(st, dk);
    CHECK(sh.kappa == Approx(6.0 - dk));
    CHECK(sh.delta_sy <= beta + 1e-12);
    CHECK(sh.delta_dz <= beta + 1e-12);
    CHECK(sh.delta_rx <= 1e-10);
    CHECK((sh.Z + sh.kappa * sh.Y - sh.X).norm() <= 1e-10 * sh.X.norm());
    CHECK(sh.D == st.D);
    CHECK(sh.X == st.X);
    CHECK_THROWS_AS(shift_state(st, 10.0), SolverError);
}

TEST_CASE("nt_step") {
    std::mt19937_64 rng(14);
    MatrixXd m = oracle::random_pd(4, rng);
    CenterState st = full_center(m, 5.0);
    CenterState next = nt_step(m, st, 5.0);
    CHECK((next.D - st.D).norm() <= 1e-9 * st.D.norm());
    CHECK((next.X - st.X).norm() <= 1e-9 * st.X.norm());

    CenterState sh = shift_state(st, delta_kappa(st, 0.2));
    const double d = sh.max_delta();
    CHECK(d <= 0.2 + 1e-12);
    next = nt_step(m, sh, sh.kappa);
    CHECK(next.max_delta() <= 0.5 * d * d / (1 - d) + 1e-9);
    CHECK((next.Z + next.kappa * next.Y - next.X).norm() <= 1e-9 * next.X.norm());

    // diagonal mode keeps diag(Z + kappa Y - X) = 0
    const double kd = 2.0 * condition_number(m);
    VectorXd dcen = compute_center(m, kd, initial_feasible_point(m, kd).d).point.d;
    CenterState ds = make_center_state(m, dcen.asDiagonal(), kd, true);
    CenterState dn = nt_step(m, shift_state(ds, delta_kappa(ds, 0.1)), ds.kappa - delta_kappa(ds, 0.1));
    CHECK((dn.Z + dn.kappa * dn.Y - dn.X).diagonal().norm() <= 1e-9 * dn.X.norm());
    CHECK((dn.D - MatrixXd(dn.D.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("solve_right_pr") {
    MatrixXd diag = Eigen::Vector3d(4, 1, 0.01).asDiagonal();
    for (PRMode mode : {PRMode::exact, PRMode::approximate}) {
        PRResult r = solve_right_pr(diag, {}, mode);
        CHECK(r.solution.report.kappa_after == Approx(1.0).epsilon(1e-6));
        VectorXd d = r.solution.scaling.values;
        CHECK((d / d(0)).isApprox(diag.diagonal() / 4.0, 1e-6));
    }

    MatrixXd m(2, 2);
    m << 1, 0.5, 0.5, 2;
    const double ref = oracle::grid_right_2x2(m);
    for (PRMode mode : {PRMode::exact, PRMode::approximate}) {
        PRResult r = solve_right_pr(m, {}, mode);
        CHECK(r.converged);
        CHECK(r.solution.report.kappa_after == Approx(ref).epsilon(1e-3));
        CHECK(r.lower_bound <= ref * (1 + 1e-9));
        for (std::size_t i = 0; i + 1 < r.potential.size(); ++i) CHECK(r.potential[i + 1] < r.potential[i]);
    }
    CHECK_THROWS_AS(solve_right_pr(-MatrixXd::Identity(2, 2)), InputError);
}

TEST_CASE("dual lower bound brackets the optimum") {
    std::mt19937_64 rng(15);
    MatrixXd m = oracle::random_pd(3, rng, 0.5);
    const double ref = oracle::grid_right(m);
    const double kappa = 2.0 * condition_number(m);
    VectorXd d = compute_center(m, kappa, initial_feasible_point(m, kappa).d).point.d;
    auto lb = dual_lower_bound(m, make_center_state(m, d.asDiagonal(), kappa, true));
    REQUIRE(lb.has_value());
    CHECK(*lb <= ref * (1 + 1e-9));
}
