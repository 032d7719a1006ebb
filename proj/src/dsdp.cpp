#include "optiprecond/dsdp.hpp"

#include <chrono>

#include "optiprecond/center.hpp"

namespace optiprecond {

DsdpProblem build_right(const MatrixXd& m) {
    if (m.rows() != m.cols() || !is_positive_definite(m))
        throw InputError("build_right: M must be symmetric positive definite");
    DsdpProblem p;
    p.side = Side::right;
    p.gram = m;
    p.dim_d = m.rows();
    return p;
}

DsdpProblem build_left(const RectMatrix& a) {
    if (a.rows() < a.cols()) throw InputError("build_left: A needs at least as many rows as columns");
    MatrixXd g = a.transpose() * a;
    if (!is_positive_definite(g)) throw InputError("build_left: A is rank deficient");
    DsdpProblem p;
    p.side = Side::left;
    p.a = a;
    p.gram = g;
    p.dim_d = a.rows();
    return p;
}

DsdpResult barrier_path_solve(const DsdpProblem& p, const DsdpConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::Index n = p.gram.rows(), k = p.dim_d;
    const MatrixXd eye = MatrixXd::Identity(n, n);
    VectorXd w = sym_eigenvalues(p.gram);
    const double lo = w(0), hi = w(n - 1);

    // y = (tau, d)
    lmi::Problem lp;
    lp.num_vars = k + 1;
    lp.objective = VectorXd::Zero(k + 1);
    lp.objective(0) = 1.0;
    std::vector<Eigen::Index> dvars(k);
    for (Eigen::Index i = 0; i < k; ++i) dvars[i] = i + 1;
    for (Eigen::Index i = 0; i < k; ++i) lp.linear.push_back({0.0, {{i + 1, 1.0}}});

    VectorXd y0(k + 1);
    if (p.side == Side::right) {
        lp.cones.push_back({p.gram, eye, dvars, VectorXd::Constant(k, -1.0), {}});
        lp.cones.push_back({MatrixXd::Zero(n, n), eye, dvars, VectorXd::Ones(k), {{0, -p.gram}}});
        // Start from the Jacobi-scaled problem, where c * ones is well inside.
        const VectorXd jac = p.gram.diagonal();
        const MatrixXd mt = congruence<double>(p.gram, jac);
        const double kt = condition_number(mt);
        y0(0) = 1.0 / (2.0 * kt);
        y0.tail(k) = jac.cwiseProduct(initial_feasible_point(mt, 2.0 * kt).d);
    } else {
        MatrixXd at = p.a.transpose();
        lp.cones.push_back({eye, at, dvars, VectorXd::Constant(k, -1.0), {}});
        lp.cones.push_back({MatrixXd::Zero(n, n), at, dvars, VectorXd::Ones(k), {{0, -eye}}});
        // Row-normalize first; d = r^{-1} / (2 lambda_1) keeps both cones interior.
        VectorXd rinv = p.a.rowwise().squaredNorm().cwiseMax(1e-300).cwiseInverse();
        const MatrixXd gt = p.a.transpose() * rinv.asDiagonal() * p.a;
        VectorXd wt = sym_eigenvalues(gt);
        y0(0) = wt(0) / (4.0 * wt(n - 1));
        y0.tail(k) = rinv / (2.0 * wt(n - 1));
    }

    lmi::PathResult r = lmi::solve(lp, y0, config.path);
    if (!r.completed) throw SolverError(r.failure);
    DsdpResult out;
    out.tau = r.y(0);
    out.d = r.y.tail(k);
    out.tau_path = r.objective_path;
    SolveReport& rep = out.report;
    rep.method = p.side == Side::right ? "dsdp-right" : "dsdp-left";
    rep.kappa_before = hi / lo;
    if (p.side == Side::right)
        rep.kappa_after = condition_number<double>(congruence<double>(p.gram, out.d));
    else
        rep.kappa_after = condition_number<double>(p.a.transpose() * out.d.asDiagonal() * p.a);
    rep.iterations = r.newton_iterations;
    rep.extra["tau"] = out.tau;
    rep.extra["stages"] = r.stages;
    rep.extra["final_mu"] = r.mu;
    rep.extra["gap_proxy"] = r.mu * r.barrier_dimension;
    rep.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace optiprecond
