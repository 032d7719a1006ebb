#include "optiprecond/subgradient.hpp"

#include <chrono>
#include <cmath>

namespace optiprecond {

VectorXd logcond_subgradient(const MatrixXd& m, const VectorXd& d) {
    MatrixXd dmd = d.asDiagonal() * m * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(dmd));
    if (es.info() != Eigen::Success) throw SolverError("logcond_subgradient: eigensolver failed");
    const Eigen::Index n = m.rows();
    const double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(n - 1);
    if (!(lmin > 0.0)) throw NotPositiveDefinite("logcond_subgradient: D M D is not positive definite");
    // Ties: the first eigenvector the solver returns.
    const VectorXd u = es.eigenvectors().col(0);
    const VectorXd v = es.eigenvectors().col(n - 1);
    const VectorXd mdv = m * d.cwiseProduct(v);
    const VectorXd mdu = m * d.cwiseProduct(u);
    return 2.0 * v.cwiseProduct(mdv) / lmax - 2.0 * u.cwiseProduct(mdu) / lmin;
}

Solution projected_subgradient_solve(const MatrixXd& m, const SubgradConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!(config.upper_bound > 1.0)) throw InputError("projected_subgradient_solve: C must exceed 1");
    const Eigen::Index n = m.rows();
    auto kappa_of = [&](const VectorXd& d) {
        return condition_number<double>(d.asDiagonal() * m * d.asDiagonal());
    };
    VectorXd d = VectorXd::Ones(n), best = d;
    double best_kappa = kappa_of(d);
    const double start_kappa = best_kappa;
    int best_iter = 0;
    for (int k = 1; k <= config.max_iters; ++k) {
        const double alpha = config.step == StepRule::inverse ? 1.0 / k : 1.0 / std::sqrt(double(k));
        d = (d - alpha * logcond_subgradient(m, d)).cwiseMax(1.0).cwiseMin(config.upper_bound);
        const double kk = kappa_of(d);
        if (kk < best_kappa) {
            best_kappa = kk;
            best = d;
            best_iter = k;
        }
    }
    Solution sol;
    sol.scaling = {normalize_max(best.cwiseAbs2().cwiseInverse()), Side::right, {}};
    sol.report.method = "subgrad";
    sol.report.kappa_before = start_kappa;
    sol.report.kappa_after = best_kappa;
    sol.report.iterations = config.max_iters;
    sol.report.extra["best_iteration"] = best_iter;
    sol.report.extra["upper_bound"] = config.upper_bound;
    sol.report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

}  // namespace optiprecond
