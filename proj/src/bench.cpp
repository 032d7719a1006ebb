#include "optiprecond/bench.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "optiprecond/io.hpp"

namespace optiprecond {

VectorXd seeded_rhs(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) b(i) = nd(rng);
    return b;
}

PcgResult pcg(const MatrixXd& m, const VectorXd& rhs, const std::optional<DiagScaling>& precond,
              double tol, long max_iters) {
    const Eigen::Index n = m.rows();
    if (max_iters <= 0) max_iters = 10 * n;
    MatrixXd a = m;
    VectorXd b = rhs;
    if (precond) {
        VectorXd s = precond->values.cwiseSqrt().cwiseInverse();
        a = s.asDiagonal() * m * s.asDiagonal();
        b = s.cwiseProduct(rhs);
    }
    PcgResult out;
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        out.converged = true;
        return out;
    }
    VectorXd x = VectorXd::Zero(n), r = b, p = r;
    double rr = r.squaredNorm();
    out.residual_history.push_back(1.0);
    while (out.iterations < max_iters) {
        VectorXd ap = a * p;
        const double pap = p.dot(ap);
        if (!(pap > 0.0)) throw NotPositiveDefinite("pcg: breakdown, p^T M p <= 0");
        const double alpha = rr / pap;
        x += alpha * p;
        r -= alpha * ap;
        ++out.iterations;
        const double rr_new = r.squaredNorm();
        const double rel = std::sqrt(rr_new) / bnorm;
        out.residual_history.push_back(rel);
        if (rel <= tol) {
            out.converged = true;
            break;
        }
        p = r + (rr_new / rr) * p;
        rr = rr_new;
    }
    out.final_relative_residual = out.residual_history.back();
    return out;
}

std::vector<SolveReport> pcg_compare(const MatrixXd& m, const std::vector<NamedScaling>& scalings,
                                     double tol, std::uint64_t seed, const std::string& matrix_name) {
    const VectorXd b = seeded_rhs(m.rows(), seed);
    const double before = condition_number(m);
    std::vector<SolveReport> out;
    auto run = [&](const std::string& name, const std::optional<DiagScaling>& s) {
        const auto t0 = std::chrono::steady_clock::now();
        PcgResult r = pcg(m, b, s, tol);
        SolveReport rep;
        rep.matrix = matrix_name;
        rep.method = name;
        rep.kappa_before = before;
        rep.kappa_after = s ? condition_number<double>(congruence<double>(m, s->values)) : before;
        rep.iterations = r.iterations;
        rep.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.extra["converged"] = r.converged;
        rep.extra["final_relative_residual"] = r.final_relative_residual;
        rep.extra["tol"] = tol;
        out.push_back(std::move(rep));
    };
    run("none", std::nullopt);
    for (const auto& [name, s] : scalings) run(name, s);
    return out;
}

std::vector<SamplingPoint> sampling_sweep(const RectMatrix& a, const std::vector<double>& ratios,
                                          std::uint64_t seed, const OptimalRequest& req) {
    const long m = a.rows();
    const MatrixXd full = a.transpose() * a;
    std::vector<SamplingPoint> out;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double ratio = ratios[i];
        if (!(ratio > 0.0 && ratio <= 1.0)) throw InputError("sampling_sweep: ratios must lie in (0, 1]");
        SamplingPoint pt;
        pt.ratio = ratio;
        pt.rows = std::clamp(static_cast<long>(std::ceil(ratio * m - 1e-9)), 1L, m);
        // One stream per point, derived from (seed, index).
        std::seed_seq seq{seed, static_cast<std::uint64_t>(i)};
        const std::uint64_t sub_seed = std::mt19937_64(seq)();
        const RectMatrix sampled = pt.rows == m ? a : sample_rows(a, pt.rows, sub_seed);
        const MatrixXd g = sampled.transpose() * sampled;
        pt.gram_gap = (full - (double(m) / double(pt.rows)) * g).norm();
        if (!is_positive_definite(g)) {
            pt.rank_deficient = true;
            pt.kappa_preconditioned = std::numeric_limits<double>::quiet_NaN();
        } else {
            Solution s = optimal_right(g, req);
            pt.kappa_preconditioned = condition_number<double>(congruence<double>(full, s.scaling.values));
        }
        out.push_back(pt);
    }
    return out;
}

std::vector<ConcentrationRow> concentration_experiment(const MatrixXd& sigma,
                                                       const std::vector<long>& n_grid, int trials,
                                                       std::uint64_t seed) {
    const Eigen::Index p = sigma.rows();
    Eigen::LLT<MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) throw InputError("concentration_experiment: sigma must be positive definite");
    const MatrixXd l = llt.matrixL();
    const double kappa_sigma = condition_number(sigma);
    const double kappa_sigma_scaled =
        condition_number<double>(congruence<double>(sigma, VectorXd(sigma.diagonal())));
    std::vector<ConcentrationRow> out;
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const long n = n_grid[gi];
        if (n <= p) throw InputError("concentration_experiment: every n must exceed p");
        ConcentrationRow row;
        row.n = n;
        row.trials = trials;
        row.sqrt_p_over_n = std::sqrt(double(p) / double(n));
        double total = 0.0;
        for (int t = 0; t < trials; ++t) {
            std::seed_seq seq{seed, static_cast<std::uint64_t>(gi), static_cast<std::uint64_t>(t)};
            std::mt19937_64 rng(seq);
            std::normal_distribution<double> nd;
            double gap = std::numeric_limits<double>::quiet_NaN();
            for (int attempt = 0; attempt < 3 && std::isnan(gap); ++attempt) {
                MatrixXd z(n, p);
                for (Eigen::Index j = 0; j < p; ++j)
                    for (long i = 0; i < n; ++i) z(i, j) = nd(rng);
                const MatrixXd x = z * l.transpose();
                const MatrixXd g = x.transpose() * x;
                if (!is_positive_definite(g)) continue;
                const MatrixXd g0 = congruence<double>(g, VectorXd(g.diagonal()));
                gap = std::abs(condition_number(g) / kappa_sigma - condition_number(g0) / kappa_sigma_scaled);
            }
            if (std::isnan(gap)) throw SolverError("concentration_experiment: singular sample Gram");
            total += gap;
        }
        row.mean_gap = total / trials;
        out.push_back(row);
    }
    return out;
}

}  // namespace optiprecond
