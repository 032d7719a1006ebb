#include "optiprecond/potential.hpp"

#include <chrono>
#include <cmath>

#include "optiprecond/heuristics.hpp"

namespace optiprecond {

namespace {

bool llt_ok(const MatrixXd& m) {
    Eigen::LLT<MatrixXd> llt(m);
    return llt.info() == Eigen::Success;
}

MatrixXd diag_part(const MatrixXd& m) {
    return MatrixXd(m.diagonal().asDiagonal());
}

// What the exact-center loop needs: slacks, inverses and Z for the bound.
// Proximities are skipped; near the optimum X and kappa Y nearly cancel.
CenterState exact_state(const MatrixXd& m, const VectorXd& d, double kappa) {
    CenterState st;
    st.kappa = kappa;
    st.D = d.asDiagonal();
    st.R = m - st.D;
    st.S = kappa * st.D - m;
    st.X = psd_inverse(st.R);
    st.Y = psd_inverse(st.S);
    st.Z = diag_part(st.X - kappa * st.Y);
    return st;
}

}  // namespace

double potential(const MatrixXd& m, const MatrixXd& D, double kappa) {
    return log_det<double>(m - D) + log_det<double>(kappa * D - m) + log_det(D);
}

double full_center_coefficient(double kappa) {
    const double b = 2.0 * kappa + 2.0;
    return (b + std::sqrt(b * b - 12.0 * kappa)) / (6.0 * kappa);
}

CenterState make_state(const MatrixXd& m, const MatrixXd& D, const MatrixXd& X, const MatrixXd& Y,
                       const MatrixXd& Z, double kappa, bool diagonal) {
    CenterState st;
    st.kappa = kappa;
    st.diagonal = diagonal;
    st.D = D;
    st.R = m - D;
    st.S = kappa * D - m;
    st.X = X;
    st.Y = Y;
    st.Z = Z;
    st.delta_rx = proximity_delta(st.R, st.X);
    st.delta_sy = proximity_delta(st.S, st.Y);
    st.delta_dz = proximity_delta(st.D, st.Z);
    return st;
}

CenterState make_center_state(const MatrixXd& m, const MatrixXd& D, double kappa, bool diagonal) {
    MatrixXd X = psd_inverse<double>(m - D);
    MatrixXd Y = psd_inverse<double>(kappa * D - m);
    MatrixXd Z = X - kappa * Y;
    if (diagonal) Z = diag_part(Z);
    return make_state(m, D, X, Y, Z, kappa, diagonal);
}

MatrixXd geometric_mean(const MatrixXd& p, const MatrixXd& q) {
    MatrixXd s = psd_sqrt(p);
    MatrixXd mid = symmetrize<double>(s * q * s);
    return symmetrize<double>(s * psd_inv_sqrt(mid) * s);
}

NTScalings nt_scalings(const CenterState& st) {
    return {geometric_mean(st.R, st.X), geometric_mean(st.S, st.Y), geometric_mean(st.D, st.Z)};
}

double delta_kappa(const CenterState& st, double beta) {
    const double tr = trace_product<double>(st.D, psd_inverse(st.S));
    if (!(tr > 0.0)) throw SolverError("delta_kappa: Tr(D S^{-1}) is not positive");
    return beta / tr;
}

CenterState shift_state(const CenterState& st, double dk) {
    CenterState out = st;
    out.kappa = st.kappa - dk;
    out.S = st.S - dk * st.D;
    if (!llt_ok(out.S)) throw SolverError("shift_state: step too large, shifted S is not positive definite");
    out.Z = st.Z + dk * (st.diagonal ? diag_part(st.Y) : st.Y);
    out.delta_sy = proximity_delta(out.S, out.Y);
    out.delta_dz = proximity_delta(out.D, out.Z);
    return out;
}

CenterState nt_step(const MatrixXd& m, const CenterState& st, double kappa1) {
    const Eigen::Index n = m.rows();
    const double k = kappa1;
    NTScalings sc = nt_scalings(st);
    MatrixXd ui = psd_inverse(sc.U), vi = psd_inverse(sc.V), wi = psd_inverse(sc.W);
    MatrixXd dinv = psd_inverse(st.D), rinv = psd_inverse(st.R), sinv = psd_inverse(st.S);
    MatrixXd g = dinv + k * sinv - rinv;

    MatrixXd dD;
    if (st.diagonal) {
        MatrixXd h = wi.cwiseAbs2() + k * k * vi.cwiseAbs2() + ui.cwiseAbs2();
        Eigen::LLT<MatrixXd> llt(h);
        if (llt.info() != Eigen::Success) throw SolverError("nt_step: reduced Newton system is singular");
        VectorXd dd = llt.solve(VectorXd(g.diagonal()));
        dD = dd.asDiagonal();
    } else {
        // vec(A X A) = (A kron A) vec(X) for symmetric A
        MatrixXd l(n * n, n * n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                l.block(i * n, j * n, n, n) =
                    wi(i, j) * wi + k * k * vi(i, j) * vi + ui(i, j) * ui;
        Eigen::PartialPivLU<MatrixXd> lu(l);
        VectorXd rhs = Eigen::Map<const VectorXd>(g.data(), n * n);
        VectorXd sol = lu.solve(rhs);
        if (!sol.allFinite()) throw SolverError("nt_step: Newton system is singular");
        dD = symmetrize<double>(Eigen::Map<const MatrixXd>(sol.data(), n, n));
    }

    MatrixXd dZ = dinv - st.Z - wi * dD * wi;
    if (st.diagonal) dZ = diag_part(dZ);
    MatrixXd dX = rinv - st.X + ui * dD * ui;
    MatrixXd dY = sinv - st.Y - k * vi * dD * vi;

    MatrixXd D1 = st.D + dD;
    MatrixXd X1 = symmetrize<double>(st.X + dX), Y1 = symmetrize<double>(st.Y + dY);
    MatrixXd Z1 = symmetrize<double>(st.Z + dZ);
    if (!llt_ok(m - D1) || !llt_ok(k * D1 - m) || !llt_ok(D1) || !llt_ok(X1) || !llt_ok(Y1) || !llt_ok(Z1))
        throw SolverError("nt_step: iterate left the cones, proximity too large");
    return make_state(m, D1, X1, Y1, Z1, k, st.diagonal);
}

std::optional<double> dual_lower_bound(const MatrixXd& m, const CenterState& st) {
    if (!llt_ok(st.X) || !llt_ok(st.Y)) return std::nullopt;
    if (st.diagonal) {
        if (!(st.Z.diagonal().array() >= 0.0).all()) return std::nullopt;
    } else if (!llt_ok(st.Z)) {
        return std::nullopt;
    }
    const double den = trace_product(st.X, m);
    if (!(den > 0.0)) return std::nullopt;
    return trace_product<double>(st.kappa * st.Y + st.Z, m) / den;
}

PRResult solve_right_pr(const MatrixXd& m, const PRConfig& config, PRMode mode) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!is_positive_definite(m)) throw InputError("solve_right_pr: M is not positive definite");
    if (!(config.beta > 0.0 && config.beta < 1.0)) throw InputError("solve_right_pr: beta must lie in (0, 1)");

    // The problem is invariant under diagonal congruence, so work on the
    // Jacobi-scaled matrix and map the answer back at the end.
    const VectorXd jac = jacobi_scaling(m).values;
    const MatrixXd mt = symmetrize<double>(congruence<double>(m, jac));

    PRResult res;
    const double kappa0 = 1.01 * condition_number(mt);
    double kappa = kappa0;
    VectorXd d = compute_center(mt, kappa, initial_feasible_point(mt, kappa).d).point.d;
    CenterState st = mode == PRMode::exact ? exact_state(mt, d, kappa)
                                           : make_center_state(mt, d.asDiagonal(), kappa, true);
    res.potential.push_back(potential(mt, st.D, kappa));
    res.kappa_path.push_back(kappa);

    double beta = config.beta, best_lb = 1.0;
    int clean = 0, stalled = 0, outer = 0;
    for (; outer < config.max_outer; ++outer) {
        if (auto lb = dual_lower_bound(mt, st)) best_lb = std::max(best_lb, *lb);
        const double achieved = condition_number<double>(congruence<double>(mt, d));
        const double upper = std::min(kappa, achieved);
        if (upper - best_lb <= config.kappa_tol * upper) {
            res.converged = true;
            break;
        }
        const double dk = delta_kappa(st, beta);
        stalled = dk <= 1e-15 * kappa ? stalled + 1 : 0;
        if (stalled >= 50) {
            if (upper - best_lb <= 1e-3 * upper) break;
            throw SolverError("solve_right_pr: no progress in 50 steps, relative gap " +
                              std::to_string((upper - best_lb) / upper));
        }
        try {
            if (mode == PRMode::exact) {
                d = compute_center(mt, kappa - dk, d).point.d;
                st = exact_state(mt, d, kappa - dk);
            } else {
                CenterState next = nt_step(mt, shift_state(st, dk), kappa - dk);
                if (next.max_delta() > config.delta_cap) throw SolverError("proximity above cap");
                st = std::move(next);
                d = st.D.diagonal();
            }
        } catch (const SolverError&) {
            beta *= 0.5;
            clean = 0;
            if (beta < 1e-10) throw SolverError("solve_right_pr: step size collapsed");
            if (mode == PRMode::approximate) {
                d = compute_center(mt, kappa, d).point.d;
                st = make_center_state(mt, d.asDiagonal(), kappa, true);
                ++res.recenters;
            }
            continue;
        }
        kappa -= dk;
        res.potential.push_back(potential(mt, st.D, kappa));
        res.kappa_path.push_back(kappa);
        res.beta_path.push_back(beta);
        if (++clean >= 5) beta = std::min(2.0 * beta, config.beta);
    }

    res.kappa = kappa;
    res.lower_bound = best_lb;
    VectorXd dfull = jac.cwiseProduct(d);
    Solution& sol = res.solution;
    sol.scaling = {dfull, Side::right, {}};
    sol.report.method = mode == PRMode::exact ? "potential-reduction-exact" : "potential-reduction";
    sol.report.kappa_before = condition_number(m);
    sol.report.kappa_after = condition_number<double>(congruence<double>(m, dfull));
    sol.report.iterations = static_cast<long>(res.beta_path.size());
    sol.report.extra["kappa_start"] = kappa0;
    sol.report.extra["kappa_path_end"] = kappa;
    sol.report.extra["lower_bound"] = best_lb;
    sol.report.extra["converged"] = res.converged;
    sol.report.extra["recenters"] = res.recenters;
    sol.report.extra["outer_loops"] = outer;
    sol.report.extra["potential"] = res.potential;
    sol.report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace optiprecond
