#include "optiprecond/center.hpp"

#include <cmath>
#include <sstream>

namespace optiprecond {

namespace {

struct Slacks {
    MatrixXd r, s;  // M - D, kappa D - M
};

Slacks slack_matrices(const MatrixXd& m, const BarrierPoint& p) {
    Slacks out;
    out.r = m;
    out.r.diagonal() -= p.d;
    out.s = -m;
    out.s.diagonal() += p.kappa * p.d;
    return out;
}

void require_feasible(const MatrixXd& m, const BarrierPoint& p, const char* who) {
    if (p.d.size() != m.rows()) throw InputError(std::string(who) + ": dimension mismatch");
    if (!strictly_feasible(m, p))
        throw SolverError(std::string(who) + ": point is not strictly feasible");
}

lmi::PathConfig margin_path(const FeasibilityConfig& config) {
    lmi::PathConfig path = config.path;
    if (config.decide_only) {
        const double tol = config.tol;
        path.stop = [tol](const VectorXd& y, double, double gap) {
            return y(0) > tol || y(0) + gap < -tol;
        };
    }
    return path;
}

}  // namespace

Eigen::Vector3d cone_slacks(const MatrixXd& m, const BarrierPoint& p) {
    Slacks sl = slack_matrices(m, p);
    return {p.d.minCoeff(), min_eigenvalue(sl.r), min_eigenvalue(sl.s)};
}

bool strictly_feasible(const MatrixXd& m, const BarrierPoint& p) {
    if (!(p.d.array() > 0.0).all() || !p.d.allFinite()) return false;
    Slacks sl = slack_matrices(m, p);
    Eigen::LLT<MatrixXd> r(sl.r), s(sl.s);
    return r.info() == Eigen::Success && s.info() == Eigen::Success;
}

double barrier_value(const MatrixXd& m, const BarrierPoint& p) {
    require_feasible(m, p, "barrier_value");
    Slacks sl = slack_matrices(m, p);
    return log_det(sl.r) + log_det(sl.s) + p.d.array().log().sum();
}

VectorXd barrier_gradient(const MatrixXd& m, const BarrierPoint& p) {
    require_feasible(m, p, "barrier_gradient");
    Slacks sl = slack_matrices(m, p);
    MatrixXd x = psd_inverse(sl.r), y = psd_inverse(sl.s);
    return -x.diagonal() + p.kappa * y.diagonal() + p.d.cwiseInverse();
}

MatrixXd barrier_hessian(const MatrixXd& m, const BarrierPoint& p) {
    require_feasible(m, p, "barrier_hessian");
    Slacks sl = slack_matrices(m, p);
    MatrixXd x = psd_inverse(sl.r), y = psd_inverse(sl.s);
    MatrixXd h = -x.cwiseAbs2() - p.kappa * p.kappa * y.cwiseAbs2();
    h.diagonal() -= p.d.cwiseAbs2().cwiseInverse();
    return h;
}

CenterResult compute_center(const MatrixXd& m, double kappa, const VectorXd& start, double tol,
                            int max_iters) {
    CenterResult out;
    out.point = {start, kappa};
    require_feasible(m, out.point, "compute_center");
    double prev = INFINITY;
    for (int it = 0; it <= max_iters; ++it) {
        VectorXd g = barrier_gradient(m, out.point);
        MatrixXd h = barrier_hessian(m, out.point);
        Eigen::LLT<MatrixXd> llt(-h);
        if (llt.info() != Eigen::Success) throw SolverError("compute_center: Hessian lost definiteness");
        VectorXd step = llt.solve(g);
        const double lambda = std::sqrt(std::max(0.0, g.dot(step)));
        out.decrement = lambda;
        // Either converged, or roundoff stops the quadratic decrease.
        if (lambda <= tol || (lambda <= 1e-5 && lambda > 0.5 * prev)) return out;
        if (it == max_iters) break;
        prev = lambda;

        double t = lambda <= 0.25 ? 1.0 : 1.0 / (1.0 + lambda);
        const Eigen::Vector3d s0 = cone_slacks(m, out.point);
        int halvings = 0;
        while (true) {
            BarrierPoint trial{out.point.d + t * step, kappa};
            if (strictly_feasible(m, trial) && (cone_slacks(m, trial).array() >= 0.1 * s0.array()).all()) {
                out.point = std::move(trial);
                break;
            }
            if (++halvings > 40) throw SolverError("compute_center: step backtracking failed");
            t *= 0.5;
        }
        ++out.iterations;
    }
    std::ostringstream msg;
    msg << "compute_center: no convergence in " << max_iters << " Newton steps, gradient norm "
        << barrier_gradient(m, out.point).lpNorm<Eigen::Infinity>();
    throw SolverError(msg.str());
}

BarrierPoint initial_feasible_point(const MatrixXd& m, double kappa) {
    VectorXd w = sym_eigenvalues(m);
    const double lo = w(0), hi = w(w.size() - 1);
    if (!(lo > 0.0)) throw NotPositiveDefinite("initial_feasible_point: M is not positive definite");
    const double c = std::sqrt(hi * lo / kappa);
    if (!(lo > c && kappa * c > hi))
        throw SolverError("initial_feasible_point: kappa does not exceed the condition number of M");
    return {VectorXd::Constant(m.rows(), c), kappa};
}

FeasibilityResult feasibility_margin(const MatrixXd& m, double kappa, const FeasibilityConfig& config) {
    const Eigen::Index n = m.rows();
    VectorXd w = sym_eigenvalues(m);
    const double scale = w(n - 1);
    if (!(w(0) > 0.0)) throw NotPositiveDefinite("feasibility_margin: M is not positive definite");
    const MatrixXd mn = m / scale;
    const double lo = w(0) / scale;
    const MatrixXd eye = MatrixXd::Identity(n, n);

    // y = (s, d_1..d_n)
    lmi::Problem p;
    p.num_vars = n + 1;
    p.objective = VectorXd::Zero(n + 1);
    p.objective(0) = 1.0;
    std::vector<Eigen::Index> dvars(n);
    for (Eigen::Index i = 0; i < n; ++i) dvars[i] = i + 1;
    p.cones.push_back({mn, eye, dvars, VectorXd::Constant(n, -1.0), {{0, -eye}}});
    p.cones.push_back({-mn, eye, dvars, VectorXd::Constant(n, kappa), {{0, -eye}}});
    for (Eigen::Index i = 0; i < n; ++i) p.linear.push_back({0.0, {{i + 1, 1.0}, {0, -1.0}}});

    const double c = kappa > 1.0 ? std::sqrt(lo / kappa) : 0.5 * lo;
    BarrierPoint start{VectorXd::Constant(n, c), kappa};
    Eigen::Vector3d sl = cone_slacks(mn, start);
    VectorXd y0(n + 1);
    y0(0) = sl.minCoeff() - 0.5 * (1.0 + std::abs(sl.minCoeff()));
    y0.tail(n) = start.d;

    FeasibilityResult out;
    VectorXd y = y0;
    try {
        lmi::PathResult r = lmi::solve(p, y0, margin_path(config));
        y = r.y;
        out.converged = r.completed;
    } catch (const SolverError&) {
        out.converged = false;
    }
    out.margin = y(0) * scale;
    out.witness = y.tail(n) * scale;
    return out;
}

FeasibilityResult two_sided_feasibility(const RectMatrix& a, double kappa, const FeasibilityConfig& config) {
    const Eigen::Index m = a.rows(), n = a.cols();
    MatrixXd g = a.transpose() * a;
    const double scale = sym_eigenvalues(g)(n - 1);
    if (!(scale > 0.0)) throw InputError("two_sided_feasibility: A is zero");
    const MatrixXd an = a / std::sqrt(scale);
    const MatrixXd eye = MatrixXd::Identity(n, n);
    // Loose cap on d1; keeps the phase-I problem bounded.
    const double cap = 1e4;

    // y = (s, d1 (m), d2 (n))
    lmi::Problem p;
    p.num_vars = 1 + m + n;
    p.objective = VectorXd::Zero(p.num_vars);
    p.objective(0) = 1.0;
    MatrixXd gens(n, m + n);
    gens << an.transpose(), eye;
    std::vector<Eigen::Index> vars(m + n);
    for (Eigen::Index k = 0; k < m + n; ++k) vars[k] = k + 1;
    VectorXd w1(m + n), w2(m + n);
    w1 << VectorXd::Ones(m), VectorXd::Constant(n, -1.0);
    w2 << VectorXd::Constant(m, -1.0), VectorXd::Constant(n, kappa);
    p.cones.push_back({MatrixXd::Zero(n, n), gens, vars, w1, {{0, -eye}}});
    p.cones.push_back({MatrixXd::Zero(n, n), gens, vars, w2, {{0, -eye}}});
    for (Eigen::Index i = 0; i < m; ++i) {
        p.linear.push_back({-1.0, {{1 + i, 1.0}, {0, -1.0}}});
        p.linear.push_back({cap, {{1 + i, -1.0}}});
    }
    for (Eigen::Index j = 0; j < n; ++j) p.linear.push_back({0.0, {{1 + m + j, 1.0}}});

    // Start: D1 = 2I, D2 a multiple of the identity between the cones.
    const MatrixXd g1 = 2.0 * an.transpose() * an;
    VectorXd wg = sym_eigenvalues(g1);
    const double c = wg(0) > 0.0 ? 0.5 * wg(0) : 1e-3;
    VectorXd y0(p.num_vars);
    y0.segment(1, m).setConstant(2.0);
    y0.tail(n).setConstant(c);
    const double s1 = min_eigenvalue<double>(g1 - c * eye);
    const double s2 = min_eigenvalue<double>(kappa * c * eye - g1);
    const double smin = std::min({s1, s2, 1.0});
    y0(0) = smin - 0.5 * (1.0 + std::abs(smin));

    FeasibilityResult out;
    VectorXd y = y0;
    try {
        lmi::PathResult r = lmi::solve(p, y0, margin_path(config));
        y = r.y;
        out.converged = r.completed;
    } catch (const SolverError&) {
        out.converged = false;
    }
    out.margin = y(0);
    const double d1min = y.segment(1, m).minCoeff();
    out.left_witness = y.segment(1, m) / d1min;
    out.witness = y.tail(n) * scale / d1min;
    return out;
}

}  // namespace optiprecond
