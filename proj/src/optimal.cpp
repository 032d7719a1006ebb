#include "optiprecond/optimal.hpp"

#include <chrono>
#include <cmath>

namespace optiprecond {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double kappa_two_sided(const RectMatrix& a, const VectorXd& d1, const VectorXd& d2) {
    return condition_number<double>(scaled_gram(a, {d2, Side::two_sided, d1}));
}

}  // namespace

long bisection_bound(double kappa0, double eps) {
    if (kappa0 - 1.0 <= eps) return 0;
    return static_cast<long>(std::ceil(std::log2((kappa0 - 1.0) / eps)));
}

Solution optimal_right(const MatrixXd& m, const OptimalRequest& req) {
    const auto t0 = Clock::now();
    if (!is_positive_definite(m)) throw InputError("optimal_right: M is not positive definite");
    Method method = req.method;
    if (method == Method::automatic)
        method = m.rows() <= 200 ? Method::potential_reduction : Method::dsdp;

    Solution sol;
    if (method == Method::potential_reduction) {
        PRResult r = solve_right_pr(m, req.pr, req.pr_mode);
        sol = std::move(r.solution);
    } else if (method == Method::dsdp) {
        DsdpResult r = barrier_path_solve(build_right(m), req.dsdp);
        sol.scaling = {r.d, Side::right, {}};
        sol.report = std::move(r.report);
    } else {
        sol = bisect_right(m, req);
    }

    const double before = condition_number(m);
    double after = condition_number<double>(congruence<double>(m, sol.scaling.values));
    // Never hand back something worse than doing nothing.
    if (!(after <= before * (1.0 + 1e-9))) {
        sol.scaling.values = VectorXd::Ones(m.rows());
        after = before;
        sol.report.extra["fallback"] = "identity";
    }
    sol.scaling.values = normalize_max(sol.scaling.values);
    sol.report.matrix = req.name;
    sol.report.kappa_before = before;
    sol.report.kappa_after = after;
    sol.report.wall_time_seconds = seconds_since(t0);
    return sol;
}

Solution bisect_right(const MatrixXd& m, const OptimalRequest& req) {
    const auto t0 = Clock::now();
    const double kappa0 = condition_number(m);
    double upper = kappa0, lower = 1.0;
    VectorXd best = VectorXd::Ones(m.rows());
    if (req.warm_start && req.warm_start->values.size() == m.rows()) {
        const double k = condition_number<double>(congruence<double>(m, req.warm_start->values));
        if (k < upper) {
            upper = k;
            best = req.warm_start->values;
        }
    }
    FeasibilityConfig decide = req.feasibility;
    decide.decide_only = true;
    long iters = 0;
    while (upper - lower >= req.epsilon) {
        const double mid = 0.5 * (upper + lower);
        FeasibilityResult f = feasibility_margin(m, mid, decide);
        if (f.margin >= -req.feasibility.tol && (f.witness.array() > 0.0).all()) {
            upper = mid;
            best = f.witness;
        } else {
            lower = mid;
        }
        ++iters;
    }
    Solution sol;
    sol.scaling = {normalize_max(best), Side::right, {}};
    sol.report.matrix = req.name;
    sol.report.method = "bisection-right";
    sol.report.kappa_before = kappa0;
    sol.report.kappa_after = condition_number<double>(congruence<double>(m, best));
    sol.report.iterations = iters;
    sol.report.extra["upper"] = upper;
    sol.report.extra["lower"] = lower;
    sol.report.extra["iteration_bound"] = bisection_bound(kappa0, req.epsilon);
    sol.report.wall_time_seconds = seconds_since(t0);
    return sol;
}

Solution optimal_left(const RectMatrix& a, const OptimalRequest& req) {
    const auto t0 = Clock::now();
    DsdpResult r = barrier_path_solve(build_left(a), req.dsdp);
    Solution sol;
    const MatrixXd g = a.transpose() * a;
    const double before = condition_number(g);
    VectorXd d = r.d;
    double after = condition_number<double>(a.transpose() * d.asDiagonal() * a);
    sol.report = std::move(r.report);
    if (!(after <= before * (1.0 + 1e-9))) {
        d = VectorXd::Ones(a.rows());
        after = before;
        sol.report.extra["fallback"] = "identity";
    }
    sol.scaling = {normalize_max(d), Side::left, {}};
    sol.report.matrix = req.name;
    sol.report.kappa_before = before;
    sol.report.kappa_after = after;
    sol.report.wall_time_seconds = seconds_since(t0);
    return sol;
}

Solution bisect_two_sided(const RectMatrix& a, const OptimalRequest& req) {
    const auto t0 = Clock::now();
    const Eigen::Index m = a.rows(), n = a.cols();
    const MatrixXd g = a.transpose() * a;
    const double kappa0 = condition_number(g);
    double upper = kappa0, lower = 1.0;
    VectorXd d1 = VectorXd::Ones(m), d2 = VectorXd::Ones(n);
    if (req.warm_start) {
        const DiagScaling& ws = *req.warm_start;
        VectorXd w1 = ws.left_values.size() == m ? ws.left_values : VectorXd::Ones(m);
        VectorXd w2 = ws.values.size() == n ? ws.values : VectorXd::Ones(n);
        const double k = kappa_two_sided(a, w1, w2);
        if (k < upper) {
            upper = k;
            d1 = w1;
            d2 = w2;
        }
    }
    const double start_upper = upper;
    FeasibilityConfig decide = req.feasibility;
    decide.decide_only = true;
    long iters = 0;
    while (upper - lower >= req.epsilon) {
        const double mid = 0.5 * (upper + lower);
        FeasibilityResult f = two_sided_feasibility(a, mid, decide);
        if (f.margin >= -req.feasibility.tol && (f.witness.array() > 0.0).all()) {
            upper = mid;
            d1 = f.left_witness;
            d2 = f.witness;
        } else {
            lower = mid;
        }
        ++iters;
    }
    Solution sol;
    sol.scaling = {normalize_max(d2), Side::two_sided, normalize_max(d1)};
    sol.report.method = "bisection-two-sided";
    sol.report.matrix = req.name;
    sol.report.kappa_before = kappa0;
    sol.report.kappa_after = kappa_two_sided(a, d1, d2);
    sol.report.iterations = iters;
    sol.report.extra["upper"] = upper;
    sol.report.extra["lower"] = lower;
    sol.report.extra["iteration_bound"] = bisection_bound(start_upper, req.epsilon);
    sol.report.wall_time_seconds = seconds_since(t0);
    return sol;
}

Solution alternate_two_sided(const RectMatrix& a, const OptimalRequest& req) {
    const auto t0 = Clock::now();
    const Eigen::Index m = a.rows(), n = a.cols();
    const double kappa0 = condition_number<double>(a.transpose() * a);
    VectorXd d1 = VectorXd::Ones(m), d2 = VectorXd::Ones(n);
    double kappa = kappa0;
    std::vector<double> path{kappa};
    OptimalRequest sub = req;
    sub.warm_start.reset();
    // Many one-sided solves: the barrier path is the cheaper one here.
    if (sub.method == Method::automatic || sub.method == Method::bisection) sub.method = Method::dsdp;
    int rounds = 0;
    for (; rounds < 20; ++rounds) {
        const double round_start = kappa;
        // Left step on A D2^{-1/2}, scaled by the current D1.
        RectMatrix cur = d1.cwiseSqrt().asDiagonal() * a * d2.cwiseSqrt().cwiseInverse().asDiagonal();
        Solution left = optimal_left(cur, sub);
        VectorXd c1 = d1.cwiseProduct(left.scaling.values);
        double k = kappa_two_sided(a, c1, d2);
        if (k <= kappa) {
            d1 = normalize_max(c1);
            kappa = k;
        }
        path.push_back(kappa);
        // Right step on the current Gram.
        MatrixXd gm = scaled_gram(a, {d2, Side::two_sided, d1});
        Solution right = optimal_right(symmetrize<double>(gm), sub);
        VectorXd c2 = d2.cwiseProduct(right.scaling.values);
        k = kappa_two_sided(a, d1, c2);
        if (k <= kappa) {
            d2 = normalize_max(c2);
            kappa = k;
        }
        path.push_back(kappa);
        // kappa = 1 cannot be improved on
        if (round_start - kappa < 1e-3 * round_start || kappa - 1.0 <= 1e-9) {
            ++rounds;
            break;
        }
    }
    Solution sol;
    sol.scaling = {d2, Side::two_sided, d1};
    sol.report.method = "alternating-two-sided";
    sol.report.matrix = req.name;
    sol.report.kappa_before = kappa0;
    sol.report.kappa_after = kappa;
    sol.report.iterations = rounds;
    sol.report.extra["kappa_path"] = path;
    sol.report.wall_time_seconds = seconds_since(t0);
    return sol;
}

}  // namespace optiprecond
