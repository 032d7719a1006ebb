#include "optiprecond/lmi.hpp"

#include <cmath>
#include <sstream>

namespace optiprecond::lmi {

MatrixXd cone_value(const Cone& c, const VectorXd& y) {
    MatrixXd out = c.c0;
    if (c.generators.cols() > 0) {
        VectorXd w(c.generators.cols());
        for (Eigen::Index k = 0; k < w.size(); ++k)
            w(k) = c.generator_weight(k) * y(c.generator_var[k]);
        out.noalias() += c.generators * w.asDiagonal() * c.generators.transpose();
    }
    for (const auto& [var, f] : c.dense) out += y(var) * f;
    return out;
}

namespace {

double linear_value(const Linear& l, const VectorXd& y) {
    double s = l.c0;
    for (const auto& [var, g] : l.terms) s += g * y(var);
    return s;
}

// Cone slacks are checked with a Cholesky attempt; no eigenvalues needed.
bool cone_pd(const MatrixXd& c) {
    Eigen::LLT<MatrixXd> llt(c);
    return llt.info() == Eigen::Success && (llt.matrixLLT().diagonal().array() > 0.0).all();
}

struct Derivs {
    VectorXd grad;
    MatrixXd hess;  // of the barrier part only
};

Derivs barrier_derivs(const Problem& p, const VectorXd& y) {
    const Eigen::Index k = p.num_vars;
    Derivs d{VectorXd::Zero(k), MatrixXd::Zero(k, k)};
    for (const auto& c : p.cones) {
        MatrixXd w = psd_inverse<double>(cone_value(c, y));
        const Eigen::Index r = c.generators.cols();
        MatrixXd wv;
        if (r > 0) {
            wv = w * c.generators;
            MatrixXd g = c.generators.transpose() * wv;
            for (Eigen::Index a = 0; a < r; ++a) {
                d.grad(c.generator_var[a]) += c.generator_weight(a) * g(a, a);
                for (Eigen::Index b = 0; b < r; ++b)
                    d.hess(c.generator_var[a], c.generator_var[b]) -=
                        c.generator_weight(a) * c.generator_weight(b) * g(a, b) * g(a, b);
            }
        }
        std::vector<MatrixXd> wf;
        wf.reserve(c.dense.size());
        for (const auto& [var, f] : c.dense) {
            wf.push_back(w * f);
            d.grad(var) += wf.back().trace();
        }
        for (std::size_t a = 0; a < c.dense.size(); ++a) {
            for (std::size_t b = 0; b < c.dense.size(); ++b)
                d.hess(c.dense[a].first, c.dense[b].first) -= (wf[a] * wf[b]).trace();
            if (r > 0) {
                // v_k^T W F W v_k for every generator
                MatrixXd t = wf[a] * wv;
                VectorXd cross = c.generators.cwiseProduct(t).colwise().sum().transpose();
                for (Eigen::Index q = 0; q < r; ++q) {
                    double h = c.generator_weight(q) * cross(q);
                    d.hess(c.dense[a].first, c.generator_var[q]) -= h;
                    d.hess(c.generator_var[q], c.dense[a].first) -= h;
                }
            }
        }
    }
    for (const auto& l : p.linear) {
        const double s = linear_value(l, y);
        for (const auto& [va, ga] : l.terms) {
            d.grad(va) += ga / s;
            for (const auto& [vb, gb] : l.terms) d.hess(va, vb) -= ga * gb / (s * s);
        }
    }
    return d;
}

}  // namespace

bool strictly_feasible(const Problem& p, const VectorXd& y) {
    if (!y.allFinite()) return false;
    for (const auto& l : p.linear)
        if (!(linear_value(l, y) > 0.0)) return false;
    for (const auto& c : p.cones)
        if (!cone_pd(cone_value(c, y))) return false;
    return true;
}

namespace {

// Damped Newton on b^T y + mu * barrier; returns the number of steps taken.
int newton_stage(const Problem& p, VectorXd& y, double mu, int budget, double tol) {
    double lambda = 0.0, prev = INFINITY;
    int it = 0;
    for (; it < budget; ++it) {
        Derivs d = barrier_derivs(p, y);
        VectorXd g = p.objective + mu * d.grad;
        MatrixXd neg_h = -mu * d.hess;
        Eigen::LDLT<MatrixXd> ldlt(neg_h);
        VectorXd step = ldlt.solve(g);
        if (ldlt.info() != Eigen::Success || !step.allFinite()) {
            std::ostringstream msg;
            msg << "barrier path: singular Newton system at mu=" << mu;
            throw SolverError(msg.str());
        }
        lambda = std::sqrt(std::max(0.0, g.dot(step)) / mu);
        if (lambda <= tol) return it;
        // Roundoff floor: the decrement stopped shrinking quadratically.
        if (lambda <= 1e-6 && lambda > 0.5 * prev) return it;
        prev = lambda;
        double t = lambda <= 0.25 ? 1.0 : 1.0 / (1.0 + lambda);
        int halvings = 0;
        while (!strictly_feasible(p, y + t * step)) {
            t *= 0.5;
            if (++halvings > 60) throw SolverError("barrier path: cannot keep strict feasibility");
        }
        y += t * step;
    }
    if (lambda > 1e-4) {
        std::ostringstream msg;
        msg << "barrier path: Newton did not converge at mu=" << mu << ", decrement " << lambda;
        throw SolverError(msg.str());
    }
    return it;
}

}  // namespace

PathResult solve(const Problem& p, const VectorXd& y0, const PathConfig& config) {
    if (!strictly_feasible(p, y0)) throw SolverError("barrier path: start is not strictly feasible");
    PathResult out;
    out.y = y0;
    out.barrier_dimension = static_cast<double>(p.linear.size());
    for (const auto& c : p.cones) out.barrier_dimension += static_cast<double>(c.c0.rows());

    double mu = config.mu0;
    while (true) {
        // The first stage also has to center the start, so it gets a larger budget.
        const int budget = out.stages == 0 ? 4 * config.max_newton : config.max_newton;
        VectorXd y = out.y;
        try {
            out.newton_iterations += newton_stage(p, y, mu, budget, config.newton_tol);
        } catch (const SolverError& e) {
            if (out.stages == 0) throw;
            out.completed = false;
            out.failure = e.what();
            break;
        }
        out.y = y;
        ++out.stages;
        out.objective_path.push_back(p.objective.dot(out.y));
        out.mu = mu;
        if (mu <= config.mu_min) break;
        if (config.stop && config.stop(out.y, mu, mu * out.barrier_dimension)) break;
        mu /= config.mu_factor;
    }
    return out;
}

}  // namespace optiprecond::lmi
