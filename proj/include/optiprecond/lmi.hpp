#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace optiprecond::lmi {

// C(y) = c0 + sum_k weight_k * y[var_k] * v_k v_k^T + sum_j y[dense_var_j] * F_j, kept PD.
struct Cone {
    MatrixXd c0;
    MatrixXd generators;  // columns v_k
    std::vector<Eigen::Index> generator_var;
    VectorXd generator_weight;
    std::vector<std::pair<Eigen::Index, MatrixXd>> dense;
};

// c0 + sum g_i y[var_i] > 0
struct Linear {
    double c0 = 0.0;
    std::vector<std::pair<Eigen::Index, double>> terms;
};

struct Problem {
    Eigen::Index num_vars = 0;
    VectorXd objective;
    std::vector<Cone> cones;
    std::vector<Linear> linear;
};

struct PathConfig {
    double mu0 = 1.0;
    double mu_factor = 5.0;
    double mu_min = 1e-9;
    int max_newton = 50;
    double newton_tol = 1e-9;
    // Called after each stage with (y, mu, mu * barrier dimension); true stops the path.
    std::function<bool(const VectorXd&, double, double)> stop;
};

struct PathResult {
    VectorXd y;
    double mu = 0.0;
    int stages = 0;
    int newton_iterations = 0;
    double barrier_dimension = 0.0;
    std::vector<double> objective_path;  // b^T y at the end of each stage
    bool completed = true;   // false: a later stage failed, y is the last good stage
    std::string failure;
};

MatrixXd cone_value(const Cone& c, const VectorXd& y);
bool strictly_feasible(const Problem& p, const VectorXd& y);

// Maximizes b^T y + mu * (sum log det C_j(y) + sum log l_i(y)) for a decreasing
// sequence of mu, warm-starting each stage from the previous one. Throws if the
// first stage fails; a later failure returns the last completed stage.
PathResult solve(const Problem& p, const VectorXd& y0, const PathConfig& config = {});

}  // namespace optiprecond::lmi
