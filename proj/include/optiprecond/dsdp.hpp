#pragma once

#include <vector>

#include "lmi.hpp"
#include "types.hpp"

namespace optiprecond {

// max tau over diagonal d with one-sided cone constraints.
// right: diag(d) <= M and tau M <= diag(d), d in R^n.
// left:  sum d_i a_i a_i^T <= I and tau I <= sum d_i a_i a_i^T, d in R^m.
struct DsdpProblem {
    Side side = Side::right;
    MatrixXd gram;  // right: M
    RectMatrix a;   // left: A
    Eigen::Index dim_d = 0;
};

struct DsdpConfig {
    lmi::PathConfig path{1.0, 5.0, 1e-9, 50, 1e-9, {}};
};

struct DsdpResult {
    double tau = 0.0;
    VectorXd d;
    SolveReport report;
    std::vector<double> tau_path;  // tau at the end of each barrier stage
};

DsdpProblem build_right(const MatrixXd& m);
DsdpProblem build_left(const RectMatrix& a);

DsdpResult barrier_path_solve(const DsdpProblem& p, const DsdpConfig& config = {});

}  // namespace optiprecond
