#pragma once

#include "lmi.hpp"
#include "types.hpp"

namespace optiprecond {

// Diagonal D = diag(d) inside the region M - D > 0, kappa D - M > 0, D > 0.
struct BarrierPoint {
    VectorXd d;
    double kappa = 0.0;
};

struct CenterResult {
    BarrierPoint point;
    int iterations = 0;
    double decrement = 0.0;  // Newton decrement at exit
};

struct FeasibilityConfig {
    double tol = 1e-7;  // |margin| <= tol counts as the boundary
    lmi::PathConfig path{1.0, 5.0, 1e-11, 50, 1e-9, {}};
    // Stop as soon as the sign of the margin is settled.
    bool decide_only = false;
};

struct FeasibilityResult {
    double margin = 0.0;
    VectorXd witness;       // d, or d2 in the two-sided problem
    VectorXd left_witness;  // d1 in the two-sided problem
    bool converged = false;
};

// Smallest slack of each cone: min d, lambda_min(M - D), lambda_min(kappa D - M).
Eigen::Vector3d cone_slacks(const MatrixXd& m, const BarrierPoint& p);
bool strictly_feasible(const MatrixXd& m, const BarrierPoint& p);

// log det(M - D) + log det(kappa D - M) + sum log d
double barrier_value(const MatrixXd& m, const BarrierPoint& p);
VectorXd barrier_gradient(const MatrixXd& m, const BarrierPoint& p);
MatrixXd barrier_hessian(const MatrixXd& m, const BarrierPoint& p);

// Damped Newton maximization of the barrier over diagonal D. Stops when the
// Newton decrement drops to tol.
CenterResult compute_center(const MatrixXd& m, double kappa, const VectorXd& start,
                            double tol = 1e-8, int max_iters = 200);

// d = c * ones with c = sqrt(lambda_1 lambda_n / kappa).
BarrierPoint initial_feasible_point(const MatrixXd& m, double kappa);

// max s with M - D >= sI, kappa D - M >= sI, D >= sI.
FeasibilityResult feasibility_margin(const MatrixXd& m, double kappa,
                                     const FeasibilityConfig& config = {});

// max s with A^T D1 A - D2 >= sI, kappa D2 - A^T D1 A >= sI, D1 >= (1 + s) I,
// d1 <= 1e4, with A scaled to unit spectral norm. The witness is mapped back to
// the original A and rescaled so that D1 >= I.
FeasibilityResult two_sided_feasibility(const RectMatrix& a, double kappa,
                                        const FeasibilityConfig& config = {});

}  // namespace optiprecond
