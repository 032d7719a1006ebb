#pragma once

#include "types.hpp"

namespace optiprecond {

// values = diag(M); apply as D^{-1/2} M D^{-1/2}.
DiagScaling jacobi_scaling(const MatrixXd& m);

// values[j] = squared l2 norm of column j of A.
DiagScaling column_norm_scaling(const RectMatrix& a);

struct RuizResult {
    DiagScaling scaling;
    int iterations = 0;
};

// Symmetric l-infinity Ruiz iteration on M. Returns the accumulated squared
// scale, so it is applied like every other right scaling.
RuizResult ruiz_equilibrate(const MatrixXd& m, int max_iters = 100, double tol = 1e-6);

}  // namespace optiprecond
