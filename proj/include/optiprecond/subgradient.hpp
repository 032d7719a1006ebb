#pragma once

#include "types.hpp"

namespace optiprecond {

enum class StepRule { inverse, inverse_sqrt };  // 1/k or 1/sqrt(k)

struct SubgradConfig {
    double upper_bound = 100.0;  // box [1, C] on d
    StepRule step = StepRule::inverse_sqrt;
    int max_iters = 5000;
};

// Subgradient of log kappa(D M D) in d, D = diag(d).
VectorXd logcond_subgradient(const MatrixXd& m, const VectorXd& d);

// Projected subgradient descent on log kappa(D M D) over d in [1, C]^n.
// The returned scaling follows the right-scaling convention, values = 1/d^2.
Solution projected_subgradient_solve(const MatrixXd& m, const SubgradConfig& config = {});

}  // namespace optiprecond
