#pragma once

#include <optional>
#include <string>

#include "center.hpp"
#include "dsdp.hpp"
#include "potential.hpp"

namespace optiprecond {

enum class Method { bisection, potential_reduction, dsdp, automatic };

struct OptimalRequest {
    Method method = Method::automatic;
    double epsilon = 1e-3;  // absolute kappa tolerance for bisection
    std::optional<DiagScaling> warm_start;
    PRConfig pr;
    PRMode pr_mode = PRMode::approximate;
    DsdpConfig dsdp;
    FeasibilityConfig feasibility;
    std::string name;  // copied into the report
};

// Scaling d with kappa(D^{-1/2} M D^{-1/2}) minimal.
Solution optimal_right(const MatrixXd& m, const OptimalRequest& req = {});
// Scaling d with kappa(A^T D A) minimal.
Solution optimal_left(const RectMatrix& a, const OptimalRequest& req = {});
// Bisection on kappa with the phase-I oracle; two-sided result.
Solution bisect_two_sided(const RectMatrix& a, const OptimalRequest& req = {});
// Alternating left and right solves on the running scaled matrix.
Solution alternate_two_sided(const RectMatrix& a, const OptimalRequest& req = {});

// Bisection on kappa for the right problem using feasibility_margin.
Solution bisect_right(const MatrixXd& m, const OptimalRequest& req = {});

// ceil(log2((kappa0 - 1) / eps))
long bisection_bound(double kappa0, double eps);

}  // namespace optiprecond
