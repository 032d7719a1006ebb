#pragma once

#include <json.hpp>

#include <limits>
#include <string>

#include "linalg.hpp"

namespace optiprecond {

using RectMatrix = MatrixXd;

enum class Side { left, right, two_sided };

std::string to_string(Side side);

// Positive diagonal scaling.
// Right values d act as A D^{-1/2}, so the Gram becomes D^{-1/2} M D^{-1/2}.
// Left values act as D^{1/2} A, so the Gram becomes A^T D A.
// A two-sided scaling carries both: values on the right, left_values on the left.
struct DiagScaling {
    VectorXd values;
    Side side = Side::right;
    VectorXd left_values;
};

struct SolveReport {
    std::string matrix;
    std::string method;
    double kappa_before = std::numeric_limits<double>::quiet_NaN();
    double kappa_after = std::numeric_limits<double>::quiet_NaN();
    long iterations = 0;
    double wall_time_seconds = 0.0;
    nlohmann::json extra = nlohmann::json::object();
};

struct Solution {
    DiagScaling scaling;
    SolveReport report;
};

// Gram matrix of A after applying a scaling; right scalings may be applied to M directly.
MatrixXd scaled_gram(const RectMatrix& a, const DiagScaling& s);
MatrixXd scaled_gram_right(const MatrixXd& m, const VectorXd& d);

// Rescale so the largest entry is one; leaves the scaled condition number unchanged.
VectorXd normalize_max(const VectorXd& d);

}  // namespace optiprecond
