#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optimal.hpp"

namespace optiprecond {

struct PcgResult {
    long iterations = 0;
    bool converged = false;
    double final_relative_residual = 0.0;
    std::vector<double> residual_history;
};

// Standard normal entries from a seeded generator.
VectorXd seeded_rhs(Eigen::Index n, std::uint64_t seed);

// CG on D^{-1/2} M D^{-1/2} y = D^{-1/2} b from y = 0. max_iters <= 0 means 10 n.
PcgResult pcg(const MatrixXd& m, const VectorXd& rhs, const std::optional<DiagScaling>& precond,
              double tol = 1e-6, long max_iters = 0);

using NamedScaling = std::pair<std::string, DiagScaling>;

// One report per scaling, preceded by "none"; every run shares the seeded rhs.
std::vector<SolveReport> pcg_compare(const MatrixXd& m, const std::vector<NamedScaling>& scalings,
                                     double tol = 1e-6, std::uint64_t seed = 0,
                                     const std::string& matrix_name = "");

struct SamplingPoint {
    double ratio = 1.0;
    long rows = 0;
    double gram_gap = 0.0;  // ||A^T A - (m / rows) At^T At||_F
    double kappa_preconditioned = 0.0;  // full Gram under the sampled scaling
    bool rank_deficient = false;
};

std::vector<SamplingPoint> sampling_sweep(const RectMatrix& a, const std::vector<double>& ratios,
                                          std::uint64_t seed, const OptimalRequest& req = {});

struct ConcentrationRow {
    long n = 0;
    double mean_gap = 0.0;
    double sqrt_p_over_n = 0.0;
    int trials = 0;
};

// Rows drawn from N(0, sigma); gap between the normalized condition numbers of
// the raw and column-normalized sample Grams.
std::vector<ConcentrationRow> concentration_experiment(const MatrixXd& sigma,
                                                       const std::vector<long>& n_grid, int trials,
                                                       std::uint64_t seed);

}  // namespace optiprecond
