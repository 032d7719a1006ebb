#pragma once

#include <optional>
#include <vector>

#include "center.hpp"

namespace optiprecond {

// Interior point state around the barrier center for a given kappa.
// In diagonal mode D and Z are diagonal and diag(Z + kappa Y - X) = 0 is kept;
// in full mode D is any symmetric matrix and Z + kappa Y = X is kept.
struct CenterState {
    double kappa = 0.0;
    MatrixXd D, R, S, X, Y, Z;
    double delta_rx = 0.0, delta_sy = 0.0, delta_dz = 0.0;
    bool diagonal = true;

    double max_delta() const { return std::max({delta_rx, delta_sy, delta_dz}); }
};

// Geometric means: U X U = R, V Y V = S, W Z W = D.
struct NTScalings {
    MatrixXd U, V, W;
};

struct PRConfig {
    double beta = 0.1;
    double delta_cap = 0.25;
    double kappa_tol = 1e-6;  // on the certified relative gap
    int max_outer = 10000;
};

enum class PRMode { exact, approximate };

struct PRResult {
    Solution solution;
    double kappa = 0.0;        // last kappa of the path
    double lower_bound = 0.0;  // certified lower bound on the optimum
    bool converged = false;
    int recenters = 0;
    std::vector<double> potential;  // one entry per accepted step, plus the start
    std::vector<double> kappa_path;
    std::vector<double> beta_path;  // beta used by each accepted step
};

// log det(M - D) + log det(kappa D - M) + log det D for symmetric D.
double potential(const MatrixXd& m, const MatrixXd& D, double kappa);

// Larger root c of -3 kappa c^2 + (2 kappa + 2) c - 1 = 0; D = c M is the
// center when D ranges over all symmetric matrices.
double full_center_coefficient(double kappa);

CenterState make_state(const MatrixXd& m, const MatrixXd& D, const MatrixXd& X, const MatrixXd& Y,
                       const MatrixXd& Z, double kappa, bool diagonal);
// X = (M - D)^{-1}, Y = (kappa D - M)^{-1}, Z from the linear identity.
CenterState make_center_state(const MatrixXd& m, const MatrixXd& D, double kappa, bool diagonal);

MatrixXd geometric_mean(const MatrixXd& p, const MatrixXd& q);
NTScalings nt_scalings(const CenterState& st);

// beta / Tr(D S^{-1})
double delta_kappa(const CenterState& st, double beta);

// kappa -= dk; S -= dk D; Z += dk Y (diagonal part only in diagonal mode).
CenterState shift_state(const CenterState& st, double dk);

// One Nesterov-Todd Newton step at st.kappa == kappa1.
CenterState nt_step(const MatrixXd& m, const CenterState& st, double kappa1);

// Tr((kappa Y + Z) M) / Tr(X M), valid when X, Y, Z are PSD.
std::optional<double> dual_lower_bound(const MatrixXd& m, const CenterState& st);

PRResult solve_right_pr(const MatrixXd& m, const PRConfig& config = {},
                        PRMode mode = PRMode::approximate);

}  // namespace optiprecond
