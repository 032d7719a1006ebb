#include "optiprecond/heuristics.hpp"

namespace optiprecond {

DiagScaling jacobi_scaling(const MatrixXd& m) {
    VectorXd d = m.diagonal();
    if (!(d.array() > 0.0).all() || !d.allFinite())
        throw InputError("jacobi_scaling: diagonal entries must be positive");
    return {d, Side::right, {}};
}

DiagScaling column_norm_scaling(const RectMatrix& a) {
    VectorXd d = a.colwise().squaredNorm().transpose();
    if (!(d.array() > 0.0).all()) throw InputError("column_norm_scaling: zero column");
    return {d, Side::right, {}};
}

RuizResult ruiz_equilibrate(const MatrixXd& m, int max_iters, double tol) {
    if (max_iters < 1) throw InputError("ruiz_equilibrate: max_iters must be positive");
    const Eigen::Index n = m.rows();
    VectorXd s = VectorXd::Ones(n);
    RuizResult out;
    for (int it = 0; it <= max_iters; ++it) {
        MatrixXd scaled = s.asDiagonal() * m * s.asDiagonal();
        VectorXd r = scaled.cwiseAbs().rowwise().maxCoeff();
        if (!(r.array() > 0.0).all()) throw InputError("ruiz_equilibrate: zero row");
        if (((r.array() - 1.0).abs() <= tol).all() || it == max_iters) break;
        s.array() /= r.array().sqrt();
        out.iterations = it + 1;
    }
    out.scaling = {s.cwiseAbs2().cwiseInverse(), Side::right, {}};
    return out;
}

}  // namespace optiprecond
