#include "optiprecond/types.hpp"

namespace optiprecond {

std::string to_string(Side side) {
    switch (side) {
        case Side::left: return "left";
        case Side::right: return "right";
        case Side::two_sided: return "two";
    }
    return "right";
}

MatrixXd scaled_gram_right(const MatrixXd& m, const VectorXd& d) {
    return congruence<double>(m, d);
}

MatrixXd scaled_gram(const RectMatrix& a, const DiagScaling& s) {
    switch (s.side) {
        case Side::right:
            return scaled_gram_right(MatrixXd(a.transpose() * a), s.values);
        case Side::left:
            return a.transpose() * s.values.asDiagonal() * a;
        case Side::two_sided: {
            MatrixXd g = a.transpose() * s.left_values.asDiagonal() * a;
            return scaled_gram_right(g, s.values);
        }
    }
    return {};
}

VectorXd normalize_max(const VectorXd& d) {
    if (d.size() == 0) return d;
    return d / d.maxCoeff();
}

}  // namespace optiprecond
