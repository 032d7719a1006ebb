#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "errors.hpp"

namespace optiprecond {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Mat<double>;
using VectorXd = Vec<double>;

template <class Scalar>
struct EigDecomp {
    Vec<Scalar> values;   // nonincreasing
    Mat<Scalar> vectors;  // column k pairs with values(k)
};

template <class Scalar>
struct CholFactor {
    Mat<Scalar> lower;
    bool success = false;
};

template <class Scalar>
Mat<Scalar> symmetrize(const Mat<Scalar>& m) {
    return (m + m.transpose()) / Scalar(2);
}

template <class Scalar>
EigDecomp<Scalar> sym_eig(const Mat<Scalar>& m) {
    if (m.rows() != m.cols()) throw InputError("sym_eig: matrix is not square");
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(m);
    if (es.info() != Eigen::Success)
        throw SolverError("sym_eig: no convergence for order " + std::to_string(m.rows()));
    EigDecomp<Scalar> out;
    out.values = es.eigenvalues().reverse();
    out.vectors = es.eigenvectors().rowwise().reverse();
    return out;
}

// Eigenvalues only, ascending. Cheaper when vectors are not needed.
template <class Scalar>
Vec<Scalar> sym_eigenvalues(const Mat<Scalar>& m) {
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw SolverError("sym_eig: no convergence for order " + std::to_string(m.rows()));
    return es.eigenvalues();
}

template <class Scalar>
Scalar min_eigenvalue(const Mat<Scalar>& m) {
    return sym_eigenvalues(m)(0);
}

template <class Scalar>
CholFactor<Scalar> cholesky(const Mat<Scalar>& m) {
    CholFactor<Scalar> out;
    const Eigen::Index n = m.rows();
    out.lower = Mat<Scalar>::Zero(n, n);
    if (n == 0 || m.cols() != n) return out;
    const Scalar max_diag = m.diagonal().maxCoeff();
    if (!(max_diag > Scalar(0))) return out;
    const Scalar floor = Scalar(1e-13) * max_diag;
    Mat<Scalar>& L = out.lower;
    for (Eigen::Index j = 0; j < n; ++j) {
        Scalar pivot = m(j, j) - L.row(j).head(j).squaredNorm();
        if (!(pivot > floor)) return out;
        L(j, j) = std::sqrt(pivot);
        for (Eigen::Index i = j + 1; i < n; ++i)
            L(i, j) = (m(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / L(j, j);
    }
    out.success = true;
    return out;
}

// True when every eigenvalue exceeds 1e-12 of the largest one.
template <class Scalar>
bool is_positive_definite(const Mat<Scalar>& m) {
    Eigen::LLT<Mat<Scalar>> llt(m);
    if (llt.info() != Eigen::Success) return false;
    Vec<Scalar> w = sym_eigenvalues(m);
    return w(0) > Scalar(1e-12) * w(w.size() - 1);
}

template <class Scalar>
Scalar condition_number(const Mat<Scalar>& m) {
    Vec<Scalar> w = sym_eigenvalues(m);
    const Scalar lo = w(0), hi = w(w.size() - 1);
    if (!(lo > Scalar(0)))
        throw NotPositiveDefinite("condition_number: smallest eigenvalue is not positive");
    return hi / lo;
}

template <class Scalar>
Mat<Scalar> psd_inverse(const Mat<Scalar>& m) {
    Eigen::LLT<Mat<Scalar>> llt(m);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("psd_inverse: matrix is not positive definite");
    Mat<Scalar> inv = llt.solve(Mat<Scalar>::Identity(m.rows(), m.cols()));
    return symmetrize(inv);
}

template <class Scalar>
Mat<Scalar> psd_sqrt(const Mat<Scalar>& m) {
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(m);
    if (es.info() != Eigen::Success) throw SolverError("psd_sqrt: eigensolver failed");
    Vec<Scalar> w = es.eigenvalues();
    const Scalar top = std::max(Scalar(0), w.maxCoeff());
    if (w.minCoeff() < Scalar(-1e-10) * top)
        throw NotPositiveDefinite("psd_sqrt: matrix has a negative eigenvalue");
    Vec<Scalar> r = w.cwiseMax(Scalar(0)).cwiseSqrt();
    return es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose();
}

template <class Scalar>
Mat<Scalar> psd_inv_sqrt(const Mat<Scalar>& m) {
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(m);
    if (es.info() != Eigen::Success) throw SolverError("psd_inv_sqrt: eigensolver failed");
    Vec<Scalar> w = es.eigenvalues();
    if (!(w.minCoeff() > Scalar(0)))
        throw NotPositiveDefinite("psd_inv_sqrt: matrix is not positive definite");
    Vec<Scalar> r = w.cwiseSqrt().cwiseInverse();
    return es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose();
}

// ||b^{1/2} a b^{1/2} - I||_F
template <class Scalar>
Scalar proximity_delta(const Mat<Scalar>& a, const Mat<Scalar>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InputError("proximity_delta: dimension mismatch");
    Eigen::LLT<Mat<Scalar>> llt(b);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("proximity_delta: second argument is not positive definite");
    Mat<Scalar> s = psd_sqrt(b);
    Mat<Scalar> p = s * a * s;
    p.diagonal().array() -= Scalar(1);
    return p.norm();
}

template <class Scalar>
Scalar log_det(const Mat<Scalar>& m) {
    Eigen::LLT<Mat<Scalar>> llt(m);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("log_det: matrix is not positive definite");
    Mat<Scalar> L = llt.matrixL();
    return Scalar(2) * L.diagonal().array().log().sum();
}

template <class Scalar>
Scalar trace_product(const Mat<Scalar>& a, const Mat<Scalar>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InputError("trace_product: dimension mismatch");
    return a.cwiseProduct(b).sum();
}

// D^{-1/2} M D^{-1/2} for a positive diagonal d.
template <class Scalar>
Mat<Scalar> congruence(const Mat<Scalar>& m, const Vec<Scalar>& d) {
    Vec<Scalar> s = d.cwiseSqrt().cwiseInverse();
    return s.asDiagonal() * m * s.asDiagonal();
}

}  // namespace optiprecond
