#include "robust_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gchain {

namespace {

// lambda(m) = c - sigma(c I - m) for any c >= lambda_max: the shift makes
// c I - m positive semidefinite, where singular values and eigenvalues
// coincide, so the signed spectrum is recovered from singular values
// alone.  c is the infinity norm, an upper bound on the spectral radius.
Vector eigenvalues_by_shifted_svd(const Matrix& m, const char* what) {
    const double c = m.cwiseAbs().rowwise().sum().maxCoeff();
    const Matrix shifted = c * Matrix::Identity(m.rows(), m.cols()) - m;
    Eigen::BDCSVD<Matrix> svd(shifted);
    if (svd.info() != Eigen::Success)
        throw NumericFailure(std::string(what) + ": eigenvalue iteration failed");
    const Vector& sv = svd.singularValues(); // descending
    Vector out(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        out(i) = c - sv(i); // ascending
    return out;
}

} // namespace

Vector symmetric_eigenvalues(const Matrix& m, const char* what) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() == Eigen::Success)
        return es.eigenvalues();
    return eigenvalues_by_shifted_svd(m, what);
}

double symmetric_spectral_norm(const Matrix& m, const char* what) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() == Eigen::Success) {
        const Vector& ev = es.eigenvalues();
        return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    }
    // ||m||_2 is the largest singular value; no shift needed.
    Eigen::BDCSVD<Matrix> svd(m);
    if (svd.info() != Eigen::Success)
        throw NumericFailure(std::string(what) + ": eigenvalue iteration failed");
    return svd.singularValues()(0);
}

} // namespace gchain
