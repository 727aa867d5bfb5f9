#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gchain/errors.hpp"

// Real covariance-matrix tests for Gaussian states of m bosonic modes.
//
// Quadratures are interleaved throughout: row/column order is
// (q_1, p_1, q_2, p_2, ..., q_m, p_m), so one mode occupies one contiguous
// 2x2 diagonal block and restricting to a subset of modes is a contiguous
// block selection.

namespace gchain {

using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultSymTol = 1e-10;
inline constexpr double kDefaultPsdTol = 1e-9;
inline constexpr double kDefaultMonoTol = 1e-7;

// Standard symplectic form J, block diagonal with [[0,1],[-1,0]] per mode.
// J is antisymmetric and J^T J = I.
Matrix symplectic_form(int modes);

// Real symmetric matrix of even dimension 2m, the candidate covariance of an
// m-mode state.  Construction validates shape and symmetry; everything else
// is checked by the operations that need it.
class CovMatrix {
public:
    explicit CovMatrix(Matrix entries, double sym_tol = kDefaultSymTol);

    int modes() const { return static_cast<int>(entries_.rows()) / 2; }
    Eigen::Index dim() const { return entries_.rows(); }
    const Matrix& matrix() const { return entries_; }

    double spectral_norm() const;

private:
    Matrix entries_;
};

// Even-dimensional square block used to assemble chain covariances.  Unlike
// CovMatrix it admits non-symmetric entries; operations that require symmetry
// test it explicitly.
class SymBlock {
public:
    explicit SymBlock(Matrix entries);

    int modes() const { return static_cast<int>(entries_.rows()) / 2; }
    Eigen::Index dim() const { return entries_.rows(); }
    const Matrix& matrix() const { return entries_; }

    bool is_symmetric(double tol = kDefaultSymTol) const;
    // max_ij |M - M^T|
    double asymmetry() const;
    SymBlock symmetrized() const;

private:
    Matrix entries_;
};

// Outcome of the uncertainty-relation test S + (i/2) J >= 0.
//
// ok is decided against a relative threshold: the minimum eigenvalue of the
// Hermitian matrix S + (i/2) J must be >= -tol * (1 + ||S||_2).  On failure
// `witness` holds a unit eigenvector of the most negative eigenvalue.
struct GMatrixCheck {
    bool ok = false;
    double min_eigenvalue = 0.0;
    double threshold = 0.0;
    Eigen::VectorXcd witness;

    explicit operator bool() const { return ok; }
};

GMatrixCheck is_g_matrix(const CovMatrix& S, double tol = kDefaultPsdTol);

// Symplectic eigenvalues of a positive definite covariance matrix: the m
// moduli of the eigenvalues of J*C, each repeated twice in spec(J*C).
// Values are reported in descending order.  C > 0 describes a valid state
// iff minimum() >= 1/2 (up to tolerance).
class SymplecticSpectrum {
public:
    explicit SymplecticSpectrum(std::vector<double> descending);

    const std::vector<double>& values() const { return values_; }
    double minimum() const { return values_.back(); }
    std::size_t size() const { return values_.size(); }

private:
    std::vector<double> values_;
};

// Computed as the positive spectrum of the Hermitian matrix
// i C^{1/2} J C^{1/2}, whose eigenvalues come in (+nu, -nu) pairs.  A pair
// mismatch beyond 1e-9 * (1 + ||C||_2) raises NumericFailure.  C must be
// positive definite relative to psd_tol.
SymplecticSpectrum symplectic_spectrum(const CovMatrix& C,
                                       double psd_tol = kDefaultPsdTol);

// g(nu) = (nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2), the von Neumann
// entropy of a single mode with symplectic eigenvalue nu (natural log, nats).
// g(1/2) = 0 by continuity; inputs below 1/2 are treated as 1/2.
double entropy_g(double nu);

// Sum of entropy_g over the symplectic spectrum.  Eigenvalues in
// [1/2 - psd_tol*(1+||C||_2), 1/2) are clamped to 1/2; anything lower means
// the state is invalid and raises std::invalid_argument.
double von_neumann_entropy(const CovMatrix& C, double psd_tol = kDefaultPsdTol);
double von_neumann_entropy(const SymplecticSpectrum& spectrum, double nu_tol);

} // namespace gchain
