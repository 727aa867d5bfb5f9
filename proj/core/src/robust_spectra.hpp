#pragma once

#include "gchain/gmatrix.hpp"

// Internal eigenvalue helpers that survive spectra the iterative
// tridiagonal solver cannot resolve.  Eigen's SelfAdjointEigenSolver
// reports NoConvergence on some matrices with large eigenvalue
// multiplicity (seen at multiplicity ~160); these entry points retry
// with a shifted-SVD route before giving up.

namespace gchain {

// Ascending eigenvalues of a symmetric matrix.  `what` prefixes the
// NumericFailure raised when both methods fail.
Vector symmetric_eigenvalues(const Matrix& m, const char* what);

// Largest |eigenvalue| of a symmetric matrix, with the same retry.
double symmetric_spectral_norm(const Matrix& m, const char* what);

} // namespace gchain
