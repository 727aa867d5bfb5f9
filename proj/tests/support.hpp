#pragma once

// Shared generators and small oracles for the test suites.  Everything is
// seeded explicitly so failures reproduce.

#include <complex>
#include <random>

#include "gchain/chains.hpp"
#include "gchain/gmatrix.hpp"

namespace testsupport {

using gchain::ComplexMatrix;
using gchain::Matrix;

inline Matrix random_matrix(std::mt19937_64& rng, int dim, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m(r, c) = u(rng);
    return m;
}

inline Matrix random_symmetric(std::mt19937_64& rng, int dim, double lo = -1.0,
                               double hi = 1.0) {
    const Matrix m = random_matrix(rng, dim, lo, hi);
    return (m + m.transpose()) / 2.0;
}

// Valid exchangeable pair: coupling bounded away from singular and the gap
// site - coupling bounded away from the uncertainty boundary.  Every draw
// passes the exchangeable criterion with decisive margins.
struct ValidExchangeablePair {
    Matrix site;
    Matrix coupling;
};

inline ValidExchangeablePair random_valid_exchangeable(std::mt19937_64& rng, int modes) {
    const int dim = 2 * modes;
    std::uniform_real_distribution<double> scale(0.05, 0.25);
    std::uniform_real_distribution<double> shift(0.05, 0.8);

    const Matrix m = random_matrix(rng, dim, -1.0, 1.0);
    const Matrix coupling = m * m.transpose() * scale(rng) + 0.15 * Matrix::Identity(dim, dim);

    const Matrix n = random_matrix(rng, dim, -0.5, 0.5);
    const Matrix site =
        (0.5 + shift(rng)) * Matrix::Identity(dim, dim) + n * n.transpose() + coupling;
    return ValidExchangeablePair{site, coupling};
}

// Site-major Kronecker product with a complex block factor:
// out(r*d + a, s*d + b) = site_weights(r, s) * block(a, b).
inline ComplexMatrix ckron_site(const Matrix& site_weights, const ComplexMatrix& block) {
    const Eigen::Index n = site_weights.rows();
    const Eigen::Index d = block.rows();
    ComplexMatrix out(n * d, n * d);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index s = 0; s < n; ++s)
            out.block(r * d, s * d, d, d) = site_weights(r, s) * block;
    return out;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.cwiseAbs().maxCoeff();
}

} // namespace testsupport
