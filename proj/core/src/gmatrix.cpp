#include "gchain/gmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "robust_spectra.hpp"

namespace gchain {

namespace {

using Complex = std::complex<double>;

std::string dim_string(Eigen::Index rows, Eigen::Index cols) {
    std::ostringstream os;
    os << rows << "x" << cols;
    return os.str();
}

// Hermitian analogue of the shifted-SVD retry in robust_spectra.cpp:
// c I - h is positive semidefinite for c >= lambda_max, so its largest
// singular value is c - lambda_min(h) and the matching right singular
// vector is an eigenvector of lambda_min(h).
double hermitian_min_eig_shifted_svd(const ComplexMatrix& h, const char* what,
                                     Eigen::VectorXcd* witness) {
    const double c = h.cwiseAbs().rowwise().sum().maxCoeff();
    const ComplexMatrix shifted =
        c * ComplexMatrix::Identity(h.rows(), h.cols()) - h;
    const unsigned options = witness != nullptr ? Eigen::ComputeThinV : 0;
    Eigen::BDCSVD<ComplexMatrix> svd(shifted, options);
    if (svd.info() != Eigen::Success)
        throw NumericFailure(std::string(what) + ": eigenvalue iteration failed");
    if (witness != nullptr)
        *witness = svd.matrixV().col(0);
    return c - svd.singularValues()(0);
}

void require_even_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols())
        throw std::invalid_argument(std::string(what) + ": matrix must be square, got " +
                                    dim_string(m.rows(), m.cols()));
    if (m.rows() == 0 || m.rows() % 2 != 0)
        throw std::invalid_argument(std::string(what) +
                                    ": dimension must be a positive even number, got " +
                                    std::to_string(m.rows()));
}

} // namespace

Matrix symplectic_form(int modes) {
    if (modes < 1)
        throw std::invalid_argument("symplectic_form: modes must be >= 1, got " +
                                    std::to_string(modes));
    Matrix j = Matrix::Zero(2 * modes, 2 * modes);
    for (int a = 0; a < modes; ++a) {
        j(2 * a, 2 * a + 1) = 1.0;
        j(2 * a + 1, 2 * a) = -1.0;
    }
    return j;
}

CovMatrix::CovMatrix(Matrix entries, double sym_tol) : entries_(std::move(entries)) {
    require_even_square(entries_, "CovMatrix");
    const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
    const double scale = 1.0 + entries_.cwiseAbs().maxCoeff();
    if (asym > sym_tol * scale)
        throw std::invalid_argument("CovMatrix: matrix is not symmetric (max asymmetry " +
                                    std::to_string(asym) + ")");
    // Work with the exactly symmetric part from here on.
    entries_ = ((entries_ + entries_.transpose()) / 2.0).eval();
}

double CovMatrix::spectral_norm() const {
    return symmetric_spectral_norm(entries_, "spectral norm");
}

SymBlock::SymBlock(Matrix entries) : entries_(std::move(entries)) {
    require_even_square(entries_, "SymBlock");
}

bool SymBlock::is_symmetric(double tol) const {
    const double scale = 1.0 + entries_.cwiseAbs().maxCoeff();
    return asymmetry() <= tol * scale;
}

double SymBlock::asymmetry() const {
    return (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
}

SymBlock SymBlock::symmetrized() const {
    return SymBlock((entries_ + entries_.transpose()) / 2.0);
}

GMatrixCheck is_g_matrix(const CovMatrix& S, double tol) {
    if (!(tol > 0.0))
        throw std::invalid_argument("is_g_matrix: tolerance must be positive");
    const Matrix j = symplectic_form(S.modes());

    ComplexMatrix h = S.matrix().cast<Complex>();
    h += Complex(0.0, 0.5) * j.cast<Complex>();

    GMatrixCheck out;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = es.info() == Eigen::Success
                             ? es.eigenvalues()(0)
                             : hermitian_min_eig_shifted_svd(h, "is_g_matrix", nullptr);
    out.threshold = -tol * (1.0 + S.spectral_norm());
    out.ok = out.min_eigenvalue >= out.threshold;
    if (!out.ok) {
        // Recompute with vectors only on failure; the witness certifies
        // <v, (S + (i/2)J) v> = min_eigenvalue < 0.
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> ev(h);
        if (ev.info() == Eigen::Success)
            out.witness = ev.eigenvectors().col(0);
        else
            hermitian_min_eig_shifted_svd(h, "is_g_matrix", &out.witness);
    }
    return out;
}

SymplecticSpectrum::SymplecticSpectrum(std::vector<double> descending)
    : values_(std::move(descending)) {
    if (values_.empty())
        throw std::invalid_argument("SymplecticSpectrum: empty spectrum");
    if (!std::is_sorted(values_.rbegin(), values_.rend()))
        throw std::invalid_argument("SymplecticSpectrum: values must be in descending order");
}

SymplecticSpectrum symplectic_spectrum(const CovMatrix& C, double psd_tol) {
    const Eigen::Index d = C.dim();
    const int m = C.modes();

    Eigen::SelfAdjointEigenSolver<Matrix> es(C.matrix());
    const bool have_root = es.info() == Eigen::Success;
    const Vector lam = have_root
                           ? Vector(es.eigenvalues())
                           : symmetric_eigenvalues(C.matrix(), "symplectic_spectrum");
    const double norm = std::max(std::abs(lam(0)), std::abs(lam(d - 1)));
    if (lam(0) <= psd_tol * (1.0 + norm))
        throw std::invalid_argument(
            "symplectic_spectrum: matrix is not positive definite (min eigenvalue " +
            std::to_string(lam(0)) + ")");
    const double pair_tol = 1e-9 * (1.0 + norm);

    if (have_root) {
        const Matrix root = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
                            es.eigenvectors().transpose();

        // i C^{1/2} J C^{1/2} is Hermitian with spectrum {+-nu_a}.
        ComplexMatrix k =
            Complex(0.0, 1.0) * (root * symplectic_form(m) * root).cast<Complex>();
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> ek(k, Eigen::EigenvaluesOnly);
        if (ek.info() == Eigen::Success) {
            const Vector& mu = ek.eigenvalues(); // ascending, mu(a) = -mu(d-1-a) ideally

            std::vector<double> nus;
            nus.reserve(m);
            for (int a = 0; a < m; ++a) {
                const double plus = mu(d - 1 - a);
                const double minus = mu(a);
                if (std::abs(plus + minus) > pair_tol)
                    throw NumericFailure(
                        "symplectic_spectrum: +/- eigenvalue pairing mismatch " +
                        std::to_string(std::abs(plus + minus)) + " exceeds " +
                        std::to_string(pair_tol));
                nus.push_back((plus - minus) / 2.0);
            }
            // mu ascending makes nus descending already; enforce exactly.
            std::sort(nus.begin(), nus.end(), std::greater<double>());
            return SymplecticSpectrum(std::move(nus));
        }
    }

    // Retry for spectra the iterative solver cannot resolve: with the
    // Cholesky factor C = L L^T, the matrix L^T J L is similar to J C, so
    // it shares the {+-i nu_a} spectrum, and being real skew-symmetric its
    // singular values are the nu_a in adjacent duplicate pairs.
    Eigen::LLT<Matrix> llt(C.matrix());
    if (llt.info() != Eigen::Success)
        throw NumericFailure("symplectic_spectrum: Cholesky factorization failed");
    const Matrix l = llt.matrixL();
    const Matrix w = l.transpose() * symplectic_form(m) * l;
    const Matrix skew = (w - w.transpose()) / 2.0;
    Eigen::BDCSVD<Matrix> svd(skew);
    if (svd.info() != Eigen::Success)
        throw NumericFailure("symplectic_spectrum: singular value iteration failed");
    const Vector& sv = svd.singularValues(); // descending

    std::vector<double> nus;
    nus.reserve(m);
    for (int a = 0; a < m; ++a) {
        const double hi = sv(2 * a);
        const double lo = sv(2 * a + 1);
        if (hi - lo > pair_tol)
            throw NumericFailure("symplectic_spectrum: +/- eigenvalue pairing mismatch " +
                                 std::to_string(hi - lo) + " exceeds " +
                                 std::to_string(pair_tol));
        nus.push_back((hi + lo) / 2.0);
    }
    // sv descending keeps the pair means descending.
    return SymplecticSpectrum(std::move(nus));
}

double entropy_g(double nu) {
    const double a = nu + 0.5;
    const double b = nu - 0.5;
    if (b <= 0.0)
        return 0.0; // continuity at the vacuum value nu = 1/2
    return a * std::log(a) - b * std::log(b);
}

double von_neumann_entropy(const SymplecticSpectrum& spectrum, double nu_tol) {
    double total = 0.0;
    for (double nu : spectrum.values()) {
        if (nu < 0.5 - nu_tol)
            throw std::invalid_argument(
                "von_neumann_entropy: symplectic eigenvalue " + std::to_string(nu) +
                " below 1/2; not a valid state");
        total += entropy_g(nu);
    }
    return total;
}

double von_neumann_entropy(const CovMatrix& C, double psd_tol) {
    const SymplecticSpectrum spec = symplectic_spectrum(C, psd_tol);
    const double nu_tol = psd_tol * (1.0 + C.spectral_norm());
    return von_neumann_entropy(spec, nu_tol);
}

} // namespace gchain
