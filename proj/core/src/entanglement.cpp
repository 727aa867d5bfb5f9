#include "gchain/entanglement.hpp"

#include <cmath>

namespace gchain {

TwoModeCov::TwoModeCov(Matrix entries, double sym_tol)
    : cov_(std::move(entries), sym_tol) {
    if (cov_.dim() != 4)
        throw std::invalid_argument("TwoModeCov: expected a 4x4 matrix, got " +
                                    std::to_string(cov_.dim()) + " rows");
}

TwoModeCov partial_transpose(const TwoModeCov& state) {
    Vector flip(4);
    flip << 1.0, 1.0, 1.0, -1.0;
    Matrix pt = flip.asDiagonal() * state.matrix() * flip.asDiagonal();
    return TwoModeCov(std::move(pt));
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::Separable: return "separable";
    case Verdict::Entangled: return "entangled";
    case Verdict::Boundary: return "boundary";
    }
    return "unknown";
}

SimonResult simon_test(const TwoModeCov& state, double tol) {
    const GMatrixCheck valid = is_g_matrix(state.cov(), tol);
    if (!valid.ok)
        throw std::invalid_argument(
            "simon_test: input is not a valid state (min eigenvalue " +
            std::to_string(valid.min_eigenvalue) + ")");

    const TwoModeCov pt = partial_transpose(state);
    const GMatrixCheck check = is_g_matrix(pt.cov(), tol);

    SimonResult out;
    out.margin = check.min_eigenvalue;
    out.threshold = -check.threshold; // tol * (1 + ||PT||)
    if (out.margin < -out.threshold)
        out.verdict = Verdict::Entangled;
    else if (out.margin > out.threshold)
        out.verdict = Verdict::Separable;
    else
        out.verdict = Verdict::Boundary;
    return out;
}

TwoModeCov correlated_pair_cov(double level, double correlation) {
    Matrix g = Matrix::Zero(4, 4);
    g(0, 0) = g(1, 1) = g(2, 2) = g(3, 3) = level;
    g(0, 2) = g(2, 0) = correlation;
    g(1, 3) = g(3, 1) = -correlation;
    return TwoModeCov(std::move(g));
}

PairWindow correlated_pair_window(double level, double correlation, double boundary_tol) {
    if (!(level > 0.5))
        throw std::invalid_argument("correlated_pair_window: level must exceed 1/2, got " +
                                    std::to_string(level));
    if (boundary_tol < 0.0)
        throw std::invalid_argument("correlated_pair_window: boundary_tol must be >= 0");

    PairWindow out;
    out.lower = level - 0.5;
    out.upper = std::sqrt(level * level - 0.25);
    const double c = std::abs(correlation);
    out.state_valid = c <= out.upper + boundary_tol;
    if (c < out.lower - boundary_tol)
        out.verdict = Verdict::Separable;
    else if (c > out.lower + boundary_tol)
        out.verdict = Verdict::Entangled;
    else
        out.verdict = Verdict::Boundary;
    return out;
}

ChainSpec family_chain(const StationaryPairFamily& family) {
    if (!(family.level > 0.5))
        throw std::invalid_argument("family_chain: level must exceed 1/2, got " +
                                    std::to_string(family.level));
    if (!(family.strength > 0.0))
        throw std::invalid_argument("family_chain: strength must be positive, got " +
                                    std::to_string(family.strength));
    validate_band_weights(family.weights);

    // Each component edge is level*I2 +- 2*w*strength*diag(1,-1), a G-matrix
    // iff 2*w*strength <= sqrt(level^2 - 1/4); with weights <= 1 the strength
    // itself must respect the cap.
    const double cap = std::sqrt(family.level * family.level - 0.25) / 2.0;
    if (family.strength > cap + 1e-12)
        throw std::invalid_argument("family_chain: strength " + std::to_string(family.strength) +
                                    " exceeds the validity cap " + std::to_string(cap));

    Matrix site = family.level * Matrix::Identity(2, 2);
    Matrix z = Matrix::Zero(2, 2);
    z(0, 0) = family.strength;
    z(1, 1) = -family.strength;

    ToeplitzMixtureChain chain{SymBlock(site), {}};
    chain.bands.reserve(family.weights.size());
    for (const BandWeight& w : family.weights)
        chain.bands.push_back(MixtureBand{w.band, w.weight, SymBlock(z)});
    return ChainSpec(std::move(chain));
}

namespace {

// level from site = level * I2; coupling = b * diag(1, -1) up to weight.
double scalar_level(const Matrix& site, double tol) {
    const double level = site(0, 0);
    const double dev = (site - level * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff();
    if (dev > tol * (1.0 + std::abs(level)))
        throw std::invalid_argument(
            "family_from_chain: site block must be a multiple of the identity");
    return level;
}

double flip_strength(const Matrix& coupling, double tol) {
    const double b = coupling(0, 0);
    Matrix z = Matrix::Zero(2, 2);
    z(0, 0) = b;
    z(1, 1) = -b;
    if ((coupling - z).cwiseAbs().maxCoeff() > tol * (1.0 + std::abs(b)))
        throw std::invalid_argument(
            "family_from_chain: coupling block must have the shape b*diag(1,-1)");
    return b;
}

} // namespace

StationaryPairFamily family_from_chain(const ChainSpec& spec, double tol) {
    if (spec.site_modes() != 1)
        throw std::invalid_argument("family_from_chain: expects one mode per site, got k = " +
                                    std::to_string(spec.site_modes()));
    StationaryPairFamily family;
    if (const auto* bd = spec.as_banded()) {
        family.level = scalar_level(bd->site.matrix(), tol);
        family.strength = flip_strength(bd->coupling.matrix(), tol);
        family.weights = {BandWeight{bd->band, 1.0}};
    } else if (const auto* mx = spec.as_mixture()) {
        if (mx->bands.empty())
            throw std::invalid_argument("family_from_chain: mixture has no bands");
        family.level = scalar_level(mx->site.matrix(), tol);
        bool first = true;
        for (const MixtureBand& b : mx->bands) {
            const double strength = flip_strength(b.coupling.matrix(), tol);
            if (first) {
                family.strength = strength;
                first = false;
            } else if (std::abs(strength - family.strength) >
                       tol * (1.0 + std::abs(family.strength))) {
                throw std::invalid_argument(
                    "family_from_chain: bands must share one coupling strength (got " +
                    std::to_string(family.strength) + " and " + std::to_string(strength) + ")");
            }
            family.weights.push_back(BandWeight{b.band, b.weight});
        }
    } else {
        throw std::invalid_argument("family_from_chain: expects a banded or mixture chain");
    }
    return family;
}

std::vector<PairVerdict> pair_verdicts(const StationaryPairFamily& family,
                                       const std::vector<int>& partners, double tol) {
    const ChainSpec chain = family_chain(family); // validates the family
    (void)chain;

    std::vector<PairVerdict> out;
    out.reserve(partners.size());
    for (int j : partners) {
        if (j < 2)
            throw std::invalid_argument("pair_verdicts: partner site must be >= 2, got " +
                                        std::to_string(j));
        double weight = 0.0;
        for (const BandWeight& w : family.weights)
            if (w.band == j - 1) { weight = w.weight; break; }

        PairVerdict v;
        v.partner = j;
        v.correlation = weight * family.strength;
        v.window = correlated_pair_window(family.level, v.correlation);
        v.simon = simon_test(correlated_pair_cov(family.level, v.correlation), tol);
        v.strong_coupling = v.correlation > family.level - 0.5;
        out.push_back(v);
    }
    return out;
}

} // namespace gchain
