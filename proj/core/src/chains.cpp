#include "gchain/chains.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "robust_spectra.hpp"

namespace gchain {

namespace {

void require_symmetric(const SymBlock& block, const char* what, double sym_tol) {
    if (!block.is_symmetric(sym_tol))
        throw std::invalid_argument(std::string(what) + ": block must be symmetric (max asymmetry " +
                                    std::to_string(block.asymmetry()) + ")");
}

void require_same_dim(const SymBlock& a, const SymBlock& b, const char* what) {
    if (a.dim() != b.dim())
        throw std::invalid_argument(std::string(what) + ": block dimensions differ (" +
                                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
}

void require_sites(const std::vector<int>& sites) {
    if (sites.empty())
        throw std::invalid_argument("materialize: site set must be non-empty");
    int prev = 0;
    for (int s : sites) {
        if (s < 1)
            throw std::invalid_argument("materialize: site indices start at 1, got " +
                                        std::to_string(s));
        if (s <= prev)
            throw std::invalid_argument("materialize: site indices must be strictly increasing");
        prev = s;
    }
}

} // namespace

const char* to_string(ChainKind kind) {
    switch (kind) {
    case ChainKind::Exchangeable: return "exchangeable";
    case ChainKind::Banded: return "banded";
    case ChainKind::ToeplitzMixture: return "toeplitz_mixture";
    }
    return "unknown";
}

ChainSpec::ChainSpec(ExchangeableChain chain) : chain_(std::move(chain)) {
    const auto& c = std::get<ExchangeableChain>(chain_);
    require_symmetric(c.site, "ChainSpec(exchangeable) site", kDefaultSymTol);
    require_same_dim(c.site, c.coupling, "ChainSpec(exchangeable)");
    // The coupling may be non-symmetric here; the validity criterion reports it.
}

ChainSpec::ChainSpec(BandedChain chain) : chain_(std::move(chain)) {
    const auto& c = std::get<BandedChain>(chain_);
    require_symmetric(c.site, "ChainSpec(banded) site", kDefaultSymTol);
    require_symmetric(c.coupling, "ChainSpec(banded) coupling", kDefaultSymTol);
    require_same_dim(c.site, c.coupling, "ChainSpec(banded)");
    if (c.band < 1)
        throw std::invalid_argument("ChainSpec(banded): band must be >= 1, got " +
                                    std::to_string(c.band));
}

ChainSpec::ChainSpec(ToeplitzMixtureChain chain) : chain_(std::move(chain)) {
    auto& c = std::get<ToeplitzMixtureChain>(chain_);
    require_symmetric(c.site, "ChainSpec(mixture) site", kDefaultSymTol);
    std::sort(c.bands.begin(), c.bands.end(),
              [](const MixtureBand& x, const MixtureBand& y) { return x.band < y.band; });
    double total = 0.0;
    int prev = 0;
    for (const MixtureBand& b : c.bands) {
        if (b.band < 1)
            throw std::invalid_argument("ChainSpec(mixture): band must be >= 1, got " +
                                        std::to_string(b.band));
        if (b.band == prev)
            throw std::invalid_argument("ChainSpec(mixture): duplicate band " +
                                        std::to_string(b.band));
        prev = b.band;
        if (!(b.weight > 0.0) || b.weight > 1.0)
            throw std::invalid_argument("ChainSpec(mixture): weight must lie in (0, 1], got " +
                                        std::to_string(b.weight));
        require_symmetric(b.coupling, "ChainSpec(mixture) coupling", kDefaultSymTol);
        require_same_dim(c.site, b.coupling, "ChainSpec(mixture)");
        total += b.weight;
    }
    if (total > 1.0 + 1e-12)
        throw std::invalid_argument("ChainSpec(mixture): weights sum to " + std::to_string(total) +
                                    " > 1");
}

ChainKind ChainSpec::kind() const {
    if (std::holds_alternative<ExchangeableChain>(chain_)) return ChainKind::Exchangeable;
    if (std::holds_alternative<BandedChain>(chain_)) return ChainKind::Banded;
    return ChainKind::ToeplitzMixture;
}

int ChainSpec::site_modes() const {
    return std::visit([](const auto& c) { return c.site.modes(); }, chain_);
}

Eigen::Index ChainSpec::block_dim() const {
    return std::visit([](const auto& c) { return c.site.dim(); }, chain_);
}

const ExchangeableChain* ChainSpec::as_exchangeable() const {
    return std::get_if<ExchangeableChain>(&chain_);
}
const BandedChain* ChainSpec::as_banded() const {
    return std::get_if<BandedChain>(&chain_);
}
const ToeplitzMixtureChain* ChainSpec::as_mixture() const {
    return std::get_if<ToeplitzMixtureChain>(&chain_);
}

Matrix ChainSpec::block(int i, int j) const {
    if (i < 1 || j < 1)
        throw std::invalid_argument("ChainSpec::block: site indices start at 1");
    if (const auto* ex = as_exchangeable()) {
        if (i == j) return ex->site.matrix();
        if (i < j) return ex->coupling.matrix();
        return ex->coupling.matrix().transpose();
    }
    if (const auto* bd = as_banded()) {
        if (i == j) return bd->site.matrix();
        if (std::abs(i - j) == bd->band) return bd->coupling.matrix();
        return Matrix::Zero(bd->site.dim(), bd->site.dim());
    }
    const auto* mx = as_mixture();
    if (i == j) return mx->site.matrix();
    const int dist = std::abs(i - j);
    for (const MixtureBand& b : mx->bands)
        if (b.band == dist) return b.weight * b.coupling.matrix();
    return Matrix::Zero(mx->site.dim(), mx->site.dim());
}

FiniteSection materialize(const ChainSpec& spec, std::vector<int> sites, Eigen::Index row_cap) {
    require_sites(sites);
    const Eigen::Index d = spec.block_dim();
    const Eigen::Index rows = d * static_cast<Eigen::Index>(sites.size());
    if (rows > row_cap)
        throw ResourceLimit("materialize: section needs " + std::to_string(rows) +
                            " rows, cap is " + std::to_string(row_cap));
    Matrix cov(rows, rows);
    for (std::size_t r = 0; r < sites.size(); ++r)
        for (std::size_t s = 0; s < sites.size(); ++s)
            cov.block(d * static_cast<Eigen::Index>(r), d * static_cast<Eigen::Index>(s), d, d) =
                spec.block(sites[r], sites[s]);
    return FiniteSection{spec, std::move(sites), CovMatrix(std::move(cov))};
}

FiniteSection materialize(const ChainSpec& spec, int sites_upto, Eigen::Index row_cap) {
    if (sites_upto < 1)
        throw std::invalid_argument("materialize: need at least one site, got " +
                                    std::to_string(sites_upto));
    std::vector<int> sites(static_cast<std::size_t>(sites_upto));
    for (int i = 0; i < sites_upto; ++i) sites[static_cast<std::size_t>(i)] = i + 1;
    return materialize(spec, std::move(sites), row_cap);
}

FiniteSection restrict_section(const FiniteSection& section, const std::vector<int>& sub_sites) {
    require_sites(sub_sites);
    const Eigen::Index d = section.spec.block_dim();
    std::vector<Eigen::Index> pos;
    pos.reserve(sub_sites.size());
    for (int s : sub_sites) {
        const auto it = std::lower_bound(section.sites.begin(), section.sites.end(), s);
        if (it == section.sites.end() || *it != s)
            throw std::invalid_argument("restrict_section: site " + std::to_string(s) +
                                        " is not part of the section");
        pos.push_back(static_cast<Eigen::Index>(it - section.sites.begin()));
    }
    Matrix cov(d * static_cast<Eigen::Index>(pos.size()), d * static_cast<Eigen::Index>(pos.size()));
    for (std::size_t r = 0; r < pos.size(); ++r)
        for (std::size_t s = 0; s < pos.size(); ++s)
            cov.block(d * static_cast<Eigen::Index>(r), d * static_cast<Eigen::Index>(s), d, d) =
                section.cov.matrix().block(d * pos[r], d * pos[s], d, d);
    return FiniteSection{section.spec, sub_sites, CovMatrix(std::move(cov))};
}

// ==========================================================================
// Validity criteria
// ==========================================================================

ExchangeableCheck exchangeable_criterion(const SymBlock& site, const SymBlock& coupling,
                                         double tol, double sym_tol) {
    require_symmetric(site, "exchangeable_criterion site", sym_tol);
    require_same_dim(site, coupling, "exchangeable_criterion");

    ExchangeableCheck out;
    out.coupling_asymmetry = coupling.asymmetry();
    const double sym_scale = 1.0 + coupling.matrix().cwiseAbs().maxCoeff();
    const bool symmetric = out.coupling_asymmetry <= sym_tol * sym_scale;
    if (!symmetric)
        out.failures.push_back("coupling is not symmetric (max asymmetry " +
                               std::to_string(out.coupling_asymmetry) + ")");

    const Matrix b = coupling.symmetrized().matrix();
    const Vector ev = symmetric_eigenvalues(b, "exchangeable_criterion");
    out.coupling_min_eigenvalue = ev(0);
    const double b_norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    const bool psd = out.coupling_min_eigenvalue >= -tol * (1.0 + b_norm);
    if (!psd)
        out.failures.push_back("coupling is not positive semidefinite (min eigenvalue " +
                               std::to_string(out.coupling_min_eigenvalue) + ")");

    out.gap = is_g_matrix(CovMatrix(site.matrix() - b), tol);
    if (!out.gap.ok)
        out.failures.push_back("site - coupling violates the uncertainty relation (min eigenvalue " +
                               std::to_string(out.gap.min_eigenvalue) + ")");

    out.ok = symmetric && psd && out.gap.ok;
    return out;
}

BandedCheck banded_criterion(const SymBlock& site, const SymBlock& coupling,
                             double tol, double sym_tol) {
    require_symmetric(site, "banded_criterion site", sym_tol);
    require_symmetric(coupling, "banded_criterion coupling", sym_tol);
    require_same_dim(site, coupling, "banded_criterion");

    const Matrix a = (site.matrix() + site.matrix().transpose()) / 2.0;
    const Matrix b = coupling.symmetrized().matrix();
    BandedCheck out;
    out.sum_edge = is_g_matrix(CovMatrix(a + 2.0 * b), tol);
    out.diff_edge = is_g_matrix(CovMatrix(a - 2.0 * b), tol);
    out.ok = out.sum_edge.ok && out.diff_edge.ok;
    return out;
}

MixtureCheck mixture_criterion(const ToeplitzMixtureChain& chain, double tol, double sym_tol) {
    MixtureCheck out;
    bool all_ok = true;
    out.component_checks.reserve(chain.bands.size());
    for (const MixtureBand& b : chain.bands) {
        BandedCheck check = banded_criterion(chain.site, b.coupling, tol, sym_tol);
        if (!check.ok) {
            all_ok = false;
            out.failing_bands.push_back(b.band);
        }
        out.component_checks.push_back(std::move(check));
    }
    if (chain.bands.empty()) {
        // No coupling at all: the exact condition is that the site block alone
        // satisfies the uncertainty relation.
        all_ok = is_g_matrix(CovMatrix(chain.site.matrix()), tol).ok;
    }
    out.status = all_ok ? MixtureStatus::Valid : MixtureStatus::Unknown;
    return out;
}

std::vector<SectionCheck> check_sections(const ChainSpec& spec, int n_max, double tol,
                                         Eigen::Index row_cap) {
    if (n_max < 1)
        throw std::invalid_argument("check_sections: n_max must be >= 1, got " +
                                    std::to_string(n_max));
    std::vector<SectionCheck> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const FiniteSection section = materialize(spec, n, row_cap);
        out.push_back(SectionCheck{n, is_g_matrix(section.cov, tol)});
    }
    return out;
}

SeparabilityCertificate separability_certificate(const ExchangeableChain& chain,
                                                 const std::vector<int>& sites,
                                                 double tol, Eigen::Index row_cap) {
    const ExchangeableCheck criterion = exchangeable_criterion(chain.site, chain.coupling, tol);
    if (!criterion.ok) {
        std::string why = "separability_certificate: chain is not a valid exchangeable chain";
        for (const std::string& f : criterion.failures) why += "; " + f;
        throw std::invalid_argument(why);
    }

    SeparabilityCertificate out;
    const Matrix b = chain.coupling.symmetrized().matrix();
    out.quantum_block = chain.site.matrix() - b;
    out.classical_block = b;
    out.quantum_check = criterion.gap;
    out.classical_min_eigenvalue = criterion.coupling_min_eigenvalue;

    const FiniteSection section = materialize(ChainSpec(chain), sites, row_cap);
    const int n = static_cast<int>(sites.size());
    const Matrix rebuilt = site_pattern(Matrix::Identity(n, n), out.quantum_block) +
                           site_pattern(Matrix::Ones(n, n), out.classical_block);
    out.residual = (rebuilt - section.cov.matrix()).cwiseAbs().maxCoeff();

    const double scale = 1.0 + section.cov.matrix().cwiseAbs().maxCoeff();
    out.ok = out.residual <= 1e-12 * scale;
    return out;
}

// ==========================================================================
// Structural site patterns
// ==========================================================================

Matrix site_pattern(const Matrix& site_weights, const Matrix& block) {
    const Eigen::Index n = site_weights.rows();
    const Eigen::Index m = site_weights.cols();
    const Eigen::Index p = block.rows();
    const Eigen::Index q = block.cols();
    Matrix out(n * p, m * q);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index s = 0; s < m; ++s)
            out.block(r * p, s * q, p, q) = site_weights(r, s) * block;
    return out;
}

Matrix strict_upper_ones(int n) {
    if (n < 1)
        throw std::invalid_argument("strict_upper_ones: n must be >= 1");
    Matrix out = Matrix::Zero(n, n);
    for (int r = 0; r < n; ++r)
        for (int s = r + 1; s < n; ++s) out(r, s) = 1.0;
    return out;
}

Matrix superdiagonal_ones(int n, int band) {
    if (n < 1)
        throw std::invalid_argument("superdiagonal_ones: n must be >= 1");
    if (band < 1)
        throw std::invalid_argument("superdiagonal_ones: band must be >= 1");
    Matrix out = Matrix::Zero(n, n);
    for (int r = 0; r + band < n; ++r) out(r, r + band) = 1.0;
    return out;
}

Matrix weight_toeplitz(const std::vector<BandWeight>& weights, int n) {
    if (n < 1)
        throw std::invalid_argument("weight_toeplitz: n must be >= 1");
    validate_band_weights(weights);
    Matrix out = Matrix::Zero(n, n);
    for (const BandWeight& w : weights) {
        for (int r = 0; r + w.band < n; ++r) {
            out(r, r + w.band) = w.weight;
            out(r + w.band, r) = w.weight;
        }
    }
    return out;
}

void validate_band_weights(const std::vector<BandWeight>& weights) {
    double total = 0.0;
    int prev = 0;
    for (const BandWeight& w : weights) {
        if (w.band < 1)
            throw std::invalid_argument("band weights: band must be >= 1, got " +
                                        std::to_string(w.band));
        if (w.band <= prev)
            throw std::invalid_argument("band weights: bands must be strictly increasing");
        prev = w.band;
        if (!(w.weight > 0.0))
            throw std::invalid_argument("band weights: weight must be positive, got " +
                                        std::to_string(w.weight));
        total += w.weight;
    }
    if (total > 1.0 + 1e-12)
        throw std::invalid_argument("band weights: weights sum to " + std::to_string(total) +
                                    " > 1");
}

} // namespace gchain
