#pragma once

#include <variant>
#include <vector>

#include "gchain/gmatrix.hpp"

// Translation-invariant families of covariance blocks over sites 1, 2, 3, ...
// and their finite sections.  A chain is described by a common diagonal block
// (one site) plus a rule for the off-diagonal blocks; a section over a finite
// site set is assembled site-major, so site r of the section occupies rows
// [2k*r, 2k*(r+1)).

namespace gchain {

inline constexpr Eigen::Index kDefaultRowCap = 4096;

// Every pair of distinct sites is coupled by the same block:
// diagonal `site`, block(i<j) = coupling, block(i>j) = coupling^T.
struct ExchangeableChain {
    SymBlock site;
    SymBlock coupling;
};

// Coupling only between sites exactly `band` apart; both blocks symmetric.
struct BandedChain {
    SymBlock site;
    SymBlock coupling;
    int band = 1;
};

struct MixtureBand {
    int band = 1;
    double weight = 0.0; // in (0, 1]; weights over all bands sum to <= 1
    SymBlock coupling;
};

// Convex mixture of banded chains sharing the diagonal block: the block at
// distance `band` is weight * coupling.  A total weight below 1 leaves the
// remaining mass on the uncoupled chain with the same diagonal.
struct ToeplitzMixtureChain {
    SymBlock site;
    std::vector<MixtureBand> bands; // strictly increasing band indices
};

enum class ChainKind { Exchangeable, Banded, ToeplitzMixture };
const char* to_string(ChainKind kind);

// Validated chain description.  Construction enforces the structural
// invariants (shapes, symmetry where the variant requires it, weight sums);
// whether sections are valid states is a separate question answered by the
// criterion functions below.
class ChainSpec {
public:
    ChainSpec(ExchangeableChain chain);      // NOLINT: implicit by design
    ChainSpec(BandedChain chain);            // NOLINT
    ChainSpec(ToeplitzMixtureChain chain);   // NOLINT

    ChainKind kind() const;
    int site_modes() const;                    // modes per site, k
    Eigen::Index block_dim() const;            // 2k

    // Covariance block between sites i and j (1-based).
    Matrix block(int i, int j) const;

    const std::variant<ExchangeableChain, BandedChain, ToeplitzMixtureChain>&
    value() const { return chain_; }

    const ExchangeableChain* as_exchangeable() const;
    const BandedChain* as_banded() const;
    const ToeplitzMixtureChain* as_mixture() const;

private:
    std::variant<ExchangeableChain, BandedChain, ToeplitzMixtureChain> chain_;
};

// Finite section of a chain over a strictly increasing site set.
struct FiniteSection {
    ChainSpec spec;
    std::vector<int> sites;
    CovMatrix cov;
};

// Assembles the section covariance.  Sites must be strictly increasing and
// >= 1; a section larger than row_cap rows raises ResourceLimit before any
// allocation.
FiniteSection materialize(const ChainSpec& spec, std::vector<int> sites,
                          Eigen::Index row_cap = kDefaultRowCap);
FiniteSection materialize(const ChainSpec& spec, int sites_upto,
                          Eigen::Index row_cap = kDefaultRowCap);

// Selects the per-site diagonal blocks of an existing section; sub_sites must
// be a subset of section.sites.  Agrees with materializing sub_sites directly.
FiniteSection restrict_section(const FiniteSection& section,
                               const std::vector<int>& sub_sites);

// ==========================================================================
// Validity criteria
// ==========================================================================

// Exchangeable chains have valid sections at every size iff
//   (a) the coupling is symmetric,
//   (b) the (symmetrized) coupling is positive semidefinite,
//   (c) site - coupling is a G-matrix.
struct ExchangeableCheck {
    bool ok = false;
    double coupling_asymmetry = 0.0;       // clause (a), against sym_tol scale
    double coupling_min_eigenvalue = 0.0;  // clause (b)
    GMatrixCheck gap;                      // clause (c), on site - sym(coupling)
    std::vector<std::string> failures;     // one line per failed clause
};
ExchangeableCheck exchangeable_criterion(const SymBlock& site, const SymBlock& coupling,
                                         double tol = kDefaultPsdTol,
                                         double sym_tol = kDefaultSymTol);

// Banded chains have valid sections at every size iff both edge combinations
// site + 2*coupling and site - 2*coupling are G-matrices (the band index does
// not enter).  Coupling must be symmetric.
struct BandedCheck {
    bool ok = false;
    GMatrixCheck sum_edge;   // site + 2*coupling
    GMatrixCheck diff_edge;  // site - 2*coupling
};
BandedCheck banded_criterion(const SymBlock& site, const SymBlock& coupling,
                             double tol = kDefaultPsdTol,
                             double sym_tol = kDefaultSymTol);

// Sufficient condition for a mixture: every component banded chain
// (site, coupling_j) passes banded_criterion.  Failure of a component proves
// nothing, so the outcome is three-valued only in the negative direction.
enum class MixtureStatus { Valid, Unknown };

struct MixtureCheck {
    MixtureStatus status = MixtureStatus::Unknown;
    std::vector<BandedCheck> component_checks; // parallel to chain.bands
    std::vector<int> failing_bands;
};
MixtureCheck mixture_criterion(const ToeplitzMixtureChain& chain,
                               double tol = kDefaultPsdTol,
                               double sym_tol = kDefaultSymTol);

// Brute-force comparison path: materializes sites {1..n} for every n up to
// n_max and runs the uncertainty-relation test on each.
struct SectionCheck {
    int sites = 0;
    GMatrixCheck check;
};
std::vector<SectionCheck> check_sections(const ChainSpec& spec, int n_max,
                                         double tol = kDefaultPsdTol,
                                         Eigen::Index row_cap = kDefaultRowCap);

// Witness that an exchangeable section is a classical mixture of product
// states: cov = (site - coupling) per site + coupling spread over all site
// pairs.  The chain must pass exchangeable_criterion (std::invalid_argument
// otherwise); ok additionally requires the reassembled section to match
// materialize to 1e-12.
struct SeparabilityCertificate {
    bool ok = false;
    Matrix quantum_block;               // site - coupling
    Matrix classical_block;             // coupling
    GMatrixCheck quantum_check;
    double classical_min_eigenvalue = 0.0;
    double residual = 0.0;              // max-abs reassembly mismatch
};
SeparabilityCertificate separability_certificate(const ExchangeableChain& chain,
                                                 const std::vector<int>& sites,
                                                 double tol = kDefaultPsdTol,
                                                 Eigen::Index row_cap = kDefaultRowCap);

// ==========================================================================
// Structural site patterns
// ==========================================================================

// Weight of a single Toeplitz band: matrix entry `weight` at |i - j| = band.
struct BandWeight {
    int band = 1;
    double weight = 0.0;
};

// out(2k r + a, 2k s + b) = site_weights(r, s) * block(a, b); the site-major
// Kronecker product used to assemble sections from per-site patterns.
Matrix site_pattern(const Matrix& site_weights, const Matrix& block);

Matrix strict_upper_ones(int n);              // ones strictly above the diagonal
Matrix superdiagonal_ones(int n, int band);   // ones where col - row = band

// Symmetric Toeplitz matrix with zero diagonal and entry w_j at distance
// band_j.  If the weights are a (sub-)probability vector the spectral norm
// is at most 2.
Matrix weight_toeplitz(const std::vector<BandWeight>& weights, int n);

// Validates band/weight lists shared by several callers: bands >= 1 and
// strictly increasing, weights positive, total weight <= 1 (up to 1e-12).
void validate_band_weights(const std::vector<BandWeight>& weights);

} // namespace gchain
