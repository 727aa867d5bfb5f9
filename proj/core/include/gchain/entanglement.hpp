#pragma once

#include <vector>

#include "gchain/chains.hpp"

// Bipartite entanglement of two-mode Gaussian states.  For one mode per
// side the positivity of the partially transposed covariance is an exact
// separability test, so the verdicts here are decisions, not bounds.

namespace gchain {

// 4x4 symmetric covariance of modes (1, 2) in interleaved order
// (q_1, p_1, q_2, p_2).
class TwoModeCov {
public:
    explicit TwoModeCov(Matrix entries, double sym_tol = kDefaultSymTol);

    const CovMatrix& cov() const { return cov_; }
    const Matrix& matrix() const { return cov_.matrix(); }

private:
    CovMatrix cov_;
};

// Covariance of the partially transposed state: conjugation by
// diag(1, 1, 1, -1), i.e. momentum reversal on the second mode.
TwoModeCov partial_transpose(const TwoModeCov& state);

enum class Verdict { Separable, Entangled, Boundary };
const char* to_string(Verdict verdict);

// Exact two-mode separability decision: the state is separable iff the
// partial transpose still satisfies the uncertainty relation.  margin is the
// minimum eigenvalue of PT + (i/2) J; |margin| within the relative tolerance
// band yields Boundary.  The input must itself be a valid state.
struct SimonResult {
    Verdict verdict = Verdict::Boundary;
    double margin = 0.0;
    double threshold = 0.0; // half-width of the Boundary band
};
SimonResult simon_test(const TwoModeCov& state, double tol = kDefaultPsdTol);

// Symmetric correlated pair
//   [[level*I2, C], [C, level*I2]],  C = diag(correlation, -correlation).
// Valid iff correlation^2 <= level^2 - 1/4; its symplectic eigenvalue is
// sqrt(level^2 - correlation^2), twice.
TwoModeCov correlated_pair_cov(double level, double correlation);

// For a fixed level > 1/2 the pair is a valid entangled state exactly when
// |correlation| lies in (level - 1/2, sqrt(level^2 - 1/4)]; below the lower
// edge it is separable, at the lower edge Boundary, past the upper edge it
// is no valid state at all.
struct PairWindow {
    double lower = 0.0;
    double upper = 0.0;
    bool state_valid = false;
    Verdict verdict = Verdict::Boundary; // meaningful only when state_valid
};
PairWindow correlated_pair_window(double level, double correlation,
                                  double boundary_tol = 0.0);

// Stationary single-mode chain with site block level*I2 and coupling
// weight_j * strength * diag(1, -1) at band j.  Restricting to sites (1, j)
// yields correlated_pair_cov(level, weight_{j-1} * strength), so every pair
// verdict is exact.
struct StationaryPairFamily {
    double level = 0.0;              // > 1/2
    double strength = 0.0;           // > 0, with weight*strength <= sqrt(level^2 - 1/4)/2
    std::vector<BandWeight> weights; // sub-probability over bands
};

// The family as a Toeplitz mixture chain (for validity checks and sections).
ChainSpec family_chain(const StationaryPairFamily& family);

// Inverse direction for banded/mixture chain specs with k = 1, site block
// level*I2 and couplings of the shape b*diag(1, -1) sharing one strength b;
// anything else raises std::invalid_argument.
StationaryPairFamily family_from_chain(const ChainSpec& spec,
                                       double tol = kDefaultSymTol);

struct PairVerdict {
    int partner = 0;         // verdict is for the site pair (1, partner)
    double correlation = 0.0;
    PairWindow window;
    SimonResult simon;
    bool strong_coupling = false; // correlation > level - 1/2
};

// Verdicts for the pairs (1, j), j in partners (each >= 2).  Bands missing
// from the weights contribute zero correlation, hence Separable.
std::vector<PairVerdict> pair_verdicts(const StationaryPairFamily& family,
                                       const std::vector<int>& partners,
                                       double tol = kDefaultPsdTol);

} // namespace gchain
