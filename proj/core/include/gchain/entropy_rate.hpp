#pragma once

#include <string>
#include <vector>

#include "gchain/chains.hpp"

// Von Neumann entropy of growing sections and its per-site limits.

namespace gchain {

struct EntropyPoint {
    int n = 0;          // number of sites
    double entropy = 0; // S_n, in nats
    double rate = 0;    // S_n / n
    double delta = 0;   // S_n - S_{n-1}, with S_0 = 0
};

// Entropy of the contiguous sections {1..n} for n = 1..n_max, with
// monotonicity diagnostics: S_n must be non-decreasing and both delta and
// rate non-increasing, each up to mono_tol.  Violations are reported, not
// raised; an invalid section raises std::invalid_argument naming n.
struct EntropyTrace {
    std::vector<EntropyPoint> points;
    std::vector<std::string> violations;

    bool monotone() const { return violations.empty(); }
};

EntropyTrace entropy_trace(const ChainSpec& spec, int n_max,
                           double psd_tol = kDefaultPsdTol,
                           double mono_tol = kDefaultMonoTol,
                           Eigen::Index row_cap = kDefaultRowCap);

// CSV rendering with header "n,S_n,rate,delta"; floating point cells use 17
// significant digits so values round-trip exactly.
std::string entropy_trace_csv(const EntropyTrace& trace);

// Exchangeable sections diagonalize into n-1 copies of site - coupling plus
// one copy of site + (n-1) coupling, giving the closed form
//   S_n = (n-1) * S(site - coupling) + S(site + (n-1) coupling)
// and the per-site limit S(site - coupling).  The coupling must be symmetric.
double exchangeable_entropy(const SymBlock& site, const SymBlock& coupling, int n,
                            double psd_tol = kDefaultPsdTol);
double exchangeable_rate(const SymBlock& site, const SymBlock& coupling,
                         double psd_tol = kDefaultPsdTol);

// Upper bound on S_n/n - S(site - coupling) for exchangeable chains with
// positive definite coupling:
//   (S(site) + k ln(2 pi e) + (1/2) ln det coupling) / n + k ln(n-1) / n.
// Defined for n >= 2; the bound degenerates at n = 1.
double rate_gap_bound(const SymBlock& site, const SymBlock& coupling, int n,
                      double psd_tol = kDefaultPsdTol);

// h(s) = 2 sum_j w_j cos(2 pi j s), the limiting spectral symbol of
// weight_toeplitz sections.  |h| <= 2 * total weight <= 2.  Weights whose
// cumulative mass from the largest band down stays below tail_tol are
// dropped; the dropped mass is reported.
class SymbolFunction {
public:
    explicit SymbolFunction(std::vector<BandWeight> weights, double tail_tol = 1e-12);

    double operator()(double s) const;
    double total_weight() const { return total_weight_; }
    double truncated_tail_mass() const { return truncated_tail_mass_; }
    const std::vector<BandWeight>& weights() const { return weights_; }

private:
    std::vector<BandWeight> weights_;
    double total_weight_ = 0.0;
    double truncated_tail_mass_ = 0.0;
};

// Eigenvalues of weight_toeplitz(weights, n) in ascending order.
std::vector<double> toeplitz_spectrum(const std::vector<BandWeight>& weights, int n);

// Kolmogorov-Smirnov distance between the empirical eigenvalue distribution
// of weight_toeplitz(weights, n) and the distribution of h(U), U uniform on
// [0,1], with h sampled on `grid` midpoints.  Decays as n grows.
double spectral_measure_distance(const std::vector<BandWeight>& weights, int n,
                                 long grid = 100000);

struct QuadratureReport {
    double estimate = 0.0;
    double error_indicator = 0.0;
    int quad_points = 0;
    double truncated_tail_mass = 0.0;
};

// Entropy rate of a banded or Toeplitz-mixture chain with a common coupling
// block:
//   rate = integral_0^1 S(site + h(s) * coupling) ds,
// by the composite midpoint rule with quad_points nodes (>= 64).
// estimate is the quad_points-node value; error_indicator combines the
// change under node doubling with a Lipschitz bound for the truncated tail.
// An invalid integrand raises NumericFailure naming the node.
QuadratureReport mixture_rate(const SymBlock& site, const SymBlock& coupling,
                              const std::vector<BandWeight>& weights,
                              int quad_points = 1024,
                              double psd_tol = kDefaultPsdTol);

// {"estimate": ..., "error_indicator": ..., "quad_points": ...,
//  "truncated_tail_mass": ...}
std::string quadrature_report_json(const QuadratureReport& report);

} // namespace gchain
