#include "gchain/entropy_rate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "robust_spectra.hpp"

namespace gchain {

namespace {

std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

Matrix symmetric_part(const SymBlock& block) {
    return (block.matrix() + block.matrix().transpose()) / 2.0;
}

void require_coupling_symmetric(const SymBlock& coupling, const char* what) {
    if (!coupling.is_symmetric())
        throw std::invalid_argument(std::string(what) + ": coupling must be symmetric (max asymmetry " +
                                    std::to_string(coupling.asymmetry()) + ")");
}

} // namespace

EntropyTrace entropy_trace(const ChainSpec& spec, int n_max, double psd_tol,
                           double mono_tol, Eigen::Index row_cap) {
    if (n_max < 1)
        throw std::invalid_argument("entropy_trace: n_max must be >= 1, got " +
                                    std::to_string(n_max));
    EntropyTrace trace;
    trace.points.reserve(static_cast<std::size_t>(n_max));
    double prev_entropy = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const FiniteSection section = materialize(spec, n, row_cap);
        double s = 0.0;
        try {
            s = von_neumann_entropy(section.cov, psd_tol);
        } catch (const std::invalid_argument& err) {
            throw std::invalid_argument("entropy_trace: invalid section at n = " +
                                        std::to_string(n) + ": " + err.what());
        }
        EntropyPoint point;
        point.n = n;
        point.entropy = s;
        point.rate = s / n;
        point.delta = s - prev_entropy;
        if (n >= 2) {
            const EntropyPoint& last = trace.points.back();
            if (point.entropy < last.entropy - mono_tol)
                trace.violations.push_back("entropy decreased at n = " + std::to_string(n) +
                                           " (" + g17(last.entropy) + " -> " + g17(point.entropy) + ")");
            if (point.delta > last.delta + mono_tol)
                trace.violations.push_back("entropy increment increased at n = " + std::to_string(n) +
                                           " (" + g17(last.delta) + " -> " + g17(point.delta) + ")");
            if (point.rate > last.rate + mono_tol)
                trace.violations.push_back("entropy rate increased at n = " + std::to_string(n) +
                                           " (" + g17(last.rate) + " -> " + g17(point.rate) + ")");
        }
        prev_entropy = s;
        trace.points.push_back(point);
    }
    return trace;
}

std::string entropy_trace_csv(const EntropyTrace& trace) {
    std::ostringstream os;
    os << "n,S_n,rate,delta\n";
    for (const EntropyPoint& p : trace.points)
        os << p.n << ',' << g17(p.entropy) << ',' << g17(p.rate) << ',' << g17(p.delta) << '\n';
    return os.str();
}

double exchangeable_entropy(const SymBlock& site, const SymBlock& coupling, int n,
                            double psd_tol) {
    if (n < 1)
        throw std::invalid_argument("exchangeable_entropy: n must be >= 1, got " +
                                    std::to_string(n));
    require_coupling_symmetric(coupling, "exchangeable_entropy");
    const Matrix a = symmetric_part(site);
    const Matrix b = symmetric_part(coupling);
    const double bulk =
        (n == 1) ? 0.0 : von_neumann_entropy(CovMatrix(a - b), psd_tol);
    const double top = von_neumann_entropy(CovMatrix(a + (n - 1.0) * b), psd_tol);
    return (n - 1) * bulk + top;
}

double exchangeable_rate(const SymBlock& site, const SymBlock& coupling, double psd_tol) {
    require_coupling_symmetric(coupling, "exchangeable_rate");
    return von_neumann_entropy(CovMatrix(symmetric_part(site) - symmetric_part(coupling)),
                               psd_tol);
}

double rate_gap_bound(const SymBlock& site, const SymBlock& coupling, int n, double psd_tol) {
    if (n < 2)
        throw std::invalid_argument("rate_gap_bound: defined for n >= 2, got " +
                                    std::to_string(n));
    require_coupling_symmetric(coupling, "rate_gap_bound");
    const Matrix b = symmetric_part(coupling);
    const Vector ev = symmetric_eigenvalues(b, "rate_gap_bound");
    if (ev(0) <= 0.0)
        throw std::invalid_argument(
            "rate_gap_bound: coupling must be positive definite (min eigenvalue " +
            std::to_string(ev(0)) + ")");
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        log_det += std::log(ev(i));

    const int k = site.modes();
    const double site_entropy = von_neumann_entropy(CovMatrix(symmetric_part(site)), psd_tol);
    const double two_pi_e = 2.0 * std::numbers::pi * std::numbers::e;
    return (site_entropy + k * std::log(two_pi_e) + 0.5 * log_det) / n +
           k * std::log(static_cast<double>(n - 1)) / n;
}

SymbolFunction::SymbolFunction(std::vector<BandWeight> weights, double tail_tol)
    : weights_(std::move(weights)) {
    validate_band_weights(weights_);
    if (tail_tol < 0.0)
        throw std::invalid_argument("SymbolFunction: tail_tol must be >= 0");
    // Drop bands from the tail while the dropped mass stays within tail_tol.
    double dropped = 0.0;
    while (!weights_.empty() && dropped + weights_.back().weight <= tail_tol) {
        dropped += weights_.back().weight;
        weights_.pop_back();
    }
    truncated_tail_mass_ = dropped;
    for (const BandWeight& w : weights_) total_weight_ += w.weight;
}

double SymbolFunction::operator()(double s) const {
    double h = 0.0;
    for (const BandWeight& w : weights_)
        h += w.weight * std::cos(2.0 * std::numbers::pi * w.band * s);
    return 2.0 * h;
}

std::vector<double> toeplitz_spectrum(const std::vector<BandWeight>& weights, int n) {
    const Matrix t = weight_toeplitz(weights, n);
    const Vector ev = symmetric_eigenvalues(t, "toeplitz_spectrum");
    return std::vector<double>(ev.data(), ev.data() + n);
}

double spectral_measure_distance(const std::vector<BandWeight>& weights, int n, long grid) {
    if (grid < 1000)
        throw std::invalid_argument("spectral_measure_distance: grid must be >= 1000, got " +
                                    std::to_string(grid));
    const std::vector<double> lambda = toeplitz_spectrum(weights, n); // ascending

    const SymbolFunction h(weights, /*tail_tol=*/0.0);
    std::vector<double> samples(static_cast<std::size_t>(grid));
    for (long i = 0; i < grid; ++i)
        samples[static_cast<std::size_t>(i)] = h((i + 0.5) / static_cast<double>(grid));
    std::sort(samples.begin(), samples.end());

    // F(x) = P[h(U) <= x] from the sorted sample; the KS statistic compares it
    // with the eigenvalue staircase on both sides of each jump.
    auto cdf = [&](double x) {
        const auto it = std::upper_bound(samples.begin(), samples.end(), x);
        return static_cast<double>(it - samples.begin()) / static_cast<double>(grid);
    };
    double dist = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double f = cdf(lambda[static_cast<std::size_t>(i - 1)]);
        dist = std::max(dist, std::abs(static_cast<double>(i) / n - f));
        dist = std::max(dist, std::abs(static_cast<double>(i - 1) / n - f));
    }
    return dist;
}

namespace {

struct MidpointSum {
    double value = 0.0;
    double min_symplectic = std::numeric_limits<double>::infinity();
};

// Composite midpoint value of s -> S(a + h(s) b) with nodes (i+0.5)/q.
// h(s) = h(1-s), so nodes pair up and only the lower half is evaluated.
MidpointSum midpoint_entropy(const Matrix& a, const Matrix& b, const SymbolFunction& h,
                             int q, double psd_tol) {
    MidpointSum out;
    double acc = 0.0;
    for (int i = 0; i < q / 2 + (q % 2); ++i) {
        const double s = (i + 0.5) / q;
        const bool middle = (q % 2 == 1) && (i == q / 2);
        double entropy = 0.0;
        try {
            const CovMatrix node(a + h(s) * b);
            const SymplecticSpectrum spec = symplectic_spectrum(node, psd_tol);
            out.min_symplectic = std::min(out.min_symplectic, spec.minimum());
            entropy = von_neumann_entropy(spec, psd_tol * (1.0 + node.spectral_norm()));
        } catch (const std::invalid_argument& err) {
            throw NumericFailure("mixture_rate: integrand invalid at s = " + g17(s) + ": " +
                                 err.what());
        }
        acc += (middle ? 1.0 : 2.0) * entropy;
    }
    out.value = acc / q;
    return out;
}

} // namespace

QuadratureReport mixture_rate(const SymBlock& site, const SymBlock& coupling,
                              const std::vector<BandWeight>& weights, int quad_points,
                              double psd_tol) {
    if (quad_points < 64)
        throw std::invalid_argument("mixture_rate: quad_points must be >= 64, got " +
                                    std::to_string(quad_points));
    require_coupling_symmetric(coupling, "mixture_rate");
    if (site.dim() != coupling.dim())
        throw std::invalid_argument("mixture_rate: block dimensions differ");

    const Matrix a = symmetric_part(site);
    const Matrix b = symmetric_part(coupling);
    const SymbolFunction h(weights);

    const MidpointSum coarse = midpoint_entropy(a, b, h, quad_points, psd_tol);
    const MidpointSum fine = midpoint_entropy(a, b, h, 2 * quad_points, psd_tol);

    QuadratureReport report;
    report.estimate = coarse.value;
    report.quad_points = quad_points;
    report.truncated_tail_mass = h.truncated_tail_mass();
    report.error_indicator = std::abs(fine.value - coarse.value);
    if (report.truncated_tail_mass > 0.0) {
        // |S(a + h b) - S(a + h~ b)| <= |h - h~| * ||b|| * k * g'(nu_min) and
        // the dropped bands shift h by at most 2 * tail mass.
        const double nu = std::max(std::min(coarse.min_symplectic, fine.min_symplectic),
                                   0.5 + 1e-6);
        const double g_slope = std::log((nu + 0.5) / (nu - 0.5));
        const double b_norm = symmetric_spectral_norm(b, "mixture_rate");
        report.error_indicator +=
            2.0 * report.truncated_tail_mass * b_norm * site.modes() * g_slope;
    }
    return report;
}

std::string quadrature_report_json(const QuadratureReport& report) {
    nlohmann::ordered_json j;
    j["estimate"] = report.estimate;
    j["error_indicator"] = report.error_indicator;
    j["quad_points"] = report.quad_points;
    j["truncated_tail_mass"] = report.truncated_tail_mass;
    return j.dump();
}

} // namespace gchain
