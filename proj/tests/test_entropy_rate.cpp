#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "gchain/entropy_rate.hpp"
#include "support.hpp"

using namespace gchain;

namespace {

// Reference values computed with 50-digit interval arithmetic.
constexpr double kG075 = 0.62550302942273484942;  // g(0.75)
constexpr double kG100 = 0.95477125244221922768;  // g(1)
constexpr double kS2 = 1.8205922126485602465;     // pair entropy, unit site / 0.25 coupling
constexpr double kBound10 = 0.46035785350678934752;
constexpr double kKmsRate020 = 0.41559388337330257194;
constexpr double kKmsRate024 = 0.33286596602707622268;

SymBlock unit_site() { return SymBlock(Matrix::Identity(2, 2)); }
SymBlock iso(double v) { return SymBlock(v * Matrix::Identity(2, 2)); }

SymBlock flip(double b) {
    Matrix z = Matrix::Zero(2, 2);
    z(0, 0) = b;
    z(1, 1) = -b;
    return SymBlock(z);
}

} // namespace

TEST_CASE("entropy trace of an uncoupled chain is linear") {
    const ChainSpec spec{ExchangeableChain{unit_site(), SymBlock(Matrix::Zero(2, 2))}};
    const EntropyTrace trace = entropy_trace(spec, 12);
    REQUIRE(trace.points.size() == 12);
    CHECK(trace.monotone());
    for (const EntropyPoint& p : trace.points) {
        CHECK(p.entropy == doctest::Approx(p.n * kG100).epsilon(1e-13));
        CHECK(p.rate == doctest::Approx(kG100).epsilon(1e-13));
        CHECK(p.delta == doctest::Approx(kG100).epsilon(1e-12));
    }
}

TEST_CASE("entropy trace matches the closed form for coupled sites") {
    const ChainSpec spec{ExchangeableChain{unit_site(), iso(0.25)}};
    const EntropyTrace trace = entropy_trace(spec, 16);
    CHECK(trace.points[1].entropy == doctest::Approx(kS2).epsilon(1e-14));
    CHECK(trace.monotone());
    for (const EntropyPoint& p : trace.points) {
        const double closed = exchangeable_entropy(unit_site(), iso(0.25), p.n);
        CHECK(std::abs(p.entropy - closed) <= 1e-11 * p.n);
    }
    // The per-site rate approaches its limit from above.
    CHECK(trace.points.back().rate > kG075);
    CHECK(trace.points.back().rate - kG075 < trace.points.front().rate - kG075);
}

TEST_CASE("entropy trace rejects chains that stop being states") {
    const ChainSpec spec{BandedChain{iso(0.7), flip(0.25), 1}};
    CHECK_NOTHROW(entropy_trace(spec, 14));
    try {
        entropy_trace(spec, 20);
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& err) {
        CHECK(std::string(err.what()).find("n = 15") != std::string::npos);
    }
}

TEST_CASE("entropy trace CSV round-trips") {
    const ChainSpec spec{ExchangeableChain{unit_site(), iso(0.25)}};
    const EntropyTrace trace = entropy_trace(spec, 4);
    const std::string csv = entropy_trace_csv(trace);
    CHECK(csv.rfind("n,S_n,rate,delta\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

    // Second line: n = 1; every numeric cell parses back bitwise.
    const std::size_t row_start = csv.find('\n') + 1;
    const std::string row = csv.substr(row_start, csv.find('\n', row_start) - row_start);
    CHECK(row.rfind("1,", 0) == 0);
    const std::size_t c1 = row.find(',');
    const std::size_t c2 = row.find(',', c1 + 1);
    const double s1 = std::strtod(row.c_str() + c1 + 1, nullptr);
    const double r1 = std::strtod(row.c_str() + c2 + 1, nullptr);
    CHECK(s1 == trace.points[0].entropy);
    CHECK(r1 == trace.points[0].rate);
}

TEST_CASE("closed-form section entropy") {
    SUBCASE("single site reduces to the block entropy") {
        CHECK(exchangeable_entropy(unit_site(), iso(0.25), 1) ==
              doctest::Approx(kG100).epsilon(1e-14));
    }
    SUBCASE("zero coupling is additive") {
        CHECK(exchangeable_entropy(unit_site(), SymBlock(Matrix::Zero(2, 2)), 7) ==
              doctest::Approx(7 * kG100).epsilon(1e-13));
    }
    SUBCASE("matches the assembled section for random valid pairs") {
        std::mt19937_64 rng(9001);
        for (int trial = 0; trial < 10; ++trial) {
            const int modes = 1 + static_cast<int>(rng() % 2);
            const auto pair = testsupport::random_valid_exchangeable(rng, modes);
            const SymBlock site{pair.site};
            const SymBlock coupling{pair.coupling};
            for (int n : {2, 5}) {
                const ChainSpec spec{ExchangeableChain{site, coupling}};
                const double direct = von_neumann_entropy(materialize(spec, n).cov);
                const double closed = exchangeable_entropy(site, coupling, n);
                CHECK(std::abs(direct - closed) <= 1e-10 * n);
            }
        }
    }
    SUBCASE("asymmetric coupling rejected") {
        Matrix skew = Matrix::Zero(2, 2);
        skew(0, 1) = 0.3;
        CHECK_THROWS_AS(exchangeable_entropy(unit_site(), SymBlock(skew), 2),
                        std::invalid_argument);
        CHECK_THROWS_AS(exchangeable_entropy(unit_site(), iso(0.25), 0), std::invalid_argument);
    }
}

TEST_CASE("exchangeable rate") {
    CHECK(exchangeable_rate(unit_site(), iso(0.25)) == doctest::Approx(kG075).epsilon(1e-14));
    CHECK(exchangeable_rate(unit_site(), SymBlock(Matrix::Zero(2, 2))) ==
          doctest::Approx(kG100).epsilon(1e-14));
}

TEST_CASE("finite-size rate gap bound") {
    const SymBlock site = unit_site();
    const SymBlock coupling = iso(0.25);
    SUBCASE("pinned value") {
        CHECK(rate_gap_bound(site, coupling, 10) == doctest::Approx(kBound10).epsilon(1e-13));
    }
    SUBCASE("dominates the true gap") {
        const double rate = exchangeable_rate(site, coupling);
        for (int n = 2; n <= 32; ++n) {
            const double gap = exchangeable_entropy(site, coupling, n) / n - rate;
            CHECK(gap >= 0.0);
            CHECK(gap <= rate_gap_bound(site, coupling, n) + 1e-12);
        }
    }
    SUBCASE("rejects degenerate inputs") {
        CHECK_THROWS_AS(rate_gap_bound(site, coupling, 1), std::invalid_argument);
        CHECK_THROWS_AS(rate_gap_bound(site, SymBlock(Matrix::Zero(2, 2)), 10),
                        std::invalid_argument);
    }
}

TEST_CASE("band symbol function") {
    SUBCASE("peak, symmetry, and range") {
        const SymbolFunction h({BandWeight{1, 0.6}, BandWeight{2, 0.4}});
        CHECK(h(0.0) == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(h.total_weight() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(h.truncated_tail_mass() == 0.0);
        for (int i = 0; i <= 200; ++i) {
            const double s = i / 200.0;
            CHECK(std::abs(h(s)) <= 2.0 + 1e-12);
            CHECK(h(s) == doctest::Approx(h(1.0 - s)).epsilon(1e-12));
        }
    }
    SUBCASE("negligible far bands are truncated") {
        const SymbolFunction h(
            {BandWeight{1, 0.5}, BandWeight{5, 5e-13}, BandWeight{9, 4e-13}}, 1e-12);
        CHECK(h.weights().size() == 1);
        CHECK(h.truncated_tail_mass() == doctest::Approx(9e-13).epsilon(1e-6));
        CHECK(h.total_weight() == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("tail tolerance zero keeps everything") {
        const SymbolFunction h({BandWeight{1, 0.5}, BandWeight{9, 4e-13}}, 0.0);
        CHECK(h.weights().size() == 2);
        CHECK(h.truncated_tail_mass() == 0.0);
    }
}

TEST_CASE("toeplitz band spectra") {
    SUBCASE("nearest-neighbour eigenvalues in closed form") {
        const std::vector<BandWeight> w = {BandWeight{1, 1.0}};
        for (int n : {3, 10, 100}) {
            const std::vector<double> spec = toeplitz_spectrum(w, n);
            REQUIRE(static_cast<int>(spec.size()) == n);
            for (int r = 1; r <= n; ++r) {
                const double expect =
                    2.0 * std::cos(std::numbers::pi * (n + 1 - r) / (n + 1.0));
                CHECK(std::abs(spec[r - 1] - expect) <= 1e-10);
            }
        }
    }
    SUBCASE("norm bound for mixtures") {
        const std::vector<BandWeight> w = {BandWeight{1, 0.7}, BandWeight{3, 0.3}};
        const std::vector<double> spec = toeplitz_spectrum(w, 60);
        CHECK(spec.front() >= -2.0 - 1e-12);
        CHECK(spec.back() <= 2.0 + 1e-12);
        CHECK(std::is_sorted(spec.begin(), spec.end()));
    }
}

TEST_CASE("spectral measure distance") {
    SUBCASE("nearest-neighbour chain converges like 1/(n+1)") {
        const std::vector<BandWeight> w = {BandWeight{1, 1.0}};
        double prev = 1.0;
        for (int n : {32, 64, 128, 256}) {
            const double d = spectral_measure_distance(w, n);
            CHECK(d < prev);
            CHECK(std::abs(d - 1.0 / (n + 1)) <= 1e-3);
            prev = d;
        }
    }
    SUBCASE("two-band mixture still converges") {
        const std::vector<BandWeight> w = {BandWeight{1, 0.7}, BandWeight{3, 0.3}};
        double prev = 1.0;
        for (int n : {16, 32, 64, 128}) {
            const double d = spectral_measure_distance(w, n);
            CHECK(d < prev);
            prev = d;
        }
        CHECK(prev < 0.05);
    }
    SUBCASE("degenerate arguments") {
        const std::vector<BandWeight> w = {BandWeight{1, 1.0}};
        const double d1 = spectral_measure_distance(w, 1);
        CHECK(d1 >= 0.0);
        CHECK(d1 <= 1.0);
        CHECK_THROWS_AS(spectral_measure_distance(w, 0), std::invalid_argument);
        CHECK_THROWS_AS(spectral_measure_distance(w, 8, 999), std::invalid_argument);
    }
}

TEST_CASE("quadrature entropy rate") {
    const std::vector<BandWeight> nearest = {BandWeight{1, 1.0}};
    SUBCASE("constant integrand is exact") {
        const QuadratureReport r =
            mixture_rate(unit_site(), SymBlock(Matrix::Zero(2, 2)), nearest);
        CHECK(r.estimate == doctest::Approx(kG100).epsilon(1e-13));
        CHECK(r.error_indicator <= 1e-12);
        CHECK(r.quad_points == 1024);
        CHECK(r.truncated_tail_mass == 0.0);
    }
    SUBCASE("pinned rates for flip couplings") {
        const QuadratureReport r020 = mixture_rate(iso(0.7), flip(0.2), nearest);
        CHECK(std::abs(r020.estimate - kKmsRate020) <= 1e-10);
        const QuadratureReport r024 = mixture_rate(iso(0.7), flip(0.24), nearest);
        CHECK(std::abs(r024.estimate - kKmsRate024) <= 1e-9);
    }
    SUBCASE("error indicator covers the doubling step") {
        const QuadratureReport coarse = mixture_rate(iso(0.7), flip(0.2), nearest, 512);
        const QuadratureReport fine = mixture_rate(iso(0.7), flip(0.2), nearest, 1024);
        CHECK(std::abs(fine.estimate - coarse.estimate) <= coarse.error_indicator + 1e-18);
        CHECK(fine.error_indicator < coarse.error_indicator);
    }
    SUBCASE("node count floor") {
        CHECK_NOTHROW(mixture_rate(iso(0.7), flip(0.2), nearest, 64));
        CHECK_THROWS_AS(mixture_rate(iso(0.7), flip(0.2), nearest, 63), std::invalid_argument);
    }
    SUBCASE("invalid integrand names the node") {
        try {
            mixture_rate(iso(0.55), flip(0.2), nearest);
            FAIL("expected NumericFailure");
        } catch (const NumericFailure& err) {
            CHECK(std::string(err.what()).find("integrand invalid at s = ") !=
                  std::string::npos);
        }
    }
    SUBCASE("report serialization carries all fields") {
        const QuadratureReport r = mixture_rate(iso(0.7), flip(0.2), nearest, 128);
        const std::string json = quadrature_report_json(r);
        for (const char* key :
             {"\"estimate\"", "\"error_indicator\"", "\"quad_points\"",
              "\"truncated_tail_mass\""}) {
            CHECK(json.find(key) != std::string::npos);
        }
        CHECK(json.find("128") != std::string::npos);
    }
}
