#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gchain/entanglement.hpp"
#include "support.hpp"

using namespace gchain;
using testsupport::max_abs;

namespace {

Matrix flip(double b) {
    Matrix z = Matrix::Zero(2, 2);
    z(0, 0) = b;
    z(1, 1) = -b;
    return z;
}

} // namespace

TEST_CASE("two-mode covariance wrapper") {
    CHECK_NOTHROW(TwoModeCov(0.6 * Matrix::Identity(4, 4)));
    CHECK_THROWS_AS(TwoModeCov(Matrix::Identity(2, 2)), std::invalid_argument);
    CHECK_THROWS_AS(TwoModeCov(Matrix::Identity(6, 6)), std::invalid_argument);
    Matrix skew = Matrix::Identity(4, 4);
    skew(0, 3) = 0.2;
    CHECK_THROWS_AS(TwoModeCov{skew}, std::invalid_argument);
}

TEST_CASE("partial transpose flips the second momentum") {
    SUBCASE("correlated pair") {
        const TwoModeCov state = correlated_pair_cov(0.8, 0.3);
        const TwoModeCov pt = partial_transpose(state);
        CHECK(max_abs(Matrix(pt.matrix().diagonal().asDiagonal()) -
                      Matrix(state.matrix().diagonal().asDiagonal())) == 0.0);
        Matrix expect = state.matrix();
        expect(1, 3) = -expect(1, 3);
        expect(3, 1) = -expect(3, 1);
        CHECK(max_abs(pt.matrix() - expect) == 0.0);
    }
    SUBCASE("involution") {
        const TwoModeCov state = correlated_pair_cov(0.9, 0.4);
        const TwoModeCov twice = partial_transpose(partial_transpose(state));
        CHECK(max_abs(twice.matrix() - state.matrix()) == 0.0);
    }
}

TEST_CASE("two-mode separability decision") {
    SUBCASE("strong correlation is entangled") {
        const SimonResult r = simon_test(correlated_pair_cov(0.7, 0.3));
        CHECK(r.verdict == Verdict::Entangled);
        CHECK(r.margin == doctest::Approx(-0.1).epsilon(1e-12));
    }
    SUBCASE("weak correlation is separable") {
        const SimonResult r = simon_test(correlated_pair_cov(0.7, 0.1));
        CHECK(r.verdict == Verdict::Separable);
        CHECK(r.margin == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("critical correlation is boundary") {
        const SimonResult r = simon_test(correlated_pair_cov(0.7, 0.7 - 0.5));
        CHECK(r.verdict == Verdict::Boundary);
        CHECK(std::abs(r.margin) <= r.threshold);
    }
    SUBCASE("product states are separable") {
        const SimonResult r = simon_test(correlated_pair_cov(0.8, 0.0));
        CHECK(r.verdict == Verdict::Separable);
        CHECK(r.margin == doctest::Approx(0.3).epsilon(1e-12));
    }
    SUBCASE("invalid states are rejected") {
        CHECK_THROWS_AS(simon_test(correlated_pair_cov(0.7, 0.6)), std::invalid_argument);
    }
    SUBCASE("margin tracks the correlation linearly") {
        for (int i = 1; i <= 24; ++i) {
            const double c = 0.48 * i / 25.0;
            if (std::abs(c - 0.2) < 1e-6) continue;
            const SimonResult r = simon_test(correlated_pair_cov(0.7, c));
            CHECK(std::abs(r.margin - (0.2 - c)) <= 1e-12);
            CHECK(r.verdict == (c > 0.2 ? Verdict::Entangled : Verdict::Separable));
        }
    }
    SUBCASE("verdict labels") {
        CHECK(std::string(to_string(Verdict::Separable)) == "separable");
        CHECK(std::string(to_string(Verdict::Entangled)) == "entangled");
        CHECK(std::string(to_string(Verdict::Boundary)) == "boundary");
    }
}

TEST_CASE("correlation window of the symmetric pair") {
    SUBCASE("edges at a 0.7 level") {
        const PairWindow w = correlated_pair_window(0.7, 0.1);
        CHECK(w.lower == doctest::Approx(0.2).epsilon(1e-15));
        CHECK(w.upper == doctest::Approx(std::sqrt(0.24)).epsilon(1e-15));
        CHECK(w.state_valid);
        CHECK(w.verdict == Verdict::Separable);
    }
    SUBCASE("inside the window: entangled") {
        const PairWindow w = correlated_pair_window(0.7, 0.3);
        CHECK(w.state_valid);
        CHECK(w.verdict == Verdict::Entangled);
    }
    SUBCASE("lower edge: boundary") {
        const PairWindow w = correlated_pair_window(0.7, 0.7 - 0.5);
        CHECK(w.state_valid);
        CHECK(w.verdict == Verdict::Boundary);
    }
    SUBCASE("past the upper edge: no state") {
        const PairWindow w = correlated_pair_window(0.7, 0.5);
        CHECK_FALSE(w.state_valid);
    }
    SUBCASE("negative correlation uses the magnitude") {
        const PairWindow w = correlated_pair_window(0.7, -0.3);
        CHECK(w.state_valid);
        CHECK(w.verdict == Verdict::Entangled);
    }
    SUBCASE("level at or below 1/2 rejected") {
        CHECK_THROWS_AS(correlated_pair_window(0.5, 0.1), std::invalid_argument);
    }
}

TEST_CASE("stationary pair family to chain") {
    SUBCASE("nearest-neighbour pair reproduces the two-mode model") {
        const StationaryPairFamily family{0.7, 0.24, {BandWeight{1, 1.0}}};
        const ChainSpec chain = family_chain(family);
        CHECK(chain.kind() == ChainKind::ToeplitzMixture);
        const Matrix pair = materialize(chain, {1, 2}).cov.matrix();
        CHECK(max_abs(pair - correlated_pair_cov(0.7, 0.24).matrix()) == 0.0);
    }
    SUBCASE("skipping a band yields a product pair") {
        const StationaryPairFamily family{0.7, 0.24, {BandWeight{1, 1.0}}};
        const FiniteSection sec = materialize(family_chain(family), {1, 3});
        CHECK(max_abs(sec.cov.matrix() - 0.7 * Matrix::Identity(4, 4)) == 0.0);
    }
    SUBCASE("weighted bands scale the coupling") {
        const StationaryPairFamily family{0.7, 0.2, {BandWeight{1, 0.9}, BandWeight{3, 0.1}}};
        const ChainSpec chain = family_chain(family);
        CHECK(max_abs(chain.block(1, 2) - flip(0.9 * 0.2)) == 0.0);
        CHECK(max_abs(chain.block(1, 4) - flip(0.1 * 0.2)) == 0.0);
        CHECK(max_abs(chain.block(1, 3)) == 0.0);
    }
    SUBCASE("strength cap enforced") {
        CHECK_THROWS_AS(family_chain({0.7, 0.25, {BandWeight{1, 1.0}}}),
                        std::invalid_argument);
        CHECK_NOTHROW(family_chain({0.7, 0.2449, {BandWeight{1, 1.0}}}));
        CHECK_THROWS_AS(family_chain({0.4, 0.1, {BandWeight{1, 1.0}}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(family_chain({0.7, 0.0, {BandWeight{1, 1.0}}}),
                        std::invalid_argument);
    }
}

TEST_CASE("family recovered from chain specs") {
    SUBCASE("banded chain") {
        const ChainSpec spec{BandedChain{SymBlock(0.7 * Matrix::Identity(2, 2)),
                                         SymBlock(flip(0.2)), 2}};
        const StationaryPairFamily family = family_from_chain(spec);
        CHECK(family.level == doctest::Approx(0.7).epsilon(1e-15));
        CHECK(family.strength == doctest::Approx(0.2).epsilon(1e-15));
        REQUIRE(family.weights.size() == 1);
        CHECK(family.weights[0].band == 2);
        CHECK(family.weights[0].weight == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("mixture with a shared strength") {
        const ChainSpec spec{ToeplitzMixtureChain{
            SymBlock(0.7 * Matrix::Identity(2, 2)),
            {MixtureBand{1, 0.6, SymBlock(flip(0.2))}, MixtureBand{2, 0.4, SymBlock(flip(0.2))}}}};
        const StationaryPairFamily family = family_from_chain(spec);
        CHECK(family.strength == doctest::Approx(0.2).epsilon(1e-15));
        REQUIRE(family.weights.size() == 2);
        CHECK(family.weights[0].weight == doctest::Approx(0.6).epsilon(1e-15));
        CHECK(family.weights[1].weight == doctest::Approx(0.4).epsilon(1e-15));
    }
    SUBCASE("round trip through the chain form") {
        const StationaryPairFamily family{0.8, 0.24, {BandWeight{1, 0.5}, BandWeight{4, 0.25}}};
        const StationaryPairFamily back = family_from_chain(family_chain(family));
        CHECK(back.level == doctest::Approx(family.level).epsilon(1e-14));
        CHECK(back.strength == doctest::Approx(family.strength).epsilon(1e-12));
        REQUIRE(back.weights.size() == family.weights.size());
        for (std::size_t i = 0; i < family.weights.size(); ++i) {
            CHECK(back.weights[i].band == family.weights[i].band);
            CHECK(back.weights[i].weight ==
                  doctest::Approx(family.weights[i].weight).epsilon(1e-12));
        }
    }
    SUBCASE("shapes outside the family are rejected") {
        const SymBlock site{0.7 * Matrix::Identity(2, 2)};
        CHECK_THROWS_AS(
            family_from_chain(ChainSpec{ToeplitzMixtureChain{
                site, {MixtureBand{1, 0.5, SymBlock(flip(0.2))},
                       MixtureBand{2, 0.5, SymBlock(flip(0.15))}}}}),
            std::invalid_argument);
        Matrix uneven = Matrix::Identity(2, 2);
        uneven(1, 1) = 0.8;
        CHECK_THROWS_AS(
            family_from_chain(ChainSpec{BandedChain{SymBlock(0.7 * uneven),
                                                    SymBlock(flip(0.2)), 1}}),
            std::invalid_argument);
        CHECK_THROWS_AS(
            family_from_chain(ChainSpec{BandedChain{site, SymBlock(0.2 * Matrix::Identity(2, 2)),
                                                    1}}),
            std::invalid_argument);
        CHECK_THROWS_AS(
            family_from_chain(ChainSpec{BandedChain{SymBlock(0.7 * Matrix::Identity(4, 4)),
                                                    SymBlock(Matrix::Zero(4, 4)), 1}}),
            std::invalid_argument);
        CHECK_THROWS_AS(
            family_from_chain(ChainSpec{ExchangeableChain{site, SymBlock(0.1 * Matrix::Identity(
                                                                    2, 2))}}),
            std::invalid_argument);
    }
}

TEST_CASE("pairwise verdicts along the chain") {
    SUBCASE("damped nearest-neighbour weight") {
        const StationaryPairFamily family{0.7, 0.24, {BandWeight{1, 0.9}}};
        const auto verdicts = pair_verdicts(family, {2, 3});
        REQUIRE(verdicts.size() == 2);
        CHECK(verdicts[0].partner == 2);
        CHECK(verdicts[0].correlation == doctest::Approx(0.216).epsilon(1e-15));
        CHECK(verdicts[0].simon.verdict == Verdict::Entangled);
        CHECK(verdicts[0].strong_coupling);
        CHECK(verdicts[1].partner == 3);
        CHECK(verdicts[1].correlation == 0.0);
        CHECK(verdicts[1].simon.verdict == Verdict::Separable);
        CHECK_FALSE(verdicts[1].strong_coupling);
    }
    SUBCASE("margin identity and window agreement") {
        const StationaryPairFamily ok{0.7, 0.2, {BandWeight{1, 0.6}, BandWeight{2, 0.4}}};
        for (const PairVerdict& v : pair_verdicts(ok, {2, 3, 4})) {
            CHECK(std::abs(v.simon.margin - (0.2 - v.correlation)) <= 1e-12);
            if (v.window.state_valid && v.simon.verdict != Verdict::Boundary)
                CHECK(v.window.verdict == v.simon.verdict);
        }
    }
    SUBCASE("partners below 2 rejected") {
        const StationaryPairFamily family{0.7, 0.2, {BandWeight{1, 1.0}}};
        CHECK_THROWS_AS(pair_verdicts(family, {1}), std::invalid_argument);
        CHECK(pair_verdicts(family, {}).empty());
    }
}

TEST_CASE("exchangeable pair marginals are never entangled") {
    std::mt19937_64 rng(9101);
    for (int trial = 0; trial < 10; ++trial) {
        const auto pair = testsupport::random_valid_exchangeable(rng, 1);
        const ChainSpec spec{ExchangeableChain{SymBlock(pair.site), SymBlock(pair.coupling)}};
        const Matrix two_site = materialize(spec, {1, 2}).cov.matrix();
        const SimonResult r = simon_test(TwoModeCov(two_site));
        CHECK(r.verdict != Verdict::Entangled);
    }
}
