#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "banditlab/engine.hpp"
#include "banditlab/error.hpp"
#include "banditlab/quadrature.hpp"

using namespace banditlab;

namespace {
DiscountSequence seq(std::vector<double> v) { return DiscountSequence::validate(std::move(v)); }
}  // namespace

TEST_CASE("n = 1 is myopic") {
    const ValueResult r = value({Family::Bernoulli, {1, 2}, ConjugateArm{1, 3}, seq({1})});
    CHECK(r.v == 0.5);
    CHECK(r.optimal_arm == 1);
    CHECK(brute_force_value({Family::Bernoulli, {1, 2}, ConjugateArm{1, 3}, seq({1})}) == 0.5);
}

TEST_CASE("13/12") {
    const BanditInstance inst{Family::Bernoulli, {1, 2}, ConjugateArm{1, 2}, seq({1, 1})};
    const ValueResult r = value(inst);
    CHECK(std::abs(r.v - 13.0 / 12.0) <= 1e-15);
    CHECK(r.advantage == 0.0);
    CHECK(r.optimal_arm == 1);
    CHECK(std::abs(brute_force_value(inst) - 13.0 / 12.0) <= 1e-15);
}

TEST_CASE("v = max(v1, v2) and symmetry") {
    for (Family f : {Family::Bernoulli, Family::Normal, Family::Poisson, Family::Exponential}) {
        CAPTURE(family_name(f));
        const ConjugateArm arm = f == Family::Normal ? ConjugateArm{0.3, 2} : ConjugateArm{0.6, 2};
        const ValueResult r = value({f, arm, arm, seq({1, 0.8, 0.5})});
        CHECK(r.v == std::max(r.v1, r.v2));
        CHECK(r.advantage == r.v1 - r.v2);
        CHECK(r.v1 == r.v2);
        CHECK(r.optimal_arm == 1);
    }
}

TEST_CASE("engine equals the brute-force oracle") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> tau(2, 6), nn(1, 4);
    for (int rep = 0; rep < 60; ++rep) {
        const int t1 = tau(rng), t2 = tau(rng);
        const ConjugateArm a1{static_cast<double>(std::uniform_int_distribution<int>(1, t1 - 1)(rng)), double(t1)};
        const ConjugateArm a2{static_cast<double>(std::uniform_int_distribution<int>(1, t2 - 1)(rng)), double(t2)};
        std::vector<double> w(nn(rng));
        for (double& x : w) x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        w[0] += 0.1;
        const DiscountSequence a = seq(w);
        CHECK(std::abs(value({Family::Bernoulli, a1, a2, a}).v - brute_force_value({Family::Bernoulli, a1, a2, a})) <= 1e-12);
        // one-armed
        const double lam = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
        CHECK(std::abs(value({Family::Bernoulli, a1, KnownArm{lam}, a}).v -
                       brute_force_value({Family::Bernoulli, a1, KnownArm{lam}, a})) <= 1e-12);
    }
    CHECK(std::abs(value({Family::Bernoulli, {1, 2}, ConjugateArm{2, 3}, seq({1, 1, 1})}).v -
                   brute_force_value({Family::Bernoulli, {1, 2}, ConjugateArm{2, 3}, seq({1, 1, 1})})) <= 1e-12);
}

TEST_CASE("one-armed against a known arm") {
    const ValueResult r = value({Family::Bernoulli, {1, 2}, KnownArm{0.9}, seq({1})});
    CHECK(r.v == doctest::Approx(0.9));
    CHECK(r.optimal_arm == 2);
    // known arm far below: always pull the unknown arm, V = sum a_i * mean
    const ValueResult low = value({Family::Poisson, {4, 2}, KnownArm{0.0}, seq({1, 1, 1})});
    CHECK(low.v == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("zero horizon") {
    const ValueResult r = value({Family::Bernoulli, {1, 2}, ConjugateArm{1, 3}, seq({1}).tail()});
    CHECK(r.v == 0.0);
    CHECK(r.v1 == 0.0);
}

TEST_CASE("advantage decomposition sums to the advantage") {
    const BanditInstance sym{Family::Bernoulli, {1, 2}, ConjugateArm{1, 2}, seq({1, 1, 1})};
    const AdvantageTerms s = advantage_decomposition(sym);
    CHECK(s.myopic == 0.0);
    CHECK(s.plus_term == doctest::Approx(-s.minus_term).epsilon(1e-14));

    const BanditInstance a{Family::Bernoulli, {1, 2}, ConjugateArm{1, 2}, seq({2, 1})};
    CHECK(advantage_decomposition(a).myopic == 0.0);
    CHECK(std::abs(advantage_decomposition(a).sum() - value(a).advantage) <= 1e-12);

    const BanditInstance b{Family::Bernoulli, {2, 3}, ConjugateArm{1, 3}, seq({1, 1})};
    CHECK(std::abs(advantage_decomposition(b).sum() - value(b).advantage) <= 1e-12);
    const auto vb = value(b);
    CHECK(std::abs(vb.v1 - vb.v2 - vb.advantage) <= 1e-15);

    for (Family f : {Family::Normal, Family::Poisson, Family::Exponential}) {
        const ConjugateArm a1 = f == Family::Normal ? ConjugateArm{0.5, 2} : ConjugateArm{2, 2};
        const ConjugateArm a2 = f == Family::Normal ? ConjugateArm{0.0, 1} : ConjugateArm{1.5, 1};
        const BanditInstance inst{f, a1, a2, seq({1, 0.9, 0.8})};
        CHECK(advantage_decomposition(inst).sum() == doctest::Approx(value(inst).advantage).epsilon(1e-10));
    }
}

TEST_CASE("policy trace") {
    const BanditInstance inst{Family::Bernoulli, {1, 2}, ConjugateArm{1, 2}, seq({1, 1})};
    CHECK(optimal_policy_trace(inst, {}).value.v == value(inst).v);
    const std::vector<HistoryStep> win{{1, 1.0}}, loss{{1, 0.0}};
    const PolicyDecision w = optimal_policy_trace(inst, win);
    CHECK(w.optimal_arm == 1);
    CHECK(w.state.arm1 == ConjugateArm{2, 3});
    CHECK(w.state.discount == seq({1}));
    CHECK(optimal_policy_trace(inst, loss).optimal_arm == 2);
}

TEST_CASE("errors") {
    const BanditInstance one{Family::Bernoulli, {1, 2}, KnownArm{0.5}, seq({1, 1})};
    CHECK_THROWS_AS(advantage_decomposition(one), Error);
    const BanditInstance huge{Family::Normal, {0, 1}, ConjugateArm{0, 1}, DiscountSequence::uniform(12)};
    try {
        value(huge);
        FAIL("expected HorizonTooLarge");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::HorizonTooLarge);
    }
    CHECK(planned_nodes(huge) > 2'000'000);
}

TEST_CASE("normal n = 2 one-armed closed form") {
    // V(0,1; lambda=0; (1,1)) = E max(0, X/2) with X ~ N(0, 2), i.e. sqrt(1/2) E max(0, Z).
    // The kink limits Gauss-Hermite accuracy, so compare against the rule itself and
    // check the continuum error shrinks with the order.
    const double exact = std::sqrt(0.5) / std::sqrt(2.0 * M_PI);
    const BanditInstance inst{Family::Normal, {0, 1}, KnownArm{0.0}, seq({1, 1})};
    const quad::Rule& h32 = quad::hermite_standard(32);
    double rule = 0.0;
    for (std::size_t k = 0; k < h32.size(); ++k) rule += h32.weights[k] * std::max(0.0, h32.nodes[k]);
    CHECK(value(inst).v == doctest::Approx(std::sqrt(0.5) * rule).epsilon(1e-12));

    EngineOptions fine;
    fine.quad.normal_order = 128;
    const double e32 = std::abs(value(inst).v - exact), e128 = std::abs(value(inst, fine).v - exact);
    CHECK(e32 <= 0.02 * exact);
    CHECK(e128 < e32);
}
