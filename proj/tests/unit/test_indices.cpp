#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "banditlab/engine.hpp"
#include "banditlab/error.hpp"
#include "banditlab/indices.hpp"

using namespace banditlab;

namespace {
DiscountSequence seq(std::vector<double> v) { return DiscountSequence::validate(std::move(v)); }

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}
}  // namespace

TEST_CASE("hand-derived break-even values") {
    CHECK(breakeven_value(Family::Bernoulli, {1, 2}, seq({1}), 1e-10).lambda == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(breakeven_value(Family::Bernoulli, {1, 2}, seq({1, 1}), 1e-10).lambda - 5.0 / 9.0) <= 1e-9);
    CHECK(std::abs(breakeven_value(Family::Bernoulli, {2, 4}, seq({1, 1}), 1e-10).lambda - 8.0 / 15.0) <= 1e-9);
}

TEST_CASE("bracket and mean bound") {
    for (Family f : {Family::Bernoulli, Family::Normal, Family::Poisson, Family::Exponential}) {
        CAPTURE(family_name(f));
        const ConjugateArm arm = f == Family::Normal ? ConjugateArm{0.4, 2} : ConjugateArm{0.6, 2};
        const double tol = default_tolerance(f);
        const BreakEvenResult r = breakeven_value(f, arm, seq({1, 1, 1}), tol);
        CHECK(r.hi - r.lo <= tol);
        CHECK(r.lambda >= arm.mean());
        // arm 1 strictly better at lo, known arm optimal at hi
        CHECK(value({f, arm, KnownArm{r.lo}, seq({1, 1, 1})}).optimal_arm == 1);
        CHECK(value({f, arm, KnownArm{r.hi + tol}, seq({1, 1, 1})}).optimal_arm == 2);
    }
}

TEST_CASE("break-even observation") {
    const double b = breakeven_observation(Family::Bernoulli, {1, 2}, seq({1, 1}), 1e-10);
    CHECK(std::abs(b - 2.0 / 3.0) <= 1e-8);

    // normal n = 2: inner index is the posterior mean (b + 0)/2
    const double lam = breakeven_value(Family::Normal, {0, 1}, seq({1, 1}), 1e-9).lambda;
    const double bn = breakeven_observation(Family::Normal, {0, 1}, seq({1, 1}), 1e-9);
    CHECK(bn >= 0.0);
    CHECK(bn / 2.0 == doctest::Approx(lam).epsilon(1e-6));

    for (Family f : {Family::Poisson, Family::Exponential}) {
        const ConjugateArm arm{3, 2};
        const double tol = default_tolerance(f);
        const double bf = breakeven_observation(f, arm, seq({1, 1, 1}), tol);
        CHECK(bf >= arm.mean() - tol);
        const double l0 = breakeven_value(f, arm, seq({1, 1, 1}), tol / 8).lambda;
        const double l1 = breakeven_value(f, posterior_update(f, arm, bf), seq({1, 1}), tol / 8).lambda;
        CHECK(std::abs(l1 - l0) <= 1e-6);
    }
}

TEST_CASE("preconditions") {
    CHECK(kind_of([] { breakeven_value(Family::Bernoulli, {1, 2}, seq({1, 0, 1}), 1e-9); }) == ErrorKind::NotRegular);
    CHECK(kind_of([] { breakeven_value(Family::Bernoulli, {1, 2}, seq({0, 1}), 1e-9); }) == ErrorKind::ZeroFirstWeight);
    CHECK(kind_of([] { breakeven_observation(Family::Bernoulli, {1, 2}, seq({1}), 1e-9); }) ==
          ErrorKind::InsufficientHorizon);
    CHECK(kind_of([] { breakeven_observation(Family::Bernoulli, {1, 2}, seq({1, 0}), 1e-9); }) ==
          ErrorKind::InsufficientHorizon);
}

TEST_CASE("generic bisection") {
    // advantage changes sign at 0.3
    const auto r = bisect_breakeven([](double l) { return 0.3 - l; }, 0.1, Interval{0.0, 1.0}, {1e-12, 60});
    CHECK(r.lambda == doctest::Approx(0.3).epsilon(1e-11));
    // unbounded support, root far above the mean
    const auto u = bisect_breakeven([](double l) { return 40.0 - l; }, 1.0, Interval{}, {1e-10, 60});
    CHECK(u.lambda == doctest::Approx(40.0).epsilon(1e-9));
}
