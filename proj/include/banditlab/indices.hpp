#pragma once

#include <functional>

#include "banditlab/discount.hpp"
#include "banditlab/engine.hpp"
#include "banditlab/expfam.hpp"

namespace banditlab {

struct BreakEvenResult {
    double lambda = 0.0;
    double lo = 0.0;  ///< final bracket: arm 1 strictly better at lo
    double hi = 0.0;  ///< the known arm is (weakly) optimal at hi
    int iterations = 0;
};

/// Bisection/bracket settings shared by every break-even search.
struct BreakEvenOptions {
    double tol = 1e-9;
    int max_doublings = 60;
};

/// 1e-9 for bernoulli/poisson, 1e-6 for the quadrature families.
double default_tolerance(Family family);

/// Throws ZeroFirstWeight if a_1 = 0, NotRegular unless the tail sums satisfy
/// b_{j+1}^2 >= b_j b_{j+2}.
void require_regular(const DiscountSequence& a);

/// Generic break-even search for a one-armed problem. `advantage_at(lambda)`
/// is V1 - V2 against a known arm paying lambda; under regular discounting it
/// is positive exactly for lambda below the break-even value. The bracket
/// starts just below `mean` and at the upper end of `support` (or doubles
/// upward when the support is unbounded).
BreakEvenResult bisect_breakeven(const std::function<double(double)>& advantage_at, double mean,
                                 const Interval& support, const BreakEvenOptions& opts);

/// Break-even known-arm payoff: the smallest lambda with
/// V(gamma, tau; lambda; A) <= lambda * sum(a).
BreakEvenResult breakeven_value(Family family, ConjugateArm arm, const DiscountSequence& a, double tol,
                                const EngineOptions& engine = {});

/// Break-even observation b in [gamma/tau, U): one pull returning x keeps
/// the unknown arm at least as attractive as before iff x >= b.
/// Requires n >= 2 and a_2 > 0 (InsufficientHorizon) besides regularity.
double breakeven_observation(Family family, ConjugateArm arm, const DiscountSequence& a, double tol,
                             const EngineOptions& engine = {});

}  // namespace banditlab
