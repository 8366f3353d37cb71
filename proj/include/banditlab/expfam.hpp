#pragma once

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

namespace banditlab {

enum class Family { Bernoulli, Normal, Poisson, Exponential };

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const noexcept { return x > lo && x < hi; }
    bool contains_closed(double x) const noexcept { return x >= lo && x <= hi; }
    bool bounded_above() const noexcept { return hi < std::numeric_limits<double>::infinity(); }
    bool bounded_below() const noexcept { return lo > -std::numeric_limits<double>::infinity(); }
};

enum class ObservationKind { Discrete, Continuous };

/// One-parameter exponential family f(x|theta) = exp(theta x - psi(theta))
/// relative to a base measure that is never materialized.
struct FamilySpec {
    Family id;
    std::string_view name;
    Interval theta_space;
    Interval support;  ///< smallest open interval whose closure carries the observations
    ObservationKind kind;

    double psi(double theta) const;
};

const FamilySpec& family_spec(Family family);
/// "bernoulli" | "normal" | "poisson" | "exponential"; throws UnknownFamily.
Family family_from_name(std::string_view name);
std::string_view family_name(Family family);
inline bool is_discrete(Family f) { return family_spec(f).kind == ObservationKind::Discrete; }

/// Conjugate prior state: gamma is the prior sum of observations, tau the prior weight.
struct ConjugateArm {
    double gamma = 0.0;
    double tau = 1.0;

    double mean() const noexcept { return gamma / tau; }
    friend bool operator==(const ConjugateArm&, const ConjugateArm&) = default;
};

/// Throws ImproperPrior unless tau > 0 and gamma/tau lies in the open support.
ConjugateArm validate_arm(Family family, ConjugateArm arm);

/// (gamma + x, tau + 1); throws ObservationOutOfSupport when x is outside the closed support.
/// A posterior whose mean lands on the boundary is accepted as a degenerate state.
ConjugateArm posterior_update(Family family, ConjugateArm arm, double x);

inline double prior_mean(const ConjugateArm& arm) noexcept { return arm.mean(); }

/// (c gamma, c tau); throws NonPositiveScale for c <= 0.
ConjugateArm scale_arm(const ConjugateArm& arm, double c);

struct QuadratureOptions {
    std::size_t normal_order = 32;
    std::size_t exponential_order = 64;
    double poisson_tail = 1e-10;
};

/// Marginal law of the next observation: an exact mass table (bernoulli,
/// truncated-and-renormalized poisson) or a quadrature rule for the
/// continuous families. Weights sum to 1.
struct Predictive {
    ObservationKind kind = ObservationKind::Discrete;
    std::vector<double> points;
    std::vector<double> weights;

    double mean() const;
    double variance() const;
};

Predictive predictive(Family family, ConjugateArm arm, const QuadratureOptions& opts = {});

/// Closed-form predictive pmf (discrete) or density (continuous) at x.
double predictive_density(Family family, ConjugateArm arm, double x);

/// Numerical fallback: the predictive pmf/density at x obtained by
/// integrating exp(theta (gamma + x) - (tau + 1) psi(theta)) over a truncated
/// theta grid. Independent of the closed forms; used for cross-validation.
double theta_integrated_density(Family family, ConjugateArm arm, double x);

}  // namespace banditlab
