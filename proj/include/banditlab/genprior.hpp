#pragma once

#include <span>
#include <vector>

#include "banditlab/discount.hpp"
#include "banditlab/engine.hpp"
#include "banditlab/orders.hpp"
#include "banditlab/quadrature.hpp"

namespace banditlab {

// ---- Bernoulli arms with grid priors on p in [0, 1] ----

/// Two-armed value with general grid priors. Success/failure counts index the
/// posteriors; their means come from a table of moments sum_k w_k p^s (1-p)^f.
ValueResult vb_value(const GridDensity& f1, const GridDensity& f2, const DiscountSequence& a);
/// One-armed value against a known payoff.
ValueResult vb_value(const GridDensity& f1, KnownArm known, const DiscountSequence& a);

/// Reference recursion that applies sigma/phi to explicit grid densities at
/// every node. Exponential in n; for tests.
ValueResult vb_value_reference(const GridDensity& f1, const GridDensity& f2, const DiscountSequence& a);
ValueResult vb_value_reference(const GridDensity& f1, KnownArm known, const DiscountSequence& a);

/// Break-even known payoff for a bernoulli arm with grid prior f.
double lambda_b(const GridDensity& f, const DiscountSequence& a, double tol = 1e-9);

// ---- Normal arms (unit observation variance) with grid priors on theta ----

/// Grid prior on a uniform theta grid.
struct NormalGridPrior {
    GridDensity density;

    double theta_min() const { return density.grid().front(); }
    double theta_max() const { return density.grid().back(); }
    double mean() const { return density.mean(); }
    double variance() const { return density.variance(); }
};

/// Validates uniform spacing (NonUniformGrid) and at least 3 points.
NormalGridPrior make_normal_prior(GridDensity density);
NormalGridPrior make_normal_prior(double theta_min, double theta_max, std::vector<double> weights);

/// Discretized N(mean, variance) on `points` grid points spanning mean +- half_width * sd.
NormalGridPrior normal_grid_prior(double mean, double variance, std::size_t points = 2001, double half_width = 8.0);

/// Arbitrary log density on a given uniform grid.
NormalGridPrior normal_grid_prior(double theta_min, double theta_max, std::size_t points,
                                  const std::function<double(double)>& log_density);

/// Posterior after observing x: weights times exp(x theta - theta^2 / 2).
/// ObservationOutsideSafeRange when the posterior puts 1e-8 or more mass in
/// the outer sixteenth of the grid span at either end.
NormalGridPrior normal_posterior(const NormalGridPrior& f, double x);

/// Posterior after k observations summing to s; unchecked.
GridDensity normal_posterior_raw(const GridDensity& f, double s, double k);

/// Predictive law of one observation: the prior convolved with N(0, 1).
struct NormalPredictive {
    GridDensity mixing;  ///< the theta prior
    quad::Rule rule;     ///< Gauss rule for the predictive law
    double mean = 0.0;
    double variance = 0.0;

    /// Exact mixture-of-normals density at each x.
    std::vector<double> density(std::span<const double> x) const;
};

/// Gauss rule with `order` nodes: a Stieltjes rule for the theta measure,
/// tensored with Gauss-Hermite, reduced again by Stieltjes. Exact for
/// polynomials up to degree 2 order - 1.
quad::Rule predictive_rule(const GridDensity& theta_measure, std::size_t order = 32);

NormalPredictive normal_predictive(const NormalGridPrior& f, std::size_t order = 32);

/// m(x; f), the posterior mean of theta after observing x.
double posterior_mean_fn(const NormalGridPrior& f, double x);

struct HeatCheck {
    double lhs = 0.0;  ///< central difference of m at x
    double rhs = 0.0;  ///< posterior variance at x
    double abs_err = 0.0;
};

HeatCheck check_heat_identity(const NormalGridPrior& f, double x, double h);

struct GenPriorOptions {
    std::size_t quad_order = 32;
    std::size_t node_budget = 2'000'000;
};

/// Planned (state, stage) evaluations for vn_value.
std::size_t vn_planned_nodes(std::size_t n, bool one_armed, const GenPriorOptions& opts = {});

/// Two-armed normal value by backward induction over quadrature trees.
/// HorizonTooLarge when the planned tree exceeds the node budget.
ValueResult vn_value(const NormalGridPrior& f1, const NormalGridPrior& f2, const DiscountSequence& a,
                     const GenPriorOptions& opts = {});
ValueResult vn_value(const NormalGridPrior& f1, KnownArm known, const DiscountSequence& a,
                     const GenPriorOptions& opts = {});

/// Break-even known payoff for a normal arm with grid prior f.
double lambda_n(const NormalGridPrior& f, const DiscountSequence& a, double tol = 1e-6,
                const GenPriorOptions& opts = {});

// ---- Stop-loss check for monotone maps ----

enum class SlopeDirection { Contraction, Expansion };

struct CxCheck {
    bool holds = false;
    double worst_gap = 0.0;  ///< max over b of (smaller side) - (larger side); <= 0 when it holds
};

/// g given by its values at X's grid points. Contraction: 0 <= g' <= 1 and
/// g(X) <=cx X. Expansion: g' >= 1 and X <=cx g(X). Stop-loss values are
/// compared at every atom of X and g(X) with slack 1e-10.
/// MeanMismatch when E g(X) != E X (1e-9); SlopeBoundViolated when the
/// sampled slopes break the bound.
CxCheck contraction_cx_check(std::span<const double> g_values, const GridDensity& x,
                             SlopeDirection direction = SlopeDirection::Contraction);

}  // namespace banditlab
