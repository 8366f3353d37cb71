#pragma once

#include <functional>
#include <span>
#include <vector>

namespace banditlab {

/// Point masses on a strictly increasing grid, normalized to total mass 1.
class GridDensity {
public:
    GridDensity() = default;
    /// Throws InvalidArgument (size mismatch, empty, grid not strictly
    /// increasing, nonfinite values), NegativeWeight or ZeroMass.
    GridDensity(std::vector<double> grid, std::vector<double> weights);

    std::size_t size() const noexcept { return grid_.size(); }
    std::span<const double> grid() const noexcept { return grid_; }
    std::span<const double> weights() const noexcept { return weights_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return variance_; }

    /// [first, last] index range with positive weight.
    std::size_t first_positive() const noexcept { return first_; }
    std::size_t last_positive() const noexcept { return last_; }
    /// True when exactly one grid point carries mass.
    bool degenerate() const noexcept { return first_ == last_; }

    bool same_grid(const GridDensity& other) const noexcept { return grid_ == other.grid_; }

    friend bool operator==(const GridDensity&, const GridDensity&) = default;

private:
    std::vector<double> grid_;
    std::vector<double> weights_;
    double mean_ = 0.0;
    double variance_ = 0.0;
    std::size_t first_ = 0;
    std::size_t last_ = 0;
};

/// Cell midpoints lo + (k + 0.5)(hi - lo)/n, k = 0..n-1. Odd n puts a point at the center.
std::vector<double> midpoint_grid(std::size_t n, double lo = 0.0, double hi = 1.0);

/// n equally spaced points from lo to hi inclusive.
std::vector<double> linear_grid(std::size_t n, double lo, double hi);

/// Weights proportional to exp(log_density(x_k)); -inf gives weight 0.
GridDensity discretize_log(std::span<const double> grid, const std::function<double(double)>& log_density);

GridDensity discretize(std::span<const double> grid, const std::function<double(double)>& density);

/// Beta(alpha, beta) evaluated at the grid points (grid inside (0,1)).
GridDensity discretize_beta(std::span<const double> grid, double alpha, double beta);

/// Normal(mean, variance) evaluated at the grid points.
GridDensity discretize_normal(std::span<const double> grid, double mean, double variance);

/// All mass on the grid point nearest x.
GridDensity point_mass(std::span<const double> grid, double x);

/// Mixture (1 - eps) f + eps g on a shared grid.
GridDensity mix(const GridDensity& f, const GridDensity& g, double eps);

/// Exponential tilt w_k exp(a x_k) with a chosen so the mean equals `target`
/// (to 1e-13). Leaves every relative log-concavity relation unchanged.
GridDensity tilt_to_mean(const GridDensity& f, double target);

/// Mass divided by cell width, cells bounded by midpoints between neighbours.
std::vector<double> cell_densities(const GridDensity& f);

inline constexpr double kStSlack = 1e-12;
inline constexpr double kLrSlack = 1e-10;
inline constexpr double kLcSlack = 1e-8;
inline constexpr double kCxSlack = 1e-10;
inline constexpr double kMeanSlack = 1e-9;

/// f <=st g: CDF of f >= CDF of g everywhere (slack 1e-12). GridMismatch.
bool leq_st(const GridDensity& f, const GridDensity& g);

/// f <=lr g: log(f_k / g_k) nonincreasing on the common support.
/// GridMismatch; SupportMismatch unless both supports are the same contiguous index range.
bool leq_lr(const GridDensity& f, const GridDensity& g);

/// f <=lc g: log(f_k / g_k) concave (second differences <= 1e-8).
/// As leq_lr plus NonUniformGrid.
bool leq_lc(const GridDensity& f, const GridDensity& g);

/// Concavity of the log ratio against the grid coordinate for arbitrary
/// spacing: successive slopes must not increase (slack 1e-8 per unit slope
/// change scaled by the local spacing).
bool leq_lc_nonuniform(const GridDensity& f, const GridDensity& g);

/// f <=cx g by stop-loss comparison at every grid point (slack 1e-10).
/// GridMismatch; UnequalMeans when |mean(f) - mean(g)| > 1e-9.
bool leq_cx(const GridDensity& f, const GridDensity& g);

/// Stop-loss transform E max{0, Z - b} for each b.
std::vector<double> stop_loss_values(const GridDensity& f, std::span<const double> b);

/// Nonzero sign runs of `values` (|v| <= tol counts as zero), as -1 / +1.
std::vector<int> sign_changes(std::span<const double> values, double tol);

/// Success-posterior reweighting p f(p) / mu(f). DegenerateMean when mu = 0.
GridDensity sigma(const GridDensity& f);
/// Failure-posterior reweighting (1 - p) f(p) / (1 - mu(f)). DegenerateMean when mu = 1.
GridDensity phi(const GridDensity& f);

struct MixturePair {
    double eps_star = 0.0;
    double eps_sub = 0.0;
    GridDensity g_star;  ///< (1 - eps_star) sigma(f~) + eps_star phi(f~), mean mu(sigma f)
    GridDensity g_sub;   ///< eps_sub sigma(f~) + (1 - eps_sub) phi(f~), mean mu(phi f)
    double balance_residual = 0.0;  ///< mu(f) eps_star - (1 - mu(f)) eps_sub
};

/// Mixture representation of sigma(f) / phi(f) through sigma(f~) and phi(f~)
/// for equal-mean f <=lc f~. UnequalMeans; DegeneratePrior when sigma(f~) and
/// phi(f~) share a mean; OrderViolation when an epsilon leaves [0, 1) or the
/// mean / balance postconditions fail.
MixturePair mixture_pair(const GridDensity& f, const GridDensity& f_tilde);

/// Change of variables p -> log(p / (1 - p)). Masses carry over unchanged to
/// the image grid. BoundarySupport unless every grid point is inside (0, 1).
GridDensity logit_reparam(const GridDensity& f);

}  // namespace banditlab
