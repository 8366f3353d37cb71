#include "banditlab/orders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "banditlab/error.hpp"
#include "banditlab/kernels.hpp"

namespace banditlab {

GridDensity::GridDensity(std::vector<double> grid, std::vector<double> weights)
    : grid_(std::move(grid)), weights_(std::move(weights)) {
    if (grid_.empty()) fail(ErrorKind::InvalidArgument, "grid density needs at least one point");
    if (grid_.size() != weights_.size()) fail(ErrorKind::InvalidArgument, "grid and weights differ in length");
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        if (!std::isfinite(grid_[k]) || !std::isfinite(weights_[k])) fail(ErrorKind::InvalidArgument, "nonfinite grid value");
        if (k > 0 && !(grid_[k] > grid_[k - 1])) fail(ErrorKind::InvalidArgument, "grid must be strictly increasing");
        if (weights_[k] < 0.0) fail(ErrorKind::NegativeWeight, "negative grid weight");
    }
    double mass = 0.0;
    for (double w : weights_) mass += w;
    if (!(mass > 0.0)) fail(ErrorKind::ZeroMass, "grid density has zero mass");
    for (double& w : weights_) w /= mass;
    const kernels::Moments m = kernels::moments(grid_, weights_);
    mean_ = m.mean;
    variance_ = m.variance;
    first_ = 0;
    while (!(weights_[first_] > 0.0)) ++first_;
    last_ = weights_.size() - 1;
    while (!(weights_[last_] > 0.0)) --last_;
}

std::vector<double> midpoint_grid(std::size_t n, double lo, double hi) {
    if (n == 0 || !(hi > lo)) fail(ErrorKind::InvalidArgument, "midpoint grid needs n >= 1 and lo < hi");
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = lo + (hi - lo) * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    return x;
}

std::vector<double> linear_grid(std::size_t n, double lo, double hi) {
    if (n < 2 || !(hi > lo)) fail(ErrorKind::InvalidArgument, "linear grid needs n >= 2 and lo < hi");
    std::vector<double> x(n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) x[k] = lo + h * static_cast<double>(k);
    x.back() = hi;
    return x;
}

GridDensity discretize_log(std::span<const double> grid, const std::function<double(double)>& log_density) {
    std::vector<double> lw(grid.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        lw[k] = log_density(grid[k]);
        if (std::isnan(lw[k])) fail(ErrorKind::InvalidArgument, "log density is NaN");
        top = std::max(top, lw[k]);
    }
    if (!std::isfinite(top)) fail(ErrorKind::ZeroMass, "density vanishes on the whole grid");
    std::vector<double> w(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) w[k] = std::exp(lw[k] - top);
    return GridDensity(std::vector<double>(grid.begin(), grid.end()), std::move(w));
}

GridDensity discretize(std::span<const double> grid, const std::function<double(double)>& density) {
    std::vector<double> w(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) w[k] = density(grid[k]);
    return GridDensity(std::vector<double>(grid.begin(), grid.end()), std::move(w));
}

GridDensity discretize_beta(std::span<const double> grid, double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) fail(ErrorKind::InvalidArgument, "beta parameters must be positive");
    for (double p : grid) {
        if (!(p > 0.0 && p < 1.0)) fail(ErrorKind::BoundarySupport, "beta discretization needs a grid inside (0,1)");
    }
    return discretize_log(grid, [&](double p) { return (alpha - 1.0) * std::log(p) + (beta - 1.0) * std::log1p(-p); });
}

GridDensity discretize_normal(std::span<const double> grid, double mean, double variance) {
    if (!(variance > 0.0)) fail(ErrorKind::InvalidArgument, "normal variance must be positive");
    return discretize_log(grid, [&](double x) { return -0.5 * (x - mean) * (x - mean) / variance; });
}

GridDensity point_mass(std::span<const double> grid, double x) {
    if (grid.empty()) fail(ErrorKind::InvalidArgument, "empty grid");
    std::size_t best = 0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (std::abs(grid[k] - x) < std::abs(grid[best] - x)) best = k;
    }
    std::vector<double> w(grid.size(), 0.0);
    w[best] = 1.0;
    return GridDensity(std::vector<double>(grid.begin(), grid.end()), std::move(w));
}

namespace {

void require_same_grid(const GridDensity& f, const GridDensity& g) {
    if (!f.same_grid(g)) fail(ErrorKind::GridMismatch, "densities live on different grids");
}

// log(f_k / g_k) over the shared support
std::vector<double> log_ratio(const GridDensity& f, const GridDensity& g) {
    require_same_grid(f, g);
    if (f.first_positive() != g.first_positive() || f.last_positive() != g.last_positive()) {
        fail(ErrorKind::SupportMismatch, "supports differ");
    }
    std::vector<double> r;
    r.reserve(f.last_positive() - f.first_positive() + 1);
    for (std::size_t k = f.first_positive(); k <= f.last_positive(); ++k) {
        const double a = f.weights()[k], b = g.weights()[k];
        if (!(a > 0.0) || !(b > 0.0)) fail(ErrorKind::SupportMismatch, "support has an interior zero");
        r.push_back(std::log(a) - std::log(b));
    }
    return r;
}

}  // namespace

GridDensity mix(const GridDensity& f, const GridDensity& g, double eps) {
    require_same_grid(f, g);
    if (!(eps >= 0.0 && eps <= 1.0)) fail(ErrorKind::InvalidArgument, "mixing weight outside [0,1]");
    std::vector<double> w(f.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = (1.0 - eps) * f.weights()[k] + eps * g.weights()[k];
    return GridDensity(std::vector<double>(f.grid().begin(), f.grid().end()), std::move(w));
}

GridDensity tilt_to_mean(const GridDensity& f, double target) {
    const double xlo = f.grid()[f.first_positive()], xhi = f.grid()[f.last_positive()];
    if (f.degenerate() || !(target > xlo && target < xhi)) {
        if (std::abs(target - f.mean()) <= 0.0) return f;
        fail(ErrorKind::InvalidArgument, "tilt target outside the open support hull");
    }
    std::vector<double> out(f.size());
    auto tilted_mean = [&](double a) {
        kernels::exp_tilt(f.grid(), f.weights(), a, 0.0, out);
        return kernels::moments(f.grid(), out);
    };
    const double scale = 1.0 / std::max(xhi - xlo, 1e-300);
    double lo = -scale, hi = scale;
    for (int i = 0; i < 200 && tilted_mean(lo).mean > target; ++i) lo *= 2.0;
    for (int i = 0; i < 200 && tilted_mean(hi).mean < target; ++i) hi *= 2.0;
    double a = 0.0;
    for (int it = 0; it < 400; ++it) {
        const kernels::Moments m = tilted_mean(a);
        const double err = m.mean - target;
        if (std::abs(err) <= 1e-15 * std::max(1.0, std::abs(target))) break;
        if (err > 0.0) hi = a; else lo = a;
        double next = m.variance > 0.0 ? a - err / m.variance : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == a) break;
        a = next;
    }
    kernels::exp_tilt(f.grid(), f.weights(), a, 0.0, out);
    return GridDensity(std::vector<double>(f.grid().begin(), f.grid().end()), std::move(out));
}

std::vector<double> cell_densities(const GridDensity& f) {
    const auto x = f.grid();
    const auto w = f.weights();
    const std::size_t n = x.size();
    std::vector<double> d(n);
    if (n == 1) {
        d[0] = w[0];
        return d;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double left = k == 0 ? x[0] - 0.5 * (x[1] - x[0]) : 0.5 * (x[k - 1] + x[k]);
        const double right = k + 1 == n ? x[k] + 0.5 * (x[k] - x[k - 1]) : 0.5 * (x[k] + x[k + 1]);
        d[k] = w[k] / (right - left);
    }
    return d;
}

bool leq_st(const GridDensity& f, const GridDensity& g) {
    require_same_grid(f, g);
    double cf = 0.0, cg = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        cf += f.weights()[k];
        cg += g.weights()[k];
        if (cf < cg - kStSlack) return false;
    }
    return true;
}

bool leq_lr(const GridDensity& f, const GridDensity& g) {
    const std::vector<double> r = log_ratio(f, g);
    for (std::size_t k = 1; k < r.size(); ++k) {
        if (r[k] > r[k - 1] + kLrSlack) return false;
    }
    return true;
}

bool leq_lc(const GridDensity& f, const GridDensity& g) {
    require_same_grid(f, g);
    const auto x = f.grid();
    if (x.size() > 2) {
        const double h = x[1] - x[0];
        for (std::size_t k = 2; k < x.size(); ++k) {
            if (std::abs((x[k] - x[k - 1]) - h) > 1e-8 * h) fail(ErrorKind::NonUniformGrid, "lc test needs uniform spacing");
        }
    }
    const std::vector<double> r = log_ratio(f, g);
    for (std::size_t k = 1; k + 1 < r.size(); ++k) {
        if (r[k + 1] - 2.0 * r[k] + r[k - 1] > kLcSlack) return false;
    }
    return true;
}

bool leq_lc_nonuniform(const GridDensity& f, const GridDensity& g) {
    const std::vector<double> r = log_ratio(f, g);
    const auto x = f.grid().subspan(f.first_positive(), r.size());
    for (std::size_t k = 1; k + 1 < r.size(); ++k) {
        const double s0 = (r[k] - r[k - 1]) / (x[k] - x[k - 1]);
        const double s1 = (r[k + 1] - r[k]) / (x[k + 1] - x[k]);
        if ((s1 - s0) * 0.5 * (x[k + 1] - x[k - 1]) > kLcSlack) return false;
    }
    return true;
}

std::vector<double> stop_loss_values(const GridDensity& f, std::span<const double> b) {
    std::vector<double> out(b.size());
    kernels::stop_loss(f.grid(), f.weights(), b, out);
    return out;
}

bool leq_cx(const GridDensity& f, const GridDensity& g) {
    require_same_grid(f, g);
    if (std::abs(f.mean() - g.mean()) > kMeanSlack) fail(ErrorKind::UnequalMeans, "convex order needs equal means");
    const std::vector<double> sf = stop_loss_values(f, f.grid());
    const std::vector<double> sg = stop_loss_values(g, g.grid());
    for (std::size_t k = 0; k < sf.size(); ++k) {
        if (sf[k] > sg[k] + kCxSlack) return false;
    }
    return true;
}

std::vector<int> sign_changes(std::span<const double> values, double tol) {
    std::vector<int> pattern;
    for (double v : values) {
        if (std::abs(v) <= tol) continue;
        const int s = v > 0.0 ? 1 : -1;
        if (pattern.empty() || pattern.back() != s) pattern.push_back(s);
    }
    return pattern;
}

namespace {

void require_unit_grid(const GridDensity& f) {
    if (f.grid().front() < 0.0 || f.grid().back() > 1.0) fail(ErrorKind::InvalidArgument, "grid must lie in [0,1]");
}

}  // namespace

GridDensity sigma(const GridDensity& f) {
    require_unit_grid(f);
    if (!(f.mean() > 0.0)) fail(ErrorKind::DegenerateMean, "sigma needs a positive mean");
    std::vector<double> w(f.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = f.weights()[k] * f.grid()[k];
    return GridDensity(std::vector<double>(f.grid().begin(), f.grid().end()), std::move(w));
}

GridDensity phi(const GridDensity& f) {
    require_unit_grid(f);
    if (!(f.mean() < 1.0)) fail(ErrorKind::DegenerateMean, "phi needs a mean below 1");
    std::vector<double> w(f.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = f.weights()[k] * (1.0 - f.grid()[k]);
    return GridDensity(std::vector<double>(f.grid().begin(), f.grid().end()), std::move(w));
}

MixturePair mixture_pair(const GridDensity& f, const GridDensity& f_tilde) {
    if (std::abs(f.mean() - f_tilde.mean()) > kMeanSlack) fail(ErrorKind::UnequalMeans, "mixture pair needs equal means");
    if (!(f_tilde.mean() > 0.0 && f_tilde.mean() < 1.0)) fail(ErrorKind::DegeneratePrior, "reference prior has a boundary mean");
    const GridDensity st = sigma(f_tilde), pt = phi(f_tilde);
    const double spread = st.mean() - pt.mean();
    if (!(spread > 0.0)) fail(ErrorKind::DegeneratePrior, "reference prior is a point mass");
    const double ms = sigma(f).mean(), mp = phi(f).mean();

    MixturePair out;
    out.eps_star = (st.mean() - ms) / spread;
    out.eps_sub = (mp - pt.mean()) / spread;
    // roundoff around an exact zero
    if (out.eps_star < 0.0 && out.eps_star > -1e-12) out.eps_star = 0.0;
    if (out.eps_sub < 0.0 && out.eps_sub > -1e-12) out.eps_sub = 0.0;
    if (!(out.eps_star >= 0.0 && out.eps_star < 1.0) || !(out.eps_sub >= 0.0 && out.eps_sub < 1.0)) {
        fail(ErrorKind::OrderViolation, "mixture weight outside [0,1)");
    }
    out.g_star = mix(st, pt, out.eps_star);
    out.g_sub = mix(pt, st, out.eps_sub);
    out.balance_residual = f.mean() * out.eps_star - (1.0 - f.mean()) * out.eps_sub;
    if (std::abs(out.g_star.mean() - ms) > 1e-9 || std::abs(out.g_sub.mean() - mp) > 1e-9 ||
        std::abs(out.balance_residual) > 1e-9) {
        fail(ErrorKind::OrderViolation, "mixture postconditions fail");
    }
    return out;
}

GridDensity logit_reparam(const GridDensity& f) {
    std::vector<double> theta(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double p = f.grid()[k];
        if (!(p > 0.0 && p < 1.0)) fail(ErrorKind::BoundarySupport, "logit needs grid points inside (0,1)");
        theta[k] = std::log(p) - std::log1p(-p);
    }
    return GridDensity(std::move(theta), std::vector<double>(f.weights().begin(), f.weights().end()));
}

}  // namespace banditlab
