#include "banditlab/genprior.hpp"

#include "banditlab/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <unordered_map>

#include "banditlab/error.hpp"
#include "banditlab/indices.hpp"
#include "banditlab/kernels.hpp"

namespace banditlab {

namespace {

void require_unit_support(const GridDensity& f) {
    if (f.grid().front() < 0.0 || f.grid().back() > 1.0) fail(ErrorKind::InvalidArgument, "bernoulli grid prior must live on [0,1]");
}

std::vector<double> tail_sums(const DiscountSequence& a) {
    std::vector<double> b(a.size() + 1, 0.0);
    for (std::size_t j = a.size(); j-- > 0;) b[j] = b[j + 1] + a[j];
    return b;
}

// Moment table M(s, f) = sum_k w_k p^s (1 - p)^f for s + f <= order.
class MomentTable {
public:
    MomentTable(const GridDensity& f, int order) : order_(order), table_((order + 1) * (order + 1), 0.0) {
        kernels::power_moment_table(f.grid(), f.weights(), order, table_);
    }
    // posterior mean after s successes and f failures
    double mean(int s, int f) const {
        const double den = at(s, f);
        if (!(den > 0.0)) return 0.0;
        return std::clamp(at(s + 1, f) / den, 0.0, 1.0);
    }

private:
    double at(int s, int f) const { return table_[s * (order_ + 1) + f]; }
    int order_;
    std::vector<double> table_;
};

class VbSolver {
public:
    VbSolver(const GridDensity& f1, const GridDensity* f2, double lambda, const DiscountSequence& a)
        : a_(a.values()), n_(static_cast<int>(a.size())), m1_(f1, n_), lambda_(lambda) {
        if (f2 != nullptr) m2_ = std::make_unique<MomentTable>(*f2, n_);
        if (n_ > 255) fail(ErrorKind::HorizonTooLarge, "grid-prior recursion supports n <= 255");
    }

    std::pair<double, double> branches(int s1, int f1, int s2, int f2) {
        const int j = s1 + f1 + s2 + f2;
        const bool more = j + 1 < n_;
        const double mu1 = m1_.mean(s1, f1);
        double v1 = a_[j] * mu1;
        if (more) {
            if (mu1 > 0.0) v1 += mu1 * value(s1 + 1, f1, s2, f2);
            if (mu1 < 1.0) v1 += (1.0 - mu1) * value(s1, f1 + 1, s2, f2);
        }
        double v2;
        if (!m2_) {
            // known pulls are counted in s2
            v2 = a_[j] * lambda_;
            if (more) v2 += value(s1, f1, s2 + 1, 0);
        } else {
            const double mu2 = m2_->mean(s2, f2);
            v2 = a_[j] * mu2;
            if (more) {
                if (mu2 > 0.0) v2 += mu2 * value(s1, f1, s2 + 1, f2);
                if (mu2 < 1.0) v2 += (1.0 - mu2) * value(s1, f1, s2, f2 + 1);
            }
        }
        return {v1, v2};
    }

private:
    double value(int s1, int f1, int s2, int f2) {
        const std::uint32_t key = (static_cast<std::uint32_t>(s1) << 24) | (static_cast<std::uint32_t>(f1) << 16) |
                                  (static_cast<std::uint32_t>(s2) << 8) | static_cast<std::uint32_t>(f2);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const auto [v1, v2] = branches(s1, f1, s2, f2);
        const double v = std::max(v1, v2);
        memo_.emplace(key, v);
        return v;
    }

    std::span<const double> a_;
    int n_;
    MomentTable m1_;
    std::unique_ptr<MomentTable> m2_;
    double lambda_;
    std::unordered_map<std::uint32_t, double> memo_;
};

// plain recursion on explicit posterior densities
double vb_reference_value(const GridDensity& f1, const GridDensity* f2, double lambda, std::span<const double> a,
                          std::size_t j, double* v1_out = nullptr, double* v2_out = nullptr) {
    if (j == a.size()) return 0.0;
    const double mu1 = f1.mean();
    double v1 = a[j] * mu1;
    if (mu1 > 0.0) v1 += mu1 * vb_reference_value(sigma(f1), f2, lambda, a, j + 1);
    if (mu1 < 1.0) v1 += (1.0 - mu1) * vb_reference_value(phi(f1), f2, lambda, a, j + 1);
    double v2;
    if (f2 == nullptr) {
        v2 = a[j] * lambda + vb_reference_value(f1, nullptr, lambda, a, j + 1);
    } else {
        const double mu2 = f2->mean();
        v2 = a[j] * mu2;
        if (mu2 > 0.0) {
            const GridDensity s2 = sigma(*f2);
            v2 += mu2 * vb_reference_value(f1, &s2, lambda, a, j + 1);
        }
        if (mu2 < 1.0) {
            const GridDensity p2 = phi(*f2);
            v2 += (1.0 - mu2) * vb_reference_value(f1, &p2, lambda, a, j + 1);
        }
    }
    if (v1_out) *v1_out = v1;
    if (v2_out) *v2_out = v2;
    return std::max(v1, v2);
}

}  // namespace

ValueResult vb_value(const GridDensity& f1, const GridDensity& f2, const DiscountSequence& a) {
    require_unit_support(f1);
    require_unit_support(f2);
    if (a.empty()) return ValueResult{};
    VbSolver solver(f1, &f2, 0.0, a);
    const auto [v1, v2] = solver.branches(0, 0, 0, 0);
    return ValueResult::from_branches(v1, v2);
}

ValueResult vb_value(const GridDensity& f1, KnownArm known, const DiscountSequence& a) {
    require_unit_support(f1);
    if (!std::isfinite(known.lambda)) fail(ErrorKind::InvalidArgument, "known payoff must be finite");
    if (a.empty()) return ValueResult{};
    VbSolver solver(f1, nullptr, known.lambda, a);
    const auto [v1, v2] = solver.branches(0, 0, 0, 0);
    return ValueResult::from_branches(v1, v2);
}

ValueResult vb_value_reference(const GridDensity& f1, const GridDensity& f2, const DiscountSequence& a) {
    require_unit_support(f1);
    require_unit_support(f2);
    if (a.empty()) return ValueResult{};
    double v1 = 0.0, v2 = 0.0;
    vb_reference_value(f1, &f2, 0.0, a.values(), 0, &v1, &v2);
    return ValueResult::from_branches(v1, v2);
}

ValueResult vb_value_reference(const GridDensity& f1, KnownArm known, const DiscountSequence& a) {
    require_unit_support(f1);
    if (a.empty()) return ValueResult{};
    double v1 = 0.0, v2 = 0.0;
    vb_reference_value(f1, nullptr, known.lambda, a.values(), 0, &v1, &v2);
    return ValueResult::from_branches(v1, v2);
}

double lambda_b(const GridDensity& f, const DiscountSequence& a, double tol) {
    require_regular(a);
    require_unit_support(f);
    auto advantage_at = [&](double lambda) { return vb_value(f, KnownArm{lambda}, a).advantage; };
    return bisect_breakeven(advantage_at, f.mean(), Interval{0.0, 1.0}, BreakEvenOptions{tol}).lambda;
}

// ---------------------------------------------------------------------------

NormalGridPrior make_normal_prior(GridDensity density) {
    const auto x = density.grid();
    if (x.size() < 3) fail(ErrorKind::InvalidArgument, "normal grid prior needs at least 3 points");
    const double h = x[1] - x[0];
    for (std::size_t k = 2; k < x.size(); ++k) {
        if (std::abs((x[k] - x[k - 1]) - h) > 1e-8 * h) fail(ErrorKind::NonUniformGrid, "theta grid must be uniform");
    }
    return NormalGridPrior{std::move(density)};
}

NormalGridPrior make_normal_prior(double theta_min, double theta_max, std::vector<double> weights) {
    auto grid = linear_grid(weights.size(), theta_min, theta_max);
    return make_normal_prior(GridDensity(std::move(grid), std::move(weights)));
}

NormalGridPrior normal_grid_prior(double mean, double variance, std::size_t points, double half_width) {
    if (!(variance > 0.0)) fail(ErrorKind::InvalidArgument, "prior variance must be positive");
    const double sd = std::sqrt(variance);
    const auto grid = linear_grid(points, mean - half_width * sd, mean + half_width * sd);
    return make_normal_prior(discretize_normal(grid, mean, variance));
}

NormalGridPrior normal_grid_prior(double theta_min, double theta_max, std::size_t points,
                                  const std::function<double(double)>& log_density) {
    const auto grid = linear_grid(points, theta_min, theta_max);
    return make_normal_prior(discretize_log(grid, log_density));
}

GridDensity normal_posterior_raw(const GridDensity& f, double s, double k) {
    std::vector<double> w(f.size());
    kernels::exp_tilt(f.grid(), f.weights(), s, -0.5 * k, w);
    return GridDensity(std::vector<double>(f.grid().begin(), f.grid().end()), std::move(w));
}

NormalGridPrior normal_posterior(const NormalGridPrior& f, double x) {
    if (!std::isfinite(x)) fail(ErrorKind::InvalidArgument, "observation must be finite");
    GridDensity post = normal_posterior_raw(f.density, x, 1.0);
    const double margin = (f.theta_max() - f.theta_min()) / 16.0;
    const double lo = f.theta_min() + margin, hi = f.theta_max() - margin;
    double outside = 0.0;
    for (std::size_t k = 0; k < post.size(); ++k) {
        if (post.grid()[k] < lo || post.grid()[k] > hi) outside += post.weights()[k];
    }
    if (outside >= 1e-8) {
        fail(ErrorKind::ObservationOutsideSafeRange, "posterior mass near the grid edge is " + fmt_double(outside));
    }
    return NormalGridPrior{std::move(post)};
}

std::vector<double> NormalPredictive::density(std::span<const double> x) const {
    std::vector<double> out(x.size());
    kernels::mixture_normal_density(mixing.grid(), mixing.weights(), x, out);
    return out;
}

quad::Rule predictive_rule(const GridDensity& theta_measure, std::size_t order) {
    const quad::Rule inner = quad::gauss_for_discrete(theta_measure.grid(), theta_measure.weights(), order);
    const quad::Rule& noise = quad::hermite_standard(order);
    std::vector<double> atoms, masses;
    atoms.reserve(inner.size() * noise.size());
    masses.reserve(inner.size() * noise.size());
    for (std::size_t i = 0; i < inner.size(); ++i) {
        for (std::size_t j = 0; j < noise.size(); ++j) {
            atoms.push_back(inner.nodes[i] + noise.nodes[j]);
            masses.push_back(inner.weights[i] * noise.weights[j]);
        }
    }
    return quad::gauss_for_discrete(atoms, masses, order);
}

NormalPredictive normal_predictive(const NormalGridPrior& f, std::size_t order) {
    NormalPredictive out;
    out.mixing = f.density;
    out.rule = predictive_rule(f.density, order);
    out.mean = f.mean();
    out.variance = 1.0 + f.variance();
    return out;
}

double posterior_mean_fn(const NormalGridPrior& f, double x) { return normal_posterior(f, x).mean(); }

HeatCheck check_heat_identity(const NormalGridPrior& f, double x, double h) {
    if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "step must be positive");
    HeatCheck out;
    out.lhs = (posterior_mean_fn(f, x + h) - posterior_mean_fn(f, x - h)) / (2.0 * h);
    out.rhs = normal_posterior(f, x).variance();
    out.abs_err = std::abs(out.lhs - out.rhs);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Posterior after k observations with sum s; children follow the predictive rule.
struct NormalNode {
    double s = 0.0;
    double k = 0.0;
    std::uint32_t id = 0;
    bool has_mean = false;
    double mean = 0.0;
    bool expanded = false;
    std::vector<double> weights;
    std::vector<std::unique_ptr<NormalNode>> children;
};

std::vector<double> log_weights(const GridDensity& f) {
    std::vector<double> out(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        out[k] = f.weights()[k] > 0.0 ? std::log(f.weights()[k]) : -std::numeric_limits<double>::infinity();
    }
    return out;
}

class VnSolver {
public:
    VnSolver(const GridDensity& f1, const GridDensity* f2, double lambda, const DiscountSequence& a,
             const GenPriorOptions& opts)
        : prior1_(f1), prior2_(f2), lambda_(lambda), a_(a.values()), tails_(tail_sums(a)), opts_(opts),
          logw1_(log_weights(f1)), logw2_(f2 ? log_weights(*f2) : std::vector<double>{}) {
        root1_.id = next_id_++;
        root2_.id = next_id_++;
    }

    std::pair<double, double> root_branches() { return branches(&root1_, prior2_ ? &root2_ : nullptr, 0); }

private:
    const GridDensity& prior_of(bool second) const { return second ? *prior2_ : prior1_; }

    double node_mean(NormalNode* node, bool second) {
        if (!node->has_mean) {
            node->mean = kernels::tilted_mean(prior_of(second).grid(), second ? logw2_ : logw1_, node->s, -0.5 * node->k);
            node->has_mean = true;
        }
        return node->mean;
    }

    void expand(NormalNode* node, bool second) {
        if (node->expanded) return;
        const GridDensity post = normal_posterior_raw(prior_of(second), node->s, node->k);
        node->mean = post.mean();
        node->has_mean = true;
        const quad::Rule rule = predictive_rule(post, opts_.quad_order);
        node->weights = rule.weights;
        node->children.reserve(rule.size());
        for (double x : rule.nodes) {
            auto child = std::make_unique<NormalNode>();
            child->s = node->s + x;
            child->k = node->k + 1.0;
            child->id = next_id_++;
            node->children.push_back(std::move(child));
        }
        node->expanded = true;
    }

    std::pair<double, double> branches(NormalNode* n1, NormalNode* n2, std::size_t j) {
        if (++evaluations_ > opts_.node_budget) {
            fail(ErrorKind::HorizonTooLarge, "node budget of " + std::to_string(opts_.node_budget) + " exceeded");
        }
        const bool more = j + 1 < a_.size() && tails_[j + 1] > 0.0;
        double v1 = a_[j] * node_mean(n1, false);
        if (more) {
            expand(n1, false);
            for (std::size_t i = 0; i < n1->children.size(); ++i) {
                v1 += n1->weights[i] * value(n1->children[i].get(), n2, j + 1);
            }
        }
        double v2;
        if (n2 == nullptr) {
            v2 = a_[j] * lambda_;
            if (more) v2 += value(n1, nullptr, j + 1);
        } else {
            v2 = a_[j] * node_mean(n2, true);
            if (more) {
                expand(n2, true);
                for (std::size_t i = 0; i < n2->children.size(); ++i) {
                    v2 += n2->weights[i] * value(n1, n2->children[i].get(), j + 1);
                }
            }
        }
        return {v1, v2};
    }

    double value(NormalNode* n1, NormalNode* n2, std::size_t j) {
        const std::uint64_t key = (static_cast<std::uint64_t>(n1->id) << 36) |
                                  (static_cast<std::uint64_t>(n2 ? n2->id : 0) << 8) | static_cast<std::uint64_t>(j);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const auto [v1, v2] = branches(n1, n2, j);
        const double v = std::max(v1, v2);
        memo_.emplace(key, v);
        return v;
    }

    const GridDensity& prior1_;
    const GridDensity* prior2_;
    double lambda_;
    std::span<const double> a_;
    std::vector<double> tails_;
    GenPriorOptions opts_;
    std::vector<double> logw1_, logw2_;
    NormalNode root1_, root2_;
    std::uint32_t next_id_ = 1;
    std::size_t evaluations_ = 0;
    std::unordered_map<std::uint64_t, double> memo_;
};

void check_budget(std::size_t n, bool one_armed, const GenPriorOptions& opts) {
    const std::size_t planned = vn_planned_nodes(n, one_armed, opts);
    if (planned > opts.node_budget) {
        fail(ErrorKind::HorizonTooLarge, "normal grid recursion needs ~" + std::to_string(planned) +
                                             " node evaluations, budget is " + std::to_string(opts.node_budget));
    }
}

}  // namespace

std::size_t vn_planned_nodes(std::size_t n, bool one_armed, const GenPriorOptions& opts) {
    const double q = static_cast<double>(opts.quad_order);
    double total = 0.0, qj = 1.0, geo = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        geo += qj;
        total += one_armed ? geo : static_cast<double>(j + 1) * qj;
        qj *= q;
        if (total > 1e18) return static_cast<std::size_t>(-1);
    }
    return static_cast<std::size_t>(total);
}

ValueResult vn_value(const NormalGridPrior& f1, const NormalGridPrior& f2, const DiscountSequence& a,
                     const GenPriorOptions& opts) {
    if (a.empty()) return ValueResult{};
    check_budget(a.size(), false, opts);
    VnSolver solver(f1.density, &f2.density, 0.0, a, opts);
    const auto [v1, v2] = solver.root_branches();
    return ValueResult::from_branches(v1, v2);
}

ValueResult vn_value(const NormalGridPrior& f1, KnownArm known, const DiscountSequence& a,
                     const GenPriorOptions& opts) {
    if (!std::isfinite(known.lambda)) fail(ErrorKind::InvalidArgument, "known payoff must be finite");
    if (a.empty()) return ValueResult{};
    check_budget(a.size(), true, opts);
    VnSolver solver(f1.density, nullptr, known.lambda, a, opts);
    const auto [v1, v2] = solver.root_branches();
    return ValueResult::from_branches(v1, v2);
}

double lambda_n(const NormalGridPrior& f, const DiscountSequence& a, double tol, const GenPriorOptions& opts) {
    require_regular(a);
    check_budget(a.size(), true, opts);
    auto advantage_at = [&](double lambda) { return vn_value(f, KnownArm{lambda}, a, opts).advantage; };
    return bisect_breakeven(advantage_at, f.mean(), Interval{}, BreakEvenOptions{tol}).lambda;
}

// ---------------------------------------------------------------------------

CxCheck contraction_cx_check(std::span<const double> g_values, const GridDensity& x, SlopeDirection direction) {
    if (g_values.size() != x.size()) fail(ErrorKind::InvalidArgument, "map must be sampled at every grid point");
    double eg = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) eg += x.weights()[k] * g_values[k];
    if (std::abs(eg - x.mean()) > 1e-9) fail(ErrorKind::MeanMismatch, "E g(X) differs from E X");

    constexpr double slack = 1e-12;
    for (std::size_t k = 1; k < x.size(); ++k) {
        const double slope = (g_values[k] - g_values[k - 1]) / (x.grid()[k] - x.grid()[k - 1]);
        const bool ok = direction == SlopeDirection::Contraction ? (slope >= -slack && slope <= 1.0 + slack)
                                                                 : slope >= 1.0 - slack;
        if (!ok) fail(ErrorKind::SlopeBoundViolated, "sampled slope " + std::to_string(slope) + " breaks the bound");
    }

    std::vector<double> b(x.grid().begin(), x.grid().end());
    b.insert(b.end(), g_values.begin(), g_values.end());
    std::sort(b.begin(), b.end());
    std::vector<double> sx(b.size()), sg(b.size());
    kernels::stop_loss(x.grid(), x.weights(), b, sx);
    kernels::stop_loss(g_values, x.weights(), b, sg);

    CxCheck out;
    out.worst_gap = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double gap = direction == SlopeDirection::Contraction ? sg[i] - sx[i] : sx[i] - sg[i];
        out.worst_gap = std::max(out.worst_gap, gap);
    }
    out.holds = out.worst_gap <= kCxSlack;
    return out;
}

}  // namespace banditlab
