#include "banditlab/expfam.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "banditlab/error.hpp"
#include "banditlab/quadrature.hpp"

namespace banditlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::array<FamilySpec, 4> kFamilies{{
    {Family::Bernoulli, "bernoulli", Interval{-kInf, kInf}, Interval{0.0, 1.0}, ObservationKind::Discrete},
    {Family::Normal, "normal", Interval{-kInf, kInf}, Interval{-kInf, kInf}, ObservationKind::Continuous},
    {Family::Poisson, "poisson", Interval{-kInf, kInf}, Interval{0.0, kInf}, ObservationKind::Discrete},
    {Family::Exponential, "exponential", Interval{-kInf, 0.0}, Interval{0.0, kInf}, ObservationKind::Continuous},
}};

std::string describe(ConjugateArm arm) {
    return "(gamma=" + std::to_string(arm.gamma) + ", tau=" + std::to_string(arm.tau) + ")";
}

}  // namespace

double FamilySpec::psi(double theta) const {
    switch (id) {
        case Family::Bernoulli: return theta > 0 ? theta + std::log1p(std::exp(-theta)) : std::log1p(std::exp(theta));
        case Family::Normal: return 0.5 * theta * theta;
        case Family::Poisson: return std::exp(theta);
        case Family::Exponential: return theta < 0 ? -std::log(-theta) : kInf;
    }
    return kInf;
}

const FamilySpec& family_spec(Family family) { return kFamilies[static_cast<std::size_t>(family)]; }

Family family_from_name(std::string_view name) {
    for (const auto& f : kFamilies) {
        if (f.name == name) return f.id;
    }
    fail(ErrorKind::UnknownFamily, "unknown family '" + std::string(name) + "'");
}

std::string_view family_name(Family family) { return family_spec(family).name; }

ConjugateArm validate_arm(Family family, ConjugateArm arm) {
    if (!std::isfinite(arm.gamma) || !std::isfinite(arm.tau) || !(arm.tau > 0.0)) {
        fail(ErrorKind::ImproperPrior, "prior weight must be positive and finite " + describe(arm));
    }
    if (!family_spec(family).support.contains(arm.mean())) {
        fail(ErrorKind::ImproperPrior, "prior mean outside the open support " + describe(arm));
    }
    return arm;
}

ConjugateArm posterior_update(Family family, ConjugateArm arm, double x) {
    if (!std::isfinite(x) || !family_spec(family).support.contains_closed(x)) {
        fail(ErrorKind::ObservationOutOfSupport,
             "observation " + std::to_string(x) + " outside the support of " + std::string(family_name(family)));
    }
    return ConjugateArm{arm.gamma + x, arm.tau + 1.0};
}

ConjugateArm scale_arm(const ConjugateArm& arm, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) fail(ErrorKind::NonPositiveScale, "scale must be positive");
    return ConjugateArm{c * arm.gamma, c * arm.tau};
}

double Predictive::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) m += weights[i] * points[i];
    return m;
}

double Predictive::variance() const {
    const double m = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) v += weights[i] * (points[i] - m) * (points[i] - m);
    return v;
}

namespace {

Predictive bernoulli_predictive(ConjugateArm arm) {
    const double p = arm.mean();
    Predictive out;
    out.kind = ObservationKind::Discrete;
    if (p <= 0.0) {
        out.points = {0.0};
        out.weights = {1.0};
    } else if (p >= 1.0) {
        out.points = {1.0};
        out.weights = {1.0};
    } else {
        out.points = {0.0, 1.0};
        out.weights = {1.0 - p, p};
    }
    return out;
}

// Negative binomial with size gamma and success probability tau / (tau + 1).
Predictive poisson_predictive(ConjugateArm arm, double tail) {
    Predictive out;
    out.kind = ObservationKind::Discrete;
    const double q = 1.0 / (arm.tau + 1.0);
    double pk = std::exp(arm.gamma * std::log(arm.tau / (arm.tau + 1.0)));
    double cdf = 0.0;
    constexpr std::size_t kMaxSupport = 1u << 22;
    for (std::size_t k = 0; k < kMaxSupport; ++k) {
        out.points.push_back(static_cast<double>(k));
        out.weights.push_back(pk);
        cdf += pk;
        if (1.0 - cdf < tail && static_cast<double>(k) >= arm.mean()) break;
        pk *= (arm.gamma + static_cast<double>(k)) / static_cast<double>(k + 1) * q;
    }
    for (auto& w : out.weights) w /= cdf;
    return out;
}

Predictive normal_predictive(ConjugateArm arm, std::size_t order) {
    const auto& rule = quad::hermite_standard(order);
    const double sd = std::sqrt(1.0 + 1.0 / arm.tau);
    Predictive out;
    out.kind = ObservationKind::Continuous;
    out.points.resize(rule.size());
    out.weights = rule.weights;
    for (std::size_t i = 0; i < rule.size(); ++i) out.points[i] = arm.mean() + sd * rule.nodes[i];
    return out;
}

// Lomax(shape tau + 1, scale gamma). Probability transform u = 1 - t^p with
// p (1 - 1/(tau+1)) = 4, so the quantile term gamma t^{-p/(tau+1)} times the
// Jacobian p t^{p-1} is the cubic p gamma t^3: the mean is integrated exactly
// and the heavy tail is resolved by the clustering of nodes near t = 0.
Predictive exponential_predictive(ConjugateArm arm, std::size_t order) {
    const auto& rule = quad::legendre_unit(order);
    const double shape = arm.tau + 1.0;
    const double p = 4.0 * shape / arm.tau;
    Predictive out;
    out.kind = ObservationKind::Continuous;
    out.points.resize(rule.size());
    out.weights.resize(rule.size());
    double total = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double t = rule.nodes[i];
        const double log_t = std::log(t);
        out.points[i] = arm.gamma * std::expm1(-p / shape * log_t);
        out.weights[i] = rule.weights[i] * p * std::exp((p - 1.0) * log_t);
        total += out.weights[i];
    }
    for (auto& w : out.weights) w /= total;
    return out;
}

}  // namespace

Predictive predictive(Family family, ConjugateArm arm, const QuadratureOptions& opts) {
    switch (family) {
        case Family::Bernoulli: return bernoulli_predictive(arm);
        case Family::Normal: return normal_predictive(validate_arm(family, arm), opts.normal_order);
        case Family::Poisson: return poisson_predictive(validate_arm(family, arm), opts.poisson_tail);
        case Family::Exponential: return exponential_predictive(validate_arm(family, arm), opts.exponential_order);
    }
    fail(ErrorKind::UnknownFamily, "unknown family");
}

double predictive_density(Family family, ConjugateArm arm, double x) {
    const double mu = arm.mean();
    switch (family) {
        case Family::Bernoulli:
            if (x == 1.0) return mu;
            if (x == 0.0) return 1.0 - mu;
            return 0.0;
        case Family::Normal: {
            const double var = 1.0 + 1.0 / arm.tau;
            return std::exp(-0.5 * (x - mu) * (x - mu) / var) / std::sqrt(2.0 * std::numbers::pi * var);
        }
        case Family::Poisson: {
            if (x < 0.0 || x != std::floor(x)) return 0.0;
            const double g = arm.gamma, t = arm.tau;
            return std::exp(std::lgamma(g + x) - std::lgamma(g) - std::lgamma(x + 1.0) + g * std::log(t / (t + 1.0)) -
                            x * std::log(t + 1.0));
        }
        case Family::Exponential: {
            if (x < 0.0) return 0.0;
            const double shape = arm.tau + 1.0;
            return shape / arm.gamma * std::exp(-(shape + 1.0) * std::log1p(x / arm.gamma));
        }
    }
    return 0.0;
}

namespace {

// log of the integral over Theta of exp(theta g - t psi(theta)) by the
// trapezoid rule on a truncated grid around the mode. The exponential family
// is integrated in u = log(-theta) so the integrand is smooth on all of R.
double log_theta_integral(Family family, double g, double t) {
    const FamilySpec& spec = family_spec(family);
    auto log_integrand = [&](double u) {
        if (family == Family::Exponential) {
            const double theta = -std::exp(u);
            return theta * g - t * spec.psi(theta) + u;
        }
        return u * g - t * spec.psi(u);
    };
    double mode = 0.0;
    switch (family) {
        case Family::Bernoulli: mode = std::log(g / (t - g)); break;
        case Family::Normal: mode = g / t; break;
        case Family::Poisson: mode = std::log(g / t); break;
        case Family::Exponential: mode = std::log((t + 1.0) / g); break;
    }
    const double top = log_integrand(mode);
    auto reach = [&](double dir) {
        double r = 0.25;
        while (log_integrand(mode + dir * r) > top - 60.0 && r < 1e6) r *= 1.5;
        return r;
    };
    const double lo = mode - reach(-1.0);
    const double hi = mode + reach(1.0);
    constexpr int kPoints = 40001;
    const double h = (hi - lo) / (kPoints - 1);
    double acc = 0.0;
    for (int i = 0; i < kPoints; ++i) {
        const double wt = (i == 0 || i == kPoints - 1) ? 0.5 : 1.0;
        acc += wt * std::exp(log_integrand(lo + i * h) - top);
    }
    return top + std::log(acc * h);
}

}  // namespace

double theta_integrated_density(Family family, ConjugateArm arm, double x) {
    const double log_ratio = log_theta_integral(family, arm.gamma + x, arm.tau + 1.0) -
                             log_theta_integral(family, arm.gamma, arm.tau);
    switch (family) {
        case Family::Bernoulli: return (x == 0.0 || x == 1.0) ? std::exp(log_ratio) : 0.0;
        case Family::Poisson: return std::exp(log_ratio - std::lgamma(x + 1.0));
        case Family::Normal: return std::exp(log_ratio - 0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
        case Family::Exponential: return x >= 0.0 ? std::exp(log_ratio) : 0.0;
    }
    return 0.0;
}

}  // namespace banditlab
