#include "banditlab/indices.hpp"

#include <algorithm>
#include <cmath>

#include "banditlab/error.hpp"

namespace banditlab {

double default_tolerance(Family family) { return is_discrete(family) ? 1e-9 : 1e-6; }

void require_regular(const DiscountSequence& a) {
    if (a.empty() || !(a[0] > 0.0)) fail(ErrorKind::ZeroFirstWeight, "break-even values need a_1 > 0");
    if (!a.is_regular()) fail(ErrorKind::NotRegular, "discount sequence is not regular");
}

BreakEvenResult bisect_breakeven(const std::function<double(double)>& advantage_at, double mean,
                                 const Interval& support, const BreakEvenOptions& opts) {
    if (!(opts.tol > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
    const double scale = std::max(1.0, std::abs(mean));

    double step = std::max(opts.tol, 1e-12 * scale);
    double lo = mean - step;
    int doublings = 0;
    while (!(advantage_at(lo) > 0.0)) {
        if (++doublings > opts.max_doublings) fail(ErrorKind::BracketFailure, "no lower bracket for break-even value");
        step *= 2.0;
        lo = mean - step;
    }

    double hi;
    if (support.bounded_above()) {
        hi = support.hi;
        if (advantage_at(hi) > 0.0) fail(ErrorKind::BracketFailure, "arm 1 still preferred at the support's upper end");
    } else {
        double spread = scale;
        hi = mean + spread;
        doublings = 0;
        while (advantage_at(hi) > 0.0) {
            if (++doublings > opts.max_doublings) fail(ErrorKind::BracketFailure, "no upper bracket for break-even value");
            spread *= 2.0;
            hi = mean + spread;
        }
    }

    BreakEvenResult out;
    while (hi - lo > opts.tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (advantage_at(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++out.iterations;
    }
    out.lo = lo;
    out.hi = hi;
    // the index never sits below the prior mean
    out.lambda = std::max(0.5 * (lo + hi), mean);
    return out;
}

BreakEvenResult breakeven_value(Family family, ConjugateArm arm, const DiscountSequence& a, double tol,
                                const EngineOptions& engine) {
    require_regular(a);
    arm = validate_arm(family, arm);
    auto advantage_at = [&](double lambda) {
        return value(BanditInstance{family, arm, KnownArm{lambda}, a}, engine).advantage;
    };
    return bisect_breakeven(advantage_at, arm.mean(), family_spec(family).support, BreakEvenOptions{tol});
}

double breakeven_observation(Family family, ConjugateArm arm, const DiscountSequence& a, double tol,
                             const EngineOptions& engine) {
    require_regular(a);
    if (a.size() < 2 || !(a[1] > 0.0)) {
        fail(ErrorKind::InsufficientHorizon, "break-even observation needs n >= 2 and a_2 > 0");
    }
    arm = validate_arm(family, arm);
    // inner searches run tighter so their error does not dominate the root
    const double inner_tol = tol / 8.0;
    const double target = breakeven_value(family, arm, a, inner_tol, engine).lambda;
    const DiscountSequence rest = a.tail();
    auto gap = [&](double x) {
        const ConjugateArm next{arm.gamma + x, arm.tau + 1.0};
        return breakeven_value(family, next, rest, inner_tol, engine).lambda - target;
    };

    const double mu = arm.mean();
    const Interval support = family_spec(family).support;
    const double at_mean = gap(mu);
    if (at_mean >= 0.0) {
        if (at_mean > 10.0 * tol) fail(ErrorKind::RootNotBracketed, "updated index already above target at the mean");
        return mu;
    }

    double lo = mu, hi;
    if (support.bounded_above()) {
        hi = support.hi - tol;
        if (!(gap(hi) > 0.0)) fail(ErrorKind::RootNotBracketed, "updated index never reaches the target");
    } else {
        double spread = std::max(1.0, std::abs(mu));
        hi = mu + spread;
        int doublings = 0;
        while (!(gap(hi) > 0.0)) {
            if (++doublings > 60) fail(ErrorKind::RootNotBracketed, "updated index never reaches the target");
            spread *= 2.0;
            hi = mu + spread;
        }
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (gap(mid) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace banditlab
