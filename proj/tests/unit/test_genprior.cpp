#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "banditlab/engine.hpp"
#include "banditlab/error.hpp"
#include "banditlab/genprior.hpp"
#include "banditlab/indices.hpp"

using namespace banditlab;

namespace {
DiscountSequence seq(std::vector<double> v) { return DiscountSequence::validate(std::move(v)); }

const std::vector<double>& grid(std::size_t n) {
    static std::map<std::size_t, std::vector<double>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, midpoint_grid(n)).first;
    return it->second;
}
GridDensity uniform(std::size_t n) { return discretize_beta(grid(n), 1, 1); }
}  // namespace

TEST_CASE("vb_value against conjugate values") {
    const double e1001 = std::abs(vb_value(uniform(1001), uniform(1001), seq({1, 1})).v - 13.0 / 12.0);
    const double e4001 = std::abs(vb_value(uniform(4001), uniform(4001), seq({1, 1})).v - 13.0 / 12.0);
    CHECK(e1001 <= 5e-4);
    CHECK(e4001 < e1001);
}

TEST_CASE("vb_value degenerate priors") {
    const auto& g = grid(1001);
    const GridDensity p = point_mass(g, 0.3), q = point_mass(g, 0.6);
    const DiscountSequence a = seq({1, 0.5, 2});
    CHECK(vb_value(p, q, a).v == doctest::Approx(q.mean() * 3.5).epsilon(1e-12));
    CHECK(vb_value(point_mass(g, 0.7), uniform(1001), seq({1})).v == doctest::Approx(point_mass(g, 0.7).mean()));
}

TEST_CASE("vb_value equals the explicit sigma/phi recursion") {
    const GridDensity f1 = discretize_beta(grid(201), 2, 3), f2 = discretize_beta(grid(201), 1.5, 1.5);
    for (auto a : {seq({1}), seq({1, 1}), seq({1, 0.7, 0.3}), seq({2, 1, 1, 0.5})}) {
        CHECK(vb_value(f1, f2, a).v == doctest::Approx(vb_value_reference(f1, f2, a).v).epsilon(1e-12));
        CHECK(vb_value(f1, KnownArm{0.45}, a).v ==
              doctest::Approx(vb_value_reference(f1, KnownArm{0.45}, a).v).epsilon(1e-12));
    }
}

TEST_CASE("lambda_b") {
    CHECK(lambda_b(uniform(1001), seq({1, 1})) == doctest::Approx(5.0 / 9.0).epsilon(5e-4));
    CHECK(lambda_b(discretize_beta(grid(1001), 2, 2), seq({1, 1})) == doctest::Approx(8.0 / 15.0).epsilon(5e-4));
    const GridDensity spike = point_mass(grid(1001), 0.37);
    CHECK(lambda_b(spike, seq({1, 1, 1})) == doctest::Approx(spike.mean()).epsilon(1e-8));
    CHECK_THROWS_AS(lambda_b(uniform(101), seq({1, 0, 1})), Error);
}

TEST_CASE("normal posterior") {
    const NormalGridPrior f = normal_grid_prior(0.0, 1.0);
    const NormalGridPrior post = normal_posterior(f, 0.0);
    CHECK(std::abs(post.mean()) <= 1e-6);
    CHECK(post.variance() == doctest::Approx(0.5).epsilon(1e-6));
    const double alpha = 0.4, tau = 2.5;
    const NormalGridPrior g = normal_grid_prior(alpha, 1.0 / tau);
    for (double x : {-1.0, 0.0, 2.0}) {
        CHECK(posterior_mean_fn(g, x) == doctest::Approx((x + tau * alpha) / (tau + 1)).epsilon(1e-6));
    }
    CHECK(posterior_mean_fn(f, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    try {
        normal_posterior(f, 50.0);
        FAIL("expected ObservationOutsideSafeRange");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ObservationOutsideSafeRange);
    }
}

TEST_CASE("spike priors do not learn") {
    std::vector<double> w(201, 0.0);
    w[140] = 1.0;
    const NormalGridPrior s = make_normal_prior(-5.0, 5.0, w);
    const double theta0 = s.density.grid()[140];
    CHECK(posterior_mean_fn(s, -2.0) == doctest::Approx(theta0));
    CHECK(posterior_mean_fn(s, 3.0) == doctest::Approx(theta0));
    const HeatCheck h = check_heat_identity(s, 0.5, 1e-4);
    CHECK(std::abs(h.lhs) <= 1e-8);
    CHECK(std::abs(h.rhs) <= 1e-12);
}

TEST_CASE("normal predictive") {
    const NormalPredictive p = normal_predictive(normal_grid_prior(0.0, 1.0));
    CHECK(std::abs(p.mean) <= 1e-10);
    CHECK(p.variance == doctest::Approx(2.0).epsilon(1e-6));
    const NormalPredictive q = normal_predictive(normal_grid_prior(0.5, 0.25));
    CHECK(q.variance == doctest::Approx(1.25).epsilon(1e-6));
    const std::vector<double> xs{0.5};
    CHECK(q.density(xs)[0] == doctest::Approx(1.0 / std::sqrt(2 * M_PI * 1.25)).epsilon(1e-6));
    // rule reproduces moments up to order 2 * 32 - 1
    double m2 = 0.0, m4 = 0.0;
    for (std::size_t k = 0; k < p.rule.size(); ++k) {
        m2 += p.rule.weights[k] * std::pow(p.rule.nodes[k], 2);
        m4 += p.rule.weights[k] * std::pow(p.rule.nodes[k], 4);
    }
    CHECK(m2 == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(m4 == doctest::Approx(12.0).epsilon(1e-6));
}

TEST_CASE("heat identity") {
    const HeatCheck n = check_heat_identity(normal_grid_prior(0.0, 1.0), 0.0, 1e-4);
    CHECK(n.lhs == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(n.rhs == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(n.abs_err <= 1e-5);

    // two equal spikes at +-1
    const std::vector<double> g = linear_grid(2001, -10.0, 10.0);
    std::vector<double> w(2001, 0.0);
    w[900] = w[1100] = 1.0;
    const NormalGridPrior two = make_normal_prior(GridDensity(g, w));
    const HeatCheck t = check_heat_identity(two, 0.0, 1e-4);
    CHECK(t.rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.abs_err <= 1e-4);
}

TEST_CASE("vn_value") {
    const NormalGridPrior f = normal_grid_prior(0.0, 1.0);
    const NormalGridPrior g = normal_grid_prior(0.3, 0.5);
    CHECK(vn_value(f, g, seq({2})).v == doctest::Approx(2 * g.mean()).epsilon(1e-12));

    const ValueResult one = vn_value(f, KnownArm{0.0}, seq({1, 1}));
    const ValueResult conj = value({Family::Normal, {0, 1}, KnownArm{0.0}, seq({1, 1})});
    CHECK(one.v > 0.0);
    CHECK(std::abs(one.v - conj.v) <= 1e-4);

    const ValueResult sym = vn_value(f, f, seq({1, 1}));
    CHECK(std::abs(sym.advantage) <= 1e-12);

    const ValueResult two = vn_value(normal_grid_prior(0.2, 0.5), normal_grid_prior(0.0, 1.0), seq({1, 1, 1}));
    const ValueResult c2 = value({Family::Normal, {0.4, 2}, ConjugateArm{0, 1}, seq({1, 1, 1})});
    CHECK(std::abs(two.v - c2.v) <= 1e-4);
}

TEST_CASE("lambda_n") {
    const NormalGridPrior f = normal_grid_prior(0.0, 1.0);
    CHECK(std::abs(lambda_n(f, seq({1}))) <= 1e-6);
    const double conj = breakeven_value(Family::Normal, {0, 1}, seq({1, 1}), 1e-9).lambda;
    CHECK(std::abs(lambda_n(f, seq({1, 1}), 1e-8) - conj) <= 1e-4);
    std::vector<double> w(401, 0.0);
    w[250] = 1.0;
    const NormalGridPrior s = make_normal_prior(-6.0, 6.0, w);
    CHECK(lambda_n(s, seq({1, 1})) == doctest::Approx(s.mean()).epsilon(1e-6));
}

TEST_CASE("vn_value respects the node budget") {
    GenPriorOptions o;
    o.node_budget = 1000;
    CHECK(vn_planned_nodes(3, false, o) > 1000);
    CHECK_THROWS_AS(vn_value(normal_grid_prior(0, 1, 401), normal_grid_prior(0, 1, 401), seq({1, 1, 1}), o), Error);
}

TEST_CASE("contraction_cx_check") {
    const GridDensity x = discretize_beta(grid(201), 1, 1);
    std::vector<double> id(x.grid().begin(), x.grid().end());
    const CxCheck same = contraction_cx_check(id, x);
    CHECK(same.holds);
    CHECK(std::abs(same.worst_gap) <= 1e-12);

    std::vector<double> half(id.size()), twice(id.size());
    for (std::size_t k = 0; k < id.size(); ++k) {
        half[k] = id[k] / 2 + x.mean() / 2;
        twice[k] = 2 * id[k] - x.mean();
    }
    CHECK(contraction_cx_check(half, x).holds);
    CHECK(contraction_cx_check(twice, x, SlopeDirection::Expansion).holds);

    try {
        contraction_cx_check(twice, x);
        FAIL("expected SlopeBoundViolated");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SlopeBoundViolated);
    }
    std::vector<double> shifted(half);
    for (double& v : shifted) v += 0.1;
    try {
        contraction_cx_check(shifted, x);
        FAIL("expected MeanMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MeanMismatch);
    }
}
