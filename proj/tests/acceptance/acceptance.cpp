// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "banditlab/engine.hpp"
#include "banditlab/error.hpp"
#include "banditlab/format.hpp"
#include "banditlab/genprior.hpp"
#include "banditlab/indices.hpp"
#include "banditlab/orders.hpp"
#include "banditlab/verify.hpp"

using namespace banditlab;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> notes;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("threw ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs > budget_s) {
        o.pass = false;
        o.detail += " (over time budget)";
    }
    if (!o.pass) ++failures;
    std::printf("[%s] criterion %d: %s | %s | %.2f s of %.0f s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(),
                secs, budget_s);
    for (const std::string& n : o.notes) std::printf("        note: %s\n", n.c_str());
    std::fflush(stdout);
}

std::string g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

SuiteConfig suite(const std::string& name, Family f, std::size_t cases) {
    SuiteConfig c;
    c.suite = name;
    c.family = f;
    c.cases = cases;
    c.seed = 42;
    return c;
}

std::string csv(const VerificationReport& r) {
    std::ostringstream out;
    write_csv(r, out);
    return out.str();
}

const Family kFamilies[] = {Family::Bernoulli, Family::Poisson, Family::Normal, Family::Exponential};

// ---------------------------------------------------------------------------

Outcome closed_form_n1() {
    Outcome o;
    double worst_discrete = 0.0, worst_quad = 0.0;
    int count = 0;
    for (Family f : kFamilies) {
        for (std::uint64_t i = 0; i < 50; ++i) {
            Rng rng = case_rng(1, i);
            const ConjugateArm a1 = sample_arm(rng, f), a2 = sample_arm(rng, f);
            const double a = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
            const ValueResult r = value({f, a1, a2, DiscountSequence::validate({a})});
            const double err = std::abs(r.v - a * std::max(a1.mean(), a2.mean()));
            double& worst = is_discrete(f) ? worst_discrete : worst_quad;
            worst = std::max(worst, err);
            ++count;
        }
    }
    o.pass = worst_discrete <= 1e-12 && worst_quad <= 1e-8;
    o.detail = std::to_string(count) + " instances, max err discrete " + g(worst_discrete) + ", quadrature " + g(worst_quad);
    return o;
}

Outcome hand_values() {
    Outcome o;
    const auto u2 = DiscountSequence::uniform(2);
    const double v = value({Family::Bernoulli, {1, 2}, ConjugateArm{1, 2}, u2}).v;
    const double l1 = breakeven_value(Family::Bernoulli, {1, 2}, u2, 1e-11).lambda;
    const double l2 = breakeven_value(Family::Bernoulli, {2, 4}, u2, 1e-11).lambda;
    const double b = breakeven_observation(Family::Bernoulli, {1, 2}, u2, 1e-10);
    const double e1 = std::abs(v - 13.0 / 12.0), e2 = std::abs(l1 - 5.0 / 9.0), e3 = std::abs(l2 - 8.0 / 15.0),
                 e4 = std::abs(b - 2.0 / 3.0);
    o.pass = e1 <= 1e-12 && e2 <= 1e-9 && e3 <= 1e-9 && e4 <= 1e-8;
    o.detail = "V err " + g(e1) + ", Lambda(1,2) err " + g(e2) + ", Lambda(2,4) err " + g(e3) + ", b err " + g(e4);
    return o;
}

Outcome oracle() {
    Outcome o;
    const VerificationReport r = run_suite(suite("oracle", Family::Bernoulli, 1));
    o.pass = r.violations() == 0 && r.worst_gap() <= 1e-12;
    o.detail = std::to_string(r.rows.size()) + " instances, max |engine - brute force| " + g(r.worst_gap());
    return o;
}

Outcome theorem_suites() {
    Outcome o;
    const char* names[] = {"prop1", "prop1_threshold", "thm0", "prop2", "thm1", "lemma_lam", "cor1", "prop3"};
    std::size_t total_rows = 0, total_viol = 0, runs = 0;
    for (const char* s : names) {
        for (Family f : kFamilies) {
            const VerificationReport r = run_suite(suite(s, f, 200));
            total_rows += r.rows.size();
            total_viol += r.violations();
            ++runs;
            if (r.violations() > 0 || r.cases_run < 200) {
                o.pass = false;
                o.notes.push_back(std::string(s) + "/" + std::string(family_name(f)) + ": " +
                                  std::to_string(r.violations()) + " violations, " + std::to_string(r.cases_run) +
                                  " cases, worst gap " + g(r.worst_gap()));
            }
        }
    }
    o.detail = std::to_string(runs) + " suite/family runs x 200 cases, " + std::to_string(total_rows) + " checks, " +
               std::to_string(total_viol) + " violations";
    return o;
}

Outcome general_prior_suites() {
    Outcome o;
    struct Item {
        const char* name;
        Family family;
        std::size_t cases;
        std::size_t min_run;
    };
    const Item items[] = {{"thm2", Family::Bernoulli, 60, 50},      {"cor3", Family::Bernoulli, 60, 50},
                          {"thm3", Family::Normal, 24, 20},         {"cor4", Family::Normal, 24, 20},
                          {"lemma3", Family::Normal, 60, 50},       {"heat", Family::Normal, 120, 100},
                          {"signseq", Family::Bernoulli, 50, 50},   {"signseq", Family::Poisson, 50, 50},
                          {"signseq", Family::Normal, 50, 50},      {"signseq", Family::Exponential, 50, 50}};
    std::string summary;
    for (const Item& it : items) {
        const VerificationReport r = run_suite(suite(it.name, it.family, it.cases));
        const bool ok = r.violations() == 0 && r.cases_run >= it.min_run;
        if (!ok) o.pass = false;
        if (!summary.empty()) summary += ", ";
        summary += std::string(it.name) + (it.name == std::string("signseq") ? "/" + std::string(family_name(it.family)) : "") +
                   " " + std::to_string(r.cases_run) + (ok ? " ok" : " FAILED");
        if (std::string(it.name) == "heat") o.notes.push_back("heat max |dm/dx - Var| = " + g(r.worst_gap()));
    }
    o.detail = summary;
    return o;
}

// random grid pair generators for the order toolkit
GridDensity random_positive(Rng& rng, const std::vector<double>& grid) {
    std::vector<double> w(grid.size());
    const double a = std::uniform_real_distribution<double>(0.6, 5.0)(rng);
    const double b = std::uniform_real_distribution<double>(0.6, 5.0)(rng);
    const double wiggle = std::uniform_real_distribution<double>(0.0, 0.4)(rng);
    const double freq = std::uniform_real_distribution<double>(1.0, 12.0)(rng);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double p = grid[k];
        w[k] = std::exp((a - 1) * std::log(p) + (b - 1) * std::log1p(-p) + wiggle * std::sin(freq * p));
    }
    return GridDensity(grid, w);
}

GridDensity reweighted(const GridDensity& f, const std::function<double(double)>& logfac) {
    std::vector<double> w(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) w[k] = f.weights()[k] * std::exp(logfac(f.grid()[k]));
    return GridDensity(std::vector<double>(f.grid().begin(), f.grid().end()), w);
}

Outcome order_implications() {
    Outcome o;
    const std::vector<double> grid = midpoint_grid(201);
    int lr_pairs = 0, lr_bad = 0, lc_pairs = 0, lc_bad = 0, pres = 0, pres_bad = 0;
    std::uint64_t i = 0;
    while ((lr_pairs < 200 || lc_pairs < 200 || pres < 100) && i < 20000) {
        Rng rng = case_rng(6, i++);
        const GridDensity g0 = random_positive(rng, grid);
        const int kind = static_cast<int>(i % 3);
        GridDensity f;
        if (kind == 0) {
            // decreasing log factor: lr pair
            const double s = std::uniform_real_distribution<double>(0.0, 6.0)(rng);
            const double c = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
            f = reweighted(g0, [&](double p) { return -s * p - c * p * p * p; });
        } else if (kind == 1) {
            // concave log factor, tilted to the same mean: lc pair
            const double s = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
            const double t = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
            f = tilt_to_mean(reweighted(g0, [&](double p) { return s * std::log(p) + t * std::log1p(-p); }), g0.mean());
        } else {
            f = random_positive(rng, grid);
        }
        const bool lr = leq_lr(f, g0);
        if (lr) {
            ++lr_pairs;
            if (!leq_st(f, g0)) ++lr_bad;
        }
        const bool lc = leq_lc(f, g0);
        if (lc && std::abs(f.mean() - g0.mean()) <= kMeanSlack) {
            ++lc_pairs;
            if (!leq_cx(f, g0)) ++lc_bad;
        }
        if (lr || lc) {
            ++pres;
            if (lr && !(leq_lr(sigma(f), sigma(g0)) && leq_lr(phi(f), phi(g0)))) ++pres_bad;
            if (lc && !(leq_lc(sigma(f), sigma(g0)) && leq_lc(phi(f), phi(g0)))) ++pres_bad;
        }
    }
    o.pass = lr_pairs >= 200 && lc_pairs >= 200 && pres >= 100 && lr_bad == 0 && lc_bad == 0 && pres_bad == 0;
    o.detail = "lr=>st " + std::to_string(lr_pairs) + " pairs/" + std::to_string(lr_bad) + " exceptions, lc+mean=>cx " +
               std::to_string(lc_pairs) + "/" + std::to_string(lc_bad) + ", sigma/phi preservation " +
               std::to_string(pres) + "/" + std::to_string(pres_bad);
    return o;
}

Outcome convergence() {
    Outcome o;
    const auto u2 = DiscountSequence::uniform(2);
    const std::vector<double> g1 = midpoint_grid(1001), g4 = midpoint_grid(4001);
    const GridDensity f1 = discretize_beta(g1, 1, 1), f4 = discretize_beta(g4, 1, 1);
    const double e1 = std::abs(vb_value(f1, f1, u2).v - 13.0 / 12.0);
    const double e4 = std::abs(vb_value(f4, f4, u2).v - 13.0 / 12.0);
    o.pass = e1 <= 5e-4 && e4 < e1;
    o.detail = "error " + g(e1) + " at 1001 points, " + g(e4) + " at 4001";
    return o;
}

Outcome explorers() {
    Outcome o;
    SuiteConfig c = suite("", Family::Bernoulli, 200);
    c.n_max = 6;
    const VerificationReport berry = explore_berry(c);
    const double max_delta = berry.stats.at("max_delta_tau1_gt_tau2");
    SuiteConfig cg = c;
    cg.discount = "geometric";
    const VerificationReport berry_geo = explore_berry(cg);
    const VerificationReport bl = explore_b_vs_lambda(c);
    const VerificationReport h = explore_herschkorn(c);
    const double min_bl = bl.stats.at("min_b_minus_lambda");

    o.pass = berry.status() == "report-only" && bl.status() == "report-only" && h.status() == "report-only" &&
             !berry.rows.empty() && !bl.rows.empty() && !h.rows.empty();
    o.detail = "berry max Delta (tau1 > tau2) " + g(max_delta) + " over " + std::to_string(berry.rows.size()) +
               " rows; geometric " + g(berry_geo.stats.at("max_delta_tau1_gt_tau2")) + "; min(b - Lambda) " + g(min_bl) +
               " over " + std::to_string(bl.rows.size()) + " rows; herschkorn max gap " + g(h.stats.at("max_gap")) +
               " over " + std::to_string(h.rows.size()) + " pairs";
    if (max_delta > 1e-8) o.notes.push_back("berry: candidate counterexample, max Delta " + g(max_delta));
    if (min_bl < -1e-6) {
        std::size_t shown = 0;
        o.notes.push_back("b-vs-lambda: " + std::to_string(bl.violations()) +
                          " candidate counterexamples to b >= Lambda (expected min >= -1e-6, found " + g(min_bl) + ")");
        for (const CheckRow& r : bl.rows) {
            if (r.flagged() && shown++ < 3) o.notes.push_back("  " + r.instance);
        }
    }
    if (h.violations() > 0) o.notes.push_back("herschkorn: " + std::to_string(h.violations()) + " candidate counterexamples");
    return o;
}

Outcome determinism() {
    Outcome o;
    const char* names[] = {"prop1", "cor1", "thm2", "heat", "signseq", "prop3"};
    const Family fams[] = {Family::Poisson, Family::Normal, Family::Bernoulli, Family::Normal, Family::Exponential,
                           Family::Bernoulli};
    int identical = 0, total = 0;
    const int saved = omp_get_max_threads();
    for (int k = 0; k < 6; ++k) {
        const SuiteConfig c = suite(names[k], fams[k], 40);
        omp_set_num_threads(1);
        const std::string a = csv(run_suite(c));
        omp_set_num_threads(4);
        const std::string b = csv(run_suite(c));
        const std::string b2 = csv(run_suite(c));
        total += 2;
        identical += (a == b) + (b == b2);
    }
    omp_set_num_threads(saved);
    SuiteConfig e = suite("", Family::Bernoulli, 20);
    e.n_max = 4;
    total += 1;
    identical += csv(explore_herschkorn(e)) == csv(explore_herschkorn(e));
    o.pass = identical == total;
    o.detail = std::to_string(identical) + "/" + std::to_string(total) + " repeated reports byte-identical (1 and 4 threads)";
    return o;
}

}  // namespace

int main() {
    criterion(1, "closed-form n=1 values", 1.0, closed_form_n1);
    criterion(2, "hand-derived bernoulli values", 1.0, hand_values);
    criterion(3, "engine equals brute-force enumeration", 30.0, oracle);
    criterion(4, "theorem suites at zero violations", 600.0, theorem_suites);
    criterion(5, "general-prior suites at zero violations", 600.0, general_prior_suites);
    criterion(6, "order-toolkit implications", 60.0, order_implications);
    criterion(7, "grid-prior convergence to 13/12", 60.0, convergence);
    criterion(8, "conjecture explorers complete and report", 600.0, explorers);
    criterion(9, "byte-identical reports for identical config and seed", 600.0, determinism);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
