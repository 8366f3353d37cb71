#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "banditlab/discount.hpp"
#include "banditlab/expfam.hpp"

namespace banditlab {

struct SuiteConfig {
    std::string suite;
    std::uint64_t seed = 42;
    std::size_t cases = 200;
    std::optional<Family> family;  ///< bernoulli unless set
    std::size_t n_min = 1;
    std::size_t n_max = 6;
    std::vector<double> c_grid{0.5, 1.0, 2.0, 4.0};
    std::size_t steps = 6;       ///< points per varying quantity
    double tolerance = 0.0;      ///< 0 picks the suite/family default
    double strict_margin = 1e-10;
    std::size_t grid_points = 1001;   ///< bernoulli grid priors
    std::size_t theta_points = 2001;  ///< normal grid priors
    std::size_t node_budget = 2'000'000;
    std::string discount = "uniform";  ///< explorers: uniform | geometric
    double beta = 0.9;                 ///< geometric explorers
};

struct CheckRow {
    std::uint64_t case_index = 0;
    std::string family;
    std::string check;
    std::string instance;  ///< JSON
    double lhs = 0.0;      ///< claim: lhs <= rhs (+ tol)
    double rhs = 0.0;
    double tol = 0.0;

    double gap() const noexcept { return lhs - rhs; }
    bool flagged() const noexcept { return !(gap() <= tol); }
};

struct VerificationReport {
    std::string suite;
    SuiteConfig config;
    bool report_only = false;
    std::size_t cases_run = 0;
    std::size_t cases_skipped = 0;  ///< sampled instances that failed a hypothesis filter
    std::vector<CheckRow> rows;     ///< canonical order: case, then emission order
    std::map<std::string, double> stats;

    std::size_t violations() const;
    double worst_gap() const;
    /// "pass" | "fail" | "report-only"
    std::string status() const;
};

/// Theorem suites, in the order the CLI lists them.
const std::vector<std::string>& suite_names();
/// Conjecture explorers: berry, b-vs-lambda, herschkorn.
const std::vector<std::string>& explorer_names();

/// Default tolerance: 1e-8 for bernoulli/poisson, 1e-5 for normal/exponential,
/// 1e-4 for heat, 1e-12 for oracle.
double default_suite_tolerance(const std::string& suite, Family family);

/// UnknownSuite; BudgetExceeded when a case would exceed the node budget.
VerificationReport run_suite(const SuiteConfig& cfg);

VerificationReport explore_berry(const SuiteConfig& cfg);
VerificationReport explore_b_vs_lambda(const SuiteConfig& cfg);
VerificationReport explore_herschkorn(const SuiteConfig& cfg);
/// Dispatches on the explorer name; UnknownSuite otherwise.
VerificationReport run_explorer(const std::string& name, const SuiteConfig& cfg);

/// Columns: suite,seed,case,family,check,instance,lhs,rhs,gap,tol,verdict.
void write_csv(const VerificationReport& report, std::ostream& out);
void write_summary_json(const VerificationReport& report, std::ostream& out);

// ---- samplers (exposed so their hypothesis filters can be tested) ----

using Rng = std::mt19937_64;

/// Independent stream for one case.
Rng case_rng(std::uint64_t seed, std::uint64_t case_index);

/// Prior mean range with a 5% margin inside the support (or a fixed window for unbounded supports).
Interval mean_range(Family family);
ConjugateArm sample_arm(Rng& rng, Family family);
/// Random nonincreasing weights with a_1 > 0.
DiscountSequence sample_decreasing(Rng& rng, std::size_t n);
/// Uniform, geometric or random log-concave tail sums; a_1 > 0, and a_2 > 0 when require_a2.
DiscountSequence sample_regular(Rng& rng, std::size_t n, bool require_a2);
/// Arbitrary nonnegative weights with positive total.
DiscountSequence sample_nonnegative(Rng& rng, std::size_t n);

}  // namespace banditlab
