#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "banditlab/error.hpp"
#include "banditlab/verify.hpp"

using namespace banditlab;

namespace {
SuiteConfig config(std::string suite, std::size_t cases, Family f = Family::Bernoulli) {
    SuiteConfig c;
    c.suite = std::move(suite);
    c.cases = cases;
    c.family = f;
    return c;
}

std::string csv(const VerificationReport& r) {
    std::ostringstream out;
    write_csv(r, out);
    return out.str();
}
}  // namespace

TEST_CASE("sampler hypothesis filters") {
    for (std::uint64_t i = 0; i < 300; ++i) {
        Rng rng = case_rng(42, i);
        const std::size_t n = 1 + i % 6;
        CHECK(sample_decreasing(rng, n).is_decreasing());
        CHECK(sample_decreasing(rng, n)[0] > 0.0);
        const DiscountSequence r = sample_regular(rng, n, false);
        CHECK(r.is_regular());
        CHECK(r[0] > 0.0);
        if (n >= 2) CHECK(sample_regular(rng, n, true)[1] > 0.0);
        CHECK(sample_nonnegative(rng, n).total() > 0.0);
        for (Family f : {Family::Bernoulli, Family::Normal, Family::Poisson, Family::Exponential}) {
            const ConjugateArm a = sample_arm(rng, f);
            const Interval m = mean_range(f);
            CHECK(a.tau > 0.0);
            CHECK(a.mean() >= m.lo);
            CHECK(a.mean() <= m.hi);
        }
    }
}

TEST_CASE("case streams are independent of evaluation order") {
    Rng a = case_rng(7, 3), b = case_rng(7, 3), c = case_rng(7, 4), d = case_rng(8, 3);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
}

TEST_CASE("small suites pass") {
    for (const char* s : {"prop1", "prop1_threshold", "thm0", "prop2", "thm1", "cor1", "prop3", "lemma_lam"}) {
        for (Family f : {Family::Bernoulli, Family::Poisson, Family::Normal}) {
            CAPTURE(s);
            CAPTURE(family_name(f));
            const VerificationReport r = run_suite(config(s, 6, f));
            CHECK(r.violations() == 0);
            CHECK(r.status() == "pass");
            CHECK(r.cases_run + r.cases_skipped == 6);
            CHECK_FALSE(r.rows.empty());
        }
    }
    for (const char* s : {"thm2", "cor3", "lemma3", "heat", "signseq"}) {
        CAPTURE(s);
        const VerificationReport r = run_suite(config(s, 8));
        CHECK(r.violations() == 0);
    }
}

TEST_CASE("oracle suite") {
    const VerificationReport r = run_suite(config("oracle", 1));
    CHECK(r.violations() == 0);
    CHECK(r.worst_gap() <= 1e-12);
    CHECK(r.rows.size() > 100);
}

TEST_CASE("violations are flagged") {
    CheckRow row{0, "bernoulli", "x", "{}", 1.0, 0.5, 0.1};
    CHECK(row.flagged());
    row.tol = 0.5;
    CHECK_FALSE(row.flagged());
    row.lhs = std::numeric_limits<double>::quiet_NaN();
    CHECK(row.flagged());
}

TEST_CASE("unknown suite") {
    try {
        run_suite(config("nosuch", 3));
        FAIL("expected UnknownSuite");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownSuite);
    }
    CHECK_THROWS_AS(run_explorer("nosuch", config("", 3)), Error);
}

TEST_CASE("reports are byte-identical across runs") {
    const SuiteConfig c = config("prop2", 10, Family::Poisson);
    CHECK(csv(run_suite(c)) == csv(run_suite(c)));
    SuiteConfig other = c;
    other.seed = 43;
    CHECK(csv(run_suite(c)) != csv(run_suite(other)));
}

TEST_CASE("csv and summary layout") {
    const VerificationReport r = run_suite(config("thm1", 2));
    const std::string text = csv(r);
    CHECK(text.rfind("suite,seed,case,family,check,instance,lhs,rhs,gap,tol,verdict\n", 0) == 0);
    CHECK(text.find(",ok\n") != std::string::npos);
    std::ostringstream s;
    write_summary_json(r, s);
    CHECK(s.str().find("\"status\":\"pass\"") != std::string::npos);
    CHECK(s.str().find("\"violations\":0") != std::string::npos);
}

TEST_CASE("explorers are report-only") {
    SuiteConfig c = config("", 4);
    c.n_max = 3;
    const VerificationReport berry = explore_berry(c);
    CHECK(berry.status() == "report-only");
    CHECK(berry.stats.count("max_delta") == 1);
    CHECK(berry.stats.at("max_delta_tau1_gt_tau2") <= 1e-8);

    const VerificationReport bl = explore_b_vs_lambda(c);
    CHECK(bl.stats.count("min_b_minus_lambda") == 1);
    // (1,2), A = (1,1): b - lambda = 2/3 - 5/9
    bool found = false;
    for (const CheckRow& row : bl.rows) {
        if (row.instance.find("\"gamma\":1,\"tau\":2},\"discount\":[1,1]") != std::string::npos) {
            CHECK(row.rhs - row.lhs == doctest::Approx(1.0 / 9.0).epsilon(1e-6));
            found = true;
        }
    }
    CHECK(found);

    const VerificationReport h = explore_herschkorn(c);
    CHECK(h.status() == "report-only");
    REQUIRE_FALSE(h.rows.empty());
    CHECK(h.rows[0].gap() == 0.0);
}
