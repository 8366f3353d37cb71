#include "banditlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "banditlab/engine.hpp"
#include "banditlab/error.hpp"
#include "banditlab/format.hpp"
#include "banditlab/genprior.hpp"
#include "banditlab/indices.hpp"
#include "banditlab/kernels.hpp"
#include "banditlab/verify.hpp"

namespace banditlab {

namespace {

using nlohmann::json;

struct ParsedInstance {
    Family family = Family::Bernoulli;
    std::vector<json> arms;
    std::optional<double> known;
    DiscountSequence discount;
    std::optional<std::size_t> quad_order;
    std::optional<double> tol;
};

[[noreturn]] void schema(const std::string& what) { fail(ErrorKind::Schema, what); }

double number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) schema(std::string("expected number field '") + key + "'");
    return j[key].get<double>();
}

std::vector<double> number_array(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) schema(std::string("expected array field '") + key + "'");
    std::vector<double> out;
    for (const json& v : j[key]) {
        if (!v.is_number()) schema(std::string("non-numeric entry in '") + key + "'");
        out.push_back(v.get<double>());
    }
    return out;
}

std::size_t count(const json& j, const char* key) {
    const double v = number(j, key);
    if (v < 0 || v != std::floor(v)) schema(std::string("'") + key + "' must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

DiscountSequence parse_discount(const json& j) {
    if (j.is_array()) {
        std::vector<double> v;
        for (const json& e : j) {
            if (!e.is_number()) schema("discount entries must be numbers");
            v.push_back(e.get<double>());
        }
        return DiscountSequence::validate(std::move(v));
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) schema("discount needs a 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "explicit") return DiscountSequence::validate(number_array(j, "values"));
    if (kind == "uniform") return DiscountSequence::uniform(count(j, "n"));
    if (kind == "geometric") return DiscountSequence::geometric(number(j, "beta"), count(j, "n"));
    schema("unknown discount kind '" + kind + "'");
}

ParsedInstance parse_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) schema("cannot read '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        schema(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) schema("instance must be an object");
    ParsedInstance p;
    if (!j.contains("family") || !j["family"].is_string()) schema("missing 'family'");
    p.family = family_from_name(j["family"].get<std::string>());
    if (!j.contains("arms") || !j["arms"].is_array()) schema("missing 'arms'");
    for (const json& a : j["arms"]) {
        if (!a.is_object()) schema("arms must be objects");
        p.arms.push_back(a);
    }
    if (j.contains("known") && !j["known"].is_null()) p.known = number(j, "known");
    if (p.arms.size() == 2 && p.known) schema("give either two arms or one arm and 'known'");
    if (p.arms.empty() || p.arms.size() > 2) schema("'arms' must have length 1 or 2");
    if (!j.contains("discount")) schema("missing 'discount'");
    p.discount = parse_discount(j["discount"]);
    if (j.contains("options")) {
        const json& o = j["options"];
        if (!o.is_object()) schema("'options' must be an object");
        if (o.contains("quad_order")) p.quad_order = count(o, "quad_order");
        if (o.contains("tol")) p.tol = number(o, "tol");
    }
    return p;
}

bool is_grid_arm(const json& a) { return a.contains("weights"); }

ConjugateArm conjugate_arm(Family f, const json& a) {
    return validate_arm(f, ConjugateArm{number(a, "gamma"), number(a, "tau")});
}

GridDensity bernoulli_grid(const json& a) { return GridDensity(number_array(a, "grid"), number_array(a, "weights")); }

NormalGridPrior normal_grid(const json& a) {
    return make_normal_prior(number(a, "theta_min"), number(a, "theta_max"), number_array(a, "weights"));
}

std::string value_json(const ValueResult& r) {
    return JsonObject()
        .num("v", r.v)
        .num("v1", r.v1)
        .num("v2", r.v2)
        .num("advantage", r.advantage)
        .integer("optimal_arm", r.optimal_arm)
        .done();
}

ValueResult compute_value(const ParsedInstance& p) {
    if (p.arms.size() == 1 && !p.known) schema("one arm needs 'known'");
    EngineOptions eo;
    if (p.quad_order) eo.quad.normal_order = eo.quad.exponential_order = *p.quad_order;
    const bool grid = std::any_of(p.arms.begin(), p.arms.end(), is_grid_arm);
    if (!grid) {
        BanditInstance inst{p.family, conjugate_arm(p.family, p.arms[0]), KnownArm{0.0}, p.discount};
        if (p.known) {
            inst.arm2 = KnownArm{*p.known};
        } else {
            inst.arm2 = conjugate_arm(p.family, p.arms[1]);
        }
        return value(inst, eo);
    }
    if (p.arms.size() == 2 && !(is_grid_arm(p.arms[0]) && is_grid_arm(p.arms[1]))) {
        schema("grid priors and conjugate arms cannot be mixed");
    }
    if (p.family == Family::Bernoulli) {
        const GridDensity f1 = bernoulli_grid(p.arms[0]);
        return p.known ? vb_value(f1, KnownArm{*p.known}, p.discount) : vb_value(f1, bernoulli_grid(p.arms[1]), p.discount);
    }
    if (p.family == Family::Normal) {
        GenPriorOptions go;
        if (p.quad_order) go.quad_order = *p.quad_order;
        const NormalGridPrior f1 = normal_grid(p.arms[0]);
        return p.known ? vn_value(f1, KnownArm{*p.known}, p.discount, go)
                       : vn_value(f1, normal_grid(p.arms[1]), p.discount, go);
    }
    fail(ErrorKind::UnsupportedFamily, "grid priors are supported for bernoulli and normal only");
}

std::string compute_breakeven(const ParsedInstance& p, bool observation) {
    if (p.arms.size() != 1) schema("breakeven needs a one-armed instance");
    EngineOptions eo;
    if (p.quad_order) eo.quad.normal_order = eo.quad.exponential_order = *p.quad_order;
    if (is_grid_arm(p.arms[0])) {
        if (observation) fail(ErrorKind::UnsupportedFamily, "--observation needs a conjugate arm");
        require_regular(p.discount);
        if (p.family == Family::Bernoulli) {
            return JsonObject().num("lambda", lambda_b(bernoulli_grid(p.arms[0]), p.discount, p.tol.value_or(1e-9))).done();
        }
        if (p.family == Family::Normal) {
            return JsonObject().num("lambda", lambda_n(normal_grid(p.arms[0]), p.discount, p.tol.value_or(1e-6))).done();
        }
        fail(ErrorKind::UnsupportedFamily, "grid priors are supported for bernoulli and normal only");
    }
    const ConjugateArm arm = conjugate_arm(p.family, p.arms[0]);
    const double tol = p.tol.value_or(default_tolerance(p.family));
    if (observation) return JsonObject().num("b", breakeven_observation(p.family, arm, p.discount, tol, eo)).done();
    const BreakEvenResult r = breakeven_value(p.family, arm, p.discount, tol, eo);
    return JsonObject().num("lambda", r.lambda).integer("iterations", static_cast<long long>(r.iterations)).done();
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::NotRegular:
        case ErrorKind::ZeroFirstWeight:
        case ErrorKind::InsufficientHorizon:
            return 4;
        case ErrorKind::HorizonTooLarge:
        case ErrorKind::BudgetExceeded:
        case ErrorKind::BracketFailure:
        case ErrorKind::RootNotBracketed:
        case ErrorKind::ObservationOutsideSafeRange:
        case ErrorKind::OrderViolation:
        case ErrorKind::DegenerateMean:
        case ErrorKind::DegeneratePrior:
            return 3;
        default:
            return 2;
    }
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) fail(ErrorKind::InvalidArgument, "write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::filesystem::path summary_path(const std::filesystem::path& csv) {
    std::filesystem::path p = csv;
    p.replace_extension(".summary.json");
    return p;
}

// file options from --config, overridden by flags
void apply_config_file(const std::string& path, SuiteConfig& cfg) {
    std::ifstream in(path);
    if (!in) schema("cannot read config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        schema(std::string("malformed config: ") + e.what());
    }
    if (!j.is_object()) schema("config must be an object");
    if (j.contains("suite")) cfg.suite = j["suite"].get<std::string>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("cases")) cfg.cases = count(j, "cases");
    if (j.contains("family")) cfg.family = family_from_name(j["family"].get<std::string>());
    if (j.contains("n_min")) cfg.n_min = count(j, "n_min");
    if (j.contains("n_max")) cfg.n_max = count(j, "n_max");
    if (j.contains("c_grid")) cfg.c_grid = number_array(j, "c_grid");
    if (j.contains("steps")) cfg.steps = count(j, "steps");
    if (j.contains("tolerance")) cfg.tolerance = number(j, "tolerance");
    if (j.contains("strict_margin")) cfg.strict_margin = number(j, "strict_margin");
    if (j.contains("grid_points")) cfg.grid_points = count(j, "grid_points");
    if (j.contains("theta_points")) cfg.theta_points = count(j, "theta_points");
    if (j.contains("node_budget")) cfg.node_budget = count(j, "node_budget");
    if (j.contains("discount")) cfg.discount = j["discount"].get<std::string>();
    if (j.contains("beta")) cfg.beta = number(j, "beta");
}

struct SuiteFlags {
    std::string config;
    std::string name;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> cases, n_min, n_max, steps;
    std::optional<double> tol;
    std::optional<std::string> family;
    std::optional<std::string> discount;
    std::optional<double> beta;
    std::vector<double> c_grid;
    std::string out;
};

void add_suite_flags(CLI::App* cmd, SuiteFlags& f) {
    cmd->add_option("--config", f.config, "JSON file with suite options");
    cmd->add_option("--seed", f.seed, "Random seed");
    cmd->add_option("--cases", f.cases, "Number of sampled cases");
    cmd->add_option("--tol", f.tol, "Violation tolerance");
    cmd->add_option("--family", f.family, "bernoulli | normal | poisson | exponential");
    cmd->add_option("--n-min", f.n_min, "Smallest horizon");
    cmd->add_option("--n-max", f.n_max, "Largest horizon");
    cmd->add_option("--steps", f.steps, "Grid points per varying quantity");
    cmd->add_option("--c-grid", f.c_grid, "Scale factors for c-monotonicity checks")->delimiter(',');
    cmd->add_option("--out", f.out, "CSV report path (summary goes next to it)");
}

SuiteConfig build_config(const SuiteFlags& f) {
    SuiteConfig cfg;
    if (!f.config.empty()) apply_config_file(f.config, cfg);
    if (!f.name.empty()) cfg.suite = f.name;
    if (f.seed) cfg.seed = *f.seed;
    if (f.cases) cfg.cases = *f.cases;
    if (f.tol) cfg.tolerance = *f.tol;
    if (f.family) cfg.family = family_from_name(*f.family);
    if (f.n_min) cfg.n_min = *f.n_min;
    if (f.n_max) cfg.n_max = *f.n_max;
    if (f.steps) cfg.steps = *f.steps;
    if (!f.c_grid.empty()) cfg.c_grid = f.c_grid;
    if (f.discount) cfg.discount = *f.discount;
    if (f.beta) cfg.beta = *f.beta;
    return cfg;
}

void emit_report(const VerificationReport& r, const std::string& out_flag, std::ostream& out) {
    const std::filesystem::path csv = out_flag.empty() ? std::filesystem::path(r.suite + ".csv") : std::filesystem::path(out_flag);
    std::ostringstream body, summary;
    write_csv(r, body);
    write_summary_json(r, summary);
    write_atomic(csv, body.str());
    write_atomic(summary_path(csv), summary.str());
    out << summary.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    kernels::configure_threads_from_env();

    CLI::App app{"Finite-horizon Bayesian bandits: values, break-even indices, property checks", "banditlab"};
    app.require_subcommand(1);

    std::string value_path;
    auto* value_cmd = app.add_subcommand("value", "Optimal value of a two- or one-armed instance");
    value_cmd->add_option("instance", value_path, "Instance JSON file")->required();

    std::string be_path;
    bool observation = false;
    auto* be_cmd = app.add_subcommand("breakeven", "Break-even value (or observation) of a one-armed instance");
    be_cmd->add_option("instance", be_path, "Instance JSON file")->required();
    be_cmd->add_flag("--observation", observation, "Report the break-even observation b instead");

    SuiteFlags vf;
    auto* verify_cmd = app.add_subcommand("verify", "Run a property suite");
    verify_cmd->add_option("--suite", vf.name, "Suite name");
    add_suite_flags(verify_cmd, vf);

    SuiteFlags ef;
    auto* explore_cmd = app.add_subcommand("explore", "Run a conjecture explorer (report only)");
    explore_cmd->add_option("--conjecture", ef.name, "berry | b-vs-lambda | herschkorn")->required();
    add_suite_flags(explore_cmd, ef);
    std::optional<std::size_t> explore_n;
    explore_cmd->add_option("--n", explore_n, "Largest horizon (same as --n-max)");
    explore_cmd->add_option("--discount", ef.discount, "uniform | geometric");
    explore_cmd->add_option("--beta", ef.beta, "Geometric ratio");

    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*value_cmd) {
            out << value_json(compute_value(parse_instance(value_path))) << '\n';
            return 0;
        }
        if (*be_cmd) {
            out << compute_breakeven(parse_instance(be_path), observation) << '\n';
            return 0;
        }
        if (*verify_cmd) {
            const SuiteConfig cfg = build_config(vf);
            if (cfg.suite.empty()) schema("--suite is required");
            const VerificationReport r = run_suite(cfg);
            emit_report(r, vf.out, out);
            return r.violations() == 0 ? 0 : 1;
        }
        if (*explore_cmd) {
            if (explore_n) ef.n_max = *explore_n;
            SuiteConfig cfg = build_config(ef);
            if (cfg.discount != "uniform" && cfg.discount != "geometric") schema("--discount must be uniform or geometric");
            const VerificationReport r = run_explorer(ef.name, cfg);
            emit_report(r, ef.out, out);
            if (r.violations() > 0) {
                err << "banditlab: " << r.violations() << " candidate counterexample(s) in " << r.suite
                    << "; worst gap " << fmt_double(r.worst_gap()) << '\n';
            }
            return 0;
        }
    } catch (const Error& e) {
        err << "banditlab: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "banditlab: " << e.what() << '\n';
        return 3;
    }
    return 2;
}

}  // namespace banditlab
