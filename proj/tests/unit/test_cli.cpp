#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "banditlab/cli.hpp"
#include "banditlab/format.hpp"

using namespace banditlab;
namespace fs = std::filesystem;

namespace {
struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "banditlab");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("banditlab_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string file(const std::string& name, const std::string& body) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << body;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}
}  // namespace

TEST_CASE("value") {
    const auto p = file("v.json", R"({"family":"bernoulli","arms":[{"gamma":1,"tau":2},{"gamma":1,"tau":2}],
                                      "discount":{"kind":"uniform","n":2}})");
    const Run r = cli({"value", p});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["v"].get<double>() == doctest::Approx(13.0 / 12.0).epsilon(1e-15));
    CHECK(j["advantage"].get<double>() == 0.0);
    CHECK(j["optimal_arm"].get<int>() == 1);

    const auto k = file("k.json", R"({"family":"bernoulli","arms":[{"gamma":1,"tau":2}],"known":0.9,"discount":[1]})");
    const auto jk = nlohmann::json::parse(cli({"value", k}).out);
    CHECK(jk["v"].get<double>() == 0.9);
    CHECK(jk["optimal_arm"].get<int>() == 2);
}

TEST_CASE("schema errors exit 2") {
    const Run bad = cli({"value", file("bad.json", "{\"family\":")});
    CHECK(bad.code == 2);
    CHECK_FALSE(bad.err.empty());
    CHECK(cli({"value", file("both.json", R"({"family":"bernoulli","arms":[{"gamma":1,"tau":2},{"gamma":1,"tau":2}],
                                             "known":0.5,"discount":[1]})")}).code == 2);
    CHECK(cli({"value", file("fam.json", R"({"family":"cauchy","arms":[{"gamma":1,"tau":2}],"known":0.5,"discount":[1]})")})
              .code == 2);
    CHECK(cli({"value", (scratch() / "missing.json").string()}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({}).code == 2);
}

TEST_CASE("breakeven") {
    const auto p = file("b.json", R"({"family":"bernoulli","arms":[{"gamma":1,"tau":2}],"discount":[1,1]})");
    const auto lam = nlohmann::json::parse(cli({"breakeven", p}).out);
    CHECK(lam["lambda"].get<double>() == doctest::Approx(5.0 / 9.0).epsilon(1e-9));
    const auto b = nlohmann::json::parse(cli({"breakeven", "--observation", p}).out);
    CHECK(b["b"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
    const auto irr = file("irr.json", R"({"family":"bernoulli","arms":[{"gamma":1,"tau":2}],"discount":[1,0,1]})");
    CHECK(cli({"breakeven", irr}).code == 4);
}

TEST_CASE("numerical failure exits 3") {
    const auto p = file("big.json", R"({"family":"normal","arms":[{"gamma":0,"tau":1},{"gamma":0,"tau":1}],
                                        "discount":{"kind":"uniform","n":12}})");
    CHECK(cli({"value", p}).code == 3);
}

TEST_CASE("verify writes reports atomically") {
    const fs::path out = scratch() / "oracle.csv";
    const Run r = cli({"verify", "--suite", "oracle", "--out", out.string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(out));
    const fs::path summary = scratch() / "oracle.summary.json";
    REQUIRE(fs::exists(summary));
    const auto j = nlohmann::json::parse(slurp(summary));
    CHECK(j["worst_gap"].get<double>() <= 1e-12);
    CHECK(j["status"] == "pass");
    for (const auto& e : fs::directory_iterator(scratch())) CHECK(e.path().string().find(".tmp.") == std::string::npos);

    CHECK(cli({"verify", "--suite", "nosuch", "--out", (scratch() / "x.csv").string()}).code == 2);
}

TEST_CASE("verify flags override the config file") {
    const auto cfg = file("cfg.json", R"({"suite":"thm1","cases":3,"seed":5,"family":"poisson"})");
    const fs::path out = scratch() / "thm1.csv";
    CHECK(cli({"verify", "--config", cfg, "--cases", "2", "--out", out.string()}).code == 0);
    const auto j = nlohmann::json::parse(slurp(scratch() / "thm1.summary.json"));
    CHECK(j["config"]["cases"].get<int>() == 2);
    CHECK(j["config"]["seed"].get<int>() == 5);
    CHECK(j["config"]["family"] == "poisson");
}

TEST_CASE("explore always exits 0") {
    const fs::path out = scratch() / "berry.csv";
    const Run r = cli({"explore", "--conjecture", "berry", "--n", "4", "--out", out.string()});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["status"] == "report-only");
    CHECK(j["stats"].contains("max_delta"));
    CHECK(cli({"explore", "--conjecture", "nope", "--out", out.string()}).code == 2);
}

TEST_CASE("number formatting") {
    CHECK(fmt_double(0.1) == "0.10000000000000001");
    CHECK(fmt_double(1.0) == "1");
    CHECK(fmt_double(std::numeric_limits<double>::infinity()) == "null");
    CHECK(csv_field("a,\"b\"") == "\"a,\"\"b\"\"\"");
}
