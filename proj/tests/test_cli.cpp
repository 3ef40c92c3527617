#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bondsym/cli.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("bondsym");
    for (const auto& a : args) argv.push_back(a.c_str());
    return bondsym::cli::run(int(argv.size()), argv.data());
}

/// run_cli with std::cout and std::cerr captured.
int run_capture(const std::vector<std::string>& args, std::string* out = nullptr) {
    std::ostringstream oss, ess;
    std::streambuf* old_out = std::cout.rdbuf(oss.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(ess.rdbuf());
    int rc = run_cli(args);
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    if (out) *out = oss.str();
    return rc;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(bool(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(bool(in));
    std::vector<json> records;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) records.push_back(json::parse(line));
    return records;
}

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("exit codes: 0 on success, 2 on usage errors") {
    CHECK(run_capture({"cases"}) == 0);
    CHECK(run_capture({"no-such-command"}) == 2);
    CHECK(run_capture({}) == 2); // a subcommand is required
    CHECK(run_capture({"verify", "--suite", "no-such-suite"}) == 2);
    CHECK(run_capture({"oracle", "--case", "no-such-case"}) == 2);
    CHECK(run_capture({"oracle"}) == 2);                      // needs --case
    CHECK(run_capture({"price", "--payoff", "1"}) == 2);      // needs a model source
    CHECK(run_capture({"price", "--model", "bsm"}) == 2);     // needs --payoff
    CHECK(run_capture({"price", "--model", "bsm", "--payoff", "1", "--grid", "2,2"}) == 2);
    CHECK(run_capture({"price", "--model", "bsm", "--payoff", "1", "--barrier"}) == 2);
    CHECK(run_capture({"price", "--model", "bsm", "--payoff", "1", "--farfield",
                       "validation"}) == 2); // validation needs --case
    CHECK(run_capture({"transform"}) == 2);
    CHECK(run_capture({"flow", "--generator", "99"}) == 2);
}

TEST_CASE("exit code 1 on a domain failure during the solve") {
    // log(x - 1) is undefined on part of the default x range [0.5, 2].
    CHECK(run_capture({"price", "--model", "bsm", "--payoff", "log(x - 1)"}) == 1);
}

TEST_CASE("cases: lists all eight catalog ids with constraints") {
    std::string out;
    REQUIRE(run_capture({"cases"}, &out) == 0);
    for (const char* id : {"T-Generic", "T-GammaOne", "T-GammaHalf", "T-DeltaChain",
                           "B-Generic", "B-GammaOne", "B-GammaHalf", "B-DeltaChain"})
        CHECK(out.find(id) != std::string::npos);
    // one line per case
    CHECK(std::count(out.begin(), out.end(), '\n') == 8);
}

TEST_CASE("verify: catalog-residuals suite emits eight passing JSONL records") {
    std::string path = tmp_path("bondsym_cli_catalog.jsonl");
    REQUIRE(run_capture({"verify", "--suite", "catalog-residuals", "--out", path}) == 0);
    auto records = read_jsonl(path);
    REQUIRE(records.size() == 8);
    for (const auto& r : records) {
        CHECK(r.at("check") == "catalog-residual");
        CHECK(r.at("pass") == true);
        CHECK(r.at("n").get<std::size_t>() == 200);
        CHECK(r.at("max").get<double>() < r.at("tol").get<double>());
    }
}

TEST_CASE("verify: terminal suite covers the three asserted cases") {
    std::string path = tmp_path("bondsym_cli_terminal.jsonl");
    REQUIRE(run_capture({"verify", "--suite", "terminal", "--out", path}) == 0);
    auto records = read_jsonl(path);
    REQUIRE(records.size() == 3);
    for (const auto& r : records) {
        CHECK(r.at("check") == "terminal-condition");
        CHECK(r.at("pass") == true);
    }
}

TEST_CASE("verify: barrier suite reports the generator combination") {
    std::string path = tmp_path("bondsym_cli_barrier.jsonl");
    REQUIRE(run_capture({"verify", "--suite", "barrier", "--out", path}) == 0);
    auto records = read_jsonl(path);
    REQUIRE(records.size() == 9); // 4 x (exponential + value) + 1 combination
    const json& comb = records.back();
    CHECK(comb.at("check") == "barrier-combination");
    CHECK(comb.at("case") == "B-GammaOne");
    CHECK(comb.at("pass") == true);
    CHECK(comb.at("coefficients").is_array());
    CHECK_FALSE(comb.at("coefficients").empty());
}

TEST_CASE("verify: identical seed and config give byte-identical reports") {
    std::string a = tmp_path("bondsym_cli_det_a.jsonl");
    std::string b = tmp_path("bondsym_cli_det_b.jsonl");
    REQUIRE(run_capture({"verify", "--suite", "catalog-residuals", "--seed", "42",
                         "--out", a}) == 0);
    REQUIRE(run_capture({"verify", "--suite", "catalog-residuals", "--seed", "42",
                         "--out", b}) == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("verify: BONDSYM_SEED is the fallback for --seed") {
    std::string a = tmp_path("bondsym_cli_env_a.jsonl");
    std::string b = tmp_path("bondsym_cli_env_b.jsonl");
    REQUIRE(setenv("BONDSYM_SEED", "123", 1) == 0);
    int rc = run_capture({"verify", "--suite", "catalog-residuals", "--out", a});
    unsetenv("BONDSYM_SEED");
    REQUIRE(rc == 0);
    REQUIRE(run_capture({"verify", "--suite", "catalog-residuals", "--seed", "123",
                         "--out", b}) == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("oracle: CSV surface matches the closed form") {
    std::string path = tmp_path("bondsym_cli_oracle.csv");
    REQUIRE(run_capture({"oracle", "--case", "T-GammaHalf", "--grid", "5,4",
                         "--xrange", "1,2", "--trange", "2,3", "--out", path}) == 0);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,t,u");
    std::size_t rows = 0;
    double x, t, u;
    char c1, c2;
    double first_t = -1.0;
    while (in >> x >> c1 >> t >> c2 >> u) {
        if (rows == 0) first_t = t;
        CHECK(x >= 1.0);
        CHECK(x <= 2.0);
        CHECK(t >= 2.0);
        CHECK(t <= 3.0);
        ++rows;
    }
    CHECK(rows == 20);
    CHECK(first_t == 2.0); // row-major: t varies slowest
}

TEST_CASE("price: BSM with unit payoff reproduces the discount factor") {
    std::string path = tmp_path("bondsym_cli_price.csv");
    REQUIRE(run_capture({"price", "--model", "bsm", "--payoff", "1", "--grid", "40,40",
                         "--out", path}) == 0);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "x,t,u");
    std::size_t rows = 0;
    double x, t, u;
    char c1, c2;
    while (in >> x >> c1 >> t >> c2 >> u) {
        CHECK(std::fabs(u - std::exp(0.05 * (t - 1.0))) < 1e-8);
        ++rows;
    }
    CHECK(rows == 40 * 40);
}

TEST_CASE("price: barrier mode masks nodes below the moving boundary") {
    std::string path = tmp_path("bondsym_cli_price_barrier.csv");
    REQUIRE(run_capture({"price", "--case", "B-Generic", "--barrier", "--grid", "60,60",
                         "--xrange", "0.5,2.5", "--trange", "0.5,1",
                         "--farfield", "validation", "--out", path}) == 0);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    std::size_t rows = 0;
    double x, t, u;
    char c1, c2;
    while (in >> x >> c1 >> t >> c2 >> u) ++rows;
    CHECK(rows > 0);
    CHECK(rows < 60 * 60); // nodes below H(t) are dropped
}

TEST_CASE("price: identical flags give byte-identical CSV output") {
    std::string a = tmp_path("bondsym_cli_price_a.csv");
    std::string b = tmp_path("bondsym_cli_price_b.csv");
    std::vector<std::string> args{"price", "--case", "T-GammaHalf", "--grid", "30,30",
                                  "--farfield", "validation", "--out", ""};
    args.back() = a;
    REQUIRE(run_capture(args) == 0);
    args.back() = b;
    REQUIRE(run_capture(args) == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("transform: prints the stages and a heat-chart image") {
    std::string path = tmp_path("bondsym_cli_transform.txt");
    REQUIRE(run_capture({"transform", "--case", "T-GammaHalf", "--out", path}) == 0);
    std::string out = slurp(path);
    CHECK(out.find("case: GammaHalf") != std::string::npos);
    CHECK(out.find("stage ") != std::string::npos);
    CHECK(out.find("image params:") != std::string::npos);
    CHECK(out.find("alpha=0 beta=0 gamma=0") != std::string::npos);
    CHECK(out.find("lambda=0") != std::string::npos);
    CHECK(out.find("image source:") != std::string::npos);
}

TEST_CASE("transform: raw parameter block without --case") {
    std::string path = tmp_path("bondsym_cli_transform_raw.txt");
    REQUIRE(run_capture({"transform", "--gamma", "1", "--rho", "1.4142135623730951",
                         "--beta", "1", "--out", path}) == 0);
    std::string out = slurp(path);
    CHECK(out.find("case: GammaOne") != std::string::npos);
    CHECK(out.find("gamma=0") != std::string::npos);
}

TEST_CASE("flow: default scaling generator passes and reports JSONL") {
    std::string path = tmp_path("bondsym_cli_flow.jsonl");
    REQUIRE(run_capture({"flow", "--out", path}) == 0);
    auto records = read_jsonl(path);
    REQUIRE(records.size() == 1);
    CHECK(records[0].at("check") == "flow-solution-to-solution");
    CHECK(records[0].at("case") == "T-GammaOne");
    CHECK(records[0].at("pass") == true);
}

TEST_CASE("config file: values load and command-line flags override them") {
    std::string cfg = tmp_path("bondsym_cli_cfg.ini");
    std::string out_cfg = tmp_path("bondsym_cli_cfg_out.jsonl");
    {
        std::ofstream f(cfg);
        f << "[verify]\n";
        f << "suite=terminal\n";
        f << "out=" << out_cfg << "\n";
    }
    REQUIRE(run_capture({"--config", cfg, "verify"}) == 0);
    CHECK(read_jsonl(out_cfg).size() == 3); // the terminal suite

    // --suite on the command line wins over the config value.
    std::string out_override = tmp_path("bondsym_cli_cfg_override.jsonl");
    REQUIRE(run_capture({"--config", cfg, "verify", "--suite", "catalog-residuals",
                         "--out", out_override}) == 0);
    CHECK(read_jsonl(out_override).size() == 8);
}
