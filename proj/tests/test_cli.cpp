#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "ekfrac/errors.hpp"
#include "json.hpp"
#include "oracle.hpp"

using namespace ekfrac;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ekfrac");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = cli::main_with_args(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("eval writes u,value,abs_err on the grid") {
    const Run r = run_cli({"eval", "kober2", "--zeta", "1", "--alpha", "1", "--f", "exp1", "--grid", "0.5:4:8"});
    REQUIRE(r.code == cli::kOk);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == std::vector<std::string>{"u", "value", "abs_err"});
    CHECK(std::stod(rows[1][0]) == 0.5);
    CHECK(std::stod(rows[8][0]) == 4.0);
    CHECK(rows[2][0] == "1");
    // density convention by default: Gamma(3)/Gamma(2) times the bare value
    CHECK(std::stod(rows[2][1]) == doctest::Approx(2.0 * oracle::kKober2Exp).epsilon(1e-11));
    CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("eval --bare gives the bare operator") {
    const Run one = run_cli({"eval", "kober2", "--zeta", "1", "--alpha", "1", "--u", "1", "--bare"});
    REQUIRE(one.code == cli::kOk);
    CHECK(std::stod(csv(one.out)[1][1]) == doctest::Approx(oracle::kKober2Exp).epsilon(1e-11));
    const Run zero = run_cli({"eval", "kober2", "--zeta", "0", "--alpha", "1", "--u", "1", "--bare"});
    REQUIRE(zero.code == cli::kOk);
    CHECK(std::stod(csv(zero.out)[1][1]) == doctest::Approx(oracle::kE1At1).epsilon(1e-11));
    CHECK(run_cli({"eval", "kober2", "--u", "1", "--bare", "--density"}).code == cli::kValidationError);
    const Run k1 = run_cli({"eval", "kober1", "--zeta", "0", "--alpha", "1", "--u", "1"});
    REQUIRE(k1.code == cli::kOk);
    CHECK(std::stod(csv(k1.out)[1][1]) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-11));
    CHECK(k1.err.find("warning: u = 1") != std::string::npos);
}

TEST_CASE("eval of the other operators") {
    const Run p = run_cli({"eval", "product", "--f1", "exp1", "--f", "exp1", "--u", "1"});
    REQUIRE(p.code == cli::kOk);
    CHECK(std::stod(csv(p.out)[1][1]) == doctest::Approx(oracle::kTwoK0At2).epsilon(1e-11));
    const Run w = run_cli({"eval", "weyl", "--alpha", "2.5", "--u", "1"});
    REQUIRE(w.code == cli::kOk);
    CHECK(std::stod(csv(w.out)[1][1]) == doctest::Approx(std::exp(-1.0)).epsilon(1e-11));
    const Run h = run_cli({"eval", "hyper1", "--zeta", "1", "--alpha", "1", "--scale", "1", "--f", "uniform", "--u", "1"});
    REQUIRE(h.code == cli::kOk);
    CHECK(std::stod(csv(h.out)[1][1]) == doctest::Approx(oracle::kOneOverEMinus1).epsilon(1e-11));
    const Run pw = run_cli({"eval", "pathway1", "--gamma", "1", "--delta", "1", "--eta", "1", "--a", "1", "--q", "1",
                            "--u", "1"});
    REQUIRE(pw.code == cli::kOk);
    CHECK(std::stod(csv(pw.out)[1][1]) == doctest::Approx(0.25).epsilon(1e-11));
    CHECK(run_cli({"eval", "ratio", "--u", "1"}).code == cli::kValidationError);
}

TEST_CASE("exit codes") {
    CHECK(run_cli({"eval", "nope", "--u", "1"}).code == cli::kValidationError);
    CHECK(run_cli({"eval", "kober2", "--grid", "1:0:3"}).code == cli::kValidationError);
    CHECK(run_cli({"eval", "kober2", "--grid", "1:2:1"}).code == cli::kValidationError);
    CHECK(run_cli({"eval", "kober2", "--grid", "0:2:3:log"}).code == cli::kValidationError);
    CHECK(run_cli({"eval", "kober2", "--zeta", "-3", "--u", "1"}).code == cli::kValidationError);
    CHECK(run_cli({"eval", "kober2", "--f", "expgrow", "--u", "1"}).code == cli::kValidationError);
    CHECK(run_cli({"eval", "kober2", "--u", "1", "--abs-tol", "0"}).code == cli::kValidationError);
    CHECK(run_cli({"eval", "kober2"}).code == cli::kValidationError);
    CHECK(run_cli({"frobnicate"}).code == cli::kValidationError);
    const Run num = run_cli({"eval", "kober2", "--zeta", "1", "--alpha", "0.3", "--u", "1,2", "--abs-tol", "1e-300",
                             "--rel-tol", "1e-300"});
    CHECK(num.code == cli::kNumericalError);
    CHECK(num.err.find("u = 1") != std::string::npos);
    CHECK(num.out.empty());
}

TEST_CASE("mc-verify") {
    const Run ok = run_cli({"mc-verify", "t1.1", "--zeta", "1", "--alpha", "1", "--f", "exp1", "--n", "100000",
                            "--seed", "42"});
    REQUIRE(ok.code == cli::kOk);
    const auto j = nlohmann::json::parse(ok.out);
    CHECK(j["pass"] == true);
    CHECK(j["theorem"] == "T1_1");
    CHECK(j["seed"] == 42);
    const Run bad = run_cli({"mc-verify", "t1.1", "--zeta", "1", "--alpha", "1", "--f", "exp1", "--n", "20000",
                             "--constant", "swapped"});
    CHECK(bad.code == cli::kVerificationFailed);
    CHECK(nlohmann::json::parse(bad.out)["pass"] == false);
    CHECK(run_cli({"mc-verify", "t2.1", "--zeta", "0"}).code == cli::kValidationError);
}

TEST_CASE("sweep-q spans both regimes and is continuous at q = 1") {
    const Run r = run_cli({"sweep-q", "pathway2", "--gamma", "0", "--delta", "1", "--a", "1", "--eta", "1", "--u", "1",
                           "--f", "exp1", "--q", "-1:0.25:1.5"});
    REQUIRE(r.code == cli::kOk);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == std::vector<std::string>{"q", "u", "value"});
    CHECK(std::stod(rows[9][0]) == 1.0);
    CHECK(std::stod(rows[9][2]) == doctest::Approx(oracle::kTwoK0At2).epsilon(1e-11));
    CHECK(std::stod(rows[7][2]) == doctest::Approx(oracle::kSweepQ05).epsilon(1e-10));
    CHECK(std::stod(rows[10][2]) == doctest::Approx(oracle::kSweepQ125).epsilon(1e-10));
    CHECK(std::stod(rows[11][2]) == doctest::Approx(oracle::kSweepQ15).epsilon(1e-10));
    const Run near = run_cli({"sweep-q", "pathway2", "--gamma", "0", "--delta", "1", "--a", "1", "--eta", "1", "--u",
                              "1", "--q", "0.999:0.001:1.001"});
    REQUIRE(near.code == cli::kOk);
    const auto n = csv(near.out);
    REQUIRE(n.size() == 4);
    CHECK(std::abs(std::stod(n[1][2]) - std::stod(n[2][2])) < 1e-3);
    CHECK(std::abs(std::stod(n[3][2]) - std::stod(n[2][2])) < 1e-3);
    CHECK(run_cli({"sweep-q", "kober2", "--q", "0:0.5:1", "--u", "1"}).code == cli::kValidationError);
}

TEST_CASE("reduce-check and mellin-check write passing JSON") {
    const Run r = run_cli({"reduce-check", "--f", "gamma:2", "--zeta", "0.5", "--alpha", "2"});
    REQUIRE(r.code == cli::kOk);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["checks"].size() > 0);
    for (const auto& c : j["checks"]) CHECK(c["pass"] == true);
    const Run m = run_cli({"mellin-check", "kober2", "--zeta", "1", "--alpha", "1", "--f", "exp1", "--probes",
                           "1.5,2,2.5+1i"});
    REQUIRE(m.code == cli::kOk);
    const auto mj = nlohmann::json::parse(m.out);
    CHECK(mj["pass"] == true);
    CHECK(mj["probes"].size() == 3);
    CHECK(mj["max_rel_error"].get<double>() < 1e-6);
    CHECK(mj["strip"][0].get<double>() == 0.0);
    CHECK(run_cli({"mellin-check", "kober2", "--probes", "-3"}).code == cli::kValidationError);
    CHECK(run_cli({"mellin-check", "NOPE"}).code == cli::kValidationError);
}

TEST_CASE("list") {
    const Run r = run_cli({"list"});
    CHECK(r.code == cli::kOk);
    for (const char* word : {"exp1", "kober2", "pathway1", "HYPER_2_ARG1MX", "T3_2"}) {
        CHECK(r.out.find(word) != std::string::npos);
    }
}

TEST_CASE("identical configurations give byte-identical output") {
    const std::vector<std::string> eval{"eval", "hyper2", "--zeta", "1.5", "--alpha", "0.75", "--upper", "1",
                                        "--lower", "2", "--scale", "0.5", "--mode", "1mx", "--grid", "0.1:10:16:log"};
    CHECK(run_cli(eval).out == run_cli(eval).out);
    const std::vector<std::string> mc{"mc-verify", "t3.2", "--zeta", "1", "--alpha", "0.5", "--n", "20000",
                                      "--seed", "7"};
    CHECK(run_cli(mc).out == run_cli(mc).out);
    const std::string path = "cli_test_output.csv";
    std::vector<std::string> to_file = eval;
    to_file.push_back("--out");
    to_file.push_back(path);
    const Run f = run_cli(to_file);
    REQUIRE(f.code == cli::kOk);
    CHECK(f.out.empty());
    std::ifstream in(path, std::ios::binary);
    const std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(body == run_cli(eval).out);
    std::remove(path.c_str());
}

TEST_CASE("grid and range parsing") {
    const auto g = cli::GridSpec::parse("1:100:3:log").points();
    REQUIRE(g.size() == 3);
    CHECK(g[1] == doctest::Approx(10.0));
    CHECK(g[2] == 100.0);
    const auto l = cli::GridSpec::parse("0:1:5").points();
    CHECK(l == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    const auto q = cli::RangeSpec::parse("-1:0.25:1.5").points();
    REQUIRE(q.size() == 11);
    CHECK(q[8] == 1.0);
    CHECK(q.back() == 1.5);
    CHECK_THROWS_AS(cli::GridSpec::parse("1:2"), DomainError);
    CHECK_THROWS_AS(cli::GridSpec::parse("1:2:3:cubic"), DomainError);
    CHECK_THROWS_AS(cli::RangeSpec::parse("0:-1:1"), DomainError);
    cli::RunConfig cfg;
    cfg.command = cli::Command::Eval;
    cfg.target = "kober2";
    cfg.us = {1.0};
    CHECK_NOTHROW(cfg.validate());
    cfg.rel_tol = -1.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}
