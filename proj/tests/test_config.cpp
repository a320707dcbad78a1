#include "dbarrier/config.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace dbarrier;

namespace {

const char* kEigenConfig = R"json({
  "problem": {
    "model": "heat-native",
    "horizon": 1.0,
    "lower": {"kind": "constant", "params": [0.0]},
    "upper": {"kind": "constant", "params": [1.0]},
    "rebate_lower": {"kind": "constant", "params": [0.0]},
    "rebate_upper": {"kind": "constant", "params": [0.0]},
    "payoff": {"kind": "sin", "amplitude": 1.0, "omega": 3.14159265358979323846}
  },
  "solver": {"git_steps": 96, "hp_steps": 192, "fd_space": 301, "fd_steps": 900},
  "output": {"taus": [0.1], "x_fracs": [0.5]}
})json";

}  // namespace

TEST_CASE("config parses and the job prices the eigenfunction") {
    const JobConfig cfg = parse_config(kEigenConfig);
    CHECK(cfg.reduction.problem.horizon == 1.0);
    const auto res = run_price_job(cfg);
    REQUIRE(res.rows.size() == 1);
    const auto& r = res.rows[0];
    const double exact = std::exp(-M_PI * M_PI * 0.1);
    CHECK(std::abs(r.git_theta - exact) < 1e-5);
    CHECK(std::abs(r.git_images - exact) < 1e-5);
    CHECK(std::abs(r.hp - exact) < 1e-5);
    CHECK(std::abs(r.fd - exact) < 1e-5);
}

TEST_CASE("unknown keys are rejected with their path") {
    std::string bad(kEigenConfig);
    bad.replace(bad.find("\"horizon\""), 9, "\"horizonn\"");
    try {
        parse_config(bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("problem") != std::string::npos);
        CHECK(std::string(e.what()).find("horizonn") != std::string::npos);
    }
}

TEST_CASE("syntax errors carry position information") {
    try {
        parse_config("{ \"problem\": ");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("parse error") != std::string::npos);
    }
}

TEST_CASE("collapsing strip is named in the error") {
    std::string bad(kEigenConfig);
    bad.replace(bad.find("\"upper\": {\"kind\": \"constant\", \"params\": [1.0]}"),
                std::string("\"upper\": {\"kind\": \"constant\", \"params\": [1.0]}").size(),
                "\"upper\": {\"kind\": \"linear\", \"params\": [1.0, -2.0]}");
    try {
        parse_config(bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("strip-collapse") != std::string::npos);
    }
}

TEST_CASE("csv output is byte-identical across runs and thread counts") {
    const JobConfig cfg = parse_config(kEigenConfig);
    const std::string a = price_csv(cfg, run_price_job(cfg, 1));
    const std::string b = price_csv(cfg, run_price_job(cfg, 1));
    const std::string c = price_csv(cfg, run_price_job(cfg, 4));
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a.substr(0, a.find('\n')) ==
          "tau,x,price_git_theta,price_git_images,price_hp,price_fd");
}

TEST_CASE("representation filter narrows the computed columns") {
    JobConfig cfg = parse_config(kEigenConfig);
    cfg.solver.representation = "hp";
    const auto res = run_price_job(cfg);
    CHECK_FALSE(res.rows[0].has_theta);
    CHECK_FALSE(res.rows[0].has_fd);
    CHECK(res.rows[0].has_hp);
    const std::string csv = price_csv(cfg, res);
    CHECK(csv.find(",,") != std::string::npos);  // empty cells for skipped pricers
}

TEST_CASE("bs config reduces and runs end to end") {
    const char* text = R"json({
      "problem": {
        "model": "bs-timedep",
        "maturity": 1.0,
        "strike": 100.0,
        "rate": {"kind": "constant", "params": [0.02]},
        "sigma": {"kind": "constant", "params": [0.3]},
        "barrier_lower": {"kind": "constant", "params": [80.0]},
        "barrier_upper": {"kind": "constant", "params": [120.0]}
      },
      "solver": {"git_steps": 256, "hp_steps": 128, "fd_space": 101, "fd_steps": 160, "grid": "graded"},
      "output": {"tau_count": 2, "x_count": 3}
    })json";
    const JobConfig cfg = parse_config(text);
    const auto res = run_price_job(cfg);
    CHECK(res.rows.size() == 6);
    for (const auto& r : res.rows) {
        CHECK(std::isfinite(r.git_theta));
        // coarse smoke bounds; the kinked payoff clashes with the zero rebate
        // at the upper corner, which the marches only resolve slowly
        CHECK(std::abs(r.hp - r.fd) < 5e-3);
        CHECK(std::abs(r.git_theta - r.hp) < 5e-3);
    }
}
