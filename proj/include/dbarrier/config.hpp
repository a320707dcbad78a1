#pragma once

#include "dbarrier/fd.hpp"
#include "dbarrier/git.hpp"
#include "dbarrier/hp.hpp"
#include "dbarrier/reduction.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace dbarrier {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolverConfig {
    int git_steps = 256;
    int hp_steps = 256;
    int fd_space = 201;
    int fd_steps = 400;
    int price_time_nodes = 0;
    std::string representation = "auto";  // auto | theta | images | hp
    std::string grid = "uniform";         // uniform | graded
};

struct OutputConfig {
    std::string csv;                 // empty = stdout
    std::vector<double> taus;        // explicit evaluation times
    int tau_count = 10;              // used when taus is empty
    std::vector<double> x_fracs;     // fractions of the strip width
    int x_count = 10;                // used when x_fracs is empty
    bool greeks = false;
};

struct JobConfig {
    Reduction reduction;
    SolverConfig solver;
    OutputConfig output;
};

/// Parse and validate a config document. Unknown keys are rejected; messages
/// carry the JSON path (or line/column for syntax errors).
JobConfig parse_config(const std::string& text);
JobConfig load_config(const std::string& path);

struct PriceRow {
    double tau = 0.0, x = 0.0;
    double git_theta = 0.0, git_images = 0.0, hp = 0.0, fd = 0.0;
    double dudx = 0.0, d2udx2 = 0.0, theta_heat = 0.0;
    bool has_theta = false, has_images = false, has_hp = false, has_fd = false;
    int kernel_terms = 0;  // series terms consumed by this point's evaluations
};

struct PriceJobResult {
    std::vector<PriceRow> rows;
    GradientPair gradients;
    PotentialPair densities;
    std::vector<std::string> warnings;
};

/// Evaluate the configured (tau, x) lattice with the selected pricers; the
/// lattice is fanned out across `threads` workers with ordered assembly.
PriceJobResult run_price_job(const JobConfig& cfg, int threads = 1);

/// RFC-4180 CSV with 17 significant digits, one documented header row.
std::string price_csv(const JobConfig& cfg, const PriceJobResult& result);

}  // namespace dbarrier
