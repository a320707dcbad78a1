#include "dbarrier/config.hpp"
#include "dbarrier/greeks.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using namespace dbarrier;

int thread_count(int cli_threads) {
    if (cli_threads > 0) return cli_threads;
    if (const char* env = std::getenv("DBARRIER_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

void write_out(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

double median_ms(const std::vector<double>& v) {
    std::vector<double> s(v);
    std::sort(s.begin(), s.end());
    return s[s.size() / 2];
}

template <typename F>
double time_ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

int cmd_validate(const std::string& config_path) {
    const JobConfig cfg = load_config(config_path);
    const ValidationReport rep = validate(cfg.reduction.problem);
    if (rep.empty()) {
        std::cout << "ok: no violations\n";
        return 0;
    }
    std::cout << rep.to_string();
    return rep.ok() ? 0 : 2;
}

int cmd_price(const std::string& config_path, const std::string& out_override,
              const std::string& rep_override, int threads) {
    JobConfig cfg = load_config(config_path);
    if (!rep_override.empty()) cfg.solver.representation = rep_override;
    const PriceJobResult res = run_price_job(cfg, thread_count(threads));
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    const std::string path = out_override.empty() ? cfg.output.csv : out_override;
    write_out(price_csv(cfg, res), path);
    return 0;
}

int cmd_converge(const std::string& config_path, const std::string& out_override, int threads) {
    JobConfig cfg = load_config(config_path);
    const HeatStripProblem& p = cfg.reduction.problem;
    const double T = p.horizon;
    (void)threads;

    // probe lattice (capped so refinement studies stay quick)
    std::vector<double> taus, fracs;
    for (int i = 1; i <= 3; ++i) taus.push_back(T * i / 4);
    for (int j = 1; j <= 3; ++j) fracs.push_back(j / 4.0);

    std::string out = "kind,n,error,order,image_terms,fourier_terms\n";
    char buf[160];

    auto price_on = [&](const GradientPair& g, double tau, double x) {
        return price_theta(p, g, tau, x);
    };

    // reference: finest-grid solution (doubled once more)
    const int nmax = cfg.solver.git_steps;
    std::vector<int> ns;
    for (int n = std::max(16, nmax / 8); n <= nmax; n *= 2) ns.push_back(n);
    const GradientPair gref = solve_gradients(p, TimeGrid::uniform(T, 2 * nmax));
    std::vector<double> ref;
    for (double tau : taus)
        for (double f : fracs) ref.push_back(price_on(gref, tau, p.y(tau) + f * p.width(tau)));

    double prev_err = 0.0;
    for (std::size_t k = 0; k < ns.size(); ++k) {
        const GradientPair g = solve_gradients(p, TimeGrid::uniform(T, ns[k]));
        double err = 0.0;
        std::size_t idx = 0;
        for (double tau : taus)
            for (double f : fracs)
                err = std::max(err, std::abs(price_on(g, tau, p.y(tau) + f * p.width(tau)) -
                                             ref[idx++]));
        const double order = k == 0 ? 0.0 : std::log2(prev_err / std::max(err, 1e-300));
        std::snprintf(buf, sizeof(buf), "git,%d,%.6e,%.3f,,\n", ns[k], err, order);
        out += buf;
        prev_err = err;
    }

    const PotentialPair dref = solve_densities(p, TimeGrid::uniform(T, 2 * nmax));
    std::vector<double> href;
    for (double tau : taus)
        for (double f : fracs) href.push_back(price_hp(p, dref, tau, p.y(tau) + f * p.width(tau)));
    prev_err = 0.0;
    for (std::size_t k = 0; k < ns.size(); ++k) {
        const PotentialPair d = solve_densities(p, TimeGrid::uniform(T, ns[k]));
        double err = 0.0;
        std::size_t idx = 0;
        for (double tau : taus)
            for (double f : fracs)
                err = std::max(err, std::abs(price_hp(p, d, tau, p.y(tau) + f * p.width(tau)) -
                                             href[idx++]));
        const double order = k == 0 ? 0.0 : std::log2(prev_err / std::max(err, 1e-300));
        std::snprintf(buf, sizeof(buf), "hp,%d,%.6e,%.3f,,\n", ns[k], err, order);
        out += buf;
        prev_err = err;
    }

    // FD self-convergence against a doubled grid
    std::vector<int> fd_ns = {cfg.solver.fd_steps / 4, cfg.solver.fd_steps / 2,
                              cfg.solver.fd_steps};
    FdGrid fgref;
    fgref.space_nodes = 2 * (cfg.solver.fd_space - 1) + 1;
    fgref.time_steps = 2 * cfg.solver.fd_steps;
    const FdSurface sref = solve_fd(p, fgref);
    prev_err = 0.0;
    for (std::size_t k = 0; k < fd_ns.size(); ++k) {
        FdGrid fg;
        fg.space_nodes = std::max(9, (cfg.solver.fd_space - 1) * fd_ns[k] / cfg.solver.fd_steps + 1);
        fg.time_steps = fd_ns[k];
        const FdSurface s = solve_fd(p, fg);
        double err = 0.0;
        for (double tau : taus)
            for (double f : fracs) {
                const double x = p.y(tau) + f * p.width(tau);
                err = std::max(err, std::abs(s.value(tau, x) - sref.value(tau, x)));
            }
        const double order = k == 0 ? 0.0 : std::log2(prev_err / std::max(err, 1e-300));
        std::snprintf(buf, sizeof(buf), "fd,%d,%.6e,%.3f,,\n", fd_ns[k], err, order);
        out += buf;
        prev_err = err;
    }

    // kernel representation crossover: terms to convergence vs (tau-s)/l^2,
    // on a synthetic strip narrow enough to reach every regime within tau
    for (double ratio : {0.002, 0.01, 0.05, 0.2, 1.0, 5.0}) {
        const double tau = 0.9 * T;
        const double width = std::min(p.width(tau), std::sqrt(0.9 * tau / ratio));
        const CurveFn lo = CurveFn::constant(0.0), hi = CurveFn::constant(width);
        KernelQuery q;
        q.tau = tau;
        q.s = tau - ratio * width * width;
        q.xi = 0.37 * width;
        q.lower = &lo;
        q.upper = &hi;
        EvalStats im{}, fo{};
        upsilon_kernel(Side::Lower, q, Representation::Image, &im);
        upsilon_kernel(Side::Lower, q, Representation::Fourier, &fo);
        std::snprintf(buf, sizeof(buf), "kernel,%g,,,%d,%d\n", ratio, im.terms, fo.terms);
        out += buf;
    }

    write_out(out, out_override.empty() ? cfg.output.csv : out_override);
    return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_override, int threads) {
    JobConfig cfg = load_config(config_path);
    const HeatStripProblem& p = cfg.reduction.problem;
    const double T = p.horizon;
    const int reps = 5;

    std::vector<double> t_git, t_hp, t_fd, t_price, t_greeks;
    GradientPair g;
    PotentialPair d;
    for (int r = 0; r < reps; ++r) {
        t_git.push_back(
            time_ms([&] { g = solve_gradients(p, TimeGrid::uniform(T, cfg.solver.git_steps)); }));
        t_hp.push_back(
            time_ms([&] { d = solve_densities(p, TimeGrid::uniform(T, cfg.solver.hp_steps)); }));
        FdGrid fg;
        fg.space_nodes = cfg.solver.fd_space;
        fg.time_steps = cfg.solver.fd_steps;
        t_fd.push_back(time_ms([&] { solve_fd(p, fg); }));
    }
    const double tau = 0.7 * T, x = p.y(tau) + 0.45 * p.width(tau);
    volatile double sink = 0.0;
    for (int r = 0; r < reps; ++r) {
        t_price.push_back(time_ms([&] {
            for (int k = 0; k < 8; ++k) sink = sink + price_images(p, g, tau, x);
        }));
        t_greeks.push_back(time_ms([&] {
            for (int k = 0; k < 8; ++k) {
                const auto v = price_images_derivs(p, g, tau, x);
                sink = sink + v[0] + v[1] + v[2];
            }
        }));
    }

    char buf[160];
    std::string out = "metric,value\n";
    std::snprintf(buf, sizeof(buf), "solve_git_ms,%.3f\n", median_ms(t_git));
    out += buf;
    std::snprintf(buf, sizeof(buf), "solve_hp_ms,%.3f\n", median_ms(t_hp));
    out += buf;
    std::snprintf(buf, sizeof(buf), "solve_fd_ms,%.3f\n", median_ms(t_fd));
    out += buf;
    std::snprintf(buf, sizeof(buf), "price_point_ms,%.4f\n", median_ms(t_price) / 8.0);
    out += buf;
    std::snprintf(buf, sizeof(buf), "price_greeks_point_ms,%.4f\n", median_ms(t_greeks) / 8.0);
    out += buf;
    std::snprintf(buf, sizeof(buf), "greeks_over_price_ratio,%.3f\n",
                  median_ms(t_greeks) / std::max(median_ms(t_price), 1e-9));
    out += buf;
    std::snprintf(buf, sizeof(buf), "threads,%d\n", thread_count(threads));
    out += buf;

    write_out(out, out_override.empty() ? cfg.output.csv : out_override);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semi-analytic double barrier option pricer on a moving heat strip"};
    app.require_subcommand(1);

    std::string config_path, out_path, representation;
    int threads = 0;
    app.add_option("--out", out_path, "output CSV path (overrides the config)");
    app.add_option("--threads", threads, "worker threads for lattice evaluation");
    app.add_option("--representation", representation, "auto|theta|images|hp");

    auto* c_price = app.add_subcommand("price", "evaluate the price lattice");
    c_price->add_option("config", config_path, "config file")->required();
    c_price->fallthrough();
    auto* c_conv = app.add_subcommand("converge", "grid refinement and kernel term study");
    c_conv->add_option("config", config_path, "config file")->required();
    c_conv->fallthrough();
    auto* c_bench = app.add_subcommand("bench", "timing report");
    c_bench->add_option("config", config_path, "config file")->required();
    c_bench->fallthrough();
    auto* c_val = app.add_subcommand("validate", "check a problem config");
    c_val->add_option("config", config_path, "config file")->required();
    c_val->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(c_val)) return cmd_validate(config_path);
        if (app.got_subcommand(c_price))
            return cmd_price(config_path, out_path, representation, threads);
        if (app.got_subcommand(c_conv)) return cmd_converge(config_path, out_path, threads);
        if (app.got_subcommand(c_bench)) return cmd_bench(config_path, out_path, threads);
    } catch (const dbarrier::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
