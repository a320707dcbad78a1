#include "dbarrier/config.hpp"
#include "dbarrier/greeks.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace dbarrier {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& path,
                    const std::vector<std::string>& allowed) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const auto& a : allowed)
            if (key == a) ok = true;
        if (!ok) throw ConfigError(path + ": unknown key '" + key + "'");
    }
}

double get_num(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError(path + ": missing key '" + key + "'");
    if (!obj[key].is_number()) throw ConfigError(path + "." + key + ": expected a number");
    const double v = obj[key].get<double>();
    if (!std::isfinite(v)) throw ConfigError(path + "." + key + ": non-finite value");
    return v;
}

std::vector<double> get_array(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError(path + ": missing key '" + key + "'");
    if (!obj[key].is_array()) throw ConfigError(path + "." + key + ": expected an array");
    std::vector<double> out;
    for (const auto& v : obj[key]) {
        if (!v.is_number()) throw ConfigError(path + "." + key + ": expected numbers");
        out.push_back(v.get<double>());
        if (!std::isfinite(out.back()))
            throw ConfigError(path + "." + key + ": non-finite value");
    }
    return out;
}

CurveFn parse_curve(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected a curve object");
    if (!j.contains("kind")) throw ConfigError(path + ": missing key 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "tabulated-spline") {
        reject_unknown(j, path, {"kind", "knots", "values"});
        return CurveFn(get_array(j, path, "knots"), get_array(j, path, "values"));
    }
    reject_unknown(j, path, {"kind", "params"});
    const auto params = get_array(j, path, "params");
    try {
        if (kind == "constant") return CurveFn(CurveKind::Constant, params);
        if (kind == "linear") return CurveFn(CurveKind::Linear, params);
        if (kind == "exponential") return CurveFn(CurveKind::Exponential, params);
        if (kind == "sinusoid") return CurveFn(CurveKind::Sinusoid, params);
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    throw ConfigError(path + ".kind: unknown curve kind '" + kind + "'");
}

Payoff parse_payoff(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected a payoff object");
    if (!j.contains("kind")) throw ConfigError(path + ": missing key 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "constant") {
            reject_unknown(j, path, {"kind", "value"});
            return Payoff::constant(get_num(j, path, "value"));
        }
        if (kind == "call") {
            reject_unknown(j, path, {"kind", "strike"});
            return Payoff::call(get_num(j, path, "strike"));
        }
        if (kind == "put") {
            reject_unknown(j, path, {"kind", "strike"});
            return Payoff::put(get_num(j, path, "strike"));
        }
        if (kind == "sin") {
            reject_unknown(j, path, {"kind", "amplitude", "omega", "phase"});
            const double ph = j.contains("phase") ? get_num(j, path, "phase") : 0.0;
            return Payoff::sine(get_num(j, path, "amplitude"), get_num(j, path, "omega"), ph);
        }
        if (kind == "tabulated") {
            reject_unknown(j, path, {"kind", "xs", "values"});
            return Payoff::tabulated(get_array(j, path, "xs"), get_array(j, path, "values"));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    throw ConfigError(path + ".kind: unknown payoff kind '" + kind + "'");
}

Reduction parse_problem(const json& j) {
    const std::string path = "problem";
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    const std::string model =
        j.contains("model") ? j["model"].get<std::string>() : std::string("heat-native");

    if (model == "heat-native") {
        reject_unknown(j, path,
                       {"model", "horizon", "lower", "upper", "rebate_lower", "rebate_upper",
                        "payoff"});
        HeatStripProblem p;
        p.horizon = get_num(j, path, "horizon");
        p.lower = parse_curve(j.at("lower"), path + ".lower");
        p.upper = parse_curve(j.at("upper"), path + ".upper");
        p.rebate_lower = parse_curve(j.at("rebate_lower"), path + ".rebate_lower");
        p.rebate_upper = parse_curve(j.at("rebate_upper"), path + ".rebate_upper");
        p.initial = parse_payoff(j.at("payoff"), path + ".payoff");
        const ValidationReport rep = validate(p);
        if (!rep.ok()) throw ConfigError(path + ": " + rep.to_string());
        return reduce_model(p);
    }
    if (model == "bs-timedep" || model == "ou-timedep") {
        reject_unknown(j, path,
                       {"model", "maturity", "strike", "put", "rate", "sigma", "kappa",
                        "theta_bar", "barrier_lower", "barrier_upper", "rebate_lower",
                        "rebate_upper"});
        MarketSpec s;
        s.model = model == "bs-timedep" ? ModelKind::BsTimeDep : ModelKind::OuTimeDep;
        s.maturity = get_num(j, path, "maturity");
        s.strike = get_num(j, path, "strike");
        s.is_put = j.contains("put") && j["put"].get<bool>();
        s.rate = parse_curve(j.at("rate"), path + ".rate");
        s.sigma = parse_curve(j.at("sigma"), path + ".sigma");
        if (j.contains("kappa")) s.kappa = parse_curve(j["kappa"], path + ".kappa");
        if (j.contains("theta_bar")) s.theta_bar = parse_curve(j["theta_bar"], path + ".theta_bar");
        s.barrier_lo = parse_curve(j.at("barrier_lower"), path + ".barrier_lower");
        s.barrier_hi = parse_curve(j.at("barrier_upper"), path + ".barrier_upper");
        if (j.contains("rebate_lower"))
            s.rebate_lo = parse_curve(j["rebate_lower"], path + ".rebate_lower");
        if (j.contains("rebate_upper"))
            s.rebate_hi = parse_curve(j["rebate_upper"], path + ".rebate_upper");
        try {
            Reduction red = reduce_model(s);
            const ValidationReport rep = validate(red.problem);
            if (!rep.ok()) throw ConfigError(path + ": reduced problem invalid: " + rep.to_string());
            return red;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(path + ": " + e.what());
        }
    }
    throw ConfigError(path + ".model: unsupported model '" + model + "'");
}

}  // namespace

JobConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(root, "config", {"problem", "solver", "output"});
    if (!root.contains("problem")) throw ConfigError("config: missing 'problem' section");

    JobConfig cfg;
    cfg.reduction = parse_problem(root["problem"]);

    if (root.contains("solver")) {
        const json& s = root["solver"];
        reject_unknown(s, "solver",
                       {"git_steps", "hp_steps", "fd_space", "fd_steps", "price_time_nodes",
                        "representation", "grid"});
        if (s.contains("git_steps")) cfg.solver.git_steps = (int)get_num(s, "solver", "git_steps");
        if (s.contains("hp_steps")) cfg.solver.hp_steps = (int)get_num(s, "solver", "hp_steps");
        if (s.contains("fd_space")) cfg.solver.fd_space = (int)get_num(s, "solver", "fd_space");
        if (s.contains("fd_steps")) cfg.solver.fd_steps = (int)get_num(s, "solver", "fd_steps");
        if (s.contains("price_time_nodes"))
            cfg.solver.price_time_nodes = (int)get_num(s, "solver", "price_time_nodes");
        if (s.contains("representation")) {
            cfg.solver.representation = s["representation"].get<std::string>();
            const auto& r = cfg.solver.representation;
            if (r != "auto" && r != "theta" && r != "images" && r != "hp")
                throw ConfigError("solver.representation: must be auto|theta|images|hp");
        }
        if (s.contains("grid")) {
            cfg.solver.grid = s["grid"].get<std::string>();
            if (cfg.solver.grid != "uniform" && cfg.solver.grid != "graded")
                throw ConfigError("solver.grid: must be uniform|graded");
        }
        if (cfg.solver.git_steps < 2 || cfg.solver.hp_steps < 2)
            throw ConfigError("solver: march steps must be >= 2");
    }

    if (root.contains("output")) {
        const json& o = root["output"];
        reject_unknown(o, "output", {"csv", "taus", "tau_count", "x_fracs", "x_count", "greeks"});
        if (o.contains("csv")) cfg.output.csv = o["csv"].get<std::string>();
        if (o.contains("taus")) cfg.output.taus = get_array(o, "output", "taus");
        if (o.contains("tau_count")) cfg.output.tau_count = (int)get_num(o, "output", "tau_count");
        if (o.contains("x_fracs")) cfg.output.x_fracs = get_array(o, "output", "x_fracs");
        if (o.contains("x_count")) cfg.output.x_count = (int)get_num(o, "output", "x_count");
        if (o.contains("greeks")) cfg.output.greeks = o["greeks"].get<bool>();
        const double T = cfg.reduction.problem.horizon;
        for (double t : cfg.output.taus)
            if (!(t > 0.0) || t > T) throw ConfigError("output.taus: values must lie in (0, T]");
        for (double f : cfg.output.x_fracs)
            if (!(f > 0.0) || !(f < 1.0))
                throw ConfigError("output.x_fracs: fractions must lie in (0, 1)");
    }
    return cfg;
}

JobConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

PriceJobResult run_price_job(const JobConfig& cfg, int threads) {
    const HeatStripProblem& p = cfg.reduction.problem;
    const double T = p.horizon;
    const std::string& rep = cfg.solver.representation;
    const bool want_theta = rep == "auto" || rep == "theta";
    const bool want_images = rep == "auto" || rep == "images";
    const bool want_hp = rep == "auto" || rep == "hp";
    const bool want_fd = rep == "auto";

    PriceJobResult res;
    auto make_grid = [&](int n) {
        return cfg.solver.grid == "graded" ? TimeGrid::graded(T, n) : TimeGrid::uniform(T, n);
    };
    if (want_theta || want_images)
        res.gradients = solve_gradients(p, make_grid(cfg.solver.git_steps));
    if (want_hp) res.densities = solve_densities(p, make_grid(cfg.solver.hp_steps));

    FdSurface fd_surface;
    if (want_fd) {
        FdGrid fg;
        fg.space_nodes = cfg.solver.fd_space;
        fg.time_steps = cfg.solver.fd_steps;
        fd_surface = solve_fd(p, fg);
        res.warnings.insert(res.warnings.end(), fd_surface.warnings.begin(),
                            fd_surface.warnings.end());
    }
    res.warnings.insert(res.warnings.end(), res.gradients.warnings.begin(),
                        res.gradients.warnings.end());
    res.warnings.insert(res.warnings.end(), res.densities.warnings.begin(),
                        res.densities.warnings.end());

    std::vector<double> taus = cfg.output.taus;
    if (taus.empty())
        for (int i = 1; i <= cfg.output.tau_count; ++i)
            taus.push_back(T * i / (cfg.output.tau_count + 1));
    std::vector<double> fracs = cfg.output.x_fracs;
    if (fracs.empty())
        for (int j = 1; j <= cfg.output.x_count; ++j)
            fracs.push_back(double(j) / (cfg.output.x_count + 1));

    res.rows.resize(taus.size() * fracs.size());
    GitPriceOptions popts;
    popts.time_nodes = cfg.solver.price_time_nodes;
    HpPriceOptions hopts;
    hopts.time_nodes = cfg.solver.price_time_nodes;

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_msg;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= res.rows.size() || failed.load()) break;
            const double tau = taus[i / fracs.size()];
            const double f = fracs[i % fracs.size()];
            const double x = p.y(tau) + f * p.width(tau);
            PriceRow& row = res.rows[i];
            row.tau = tau;
            row.x = x;
            try {
                EvalStats stats;
                if (want_theta) {
                    row.git_theta = price_theta(p, res.gradients, tau, x, popts, &stats);
                    row.has_theta = true;
                }
                if (want_images) {
                    const auto d = price_images_derivs(p, res.gradients, tau, x, popts, &stats);
                    row.git_images = d[0];
                    row.dudx = d[1];
                    row.d2udx2 = d[2];
                    row.theta_heat = d[2];
                    row.has_images = true;
                }
                if (want_hp) {
                    row.hp = price_hp(p, res.densities, tau, x, hopts);
                    row.has_hp = true;
                }
                if (want_fd) {
                    row.fd = fd_surface.value(tau, x);
                    row.has_fd = true;
                }
                row.kernel_terms = stats.terms;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                error_msg = e.what();
                failed.store(true);
            }
        }
    };

    threads = std::max(1, threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw std::runtime_error("price job failed: " + error_msg);
    return res;
}

std::string price_csv(const JobConfig& cfg, const PriceJobResult& result) {
    std::string out = "tau,x,price_git_theta,price_git_images,price_hp,price_fd";
    if (cfg.output.greeks) out += ",dudx,d2udx2,theta_heat";
    out += "\n";
    char buf[64];
    auto put = [&](double v, bool present) {
        out += ",";
        if (!present) return;
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out += buf;
    };
    for (const auto& r : result.rows) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.tau);
        out += buf;
        std::snprintf(buf, sizeof(buf), ",%.17g", r.x);
        out += buf;
        put(r.git_theta, r.has_theta);
        put(r.git_images, r.has_images);
        put(r.hp, r.has_hp);
        put(r.fd, r.has_fd);
        if (cfg.output.greeks) {
            put(r.dudx, r.has_images);
            put(r.d2udx2, r.has_images);
            put(r.theta_heat, r.has_images);
        }
        out += "\n";
    }
    return out;
}

}  // namespace dbarrier
