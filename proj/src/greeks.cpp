#include "dbarrier/greeks.hpp"
#include "dbarrier/time_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace dbarrier {

namespace {

// Scale a curve multiplicatively; an identically-zero curve gets an absolute
// shift instead.
CurveFn bump_curve(const CurveFn& c, double h_rel, double h_abs, double span) {
    bool all_zero = true;
    for (int i = 0; i <= 16; ++i)
        if (c.value(span * i / 16) != 0.0) {
            all_zero = false;
            break;
        }
    if (all_zero) return CurveFn::constant(h_abs);
    // sample-and-spline keeps every parametric family representable
    std::vector<double> xs(129), vs(129);
    for (int i = 0; i < 129; ++i) {
        xs[i] = span * i / 128;
        vs[i] = c.value(xs[i]) * (1.0 + h_rel);
    }
    return CurveFn(std::move(xs), std::move(vs));
}

double reprice(const MarketSpec& spec, double t, double S, const BumpOptions& opts) {
    const Reduction red = reduce_model(spec);
    const TimeGrid grid = TimeGrid::uniform(red.problem.horizon, opts.march_steps);
    const GradientPair g = solve_gradients(red.problem, grid);
    const double tau = red.map.tau_of_t(t), x = red.map.x_of(t, S);
    const double u = price_images(red.problem, g, tau, x, opts.price);
    return red.map.discount(t) * u;
}

double bump_reprice(const MarketSpec& spec, bool bump_sigma, double t, double S,
                    const BumpOptions& opts) {
    auto bumped = [&](double dir) {
        MarketSpec s = spec;
        CurveFn& target = bump_sigma ? s.sigma : s.rate;
        bool zero = true;
        for (int i = 0; i <= 16; ++i)
            if (target.value(spec.maturity * i / 16) != 0.0) zero = false;
        target = bump_curve(target, dir * opts.relative, dir * opts.absolute, spec.maturity);
        return std::pair<MarketSpec, bool>(s, zero);
    };
    const auto [up, zero] = bumped(+1.0);
    const auto [dn, zero2] = bumped(-1.0);
    const double pu = reprice(up, t, S, opts);
    const double pd = reprice(dn, t, S, opts);
    const double h = (zero || zero2) ? opts.absolute : opts.relative;
    return (pu - pd) / (2.0 * h);
}

}  // namespace

std::array<double, 2> spatial_greeks(const HeatStripProblem& p, const GradientPair& g,
                                     double tau, double x, const GreeksOptions& opts) {
    const double y = p.y(tau), z = p.z(tau), l = z - y;
    const double dist = std::min(x - y, z - x);
    if (dist < 0.0) throw std::invalid_argument("spatial_greeks: x outside the strip");
    if (dist >= l / 100.0) {
        const auto d = price_images_derivs(p, g, tau, x, opts.price);
        return {d[1], d[2]};
    }
    if (!opts.near_boundary_fd)
        throw std::invalid_argument("spatial_greeks: point too close to the boundary");
    // one-sided second-order differences of the price, stepping inward
    const double h = (x - y < z - x ? +1.0 : -1.0) * l / 400.0;
    const double u0 = price_images(p, g, tau, x, opts.price);
    const double u1 = price_images(p, g, tau, x + h, opts.price);
    const double u2 = price_images(p, g, tau, x + 2.0 * h, opts.price);
    const double u3 = price_images(p, g, tau, x + 3.0 * h, opts.price);
    const double d1 = (-11.0 * u0 + 18.0 * u1 - 9.0 * u2 + 2.0 * u3) / (6.0 * h);
    const double d2 = (2.0 * u0 - 5.0 * u1 + 4.0 * u2 - u3) / (h * h);
    return {d1, d2};
}

double calendar_theta(const HeatStripProblem& p, const GradientPair& g, double tau, double x,
                      const GreeksOptions& opts) {
    return spatial_greeks(p, g, tau, x, opts)[1];
}

GreekSet market_greeks(const HeatStripProblem& p, const GradientPair& g, const ReductionMap& map,
                       double t, double S, const GreeksOptions& opts) {
    const double tau = map.tau_of_t(t), x = map.x_of(t, S);
    GreekSet out;
    out.value = price_images(p, g, tau, x, opts.price);
    const auto d = spatial_greeks(p, g, tau, x, opts);
    out.dudx = d[0];
    out.d2udx2 = d[1];
    const MappedValue mv = map_back(map, out.value, out.dudx, out.d2udx2, t, S);
    out.price = mv.price;
    out.delta = mv.delta;
    out.gamma = mv.gamma;
    const double D = map.discount(t);
    out.theta = map.rate_at(t) * out.price +
                D * (out.d2udx2 * map.dtau_dt(t) + out.dudx * map.dx_dt(t, S));
    return out;
}

double market_vega(const MarketSpec& spec, double t, double S, const BumpOptions& opts) {
    return bump_reprice(spec, true, t, S, opts);
}

double market_rho(const MarketSpec& spec, double t, double S, const BumpOptions& opts) {
    return bump_reprice(spec, false, t, S, opts);
}

}  // namespace dbarrier
