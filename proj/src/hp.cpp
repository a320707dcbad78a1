#include "dbarrier/hp.hpp"
#include "dbarrier/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dbarrier {

namespace {

// Heat-potential densities open with a square-root branch in time (the
// boundary convolution of the initial data carries a sqrt(t) term), so the
// interpolation is piecewise linear in sqrt(t): exact on the branch and
// second-order on smooth sections.
double interp_sqrt(const std::vector<double>& t, const std::vector<double>& v, double s) {
    if (s <= t.front()) return v.front();
    if (s >= t.back()) return v.back();
    auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t i = it - t.begin();
    const double wl = std::sqrt(t[i - 1]), wr = std::sqrt(t[i]);
    const double w = (std::sqrt(s) - wl) / (wr - wl);
    return (1.0 - w) * v[i - 1] + w * v[i];
}

// Free-space convolution of a shifted initial profile at the point xq.
double conv_u0(const HeatStripProblem& p, double shift, double xq, double tau) {
    const double y0 = p.y(0.0), z0 = p.z(0.0);
    const auto bp = quad::gaussian_breakpoints(y0, z0, {xq}, tau, p.initial.kinks());
    const double c = 1.0 / (2.0 * std::sqrt(M_PI * tau));
    return quad::integrate_panels(
        [&](double xi) {
            const double d = xq - xi;
            return (p.u0(xi) - shift) * c * std::exp(-d * d / (4.0 * tau));
        },
        y0, z0, bp);
}

// x-gradient of the same convolution.
double conv_u0_dx(const HeatStripProblem& p, double shift, double xq, double tau) {
    const double y0 = p.y(0.0), z0 = p.z(0.0);
    const auto bp = quad::gaussian_breakpoints(y0, z0, {xq}, tau, p.initial.kinks());
    const double c = 1.0 / (4.0 * std::sqrt(M_PI * tau * tau * tau));
    return quad::integrate_panels(
        [&](double xi) {
            const double d = xq - xi;
            return -(p.u0(xi) - shift) * c * d * std::exp(-d * d / (4.0 * tau));
        },
        y0, z0, bp);
}

// Uniform v-rule with extra geometric nodes near v = 0 resolving a layer of
// the given scale, merged with any time-grid nodes below tau.
quad::SqrtTimeRule refined_rule(double tau, int n, double layer_scale,
                                const std::vector<double>& grid_nodes = {}) {
    auto base = quad::sqrt_rule_uniform(tau, n);
    std::vector<double> v(base.v);
    if (layer_scale > 0.0) {
        double s = layer_scale / 64.0;
        while (s < 8.0 * layer_scale && s < std::sqrt(tau)) {
            v.push_back(s);
            s *= 1.35;
        }
    }
    for (double t : grid_nodes) {
        if (t >= tau) break;
        v.push_back(std::sqrt(tau - t));
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-15; }),
            v.end());
    quad::SqrtTimeRule r;
    r.tau = tau;
    r.v = std::move(v);
    r.s.resize(r.v.size());
    for (std::size_t i = 0; i < r.v.size(); ++i) r.s[i] = std::max(tau - r.v[i] * r.v[i], 0.0);
    return r;
}

// Dipole potential W(tau, x) = int Omega(k) (x-y(k)) e^{-(x-y(k))^2/4dt} /
// (2 sqrt(pi dt^3)) dk, integrated in v = sqrt(tau - k) over panels refined
// geometrically around the epsilon-layer scale (the integrand peaks at
// v ~ |x - y(tau)|).
double dipole_W(const CurveFn& density, const CurveFn& curve, double tau, double x,
                double layer_scale) {
    auto integrand_v = [&](double v) {
        if (v <= 0.0) {
            const double d = x - curve.value(tau);
            if (d != 0.0) return 0.0;
            return density.value(tau) * curve.derivative(tau) / std::sqrt(M_PI);
        }
        const double dt = v * v;
        const double d = x - curve.value(tau - dt);
        return density.value(tau - dt) * d * std::exp(-d * d / (4.0 * dt)) /
               (2.0 * std::sqrt(M_PI * dt * dt * dt)) * 2.0 * v;
    };
    const double vmax = std::sqrt(tau);
    std::vector<double> bp;
    if (layer_scale > 0.0)
        for (double s = layer_scale / 16.0; s < std::min(32.0 * layer_scale, vmax); s *= 2.0)
            bp.push_back(s);
    for (int j = 1; j < 16; ++j) bp.push_back(vmax * j / 16.0);
    return quad::integrate_panels(integrand_v, 0.0, vmax, bp, 24);
}

// Quadratic extrapolation to 0 through (e1,f1), (e2,f2), (e3,f3).
double extrapolate3(double e1, double f1, double e2, double f2, double e3, double f3) {
    const double l1 = (0.0 - e2) * (0.0 - e3) / ((e1 - e2) * (e1 - e3));
    const double l2 = (0.0 - e1) * (0.0 - e3) / ((e2 - e1) * (e2 - e3));
    const double l3 = (0.0 - e1) * (0.0 - e2) / ((e3 - e1) * (e3 - e2));
    return l1 * f1 + l2 * f2 + l3 * f3;
}

struct GradientLimitParts {
    std::function<double(double)> value;  // density value
    double value_tau;                     // density at tau
};

// One-sided gradient of a single-boundary dipole potential in the q
// normalization (prefactor 1/(4 sigma^3 sqrt(pi))). The time integral runs in
// two charts: w = sqrt(k) near k = 0 (where densities carry a square-root
// branch) and v = sqrt(tau - k) near k = tau (where the kernel combination is
// regularized); the integrand is smooth in each chart and Gauss panels never
// touch the chart ends.
double gradient_limit_core(const GradientLimitParts& den, const CurveFn& curve, double tau,
                           Approach approach, double sigma) {
    const double s2 = sigma * sigma, s3 = s2 * sigma, s5 = s3 * s2;
    const double ytau = curve.value(tau), yp = curve.derivative(tau);
    const double sign = (approach == Approach::FromAbove) ? 1.0 : -1.0;
    const double om_tau = den.value_tau;

    const double head =
        -om_tau * (1.0 / (2.0 * s3 * std::sqrt(M_PI * tau)) + sign * yp / (2.0 * s2 * s2));

    auto f_of_k = [&](double k) {
        const double dt = tau - k;
        const double dy = ytau - curve.value(k);
        const double E = std::exp(-dy * dy / (4.0 * s2 * dt));
        const double om = den.value(k);
        const double t1 = (om * E - om_tau) / (4.0 * s3 * std::sqrt(M_PI * dt * dt * dt));
        const double t2 = om * dy * dy * E / (8.0 * s5 * std::sqrt(M_PI * dt * dt * dt * dt * dt));
        return t1 - t2;
    };

    const double half = std::sqrt(0.5 * tau);
    const double I_w = quad::integrate_composite(
        [&](double w) { return f_of_k(w * w) * 2.0 * w; }, 0.0, half, 12, 16);
    const double I_v = quad::integrate_composite(
        [&](double v) { return f_of_k(tau - v * v) * 2.0 * v; }, 0.0, half, 12, 16);
    return head + I_w + I_v;
}

}  // namespace

double PotentialPair::omega_at(double s) const {
    if (omega_spline_w) {
        const double w = std::sqrt(std::clamp(s, 0.0, grid.nodes.back()));
        return omega_spline_w->value(w);
    }
    return interp_sqrt(grid.nodes, omega, s);
}

double PotentialPair::theta_at(double s) const {
    if (theta_spline_w) {
        const double w = std::sqrt(std::clamp(s, 0.0, grid.nodes.back()));
        return theta_spline_w->value(w);
    }
    return interp_sqrt(grid.nodes, theta, s);
}

void PotentialPair::build_interpolants() {
    std::vector<double> w(grid.nodes.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::sqrt(grid.nodes[i]);
    omega_spline_w = CurveFn(w, omega, SplineEnd::NotAKnot);
    theta_spline_w = CurveFn(std::move(w), theta, SplineEnd::NotAKnot);
}

BoundaryData boundary_data(const HeatStripProblem& p, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("boundary_data: tau must be positive");
    return {p.fm(tau) - conv_u0(p, 0.0, p.y(tau), tau),
            p.fp(tau) - conv_u0(p, 0.0, p.z(tau), tau)};
}

PotentialPair solve_densities(const HeatStripProblem& p, const TimeGrid& grid) {
    grid.check();
    require_valid(p);
    if (grid.horizon() > p.horizon * (1.0 + 1e-12))
        throw std::invalid_argument("solve_densities: grid exceeds the problem horizon");

    const int N = grid.steps();
    const auto& tn = grid.nodes;
    PotentialPair out;
    out.grid = grid;
    out.omega.assign(N + 1, 0.0);
    out.theta.assign(N + 1, 0.0);

    const double cbar = p.fm(0.0);
    auto fms = [&](double s) { return p.fm(s) - cbar; };
    auto fps = [&](double s) { return p.fp(s) - cbar; };

    // Densities at tau = 0+: the convolution collapses to half the corner
    // value of the shifted initial profile.
    const double y0 = p.y(0.0), z0 = p.z(0.0);
    out.omega[0] = 2.0 * fms(0.0) - (p.u0(y0) - cbar);
    out.theta[0] = (p.u0(z0) - cbar) - 2.0 * fps(0.0);

    const double rpi = std::sqrt(M_PI);
    const int split = 4;
    std::vector<double> wn(N + 1);
    for (int i = 0; i <= N; ++i) wn[i] = std::sqrt(tn[i]);

    for (int i = 1; i <= N; ++i) {
        const double tau = tn[i];
        const double ytau = p.y(tau), ztau = p.z(tau);
        const double ypi = p.yp(tau), zpi = p.zp(tau);
        const double t_prev = tn[i - 1];
        const double wl = std::sqrt(t_prev), wr = std::sqrt(tau);

        // spline views of the solved history in w = sqrt(t)
        const std::vector<double> t_hist(tn.begin(), tn.begin() + i);
        const std::vector<double> om_vals(out.omega.begin(), out.omega.begin() + i);
        const std::vector<double> th_vals(out.theta.begin(), out.theta.begin() + i);
        std::optional<CurveFn> om_sp, th_sp;
        if (i >= 3) {
            const std::vector<double> w_hist(wn.begin(), wn.begin() + i);
            const SplineEnd ends = i >= 4 ? SplineEnd::NotAKnot : SplineEnd::Natural;
            om_sp = CurveFn(w_hist, om_vals, ends);
            th_sp = CurveFn(w_hist, th_vals, ends);
        }
        auto om_hist = [&](double s) {
            return om_sp ? om_sp->value(std::sqrt(std::max(s, 0.0))) : interp_sqrt(t_hist, om_vals, s);
        };
        auto th_hist = [&](double s) {
            return th_sp ? th_sp->value(std::sqrt(std::max(s, 0.0))) : interp_sqrt(t_hist, th_vals, s);
        };

        const double phi1 = fms(tau) - conv_u0(p, cbar, ytau, tau);
        const double psi1 = fps(tau) - conv_u0(p, cbar, ztau, tau);

        // v-rule on the grid nodes with subdivided cells; densities enter via
        // the sqrt-time interpolant, the last cell holding the unknowns.
        std::vector<double> vv{0.0};
        double prev = 0.0;
        for (int j = i; j-- > 0;) {
            const double vj = std::sqrt(tau - tn[j]);
            for (int q = 1; q <= split; ++q) vv.push_back(prev + (vj - prev) * q / split);
            prev = vj;
        }

        double B1 = 0.0, C11 = 0.0, C12 = 0.0;
        double B2 = 0.0, C21 = 0.0, C22 = 0.0;
        for (std::size_t k = 0; k < vv.size(); ++k) {
            const double v = vv[k];
            const double wk =
                0.5 * ((k + 1 < vv.size() ? vv[k + 1] : vv[k]) - (k > 0 ? vv[k - 1] : vv[k]));
            if (k == 0) {
                C11 += wk * ypi / rpi;  // same-boundary dipole limits
                C22 += wk * zpi / rpi;
                continue;
            }
            const double s = std::max(tau - v * v, 0.0);
            const double dt = v * v;
            const double c = 1.0 / (2.0 * rpi * std::sqrt(dt * dt * dt));
            const double dyy = ytau - p.y(s), dyz = ytau - p.z(s);
            const double dzy = ztau - p.y(s), dzz = ztau - p.z(s);
            const double kyy = dyy * std::exp(-dyy * dyy / (4.0 * dt)) * c;
            const double kyz = dyz * std::exp(-dyz * dyz / (4.0 * dt)) * c;
            const double kzy = dzy * std::exp(-dzy * dzy / (4.0 * dt)) * c;
            const double kzz = dzz * std::exp(-dzz * dzz / (4.0 * dt)) * c;

            double om_known, th_known, com = 0.0, cth = 0.0;
            if (s <= t_prev) {
                om_known = om_hist(s);
                th_known = th_hist(s);
            } else {
                const double w = (std::sqrt(s) - wl) / (wr - wl);
                om_known = (1.0 - w) * out.omega[i - 1];
                th_known = (1.0 - w) * out.theta[i - 1];
                com = w;
                cth = w;
            }
            const double w2v = wk * 2.0 * v;
            B1 += w2v * (om_known * kyy + th_known * kyz);
            B2 += w2v * (om_known * kzy + th_known * kzz);
            C11 += w2v * com * kyy;
            C12 += w2v * cth * kyz;
            C21 += w2v * com * kzy;
            C22 += w2v * cth * kzz;
        }

        // (1 + C11) Omega + C12 Theta = 2 phi1 - B1
        // C21 Omega + (-1 + C22) Theta = 2 psi1 - B2
        const double a11 = 1.0 + C11, a12 = C12;
        const double a21 = C21, a22 = -1.0 + C22;
        const double r1 = 2.0 * phi1 - B1, r2 = 2.0 * psi1 - B2;
        const double det = a11 * a22 - a12 * a21;
        out.omega[i] = (r1 * a22 - a12 * r2) / det;
        out.theta[i] = (a11 * r2 - r1 * a21) / det;

        if (!std::isfinite(out.omega[i]) || !std::isfinite(out.theta[i]))
            throw std::runtime_error("solve_densities: non-finite density during the march");
        if (i >= 2 && out.warnings.size() < 8) {
            const double scale = std::max(std::abs(out.omega[i - 1]), std::abs(out.omega[i]));
            if (scale > 1e-8 && std::abs(out.omega[i] - out.omega[i - 1]) > 0.5 * scale) {
                std::ostringstream os;
                os << "density step ratio exceeds 50% at t=" << tau;
                out.warnings.push_back(os.str());
            }
        }
    }
    out.build_interpolants();
    return out;
}

double price_hp(const HeatStripProblem& p, const PotentialPair& d, double tau, double x,
                const HpPriceOptions& opts) {
    if (!(tau > 0.0) || tau > p.horizon * (1.0 + 1e-12))
        throw std::invalid_argument("price_hp: tau outside (0, T]");
    const double ytau = p.y(tau), ztau = p.z(tau);
    const double tol = 1e-12 * (1.0 + std::abs(ytau) + std::abs(ztau));
    if (std::abs(x - ytau) <= tol) return p.fm(tau);
    if (std::abs(x - ztau) <= tol) return p.fp(tau);
    if (x < ytau || x > ztau) throw std::invalid_argument("price_hp: x outside the strip");

    const double cbar = p.fm(0.0);
    const int n = opts.time_nodes > 0 ? opts.time_nodes : std::max(8192, 4 * d.grid.steps());
    const double layer = std::min(x - ytau, ztau - x);
    const auto rule = refined_rule(tau, n, layer, d.grid.nodes);

    const double q = quad::trapezoid_v(rule, [&](double v, double s) {
        if (v == 0.0) return 0.0;
        const double dt = tau - s;
        const double c = 1.0 / (4.0 * std::sqrt(M_PI * dt * dt * dt));
        const double dy = x - p.y(s), dz = x - p.z(s);
        return (d.omega_at(s) * dy * std::exp(-dy * dy / (4.0 * dt)) +
                d.theta_at(s) * dz * std::exp(-dz * dz / (4.0 * dt))) *
               c * 2.0 * v;
    });

    return cbar + q + conv_u0(p, cbar, x, tau);
}

double gradient_limit(const CurveFn& density, const CurveFn& curve, double tau,
                      Approach approach, double sigma) {
    if (!(tau > 0.0)) throw std::invalid_argument("gradient_limit: tau must be positive");
    GradientLimitParts parts{[&](double s) { return density.value(s); }, density.value(tau)};
    return gradient_limit_core(parts, curve, tau, approach, sigma);
}

JumpCheck jump_check(const CurveFn& density, const CurveFn& curve, double tau, double eps) {
    if (!(tau > 0.0)) throw std::invalid_argument("jump_check: tau must be positive");
    const double yt = curve.value(tau);
    auto W = [&](double x, double layer) { return dipole_W(density, curve, tau, x, layer); };

    const double e1 = eps, e2 = 0.5 * eps, e3 = 0.25 * eps;
    JumpCheck jc{};
    jc.interior_measured = extrapolate3(e1, W(yt + e1, e1), e2, W(yt + e2, e2), e3, W(yt + e3, e3));
    jc.exterior_measured = extrapolate3(e1, W(yt - e1, e1), e2, W(yt - e2, e2), e3, W(yt - e3, e3));
    jc.direct_value = W(yt, 0.0);
    jc.interior_analytic = density.value(tau) + jc.direct_value;
    jc.exterior_analytic = -density.value(tau) + jc.direct_value;
    jc.jump = 0.5 * (jc.interior_measured - jc.exterior_measured);
    return jc;
}

GradientPair hp_to_git(const HeatStripProblem& p, const PotentialPair& d) {
    const int N = d.grid.steps();
    const auto& tn = d.grid.nodes;
    GradientPair out;
    out.grid = d.grid;
    out.psi.assign(N + 1, 0.0);
    out.phi.assign(N + 1, 0.0);

    const double cbar = p.fm(0.0);
    out.psi[0] = -p.initial.derivative(p.y(0.0), +1);
    out.phi[0] = p.initial.derivative(p.z(0.0), -1);

    for (int i = 1; i <= N; ++i) {
        const double tau = tn[i];
        GradientLimitParts om{[&](double s) { return d.omega_at(s); }, d.omega[i]};
        GradientLimitParts th{[&](double s) { return d.theta_at(s); }, d.theta[i]};

        const double grad_low = gradient_limit_core(om, p.lower, tau, Approach::FromAbove, 1.0);
        const double grad_up = gradient_limit_core(th, p.upper, tau, Approach::FromBelow, 1.0);

        const double ytau = p.y(tau), ztau = p.z(tau);
        // smooth cross-boundary gradient terms, same two-chart quadrature
        auto cross = [&](const CurveFn& source, const std::function<double(double)>& den,
                         double xb) {
            auto f_of_k = [&](double k) {
                const double dt = tau - k;
                const double dd = xb - source.value(k);
                const double E = std::exp(-dd * dd / (4.0 * dt));
                return den(k) * E * (1.0 - dd * dd / (2.0 * dt)) /
                       (4.0 * std::sqrt(M_PI * dt * dt * dt));
            };
            const double half = std::sqrt(0.5 * tau);
            return quad::integrate_composite(
                       [&](double w) { return f_of_k(w * w) * 2.0 * w; }, 0.0, half, 12, 16) +
                   quad::integrate_composite(
                       [&](double v) { return f_of_k(tau - v * v) * 2.0 * v; }, 0.0, half, 12,
                       16);
        };
        const double cross_low =
            cross(p.upper, [&](double s) { return d.theta_at(s); }, ytau);
        const double cross_up =
            cross(p.lower, [&](double s) { return d.omega_at(s); }, ztau);

        out.psi[i] = -(grad_low + cross_low) - conv_u0_dx(p, cbar, ytau, tau);
        out.phi[i] = (grad_up + cross_up) + conv_u0_dx(p, cbar, ztau, tau);
    }
    return out;
}

}  // namespace dbarrier
