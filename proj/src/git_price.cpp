#include "dbarrier/git.hpp"
#include "dbarrier/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dbarrier {

namespace {

// Uniform v-rule merged with the march nodes, so the price integral resolves
// the solved gradients exactly where the march placed its resolution.
quad::SqrtTimeRule merged_rule(double tau, int n, const std::vector<double>& grid_nodes) {
    auto r = quad::sqrt_rule_uniform(tau, n);
    std::vector<double> v(r.v);
    for (double t : grid_nodes) {
        if (t >= tau) break;
        v.push_back(std::sqrt(tau - t));
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-15; }),
            v.end());
    quad::SqrtTimeRule out;
    out.tau = tau;
    out.v = std::move(v);
    out.s.resize(out.v.size());
    for (std::size_t i = 0; i < out.v.size(); ++i)
        out.s[i] = std::max(tau - out.v[i] * out.v[i], 0.0);
    out.s[0] = tau;
    return out;
}

struct PriceContext {
    const HeatStripProblem* p;
    const GradientPair* g;
    double tau, l, ytau, ztau, cbar;
    int time_nodes;

    double fms(double s) const { return p->fm(s) - cbar; }
    double fps(double s) const { return p->fp(s) - cbar; }
    double u0s(double x) const { return p->u0(x) - cbar; }
};

// Composite Gauss quadrature over the march cells clipped at tau; for smooth
// integrands this integrates the piecewise-linear gradient interpolant to
// machine accuracy, which the reconstruction identities rely on.
double integrate_cells(const std::vector<double>& nodes, double tau,
                       const std::function<double(double)>& f, int order = 8) {
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < nodes.size() && nodes[j] < tau; ++j) {
        const double a = nodes[j], b = std::min(nodes[j + 1], tau);
        if (b > a) acc += quad::integrate_gl(f, a, b, order);
        if (b >= tau) break;
    }
    return acc;
}

PriceContext make_context(const HeatStripProblem& p, const GradientPair& g, double tau,
                          const GitPriceOptions& opts) {
    if (!(tau > 0.0) || tau > p.horizon * (1.0 + 1e-12))
        throw std::invalid_argument("price: tau outside (0, T]");
    if (tau > g.grid.horizon() * (1.0 + 1e-12))
        throw std::invalid_argument("price: gradients not solved up to tau");
    PriceContext c;
    c.p = &p;
    c.g = &g;
    c.tau = tau;
    c.ytau = p.y(tau);
    c.ztau = p.z(tau);
    c.l = c.ztau - c.ytau;
    c.cbar = p.fm(0.0);
    c.time_nodes = opts.time_nodes > 0 ? opts.time_nodes : std::max(512, 2 * g.grid.steps());
    return c;
}

enum class AtBoundary { No, Lower, Upper };

AtBoundary classify(const PriceContext& c, double x) {
    const double tol = 1e-12 * (1.0 + std::abs(c.ytau) + std::abs(c.ztau));
    if (std::abs(x - c.ytau) <= tol) return AtBoundary::Lower;
    if (std::abs(x - c.ztau) <= tol) return AtBoundary::Upper;
    if (x < c.ytau || x > c.ztau) throw std::invalid_argument("price: x outside the strip");
    return AtBoundary::No;
}

std::vector<double> image_centers(const PriceContext& c, double x) {
    std::vector<double> centers;
    for (int n = -4; n <= 4; ++n) {
        centers.push_back(x + 2.0 * n * c.l);
        centers.push_back(2.0 * c.ytau - x + 2.0 * n * c.l);
    }
    return centers;
}

// Image representation: value and x-derivatives of the four integral groups.
std::array<double, 3> images_core(const PriceContext& c, double x, EvalStats* stats) {
    const HeatStripProblem& p = *c.p;
    const double y0 = p.y(0.0), z0 = p.z(0.0);
    auto q_at = [&](double xi, double s) {
        KernelQuery q;
        q.tau = c.tau;
        q.s = s;
        q.xi = xi;
        q.x = x;
        q.lower = &p.lower;
        q.upper = &p.upper;
        return q;
    };

    std::array<double, 3> total{0.0, 0.0, 0.0};
    const auto bp = quad::gaussian_breakpoints(y0, z0, image_centers(c, x), c.tau,
                                               p.initial.kinks());
    for (int d = 0; d < 3; ++d) {
        total[d] += quad::integrate_panels(
            [&](double xi) { return c.u0s(xi) * upsilon_sum_derivs(q_at(xi, 0.0), stats)[d]; },
            y0, z0, bp);
    }

    const auto rule = merged_rule(c.tau, c.time_nodes, c.g->grid.nodes);
    std::array<double, 3> it{0.0, 0.0, 0.0};
    for (int d = 0; d < 3; ++d) it[d] = 0.0;
    for (std::size_t k = 1; k < rule.v.size(); ++k) {
        const double v = rule.v[k], s = rule.s[k];
        const double wk =
            0.5 * ((k + 1 < rule.v.size() ? rule.v[k + 1] : rule.v[k]) - rule.v[k - 1]);
        const auto uy = upsilon_sum_derivs(q_at(p.y(s), s), stats);
        const auto uz = upsilon_sum_derivs(q_at(p.z(s), s), stats);
        const auto ly = lambda_sum_derivs(q_at(p.y(s), s), stats);
        const auto lz = lambda_sum_derivs(q_at(p.z(s), s), stats);
        const double cy = c.g->psi_at(s) - c.fms(s) * p.yp(s);
        const double cz = c.g->phi_at(s) + c.fps(s) * p.zp(s);
        for (int d = 0; d < 3; ++d)
            it[d] += wk * 2.0 * v *
                     (cz * uz[d] + cy * uy[d] + c.fms(s) * ly[d] - c.fps(s) * lz[d]);
    }
    for (int d = 0; d < 3; ++d) total[d] += it[d];
    return total;
}

}  // namespace

double price_theta(const HeatStripProblem& p, const GradientPair& g, double tau, double x,
                   const GitPriceOptions& opts, EvalStats* stats) {
    const PriceContext c = make_context(p, g, tau, opts);
    switch (classify(c, x)) {
        case AtBoundary::Lower: return p.fm(tau);
        case AtBoundary::Upper: return p.fp(tau);
        case AtBoundary::No: break;
    }
    const double l = c.l, ytau = c.ytau;
    auto phi_m = [&](double xi) { return M_PI * (x - xi) / (2.0 * l); };
    auto phi_p = [&](double xi) { return M_PI * (x + xi - 2.0 * ytau) / (2.0 * l); };

    const double omega1 = std::exp(-M_PI * M_PI * tau / (l * l));
    const double y0 = p.y(0.0), z0 = p.z(0.0);
    const auto bp =
        quad::gaussian_breakpoints(y0, z0, image_centers(c, x), tau, p.initial.kinks());
    const double I0 = quad::integrate_panels(
        [&](double xi) {
            return c.u0s(xi) *
                   (theta3(phi_m(xi), omega1, stats) - theta3(phi_p(xi), omega1, stats));
        },
        y0, z0, bp);

    const auto rule = merged_rule(tau, c.time_nodes, g.grid.nodes);
    const double It = quad::trapezoid_v(rule, [&](double v, double s) {
        if (v == 0.0) return 0.0;
        const double omega2 = std::exp(-M_PI * M_PI * (tau - s) / (l * l));
        const double ys = p.y(s), zs = p.z(s);
        const double thm_y = theta3(phi_m(ys), omega2, stats) - theta3(phi_p(ys), omega2, stats);
        const double thm_z = theta3(phi_m(zs), omega2, stats) - theta3(phi_p(zs), omega2, stats);
        const double thd_y =
            theta3_dz(phi_m(ys), omega2, stats) + theta3_dz(phi_p(ys), omega2, stats);
        const double thd_z =
            theta3_dz(phi_m(zs), omega2, stats) + theta3_dz(phi_p(zs), omega2, stats);
        const double val = (c.g->psi_at(s) - c.fms(s) * p.yp(s)) * thm_y +
                           (c.g->phi_at(s) + c.fps(s) * p.zp(s)) * thm_z +
                           M_PI / (2.0 * l) * (c.fps(s) * thd_z - c.fms(s) * thd_y);
        return val * 2.0 * v;
    });

    return c.cbar + (I0 + It) / (2.0 * l);
}

double price_images(const HeatStripProblem& p, const GradientPair& g, double tau, double x,
                    const GitPriceOptions& opts, EvalStats* stats) {
    return price_images_derivs(p, g, tau, x, opts, stats)[0];
}

std::array<double, 3> price_images_derivs(const HeatStripProblem& p, const GradientPair& g,
                                          double tau, double x, const GitPriceOptions& opts,
                                          EvalStats* stats) {
    const PriceContext c = make_context(p, g, tau, opts);
    switch (classify(c, x)) {
        case AtBoundary::Lower: return {p.fm(tau), 0.0, 0.0};
        case AtBoundary::Upper: return {p.fp(tau), 0.0, 0.0};
        case AtBoundary::No: break;
    }
    auto r = images_core(c, x, stats);
    r[0] += c.cbar;
    return r;
}

double price_images_boundary(const HeatStripProblem& p, const GradientPair& g, double tau,
                             Side side, const GitPriceOptions& opts) {
    const PriceContext c = make_context(p, g, tau, opts);
    const double x = (side == Side::Lower) ? c.ytau : c.ztau;
    // The image series cancels pairwise at the boundary point itself; the
    // one-sided limit adds the double-layer jump, which is the rebate.
    const auto series = images_core(c, x, nullptr);
    const double rebate = (side == Side::Lower) ? p.fm(tau) : p.fp(tau);
    return rebate + series[0];
}

std::vector<double> fourier_coefficients(const HeatStripProblem& p, const GradientPair& g,
                                         double tau, int n_max, const GitPriceOptions& opts) {
    if (n_max < 1) throw std::invalid_argument("fourier_coefficients: n_max must be >= 1");
    const PriceContext c = make_context(p, g, tau, opts);
    const HomogenizedProblem hp = homogenize(p);
    const double l = c.l, ytau = c.ytau;
    const double y0 = p.y(0.0), z0 = p.z(0.0);

    std::vector<double> A(n_max);
    for (int k = 1; k <= n_max; ++k) {
        const double wk = M_PI * k / l;
        std::vector<double> bp = p.initial.kinks();
        const int panels = std::max(4, k);
        for (int j = 1; j < panels; ++j) bp.push_back(y0 + (z0 - y0) * j / panels);
        const double init = quad::integrate_panels(
            [&](double xi) { return hp.u0(xi) * std::sin(wk * (xi - ytau)); }, y0, z0, bp);

        const double It = integrate_cells(g.grid.nodes, tau, [&](double s) {
            const double E = std::exp(-wk * wk * (tau - s));
            const double ys = p.y(s), zs = p.z(s);
            const double sy = std::sin(wk * (ys - ytau)), sz = std::sin(wk * (zs - ytau));
            const double cy = std::cos(wk * (ys - ytau)), cz = std::cos(wk * (zs - ytau));
            const double B = hp.B(s), Bp = hp.Bp(s);
            const double h1 = -Bp * l * l / (M_PI * M_PI * k * k) * (sz - sy) -
                              l / (M_PI * k) *
                                  ((p.fmp(s) - B * p.yp(s)) * cy - (p.fpp(s) - B * p.zp(s)) * cz);
            return E * ((c.g->phi_at(s) - B) * sz + (c.g->psi_at(s) + B) * sy + h1);
        });

        A[k - 1] = 2.0 / l * (std::exp(-wk * wk * tau) * init + It);
    }
    return A;
}

std::pair<double, double> residue_identity(const HeatStripProblem& p, const GradientPair& g,
                                           double tau, double spectral_p, int n_max,
                                           const GitPriceOptions& opts) {
    if (std::abs(spectral_p) < 1e-6)
        throw std::invalid_argument("residue_identity: spectral parameter too close to 0");
    const PriceContext c = make_context(p, g, tau, opts);
    const HomogenizedProblem hp = homogenize(p);
    const double l = c.l, ytau = c.ytau, sp = spectral_p;
    const double y0 = p.y(0.0), z0 = p.z(0.0);

    const auto A = fourier_coefficients(p, g, tau, n_max, opts);
    double lhs = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double sign = (n % 2 == 1) ? 1.0 : -1.0;
        lhs += sign * M_PI * n * A[n - 1] / (sp * sp + n * n * M_PI * M_PI / (l * l));
    }
    lhs /= l;

    std::vector<double> bp = p.initial.kinks();
    for (int j = 1; j < 8; ++j) bp.push_back(y0 + (z0 - y0) * j / 8);
    const double init = quad::integrate_panels(
        [&](double xi) { return hp.u0(xi) * std::sinh(sp * (xi - ytau)); }, y0, z0, bp);

    const double It = integrate_cells(g.grid.nodes, tau, [&](double s) {
        const double E = std::exp(sp * sp * (tau - s));
        const double ys = p.y(s), zs = p.z(s);
        const double B = hp.B(s), Bp = hp.Bp(s), Ap = hp.Ap(s);
        const double h = Bp / (sp * sp) * (std::sinh(sp * (zs - ytau)) - std::sinh(sp * (ys - ytau))) +
                         ((Ap + Bp * ys) * std::cosh(sp * (ys - ytau)) -
                          (Ap + Bp * zs) * std::cosh(sp * (zs - ytau))) /
                             sp;
        return E * ((c.g->phi_at(s) - B) * std::sinh(sp * (zs - ytau)) +
                    (c.g->psi_at(s) + B) * std::sinh(sp * (ys - ytau)) + h);
    });

    const double rhs = (std::exp(sp * sp * tau) * init + It) / std::sinh(sp * l);
    return {lhs, rhs};
}

}  // namespace dbarrier
