#include "dbarrier/git.hpp"
#include "dbarrier/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dbarrier {

namespace {

double interp(const std::vector<double>& t, const std::vector<double>& v, double s) {
    if (s <= t.front()) return v.front();
    if (s >= t.back()) return v.back();
    auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t i = it - t.begin();
    const double w = (s - t[i - 1]) / (t[i] - t[i - 1]);
    return (1.0 - w) * v[i - 1] + w * v[i];
}

// v-rule over [0, sqrt(tau)] on the march nodes with each cell subdivided, so
// the integrals of the interpolated unknowns converge at the interpolant's
// order rather than the raw node spacing's.
quad::SqrtTimeRule march_rule(const std::vector<double>& nodes, int i, int split) {
    const double tau = nodes[i];
    std::vector<double> v;
    v.reserve(i * split + 1);
    double prev = 0.0;
    v.push_back(0.0);
    for (int j = i; j-- > 0;) {
        const double vj = std::sqrt(std::max(tau - nodes[j], 0.0));
        for (int q = 1; q <= split; ++q) v.push_back(prev + (vj - prev) * q / split);
        prev = vj;
    }
    quad::SqrtTimeRule r;
    r.tau = tau;
    r.v = std::move(v);
    r.s.resize(r.v.size());
    for (std::size_t k = 0; k < r.v.size(); ++k) r.s[k] = tau - r.v[k] * r.v[k];
    r.s.front() = tau;
    r.s.back() = 0.0;
    return r;
}

}  // namespace

double GradientPair::psi_at(double s) const { return interp(grid.nodes, psi, s); }
double GradientPair::phi_at(double s) const { return interp(grid.nodes, phi, s); }

GradientPair solve_gradients(const HeatStripProblem& p, const TimeGrid& grid,
                             const GitSolveOptions& opts) {
    grid.check();
    require_valid(p);
    if (grid.horizon() > p.horizon * (1.0 + 1e-12))
        throw std::invalid_argument("solve_gradients: grid exceeds the problem horizon");

    const int N = grid.steps();
    const auto& tn = grid.nodes;
    GradientPair out;
    out.grid = grid;
    out.psi.assign(N + 1, 0.0);
    out.phi.assign(N + 1, 0.0);

    // Constant-mode shift: gradients are invariant under U -> U - c, and with
    // c = f-(0) a constant-data problem assembles to exact zeros.
    const double cbar = p.fm(0.0);
    auto fms = [&](double s) { return p.fm(s) - cbar; };
    auto fps = [&](double s) { return p.fp(s) - cbar; };
    auto u0s = [&](double x) { return p.u0(x) - cbar; };

    const double y0 = p.y(0.0), z0 = p.z(0.0);
    out.psi[0] = -p.initial.derivative(y0, +1);
    out.phi[0] = p.initial.derivative(z0, -1);

    EvalStats stats;
    const std::vector<double> kinks = p.initial.kinks();
    const int split = 4;
    const double rpi = std::sqrt(M_PI);

    for (int i = 1; i <= N; ++i) {
        const double tau = tn[i];
        const double ytau = p.y(tau), ztau = p.z(tau), l = ztau - ytau;
        const double ypi = p.yp(tau), zpi = p.zp(tau);
        const double t_prev = tn[i - 1], cell = tau - t_prev;

        // Initial-data integrals against the upsilon kernels at s = 0.
        std::vector<double> centers;
        for (int k = -4; k <= 4; ++k) centers.push_back(ytau + k * l);
        const auto bp = quad::gaussian_breakpoints(y0, z0, centers, tau, kinks);
        auto q_at = [&](double xi, double s) {
            KernelQuery q;
            q.tau = tau;
            q.s = s;
            q.xi = xi;
            q.lower = &p.lower;
            q.upper = &p.upper;
            return q;
        };
        const double T4m = quad::integrate_panels(
            [&](double xi) {
                return u0s(xi) * upsilon_kernel(Side::Lower, q_at(xi, 0.0), opts.rep, &stats);
            },
            y0, z0, bp);
        const double T4p = quad::integrate_panels(
            [&](double xi) {
                return u0s(xi) * upsilon_kernel(Side::Upper, q_at(xi, 0.0), opts.rep, &stats);
            },
            y0, z0, bp);

        // Lebesgue-Stieltjes assembly of the rebate terms, when requested.
        double st1 = 0.0, st2 = 0.0;
        if (opts.lebesgue_stieltjes) {
            double em_y = eta_kernel(Side::Lower, q_at(p.y(0.0), 0.0), opts.rep, &stats);
            double em_z = eta_kernel(Side::Lower, q_at(p.z(0.0), 0.0), opts.rep, &stats);
            double ep_y = eta_kernel(Side::Upper, q_at(p.y(0.0), 0.0), opts.rep, &stats);
            double ep_z = eta_kernel(Side::Upper, q_at(p.z(0.0), 0.0), opts.rep, &stats);
            for (int j = 1; j <= i; ++j) {
                const double s = tn[j];
                // all four eta kernels vanish in the limit s -> tau
                const double nm_y =
                    j == i ? 0.0 : eta_kernel(Side::Lower, q_at(p.y(s), s), opts.rep, &stats);
                const double nm_z =
                    j == i ? 0.0 : eta_kernel(Side::Lower, q_at(p.z(s), s), opts.rep, &stats);
                const double np_y =
                    j == i ? 0.0 : eta_kernel(Side::Upper, q_at(p.y(s), s), opts.rep, &stats);
                const double np_z =
                    j == i ? 0.0 : eta_kernel(Side::Upper, q_at(p.z(s), s), opts.rep, &stats);
                const double fm_mid = 0.5 * (fms(tn[j - 1]) + fms(s));
                const double fp_mid = 0.5 * (fps(tn[j - 1]) + fps(s));
                st1 += fm_mid * (nm_y - em_y) - fp_mid * (nm_z - em_z);
                st2 += fm_mid * (np_y - ep_y) - fp_mid * (np_z - ep_z);
                em_y = nm_y;
                em_z = nm_z;
                ep_y = np_y;
                ep_z = np_z;
            }
        }

        // Time integrals on the refined v-rule. The unknowns enter linearly
        // through the interpolant on the last cell, so each node splits into
        // a known part (B) and coefficients (C) of Psi_i, Phi_i.
        const auto rule = march_rule(tn, i, split);
        double B1 = 0.0, C11 = 0.0, C12 = 0.0;
        double B2 = 0.0, C21 = 0.0, C22 = 0.0;

        for (std::size_t k = 0; k < rule.v.size(); ++k) {
            const double v = rule.v[k];
            const double wk = 0.5 * ((k + 1 < rule.v.size() ? rule.v[k + 1] : rule.v[k]) -
                                     (k > 0 ? rule.v[k - 1] : rule.v[k]));
            if (k == 0) {
                // v = 0 limits: regularized free terms are data; the
                // same-boundary dipole kernels couple to the unknowns.
                if (opts.lebesgue_stieltjes) {
                    B1 += wk * (-p.fmp(tau) / rpi);
                    B2 += wk * (p.fpp(tau) / rpi);
                } else {
                    B1 += wk * (-p.fmp(tau) + fms(tau) * ypi * ypi / 4.0) / rpi;
                    B2 += wk * (p.fpp(tau) - fps(tau) * zpi * zpi / 4.0) / rpi;
                }
                C11 += wk * (-ypi / rpi);
                C22 += wk * (-zpi / rpi);
                continue;
            }
            const double s = rule.s[k];
            const double dt = tau - s;
            const double spdt3 = 2.0 * std::sqrt(M_PI * dt * dt * dt);
            const double dy = ytau - p.y(s), dz = ztau - p.z(s);
            const double ey = std::exp(-dy * dy / (4.0 * dt));
            const double ez = std::exp(-dz * dz / (4.0 * dt));
            const double Ky = dy * ey / spdt3, Kz = dz * ez / spdt3;
            const double fm_s = fms(s), fp_s = fps(s);
            const double yp_s = p.yp(s), zp_s = p.zp(s);

            // gradient values at s: known + coefficient * unknown
            double psi_known, phi_known, cpsi = 0.0, cphi = 0.0;
            if (s <= t_prev) {
                psi_known = interp(tn, out.psi, s);
                phi_known = interp(tn, out.phi, s);
            } else {
                const double w = (s - t_prev) / cell;
                psi_known = (1.0 - w) * out.psi[i - 1];
                phi_known = (1.0 - w) * out.phi[i - 1];
                cpsi = w;
                cphi = w;
            }

            const double um_z = upsilon_kernel(Side::Lower, q_at(p.z(s), s), opts.rep, &stats);
            const double um0 = upsilon0_kernel(Side::Lower, q_at(p.y(s), s), opts.rep, &stats);
            const double up_y = upsilon_kernel(Side::Upper, q_at(p.y(s), s), opts.rep, &stats);
            const double up0 = upsilon0_kernel(Side::Upper, q_at(p.z(s), s), opts.rep, &stats);

            double free1, free2, k1psi, k1phi, k2psi, k2phi;
            if (opts.lebesgue_stieltjes) {
                free1 = (fm_s - fms(tau)) / spdt3;
                free2 = -(fp_s - fps(tau)) / spdt3;
                k1psi = -Ky + um0;
                k1phi = um_z;
                k2psi = up_y;
                k2phi = -Kz + up0;
            } else {
                const double lm0 = lambda0_kernel(Side::Lower, q_at(p.y(s), s), opts.rep, &stats);
                const double lm_z = lambda_kernel(Side::Lower, q_at(p.z(s), s), opts.rep, &stats);
                const double lp_y = lambda_kernel(Side::Upper, q_at(p.y(s), s), opts.rep, &stats);
                const double lp0 = lambda0_kernel(Side::Upper, q_at(p.z(s), s), opts.rep, &stats);
                free1 = (fm_s * ey * (1.0 + yp_s * dy - dy * dy / (2.0 * dt)) - fms(tau)) / spdt3 +
                        fp_s * zp_s * um_z - fm_s * yp_s * um0 + fm_s * lm0 - fp_s * lm_z;
                free2 = -(fp_s * ez * (1.0 + zp_s * dz - dz * dz / (2.0 * dt)) - fps(tau)) / spdt3 +
                        fp_s * zp_s * up0 - fm_s * yp_s * up_y + fm_s * lp_y - fp_s * lp0;
                k1psi = -Ky + um0;
                k1phi = um_z;
                k2psi = up_y;
                k2phi = -Kz + up0;
            }

            const double w2v = wk * 2.0 * v;
            B1 += w2v * (free1 + psi_known * k1psi + phi_known * k1phi);
            B2 += w2v * (free2 + psi_known * k2psi + phi_known * k2phi);
            C11 += w2v * cpsi * k1psi;
            C12 += w2v * cphi * k1phi;
            C21 += w2v * cpsi * k2psi;
            C22 += w2v * cphi * k2phi;
        }

        const double rhs1 = -fms(tau) / std::sqrt(M_PI * tau) + T4m + B1 + st1;
        const double rhs2 = fps(tau) / std::sqrt(M_PI * tau) + T4p + B2 + st2;

        // (-1 - C11) Psi - C12 Phi = rhs1 ; -C21 Psi + (1 - C22) Phi = rhs2
        const double a11 = -1.0 - C11, a12 = -C12;
        const double a21 = -C21, a22 = 1.0 - C22;
        const double det = a11 * a22 - a12 * a21;
        out.psi[i] = (rhs1 * a22 - a12 * rhs2) / det;
        out.phi[i] = (a11 * rhs2 - rhs1 * a21) / det;

        if (i >= 2) {
            const double prev = out.psi[i - 1], cur = out.psi[i];
            const double scale = std::max(std::abs(prev), std::abs(cur));
            if (scale > 1e-8 && std::abs(cur - prev) > 0.5 * scale && out.warnings.size() < 8) {
                std::ostringstream os;
                os << "gradient step ratio exceeds 50% at t=" << tau
                   << "; the march grid may be too coarse";
                out.warnings.push_back(os.str());
            }
        }
        if (!std::isfinite(out.psi[i]) || !std::isfinite(out.phi[i]))
            throw std::runtime_error("solve_gradients: non-finite gradient during the march");
    }

    out.max_kernel_terms = stats.terms;
    return out;
}

}  // namespace dbarrier
