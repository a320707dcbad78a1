#include "dbarrier/fd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dbarrier {

namespace {

// L V at one time level: diffusion 1/l^2, advection (y' + xi l') / l.
// Writes the tridiagonal coefficients (sub, diag, super) of L at row m.
struct RowCoef {
    double lo, di, up;
};

RowCoef operator_row(const HeatStripProblem& p, double t, double xi, double dxi) {
    const double l = p.width(t);
    const double a = 1.0 / (l * l);
    const double b = (p.yp(t) + xi * (p.zp(t) - p.yp(t))) / l;
    RowCoef r;
    const double peclet = std::abs(b) * dxi / a;  // = |y' + xi l'| dxi l
    if (peclet <= 2.0) {
        r.lo = a / (dxi * dxi) - b / (2.0 * dxi);
        r.di = -2.0 * a / (dxi * dxi);
        r.up = a / (dxi * dxi) + b / (2.0 * dxi);
    } else if (b > 0.0) {
        r.lo = a / (dxi * dxi);
        r.di = -2.0 * a / (dxi * dxi) - b / dxi;
        r.up = a / (dxi * dxi) + b / dxi;
    } else {
        r.lo = a / (dxi * dxi) - b / dxi;
        r.di = -2.0 * a / (dxi * dxi) + b / dxi;
        r.up = a / (dxi * dxi);
    }
    return r;
}

void thomas_solve(std::vector<double>& lo, std::vector<double>& di, std::vector<double>& up,
                  std::vector<double>& rhs) {
    const std::size_t n = di.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lo[i] / di[i - 1];
        di[i] -= w * up[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= di[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}

// One theta-scheme step from time t0 (state v) to t1, in place.
void step(const HeatStripProblem& p, std::vector<double>& v, double t0, double t1, double theta) {
    const int M = static_cast<int>(v.size()) - 1;
    const double dxi = 1.0 / M;
    const double dt = t1 - t0;

    std::vector<double> lo(M + 1, 0.0), di(M + 1, 1.0), up(M + 1, 0.0), rhs(M + 1, 0.0);
    rhs[0] = p.fm(t1);
    rhs[M] = p.fp(t1);
    for (int m = 1; m < M; ++m) {
        const double xi = double(m) / M;
        const RowCoef le = operator_row(p, t0, xi, dxi);
        const RowCoef li = operator_row(p, t1, xi, dxi);
        rhs[m] = v[m] + (1.0 - theta) * dt *
                            (le.lo * v[m - 1] + le.di * v[m] + le.up * v[m + 1]);
        lo[m] = -theta * dt * li.lo;
        di[m] = 1.0 - theta * dt * li.di;
        up[m] = -theta * dt * li.up;
    }
    thomas_solve(lo, di, up, rhs);
    v = std::move(rhs);
}

}  // namespace

FdSurface solve_fd(const HeatStripProblem& p, const FdGrid& grid) {
    if (grid.space_nodes < 9 || grid.time_steps < 8)
        throw std::invalid_argument("solve_fd: need M >= 8 and N_fd >= 8");
    require_valid(p);

    FdSurface s;
    s.grid = grid;
    s.problem = p;

    const int M = grid.space_nodes - 1, N = grid.time_steps;
    const double T = p.horizon, dt = T / N;
    const double y0 = p.y(0.0), z0 = p.z(0.0);

    // step-ratio warning: boundary motion per step vs width
    for (int k = 0; k < N; ++k) {
        const double t = T * k / N;
        if (std::abs(p.zp(t) - p.yp(t)) / p.width(t) * dt > 0.5) {
            s.warnings.push_back("strip deformation per step exceeds half the width");
            break;
        }
    }

    std::vector<double> v(M + 1);
    for (int m = 0; m <= M; ++m) v[m] = p.u0(y0 + (z0 - y0) * m / M);

    s.taus.push_back(0.0);
    s.values.push_back(v);

    const bool damped = grid.rannacher && validate(p).has_warning("corner-mismatch");

    for (int k = 0; k < N; ++k) {
        const double t0 = T * k / N, t1 = T * (k + 1) / N;
        if (k == 0 && damped) {
            const double tm = 0.5 * (t0 + t1);
            step(p, v, t0, tm, 1.0);
            step(p, v, tm, t1, 1.0);
        } else {
            step(p, v, t0, t1, grid.theta);
        }
        s.taus.push_back(t1);
        s.values.push_back(v);
    }
    return s;
}

double FdSurface::value(double tau, double x) const {
    if (tau < 0.0 || tau > taus.back() * (1.0 + 1e-12))
        throw std::invalid_argument("fd surface: tau out of range");
    tau = std::min(tau, taus.back());
    const int N = static_cast<int>(taus.size()) - 1;
    const int k = std::min(static_cast<int>(tau / taus.back() * N), N - 1);
    const double wt = (tau - taus[k]) / (taus[k + 1] - taus[k]);

    // cubic Lagrange in xi (linear in tau between levels)
    auto eval_level = [&](int lev) {
        const double t = taus[lev];
        const double xi = (x - problem.y(t)) / problem.width(t);
        if (xi < -1e-9 || xi > 1.0 + 1e-9)
            throw std::invalid_argument("fd surface: x outside the strip");
        const auto& v = values[lev];
        const int M = static_cast<int>(v.size()) - 1;
        const double u = std::clamp(xi, 0.0, 1.0) * M;
        int m0 = static_cast<int>(u) - 1;
        m0 = std::clamp(m0, 0, M - 3);
        double acc = 0.0;
        for (int a = 0; a < 4; ++a) {
            double w = 1.0;
            for (int b = 0; b < 4; ++b)
                if (b != a) w *= (u - (m0 + b)) / double(a - b);
            acc += w * v[m0 + a];
        }
        return acc;
    };
    return (1.0 - wt) * eval_level(k) + wt * eval_level(k + 1);
}

std::pair<std::vector<double>, std::vector<double>> fd_boundary_gradients(const FdSurface& s) {
    const int L = static_cast<int>(s.taus.size());
    std::vector<double> psi(L), phi(L);
    for (int k = 0; k < L; ++k) {
        const auto& v = s.values[k];
        const int M = static_cast<int>(v.size()) - 1;
        const double dxi = 1.0 / M;
        const double l = s.problem.width(s.taus[k]);
        const double dlo = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dxi);
        const double dhi = (3.0 * v[M] - 4.0 * v[M - 1] + v[M - 2]) / (2.0 * dxi);
        psi[k] = -dlo / l;
        phi[k] = dhi / l;
    }
    return {psi, phi};
}

}  // namespace dbarrier
