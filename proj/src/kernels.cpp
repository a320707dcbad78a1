#include "dbarrier/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace dbarrier {

namespace {

constexpr double kTermTol = 1e-16;
constexpr int kTermCap = 10000;

[[noreturn]] void cap_error() {
    throw std::runtime_error("kernel series exceeded the 1e4 term cap");
}

double sqrt_pi_dt(double dt) { return std::sqrt(M_PI * dt); }

// Single summand of the Volterra kernel families at image offset m:
//   upsilon: -m e^{-m^2/4dt} / (2 sqrt(pi dt^3))
//   lambda:  [1 - m^2/2dt] e^{-m^2/4dt} / (2 sqrt(pi dt^3))
struct Summand {
    double ups, lam, eta;
};

Summand summand(double m, double dt) {
    const double e = std::exp(-m * m / (4.0 * dt));
    const double c3 = 2.0 * std::sqrt(M_PI * dt * dt * dt);
    return {-m * e / c3, (1.0 - m * m / (2.0 * dt)) * e / c3, e / sqrt_pi_dt(dt)};
}

enum class Family { Ups, Lam, Eta };

double pick(const Summand& s, Family f) {
    switch (f) {
        case Family::Ups: return s.ups;
        case Family::Lam: return s.lam;
        default: return s.eta;
    }
}

// m(n) = y(tau) - xi + 2 n l for the Lower family, + (2n+1) l for Upper.
double image_offset(Side side, int n, double base, double l) {
    return side == Side::Lower ? base + 2.0 * n * l : base + (2.0 * n + 1.0) * l;
}

// Image-representation sum over n, optionally excluding one index.
double image_sum(Family fam, Side side, const KernelQuery& q, double xi, bool skip0,
                 EvalStats* stats) {
    const double dt = q.dt(), l = q.l_tau();
    const double base = q.y_tau() - xi;
    double sum = 0.0;
    int small_rings = 0, terms = 0;
    for (int n = 0;; ++n) {
        double ring_max = 0.0;
        for (int sgn = (n == 0 ? 0 : -1); sgn <= 1; sgn += 2) {
            const int idx = sgn * n;
            if (!(skip0 && idx == 0)) {
                const double term = pick(summand(image_offset(side, idx, base, l), dt), fam);
                sum += term;
                ring_max = std::max(ring_max, std::abs(term));
                if (++terms > kTermCap) cap_error();
            }
            if (n == 0) break;
        }
        if (n >= 2) {
            small_rings = (ring_max < kTermTol * (1.0 + std::abs(sum))) ? small_rings + 1 : 0;
            if (small_rings >= 2) break;
        }
    }
    if (stats) stats->terms += terms;
    return sum;
}

// Fourier-representation sums, with E_n = exp(-pi^2 n^2 dt / l^2) and the
// Upper family carrying (-1)^n.
double fourier_sum(Family fam, Side side, const KernelQuery& q, double xi, EvalStats* stats) {
    const double dt = q.dt(), l = q.l_tau();
    const double arg = M_PI * (xi - q.y_tau()) / l;
    const double decay = M_PI * M_PI * dt / (l * l);
    double sum = (fam == Family::Eta) ? 1.0 / l : 0.0;
    int terms = (fam == Family::Eta) ? 1 : 0;
    int small = 0;
    for (int n = 1;; ++n) {
        const double En = std::exp(-decay * n * n);
        const double sign = (side == Side::Upper && (n & 1)) ? -1.0 : 1.0;
        double term;
        switch (fam) {
            case Family::Ups: term = 2.0 * M_PI / (l * l) * n * En * sign * std::sin(n * arg); break;
            case Family::Lam:
                term = 2.0 * M_PI * M_PI / (l * l * l) * n * n * En * sign * std::cos(n * arg);
                break;
            default: term = 2.0 / l * En * sign * std::cos(n * arg); break;
        }
        sum += term;
        if (++terms > kTermCap) cap_error();
        // bound by the envelope E_n; trig factors can vanish accidentally
        const double envelope = std::max(1.0, 2.0 * M_PI * M_PI / (l * l * l) * n * n) * En;
        small = (envelope < kTermTol * (1.0 + std::abs(sum))) ? small + 1 : 0;
        if (small >= 2) break;
    }
    if (stats) stats->terms += terms;
    return sum;
}

// Theta-representation: the same sums expressed through theta3 at
// phi = pi (xi_eff - y(tau)) / (2 l), with xi_eff = xi + l for the Upper family.
double theta_form(Family fam, Side side, const KernelQuery& q, double xi, EvalStats* stats) {
    const double l = q.l_tau();
    const double xe = (side == Side::Upper) ? xi + l : xi;
    const double phi = M_PI * (xe - q.y_tau()) / (2.0 * l);
    const double omega = std::exp(-M_PI * M_PI * q.dt() / (l * l));
    switch (fam) {
        case Family::Ups: return -M_PI / (2.0 * l * l) * theta3_dz(phi, omega, stats);
        case Family::Lam:
            return -M_PI * M_PI / (4.0 * l * l * l) * theta3_d2z(phi, omega, stats);
        default: return theta3(phi, omega, stats) / l;
    }
}

double boundary_point(Side side, const KernelQuery& q) {
    return side == Side::Lower ? q.lower->value(q.s) : q.upper->value(q.s);
}

Representation resolve(Representation rep, const KernelQuery& q) {
    if (rep != Representation::Auto) return rep;
    return q.ratio() < kernel_regime_switch ? Representation::Image : Representation::Fourier;
}

double dispatch(Family fam, Side side, const KernelQuery& q, double xi, Representation rep,
                EvalStats* stats) {
    switch (resolve(rep, q)) {
        case Representation::Image: return image_sum(fam, side, q, xi, false, stats);
        case Representation::Fourier: return fourier_sum(fam, side, q, xi, stats);
        default: return theta_form(fam, side, q, xi, stats);
    }
}

// n = 0 summand in the side's own indexing (offset 0*2l resp. +l).
double own_n0(Family fam, Side side, const KernelQuery& q, double xi) {
    const double base = q.y_tau() - xi;
    return pick(summand(image_offset(side, 0, base, q.l_tau()), q.dt()), fam);
}

double excluded_sum(Family fam, Side side, const KernelQuery& q, Representation rep,
                    EvalStats* stats) {
    const double xi = boundary_point(side, q);
    if (resolve(rep, q) == Representation::Image)
        return image_sum(fam, side, q, xi, true, stats);
    return dispatch(fam, side, q, xi, rep, stats) - own_n0(fam, side, q, xi);
}

}  // namespace

void KernelQuery::check() const {
    if (!lower || !upper) throw std::invalid_argument("kernel query: missing curve handles");
    if (!(s >= 0.0) || !(s < tau)) throw std::domain_error("kernel query: need 0 <= s < tau");
    if (!(l_tau() > 0.0)) throw std::domain_error("kernel query: strip width must be positive");
}

double upsilon_image(int n, const KernelQuery& q) {
    q.check();
    const double dt = q.dt(), l = q.l_tau();
    const double a = 2.0 * n * l + q.x - q.xi;
    const double b = 2.0 * n * l + q.x + q.xi - 2.0 * q.y_tau();
    return (std::exp(-a * a / (4.0 * dt)) - std::exp(-b * b / (4.0 * dt))) /
           (2.0 * sqrt_pi_dt(dt));
}

double lambda_image(int n, const KernelQuery& q) {
    q.check();
    const double dt = q.dt(), l = q.l_tau();
    const double a = 2.0 * n * l + q.x - q.xi;
    const double b = 2.0 * n * l + q.x + q.xi - 2.0 * q.y_tau();
    return (a * std::exp(-a * a / (4.0 * dt)) + b * std::exp(-b * b / (4.0 * dt))) /
           (4.0 * std::sqrt(M_PI * dt * dt * dt));
}

std::array<double, 3> upsilon_sum_derivs(const KernelQuery& q, EvalStats* stats) {
    q.check();
    const double dt = q.dt(), l = q.l_tau();
    const double c = 1.0 / (2.0 * sqrt_pi_dt(dt));
    std::array<double, 3> sum{0.0, 0.0, 0.0};
    int small = 0, terms = 0;
    for (int n = 0;; ++n) {
        double ring = 0.0;
        for (int sgn = (n == 0 ? 0 : -1); sgn <= 1; sgn += 2) {
            const int idx = sgn * n;
            const double a = 2.0 * idx * l + q.x - q.xi;
            const double b = 2.0 * idx * l + q.x + q.xi - 2.0 * q.y_tau();
            const double ea = std::exp(-a * a / (4.0 * dt)), eb = std::exp(-b * b / (4.0 * dt));
            const double v0 = c * (ea - eb);
            const double v1 = c * (-a / (2.0 * dt) * ea + b / (2.0 * dt) * eb);
            const double v2 = c * ((a * a / (4.0 * dt * dt) - 0.5 / dt) * ea -
                                   (b * b / (4.0 * dt * dt) - 0.5 / dt) * eb);
            sum[0] += v0;
            sum[1] += v1;
            sum[2] += v2;
            ring = std::max({ring, std::abs(v0), std::abs(v1), std::abs(v2)});
            ++terms;
            if (terms > kTermCap) cap_error();
            if (n == 0) break;
        }
        if (n >= 2) {
            const double scale = 1.0 + std::abs(sum[0]) + std::abs(sum[1]) + std::abs(sum[2]);
            small = (ring < kTermTol * scale) ? small + 1 : 0;
            if (small >= 2) break;
        }
    }
    if (stats) stats->terms += terms;
    return sum;
}

std::array<double, 3> lambda_sum_derivs(const KernelQuery& q, EvalStats* stats) {
    q.check();
    const double dt = q.dt(), l = q.l_tau();
    const double c = 1.0 / (4.0 * std::sqrt(M_PI * dt * dt * dt));
    std::array<double, 3> sum{0.0, 0.0, 0.0};
    int small = 0, terms = 0;
    for (int n = 0;; ++n) {
        double ring = 0.0;
        for (int sgn = (n == 0 ? 0 : -1); sgn <= 1; sgn += 2) {
            const int idx = sgn * n;
            const double a = 2.0 * idx * l + q.x - q.xi;
            const double b = 2.0 * idx * l + q.x + q.xi - 2.0 * q.y_tau();
            const double ea = std::exp(-a * a / (4.0 * dt)), eb = std::exp(-b * b / (4.0 * dt));
            const double v0 = c * (a * ea + b * eb);
            const double v1 = c * ((1.0 - a * a / (2.0 * dt)) * ea + (1.0 - b * b / (2.0 * dt)) * eb);
            const double v2 = c * ((a * a * a / (4.0 * dt * dt) - 1.5 * a / dt) * ea +
                                   (b * b * b / (4.0 * dt * dt) - 1.5 * b / dt) * eb);
            sum[0] += v0;
            sum[1] += v1;
            sum[2] += v2;
            ring = std::max({ring, std::abs(v0), std::abs(v1), std::abs(v2)});
            ++terms;
            if (terms > kTermCap) cap_error();
            if (n == 0) break;
        }
        if (n >= 2) {
            const double scale = 1.0 + std::abs(sum[0]) + std::abs(sum[1]) + std::abs(sum[2]);
            small = (ring < kTermTol * scale) ? small + 1 : 0;
            if (small >= 2) break;
        }
    }
    if (stats) stats->terms += terms;
    return sum;
}

double eta_kernel(Side side, const KernelQuery& q, Representation rep, EvalStats* stats) {
    q.check();
    double v = dispatch(Family::Eta, side, q, q.xi, rep, stats);
    // Indicator subtraction applies exactly when xi sits on the same-side
    // boundary point at time s.
    if (q.xi == boundary_point(side, q)) v -= 1.0 / sqrt_pi_dt(q.dt());
    return v;
}

double upsilon_kernel(Side side, const KernelQuery& q, Representation rep, EvalStats* stats) {
    q.check();
    return dispatch(Family::Ups, side, q, q.xi, rep, stats);
}

double lambda_kernel(Side side, const KernelQuery& q, Representation rep, EvalStats* stats) {
    q.check();
    return dispatch(Family::Lam, side, q, q.xi, rep, stats);
}

double upsilon0_kernel(Side side, const KernelQuery& q, Representation rep, EvalStats* stats) {
    q.check();
    return excluded_sum(Family::Ups, side, q, rep, stats);
}

double lambda0_kernel(Side side, const KernelQuery& q, Representation rep, EvalStats* stats) {
    q.check();
    return excluded_sum(Family::Lam, side, q, rep, stats);
}

double eta_gaussian_sum(Side side, const KernelQuery& q, EvalStats* stats) {
    q.check();
    return image_sum(Family::Eta, side, q, q.xi, false, stats);
}

PoissonPair poisson_pair(double alpha, double beta) {
    if (!(beta > 0.0)) throw std::domain_error("poisson_pair: beta must be positive");
    PoissonPair p{};
    // lhs series in exp(-pi^2 n^2 / 2 beta)
    p.cos_lhs = 1.0;
    p.sin_lhs = 0.0;
    for (int n = 1;; ++n) {
        const double En = std::exp(-M_PI * M_PI * n * n / (2.0 * beta));
        p.cos_lhs += 2.0 * En * std::cos(M_PI * n * alpha);
        p.sin_lhs += 2.0 * M_PI * n * En * std::sin(M_PI * n * alpha);
        if (M_PI * n * En < 1e-18 * (1.0 + std::abs(p.cos_lhs) + std::abs(p.sin_lhs))) break;
        if (n > kTermCap) cap_error();
    }
    // rhs series in exp(-beta (2n + alpha)^2 / 2)
    const double ccos = 2.0 * std::sqrt(beta / (2.0 * M_PI));
    const double csin = 2.0 * beta * std::sqrt(beta) / std::sqrt(2.0 * M_PI);
    p.cos_rhs = 0.0;
    p.sin_rhs = 0.0;
    int small = 0;
    for (int n = 0;; ++n) {
        double ring = 0.0;
        for (int sgn = (n == 0 ? 0 : -1); sgn <= 1; sgn += 2) {
            const int idx = sgn * n;
            const double u = 2.0 * idx + alpha;
            const double E = std::exp(-0.5 * beta * u * u);
            p.cos_rhs += ccos * E;
            p.sin_rhs += csin * E * u;
            ring = std::max(ring, (ccos + csin * std::abs(u)) * E);
            if (n == 0) break;
        }
        if (n >= 2) {
            small = (ring < 1e-18 * (1.0 + std::abs(p.cos_rhs) + std::abs(p.sin_rhs))) ? small + 1
                                                                                       : 0;
            if (small >= 2) break;
        }
        if (n > kTermCap) cap_error();
    }
    return p;
}

}  // namespace dbarrier
