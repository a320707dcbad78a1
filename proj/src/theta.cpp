#include "dbarrier/theta.hpp"

#include <cmath>
#include <stdexcept>

namespace dbarrier {

namespace {

void check_nome(double omega) {
    if (!(omega >= 0.0) || omega >= 1.0)
        throw std::domain_error("theta3: nome must lie in [0, 1)");
}

// deriv = 0, 1, 2 on z. Series branch: terms 2 w^(n^2) {cos, -2n sin, -4n^2 cos}(2nz),
// truncated on the bound 2 n max(1, 2n) w^(n^2) < 1e-16.
double series_branch(double z, double omega, int deriv, EvalStats* stats) {
    double sum = (deriv == 0) ? 1.0 : 0.0;
    double wn = 1.0;  // w^(n^2) via w^(n^2) = w^((n-1)^2) * w^(2n-1)
    double wodd = omega;
    int terms = 0;
    for (int n = 1; n <= 10000; ++n) {
        wn *= wodd;        // now w^(n^2)
        wodd *= omega * omega;
        double term;
        switch (deriv) {
            case 0: term = 2.0 * wn * std::cos(2.0 * n * z); break;
            case 1: term = -4.0 * n * wn * std::sin(2.0 * n * z); break;
            default: term = -8.0 * n * n * wn * std::cos(2.0 * n * z); break;
        }
        sum += term;
        ++terms;
        if (2.0 * n * std::max(1.0, 2.0 * n) * wn < 1e-16) break;
    }
    if (stats) stats->terms += terms;
    return sum;
}

// Dual branch for nome near 1: t = -ln(w)/pi, Gaussian images of the reduced z.
double dual_branch(double z, double omega, int deriv, EvalStats* stats) {
    const double t = -std::log(omega) / M_PI;
    const double pit = M_PI * t;
    const double zr = z - M_PI * std::round(z / M_PI);  // theta3 is pi-periodic in z
    const double amp = 1.0 / std::sqrt(t);
    double sum = 0.0;
    int terms = 0;
    for (int n = 0; n <= 10000; ++n) {
        double group = 0.0, gmax = 0.0;
        for (int sgn = (n == 0 ? 0 : -1); sgn <= 1; sgn += 2) {
            const double u = zr + M_PI * (sgn * n);
            const double e = std::exp(-u * u / pit);
            double term;
            switch (deriv) {
                case 0: term = amp * e; break;
                case 1: term = amp * e * (-2.0 * u / pit); break;
                default: term = amp * e * (4.0 * u * u / (pit * pit) - 2.0 / pit); break;
            }
            group += term;
            gmax = std::max(gmax, std::abs(term));
            ++terms;
            if (n == 0) break;
        }
        sum += group;
        if (n >= 1 && gmax < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    if (stats) stats->terms += terms;
    return sum;
}

double eval(double z, double omega, int deriv, EvalStats* stats) {
    check_nome(omega);
    if (omega == 0.0) {
        if (stats) stats->terms += 1;
        return deriv == 0 ? 1.0 : 0.0;
    }
    return omega > theta3_dual_switch ? dual_branch(z, omega, deriv, stats)
                                      : series_branch(z, omega, deriv, stats);
}

}  // namespace

double theta3(double z, double omega, EvalStats* stats) { return eval(z, omega, 0, stats); }
double theta3_dz(double z, double omega, EvalStats* stats) { return eval(z, omega, 1, stats); }
double theta3_d2z(double z, double omega, EvalStats* stats) { return eval(z, omega, 2, stats); }

}  // namespace dbarrier
