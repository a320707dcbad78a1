#pragma once

#include "dbarrier/curve.hpp"
#include "dbarrier/theta.hpp"

#include <array>

namespace dbarrier {

enum class Side { Lower, Upper };  // the minus / plus kernel families
enum class Representation { Auto, Image, Fourier, Theta };

/// Evaluation point for the strip kernels. l(tau) and y(tau) are taken at the
/// outer time tau throughout, following the solution formulas literally.
struct KernelQuery {
    double tau = 0.0;  // evaluation time
    double s = 0.0;    // source time, s < tau
    double xi = 0.0;   // source spatial point
    double x = 0.0;    // field point (image kernels only)
    const CurveFn* lower = nullptr;
    const CurveFn* upper = nullptr;

    double y_tau() const { return lower->value(tau); }
    double z_tau() const { return upper->value(tau); }
    double l_tau() const { return z_tau() - y_tau(); }
    double dt() const { return tau - s; }
    /// Regime ratio (tau - s) / l(tau)^2 steering Auto representation.
    double ratio() const { return dt() / (l_tau() * l_tau()); }
    void check() const;
};

/// Threshold on (tau-s)/l^2 below which Auto picks the image sums.
inline constexpr double kernel_regime_switch = 0.05;

/// Single image-sum terms of the solution representation:
///   Upsilon_n = [e^{-a^2/4dt} - e^{-b^2/4dt}] / (2 sqrt(pi dt)),
///   Lambda_n  = [a e^{-a^2/4dt} + b e^{-b^2/4dt}] / (4 sqrt(pi dt^3)),
/// with a = 2 n l + x - xi, b = 2 n l + x + xi - 2 y(tau).
double upsilon_image(int n, const KernelQuery& q);
double lambda_image(int n, const KernelQuery& q);

/// Full image sums over n together with their first two x-derivatives
/// (index 0 = value, 1 = d/dx, 2 = d2/dx2); exponentials are shared.
std::array<double, 3> upsilon_sum_derivs(const KernelQuery& q, EvalStats* stats = nullptr);
std::array<double, 3> lambda_sum_derivs(const KernelQuery& q, EvalStats* stats = nullptr);

/// Volterra kernels. Side::Lower is the minus family (anchored at y),
/// Side::Upper the plus family (source arguments shifted by l). The *0
/// variants exclude the singular n = 0 image at the same-side boundary
/// point; their xi is implied (y(s) for Lower, z(s) for Upper).
double eta_kernel(Side side, const KernelQuery& q, Representation rep = Representation::Auto,
                  EvalStats* stats = nullptr);
double upsilon_kernel(Side side, const KernelQuery& q,
                      Representation rep = Representation::Auto, EvalStats* stats = nullptr);
double lambda_kernel(Side side, const KernelQuery& q,
                     Representation rep = Representation::Auto, EvalStats* stats = nullptr);
double upsilon0_kernel(Side side, const KernelQuery& q,
                       Representation rep = Representation::Auto, EvalStats* stats = nullptr);
double lambda0_kernel(Side side, const KernelQuery& q,
                      Representation rep = Representation::Auto, EvalStats* stats = nullptr);

/// eta without its boundary-indicator subtraction (always the plain Gaussian
/// image sum; strictly positive).
double eta_gaussian_sum(Side side, const KernelQuery& q, EvalStats* stats = nullptr);

/// Both sides of the two Poisson-summation identities linking the Fourier
/// and image series, each evaluated independently.
struct PoissonPair {
    double cos_lhs, cos_rhs;
    double sin_lhs, sin_rhs;
};
PoissonPair poisson_pair(double alpha, double beta);

}  // namespace dbarrier
