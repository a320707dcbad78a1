#pragma once

namespace dbarrier {

/// Number of series terms consumed by a kernel or theta evaluation.
struct EvalStats {
    int terms = 0;
};

/// Jacobi theta3 and its first two z-derivatives,
///   theta3(z, w)  = 1 + 2 sum_{n>=1} w^(n^2) cos(2 n z),
///   theta3'(z, w) = -4 sum n w^(n^2) sin(2 n z),
///   theta3''(z, w)= -8 sum n^2 w^(n^2) cos(2 n z),
/// for real z and nome w in [0, 1). For w close to 1 the cosine series is
/// slow, so evaluation switches to the Poisson-dual Gaussian sum
///   theta3(z, e^(-pi t)) = t^(-1/2) sum_n exp(-(z + pi n)^2 / (pi t)),
/// which converges in a few terms exactly where the series does not.
double theta3(double z, double omega, EvalStats* stats = nullptr);
double theta3_dz(double z, double omega, EvalStats* stats = nullptr);
double theta3_d2z(double z, double omega, EvalStats* stats = nullptr);

/// Nome value above which the dual Gaussian sum is used.
inline constexpr double theta3_dual_switch = 0.6105;

}  // namespace dbarrier
