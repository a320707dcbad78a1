#pragma once

#include <functional>
#include <vector>

namespace dbarrier::quad {

/// Gauss-Legendre nodes/weights on [-1, 1], computed once per order and cached.
const std::vector<double>& gl_nodes(int order);
const std::vector<double>& gl_weights(int order);

/// Integrate f over [a, b] with a single Gauss-Legendre panel.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int order = 64);

/// Composite GL over n equal panels.
double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, int order = 16);

/// Integrate over [a, b] split at the given breakpoints (clipped, sorted,
/// deduplicated), one 32-point GL panel each.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        std::vector<double> breakpoints, int order = 32);

/// Breakpoints resolving Gaussians exp(-(x-c)^2 / (4 dt)) centred at `centers`:
/// bands at c +- k*sqrt(dt) for k in {1,2,4,8,16,32,64}, merged with `kinks`.
std::vector<double> gaussian_breakpoints(double a, double b, const std::vector<double>& centers,
                                         double dt, const std::vector<double>& kinks = {});

/// Nodes of the substitution s = tau - v^2 used for weakly singular time
/// integrals on [0, tau]: v ascending from 0 (s = tau) to sqrt(tau) (s = 0).
struct SqrtTimeRule {
    std::vector<double> v;  // ascending, v[0] = 0
    std::vector<double> s;  // s[i] = tau - v[i]^2, descending from tau to 0
    double tau = 0.0;
};

/// Rule with nodes at v = sqrt(tau - t_j) for the given time-grid nodes t_j <= tau.
SqrtTimeRule sqrt_rule_from_grid(const std::vector<double>& t_nodes, double tau);

/// Uniform rule in v with n+1 nodes.
SqrtTimeRule sqrt_rule_uniform(double tau, int n);

/// Trapezoid in v of the already-substituted integrand h(v) ~ g(tau - v^2) * 2v.
/// h(v[0] = 0) must be supplied as its analytic limit.
double trapezoid_v(const SqrtTimeRule& rule, const std::function<double(double, double)>& h_of_v_s);

}  // namespace dbarrier::quad
