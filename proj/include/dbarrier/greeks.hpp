#pragma once

#include "dbarrier/git.hpp"
#include "dbarrier/reduction.hpp"

#include <array>

namespace dbarrier {

struct GreeksOptions {
    GitPriceOptions price;
    /// Points closer than width/100 to a boundary use one-sided differences
    /// of the price instead of differentiation under the integrals.
    bool near_boundary_fd = true;
};

/// dU/dx and d2U/dx2 by differentiating the image representation under the
/// integral signs; the quadrature nodes are those of the price evaluation.
std::array<double, 2> spatial_greeks(const HeatStripProblem& p, const GradientPair& g,
                                     double tau, double x, const GreeksOptions& opts = {});

/// Heat-coordinate dU/dtau, which the equation ties to the second spatial
/// derivative.
double calendar_theta(const HeatStripProblem& p, const GradientPair& g, double tau, double x,
                      const GreeksOptions& opts = {});

struct GreekSet {
    double value = 0.0;            // heat-coordinate U
    double dudx = 0.0, d2udx2 = 0.0;
    double price = 0.0;            // market price
    double delta = 0.0, gamma = 0.0;
    double theta = 0.0;            // market calendar theta dC/dt
};

/// Price and Greeks at a market point (t, S) through the reduction map.
GreekSet market_greeks(const HeatStripProblem& p, const GradientPair& g, const ReductionMap& map,
                       double t, double S, const GreeksOptions& opts = {});

struct BumpOptions {
    double relative = 0.01;   // +-1% central bumps
    double absolute = 1e-4;   // fallback when the curve is identically zero
    int march_steps = 192;
    GitPriceOptions price;
};

/// Vega and rho by bump-and-reprice through the model reduction: the curve is
/// scaled by (1 +- relative) and the contract repriced; returns the central
/// sensitivity per unit relative bump (per unit absolute bump on the zero
/// curve).
double market_vega(const MarketSpec& spec, double t, double S, const BumpOptions& opts = {});
double market_rho(const MarketSpec& spec, double t, double S, const BumpOptions& opts = {});

}  // namespace dbarrier
