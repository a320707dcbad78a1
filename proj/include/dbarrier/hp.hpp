#pragma once

#include "dbarrier/git.hpp"
#include "dbarrier/problem.hpp"
#include "dbarrier/time_grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dbarrier {

/// Discretized double-layer potential densities on the two boundaries.
/// The densities open with a square-root branch in time, so the continuous
/// views interpolate in w = sqrt(t): cubic spline when built by the solver,
/// piecewise linear otherwise.
struct PotentialPair {
    std::vector<double> omega;  // lower-boundary density
    std::vector<double> theta;  // upper-boundary density
    TimeGrid grid;
    std::vector<std::string> warnings;
    std::optional<CurveFn> omega_spline_w, theta_spline_w;  // knots in sqrt(t)

    double omega_at(double s) const;
    double theta_at(double s) const;
    void build_interpolants();
};

/// Modified rebates after subtracting the free-space propagation of U0:
///   phi1 = f-(tau) - conv(U0)(y(tau)),  psi1 = f+(tau) - conv(U0)(z(tau)).
struct BoundaryData {
    double phi1, psi1;
};
BoundaryData boundary_data(const HeatStripProblem& p, double tau);

/// March the double-layer Volterra system for the densities. Same-boundary
/// dipole kernels join the diagonal through their v -> 0 limit; cross-boundary
/// kernels are smooth.
PotentialPair solve_densities(const HeatStripProblem& p, const TimeGrid& grid);

struct HpPriceOptions {
    int time_nodes = 0;  // 0 = auto
};

/// Heat-potential price: two-boundary dipole integral plus the free-space
/// convolution of U0. Interior points; boundary points return the rebate.
double price_hp(const HeatStripProblem& p, const PotentialPair& d, double tau, double x,
                const HpPriceOptions& opts = {});

enum class Approach { FromAbove, FromBelow };

/// One-sided limit of d/dx of a single-boundary dipole potential with density
/// `density` on curve `curve`, at time tau. `sigma` is the diffusion constant
/// of the underlying derivation; the strip solver uses sigma = 1.
double gradient_limit(const CurveFn& density, const CurveFn& curve, double tau,
                      Approach approach, double sigma = 1.0);

/// Jump diagnostics of the dipole potential W(tau, x) across its carrying
/// curve, measured by epsilon-extrapolated direct quadrature and analytically
/// via the one-sided limit formulas.
struct JumpCheck {
    double interior_measured, exterior_measured;
    double interior_analytic, exterior_analytic;
    double direct_value;
    double jump;  // 0.5 * (interior - exterior), measured; equals the density
};
JumpCheck jump_check(const CurveFn& density, const CurveFn& curve, double tau,
                     double eps = 1e-2);

/// Boundary gradients of the full solution assembled from solved densities:
/// one-sided potential gradients plus the initial-data convolution gradient.
GradientPair hp_to_git(const HeatStripProblem& p, const PotentialPair& d);

}  // namespace dbarrier
