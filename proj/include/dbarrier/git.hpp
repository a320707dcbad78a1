#pragma once

#include "dbarrier/kernels.hpp"
#include "dbarrier/problem.hpp"
#include "dbarrier/time_grid.hpp"

#include <array>
#include <string>
#include <vector>

namespace dbarrier {

/// Discretized boundary gradients Psi(t_i) = -U_x at the lower boundary and
/// Phi(t_i) = +U_x at the upper one, the unknowns of the transform route.
struct GradientPair {
    std::vector<double> psi, phi;
    TimeGrid grid;
    std::vector<std::string> warnings;
    int max_kernel_terms = 0;

    double psi_at(double s) const;  // piecewise-linear in s
    double phi_at(double s) const;
};

struct GitSolveOptions {
    /// Assemble through the Lebesgue-Stieltjes form of the system instead of
    /// the default regularized form. Both converge to the same gradients.
    bool lebesgue_stieltjes = false;
    Representation rep = Representation::Auto;
};

/// March the Volterra system of the second kind for (Psi, Phi). The kernels
/// multiplying the unknowns vanish at s = tau, so each step reduces to a
/// diagonal 2x2 solve (forward substitution, no iteration).
GradientPair solve_gradients(const HeatStripProblem& p, const TimeGrid& grid,
                             const GitSolveOptions& opts = {});

struct GitPriceOptions {
    int time_nodes = 0;  // v-grid nodes for the price-time integral; 0 = auto
};

/// Solution via the theta-function representation. Returns the rebate
/// directly at the boundary points.
double price_theta(const HeatStripProblem& p, const GradientPair& g, double tau, double x,
                   const GitPriceOptions& opts = {}, EvalStats* stats = nullptr);

/// Solution via the image-sum representation; interior points only (boundary
/// points return the rebate).
double price_images(const HeatStripProblem& p, const GradientPair& g, double tau, double x,
                    const GitPriceOptions& opts = {}, EvalStats* stats = nullptr);

/// Image-sum value plus first and second x-derivatives in one pass, sharing
/// all exponentials; feeds the sensitivity calculations.
std::array<double, 3> price_images_derivs(const HeatStripProblem& p, const GradientPair& g,
                                          double tau, double x, const GitPriceOptions& opts = {},
                                          EvalStats* stats = nullptr);

/// One-sided boundary limit of the image representation computed through the
/// double-layer jump relation (the series itself cancels pairwise at the
/// boundary, so the analytic continuation supplies the rebate).
double price_images_boundary(const HeatStripProblem& p, const GradientPair& g, double tau,
                             Side side, const GitPriceOptions& opts = {});

/// Generalized Fourier coefficients A_1..A_nmax of the homogenized solution
/// at time tau; diagnostic reconstruction route.
std::vector<double> fourier_coefficients(const HeatStripProblem& p, const GradientPair& g,
                                         double tau, int n_max, const GitPriceOptions& opts = {});

/// Both sides of the residue identity linking the Fourier coefficients to the
/// transform image at real spectral parameter p (away from the imaginary poles).
std::pair<double, double> residue_identity(const HeatStripProblem& p, const GradientPair& g,
                                           double tau, double spectral_p, int n_max,
                                           const GitPriceOptions& opts = {});

}  // namespace dbarrier
