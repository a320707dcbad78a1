#pragma once

#include "dbarrier/problem.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dbarrier {

/// Crank-Nicolson grid on the straightened coordinate xi = (x - y(t)) / l(t).
struct FdGrid {
    int space_nodes = 201;  // M + 1 nodes on xi in [0, 1]
    int time_steps = 400;
    double theta = 0.5;      // 0.5 = Crank-Nicolson, 1 = implicit Euler
    bool rannacher = true;   // two implicit half-steps at start-up on corner mismatch
};

struct FdSurface {
    FdGrid grid;
    HeatStripProblem problem;
    std::vector<double> taus;
    std::vector<std::vector<double>> values;  // values[k][m] = V(tau_k, xi_m)
    std::vector<std::string> warnings;

    /// Bilinear interpolation in (tau, xi(x, tau)).
    double value(double tau, double x) const;
};

/// Solve V_t = V_xixi / l^2 + (y' + xi l') / l V_xi with Dirichlet rebates,
/// theta-scheme in time, tridiagonal solve per step; central advection with
/// per-node upwind fallback at large cell Peclet numbers.
FdSurface solve_fd(const HeatStripProblem& p, const FdGrid& grid);

/// One-sided second-order boundary gradients: (-U_x at y, +U_x at z) per level.
std::pair<std::vector<double>, std::vector<double>> fd_boundary_gradients(const FdSurface& s);

}  // namespace dbarrier
