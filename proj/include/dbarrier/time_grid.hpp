#pragma once

#include <vector>

namespace dbarrier {

/// Discretization nodes 0 = t_0 < t_1 < ... < t_N = T for the Volterra marches.
struct TimeGrid {
    enum class Spacing { Uniform, Graded };

    std::vector<double> nodes;
    Spacing spacing = Spacing::Uniform;

    static TimeGrid uniform(double T, int N);
    /// Nodes T (i/N)^power; clusters near t = 0 where gradients move fastest.
    static TimeGrid graded(double T, int N, double power = 2.0);

    int steps() const { return static_cast<int>(nodes.size()) - 1; }
    double horizon() const { return nodes.back(); }
    void check() const;
};

}  // namespace dbarrier
