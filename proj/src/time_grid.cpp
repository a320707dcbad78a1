#include "dbarrier/time_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace dbarrier {

TimeGrid TimeGrid::uniform(double T, int N) {
    if (!(T > 0.0) || N < 2) throw std::invalid_argument("time grid: need T > 0 and N >= 2");
    TimeGrid g;
    g.spacing = Spacing::Uniform;
    g.nodes.resize(N + 1);
    for (int i = 0; i <= N; ++i) g.nodes[i] = T * i / N;
    return g;
}

TimeGrid TimeGrid::graded(double T, int N, double power) {
    if (!(T > 0.0) || N < 2 || !(power > 0.0))
        throw std::invalid_argument("time grid: bad graded parameters");
    TimeGrid g;
    g.spacing = Spacing::Graded;
    g.nodes.resize(N + 1);
    for (int i = 0; i <= N; ++i) g.nodes[i] = T * std::pow(double(i) / N, power);
    return g;
}

void TimeGrid::check() const {
    if (nodes.size() < 3) throw std::invalid_argument("time grid: need N >= 2");
    if (nodes.front() != 0.0) throw std::invalid_argument("time grid: must start at 0");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!(nodes[i] < nodes[i + 1]))
            throw std::invalid_argument("time grid: nodes must increase strictly");
}

}  // namespace dbarrier
