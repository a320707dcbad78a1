#pragma once

#include "dbarrier/curve.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dbarrier {

enum class PayoffKind { Constant, Call, Put, ExpCall, ExpPut, Sine, Tabulated };

/// Initial profile U0(x) on the opening strip [y(0), z(0)].
///
/// Call/Put are (x-K)+ / (K-x)+; ExpCall/ExpPut apply to exp(x), which is
/// what a vanilla payoff becomes under log-coordinate model reductions.
/// Sine is a*sin(w*x + p). Tabulated is a natural cubic spline.
class Payoff {
public:
    Payoff() : kind_(PayoffKind::Constant), a_(0.0) {}

    static Payoff constant(double c);
    static Payoff call(double strike);
    static Payoff put(double strike);
    static Payoff exp_call(double strike);
    static Payoff exp_put(double strike);
    static Payoff sine(double amplitude, double omega, double phase = 0.0);
    static Payoff tabulated(std::vector<double> xs, std::vector<double> vals);

    double value(double x) const;
    /// One-sided derivative: side > 0 takes the right limit at kinks, side < 0 the left.
    double derivative(double x, int side = +1) const;

    /// Points where U0 is not smooth (payoff kinks); used for quadrature panel splits.
    std::vector<double> kinks() const;

    PayoffKind kind() const { return kind_; }
    double strike() const { return a_; }
    std::string describe() const;

private:
    PayoffKind kind_;
    double a_ = 0.0, b_ = 0.0, c_ = 0.0;  // strike or (amplitude, omega, phase)
    std::optional<CurveFn> table_;
};

}  // namespace dbarrier
