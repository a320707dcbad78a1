#pragma once

#include "dbarrier/problem.hpp"

#include <optional>

namespace dbarrier {

enum class ModelKind { HeatNative, BsTimeDep, OuTimeDep };

/// Market-side description of a double-barrier contract under a supported
/// one-factor model with time-dependent coefficients. Curves live in calendar
/// time t in [0, maturity]; rebates are paid at the moment a barrier is hit.
struct MarketSpec {
    ModelKind model = ModelKind::BsTimeDep;
    CurveFn rate;                       // r(t)
    CurveFn sigma;                      // bs: relative vol; ou: absolute vol
    CurveFn kappa = CurveFn::constant(0.0);      // ou mean-reversion speed
    CurveFn theta_bar = CurveFn::constant(0.0);  // ou mean level
    CurveFn barrier_lo, barrier_hi;     // L(t) < H(t)
    CurveFn rebate_lo = CurveFn::constant(0.0);
    CurveFn rebate_hi = CurveFn::constant(0.0);
    double maturity = 1.0;
    double strike = 1.0;
    bool is_put = false;
};

/// Coordinate change between market (t, S) and heat (tau, x) variables, with
/// the payoff scaling that recovers the option price from the heat solution.
class ReductionMap {
public:
    static ReductionMap identity();
    static ReductionMap from_spec(const MarketSpec& spec);

    ModelKind model() const { return model_; }
    double maturity() const { return maturity_; }
    double tau_end() const { return tau_end_; }  // tau at t = 0

    double tau_of_t(double t) const;
    double t_of_tau(double tau) const;
    double x_of(double t, double S) const;
    double S_of(double t, double x) const;

    double discount(double t) const;  // price = discount(t) * U(tau, x)
    double rate_at(double t) const;
    double dxdS(double t, double S) const;
    double d2xdS2(double t, double S) const;
    double dtau_dt(double t) const;
    double dx_dt(double t, double S) const;
    bool inside_strip(double t, double S) const;

private:
    ModelKind model_ = ModelKind::HeatNative;
    std::optional<MarketSpec> spec_;
    double maturity_ = 0.0, tau_end_ = 0.0;

    // ou helpers
    double ou_A(double t) const;
    double ou_b(double t) const;
};

struct Reduction {
    HeatStripProblem problem;
    ReductionMap map;
};

/// Identity reduction for problems already posed in heat coordinates.
Reduction reduce_model(const HeatStripProblem& heat_native);

/// Map a supported market model to its heat-strip problem. Throws on
/// unsupported models or non-positive volatility.
Reduction reduce_model(const MarketSpec& spec);

struct MappedValue {
    double price, delta, gamma;
};

/// Pull a heat-coordinate value and its x-derivatives back to market
/// coordinates at (t, S) by the chain rule.
MappedValue map_back(const ReductionMap& map, double heat_value, double dudx, double d2udx2,
                     double t, double S);

}  // namespace dbarrier
