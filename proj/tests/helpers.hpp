#pragma once

#include "dbarrier/problem.hpp"

#include <cmath>
#include <random>

namespace testutil {

using namespace dbarrier;

// y = 0, z = 1, zero rebates, U0 = sin(pi x): exact solution
// U(t, x) = exp(-pi^2 t) sin(pi x).
inline HeatStripProblem eigenfunction_problem(double T = 1.0) {
    HeatStripProblem p;
    p.lower = CurveFn::constant(0.0);
    p.upper = CurveFn::constant(1.0);
    p.rebate_lower = CurveFn::constant(0.0);
    p.rebate_upper = CurveFn::constant(0.0);
    p.initial = Payoff::sine(1.0, M_PI);
    p.horizon = T;
    return p;
}

inline double eigen_exact(double t, double x) { return std::exp(-M_PI * M_PI * t) * std::sin(M_PI * x); }
inline double eigen_exact_dx(double t, double x) {
    return M_PI * std::exp(-M_PI * M_PI * t) * std::cos(M_PI * x);
}

inline HeatStripProblem constant_problem(double c, double T = 1.0) {
    HeatStripProblem p;
    p.lower = CurveFn::constant(0.0);
    p.upper = CurveFn::constant(1.0);
    p.rebate_lower = CurveFn::constant(c);
    p.rebate_upper = CurveFn::constant(c);
    p.initial = Payoff::constant(c);
    p.horizon = T;
    return p;
}

// Moving window cut out of the global solution exp(-pi^2 t) sin(pi x):
// boundary data are the traces, so the exact solution is known everywhere.
inline HeatStripProblem moving_trace_problem(double T = 0.5, double slope_lo = 0.1,
                                             double slope_hi = 0.05) {
    HeatStripProblem p;
    p.lower = CurveFn::linear(0.0, slope_lo);
    p.upper = CurveFn::linear(1.0, slope_hi);
    const int K = 257;
    std::vector<double> ts(K), fl(K), fu(K);
    for (int i = 0; i < K; ++i) {
        const double t = T * i / (K - 1);
        ts[i] = t;
        fl[i] = eigen_exact(t, slope_lo * t);
        fu[i] = eigen_exact(t, 1.0 + slope_hi * t);
    }
    p.rebate_lower = CurveFn(ts, fl);
    p.rebate_upper = CurveFn(std::move(ts), std::move(fu));
    p.initial = Payoff::sine(1.0, M_PI);
    p.horizon = T;
    return p;
}

// The moving-strip regression family: linear barriers, C1 rebates, call payoff
// with corner-compatible strike.
inline HeatStripProblem regression_problem(int variant = 0) {
    HeatStripProblem p;
    switch (variant) {
        case 0:
            p.lower = CurveFn::linear(0.0, 0.1);
            p.upper = CurveFn::linear(1.0, 0.2);
            p.rebate_lower = CurveFn::constant(0.0);
            p.rebate_upper = CurveFn::constant(0.05);
            p.initial = Payoff::call(0.95);
            p.horizon = 0.5;
            break;
        case 1:
            p.lower = CurveFn::linear(-0.2, -0.15);
            p.upper = CurveFn::linear(1.1, 0.1);
            p.rebate_lower = CurveFn::sinusoid(0.02, 3.0, 0.0, 0.03);
            p.rebate_upper = CurveFn::linear(0.08, -0.05);
            p.initial = Payoff::tabulated({-0.2, 0.2, 0.6, 1.1},
                                          {0.03, 0.05, 0.065, 0.08});
            p.horizon = 0.6;
            break;
        default:
            p.lower = CurveFn::linear(0.05, 0.25);
            p.upper = CurveFn::linear(0.95, -0.1);
            p.rebate_lower = CurveFn::exponential(0.04, -1.0, 0.82);  // f-(0) = U0(0.05)
            p.rebate_upper = CurveFn::linear(0.0, 0.1);
            p.initial = Payoff::put(0.91);
            p.horizon = 0.4;
            break;
    }
    return p;
}

// Wide moving window cut out of exp(-pi^2 t / 9) sin(pi x / 3): slow decay,
// so interpolation bias of the marched gradients stays tiny.
inline HeatStripProblem wide_trace_problem(double T = 0.5) {
    HeatStripProblem p;
    p.lower = CurveFn::linear(0.0, 0.1);
    p.upper = CurveFn::linear(3.0, 0.05);
    const int K = 257;
    std::vector<double> ts(K), fl(K), fu(K);
    for (int i = 0; i < K; ++i) {
        const double t = T * i / (K - 1);
        ts[i] = t;
        fl[i] = std::exp(-M_PI * M_PI * t / 9.0) * std::sin(M_PI * 0.1 * t / 3.0);
        fu[i] = std::exp(-M_PI * M_PI * t / 9.0) * std::sin(M_PI * (3.0 + 0.05 * t) / 3.0);
    }
    p.rebate_lower = CurveFn(ts, fl);
    p.rebate_upper = CurveFn(std::move(ts), std::move(fu));
    p.initial = Payoff::sine(1.0, M_PI / 3.0);
    p.horizon = T;
    return p;
}

inline double wide_exact(double t, double x) {
    return std::exp(-M_PI * M_PI * t / 9.0) * std::sin(M_PI * x / 3.0);
}

// Narrow slanted strip: width ~0.3 so the ratio (tau-s)/l^2 can reach 5
// within the horizon, exercising the Fourier-friendly regime.
inline HeatStripProblem narrow_problem() {
    HeatStripProblem p;
    p.lower = CurveFn::linear(0.0, 0.05);
    p.upper = CurveFn::linear(0.3, -0.08);
    p.rebate_lower = CurveFn::constant(0.0);
    p.rebate_upper = CurveFn::constant(0.0);
    p.initial = Payoff::sine(1.0, M_PI / 0.3);
    p.horizon = 0.5;
    return p;
}

inline std::mt19937& rng() {
    static std::mt19937 gen(20240817u);
    return gen;
}

inline double uniform(double a, double b) {
    std::uniform_real_distribution<double> d(a, b);
    return d(rng());
}

}  // namespace testutil
