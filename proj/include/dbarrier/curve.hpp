#pragma once

#include <string>
#include <vector>

namespace dbarrier {

enum class CurveKind { Constant, Linear, Exponential, Sinusoid, TabulatedSpline };

/// A C1 scalar function of time with an analytic derivative.
///
/// Parametric families:
///   Constant:   c                          params = {c}
///   Linear:     a + b*t                    params = {a, b}
///   Exponential a*exp(b*t) + c             params = {a, b, c}
///   Sinusoid:   a*sin(w*t + p) + c         params = {a, w, p, c}
///   TabulatedSpline: natural cubic through (knots, values); evaluation
///   outside the knot range is an error, not extrapolation.
enum class SplineEnd { Natural, NotAKnot };

class CurveFn {
public:
    CurveFn() : kind_(CurveKind::Constant), params_{0.0} {}
    CurveFn(CurveKind kind, std::vector<double> params);
    CurveFn(std::vector<double> knots, std::vector<double> values,
            SplineEnd ends = SplineEnd::Natural);

    static CurveFn constant(double c) { return CurveFn(CurveKind::Constant, {c}); }
    static CurveFn linear(double a, double b) { return CurveFn(CurveKind::Linear, {a, b}); }
    static CurveFn exponential(double a, double b, double c) {
        return CurveFn(CurveKind::Exponential, {a, b, c});
    }
    static CurveFn sinusoid(double a, double w, double p, double c) {
        return CurveFn(CurveKind::Sinusoid, {a, w, p, c});
    }

    double value(double t) const;
    double derivative(double t) const;

    /// Integral of the curve over [a, b]; closed form for the parametric
    /// families, composite Gauss-Legendre for splines.
    double integral(double a, double b) const;

    CurveKind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }
    std::string describe() const;

private:
    CurveKind kind_;
    std::vector<double> params_;
    // spline data
    std::vector<double> knots_, values_, m2_;  // m2_: second derivatives at knots
    SplineEnd ends_ = SplineEnd::Natural;

    void build_spline();
    int spline_interval(double t) const;
};

}  // namespace dbarrier
