#pragma once

#include "dbarrier/curve.hpp"
#include "dbarrier/payoff.hpp"

#include <string>
#include <vector>

namespace dbarrier {

/// Heat equation U_t = U_xx on the strip x in [lower(t), upper(t)], t in [0, T],
/// with Dirichlet data rebate_lower/rebate_upper at the boundaries and initial
/// profile U0 on [lower(0), upper(0)]. Immutable after construction.
struct HeatStripProblem {
    CurveFn lower;          // y(t)
    CurveFn upper;          // z(t)
    CurveFn rebate_lower;   // f-(t)
    CurveFn rebate_upper;   // f+(t)
    Payoff initial;         // U0(x)
    double horizon = 1.0;   // T > 0

    double y(double t) const { return lower.value(t); }
    double z(double t) const { return upper.value(t); }
    double yp(double t) const { return lower.derivative(t); }
    double zp(double t) const { return upper.derivative(t); }
    double fm(double t) const { return rebate_lower.value(t); }
    double fp(double t) const { return rebate_upper.value(t); }
    double fmp(double t) const { return rebate_lower.derivative(t); }
    double fpp(double t) const { return rebate_upper.derivative(t); }
    double width(double t) const { return z(t) - y(t); }
    double u0(double x) const { return initial.value(x); }
};

struct Violation {
    enum class Severity { Error, Warning };
    Severity severity;
    std::string code;     // e.g. "strip-collapse", "corner-mismatch"
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> items;
    bool ok() const {
        for (const auto& v : items)
            if (v.severity == Violation::Severity::Error) return false;
        return true;
    }
    bool empty() const { return items.empty(); }
    bool has_warning(const std::string& code) const;
    std::string to_string() const;
};

/// Check the problem invariants on a dense time sample: positive horizon,
/// finite curves, strip never collapses, corner compatibility of U0 vs the
/// rebates at t = 0 (a warning, not an error).
ValidationReport validate(const HeatStripProblem& p, int samples = 401,
                          double corner_tol = 1e-9);

/// Throws std::invalid_argument when validate() reports errors.
void require_valid(const HeatStripProblem& p);

/// The boundary-condition shift U = u + A(t) + B(t) x with
///   A = -(f+ y - f- z) / (z - y),   B = (f+ - f-) / (z - y),
/// turning the problem into one with homogeneous boundary data, a source
/// g(t, x) = -A'(t) - B'(t) x and the shifted initial profile u0.
struct HomogenizedProblem {
    HeatStripProblem base;
    double A(double t) const;
    double B(double t) const;
    double Ap(double t) const;  // analytic A', quotient rule
    double Bp(double t) const;
    double g(double t, double x) const { return -Ap(t) - Bp(t) * x; }
    double u0(double x) const { return base.u0(x) - A(0.0) - B(0.0) * x; }
};

HomogenizedProblem homogenize(const HeatStripProblem& p);

}  // namespace dbarrier
