#include "dbarrier/curve.hpp"
#include "dbarrier/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dbarrier {

namespace {
std::size_t required_params(CurveKind k) {
    switch (k) {
        case CurveKind::Constant: return 1;
        case CurveKind::Linear: return 2;
        case CurveKind::Exponential: return 3;
        case CurveKind::Sinusoid: return 4;
        case CurveKind::TabulatedSpline: return 0;
    }
    return 0;
}
}  // namespace

CurveFn::CurveFn(CurveKind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {
    if (kind_ == CurveKind::TabulatedSpline)
        throw std::invalid_argument("tabulated-spline curves take (knots, values)");
    if (params_.size() != required_params(kind_))
        throw std::invalid_argument("curve: wrong number of parameters");
    for (double p : params_)
        if (!std::isfinite(p)) throw std::invalid_argument("curve: non-finite parameter");
}

CurveFn::CurveFn(std::vector<double> knots, std::vector<double> values, SplineEnd ends)
    : kind_(CurveKind::TabulatedSpline),
      knots_(std::move(knots)),
      values_(std::move(values)),
      ends_(ends) {
    if (knots_.size() != values_.size() || knots_.size() < 2)
        throw std::invalid_argument("spline curve: need >= 2 matching knots/values");
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
        if (!(knots_[i] < knots_[i + 1]))
            throw std::invalid_argument("spline curve: knots must be strictly increasing");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("spline curve: non-finite value");
    build_spline();
}

// Cubic spline: tridiagonal solve for the knot second derivatives. Natural
// ends force zero curvature; not-a-knot makes the two outermost segments
// single cubics (third-derivative continuity), eliminated back onto the
// tridiagonal band.
void CurveFn::build_spline() {
    const std::size_t n = knots_.size();
    m2_.assign(n, 0.0);
    if (n == 2) return;
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), r(n, 0.0);
    b[0] = b[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = knots_[i] - knots_[i - 1];
        const double hr = knots_[i + 1] - knots_[i];
        a[i] = hl / 6.0;
        b[i] = (hl + hr) / 3.0;
        c[i] = hr / 6.0;
        r[i] = (values_[i + 1] - values_[i]) / hr - (values_[i] - values_[i - 1]) / hl;
    }
    if (ends_ == SplineEnd::NotAKnot && n >= 4) {
        // third-derivative continuity at the second and penultimate knots:
        //   M0 = (1 + h0/h1) M1 - (h0/h1) M2,
        //   M(n-1) = (1 + hm/hm1) M(n-2) - (hm/hm1) M(n-3);
        // substitute into the adjacent interior rows and solve the reduced
        // tridiagonal for M1..M(n-2), then back out the end values.
        const double h0 = knots_[1] - knots_[0], h1 = knots_[2] - knots_[1];
        const double rho0 = h0 / h1;
        b[1] += a[1] * (1.0 + rho0);
        c[1] -= a[1] * rho0;
        a[1] = 0.0;
        const double hm = knots_[n - 1] - knots_[n - 2], hm1 = knots_[n - 2] - knots_[n - 3];
        const double rhon = hm / hm1;
        b[n - 2] += c[n - 2] * (1.0 + rhon);
        a[n - 2] -= c[n - 2] * rhon;
        c[n - 2] = 0.0;
        for (std::size_t i = 2; i < n - 1; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            r[i] -= w * r[i - 1];
        }
        m2_[n - 2] = r[n - 2] / b[n - 2];
        for (std::size_t i = n - 2; i-- > 1;) m2_[i] = (r[i] - c[i] * m2_[i + 1]) / b[i];
        m2_[0] = (1.0 + rho0) * m2_[1] - rho0 * m2_[2];
        m2_[n - 1] = (1.0 + rhon) * m2_[n - 2] - rhon * m2_[n - 3];
        return;
    }
    // Thomas algorithm
    for (std::size_t i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        r[i] -= w * r[i - 1];
    }
    m2_[n - 1] = r[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m2_[i] = (r[i] - c[i] * m2_[i + 1]) / b[i];
}

int CurveFn::spline_interval(double t) const {
    const double lo = knots_.front(), hi = knots_.back();
    const double slack = 1e-12 * (1.0 + std::abs(lo) + std::abs(hi));
    if (t < lo - slack || t > hi + slack)
        throw std::domain_error("spline curve evaluated outside knot range");
    std::size_t lo_i = 0, hi_i = knots_.size() - 1;
    while (hi_i - lo_i > 1) {
        const std::size_t mid = (lo_i + hi_i) / 2;
        if (knots_[mid] <= t)
            lo_i = mid;
        else
            hi_i = mid;
    }
    return static_cast<int>(lo_i);
}

double CurveFn::value(double t) const {
    switch (kind_) {
        case CurveKind::Constant: return params_[0];
        case CurveKind::Linear: return params_[0] + params_[1] * t;
        case CurveKind::Exponential: return params_[0] * std::exp(params_[1] * t) + params_[2];
        case CurveKind::Sinusoid: return params_[0] * std::sin(params_[1] * t + params_[2]) + params_[3];
        case CurveKind::TabulatedSpline: {
            const int i = spline_interval(t);
            const double h = knots_[i + 1] - knots_[i];
            const double A = (knots_[i + 1] - t) / h, B = (t - knots_[i]) / h;
            return A * values_[i] + B * values_[i + 1] +
                   ((A * A * A - A) * m2_[i] + (B * B * B - B) * m2_[i + 1]) * h * h / 6.0;
        }
    }
    return 0.0;
}

double CurveFn::derivative(double t) const {
    switch (kind_) {
        case CurveKind::Constant: return 0.0;
        case CurveKind::Linear: return params_[1];
        case CurveKind::Exponential: return params_[0] * params_[1] * std::exp(params_[1] * t);
        case CurveKind::Sinusoid: return params_[0] * params_[1] * std::cos(params_[1] * t + params_[2]);
        case CurveKind::TabulatedSpline: {
            const int i = spline_interval(t);
            const double h = knots_[i + 1] - knots_[i];
            const double A = (knots_[i + 1] - t) / h, B = (t - knots_[i]) / h;
            return (values_[i + 1] - values_[i]) / h +
                   ((1.0 - 3.0 * A * A) * m2_[i] + (3.0 * B * B - 1.0) * m2_[i + 1]) * h / 6.0;
        }
    }
    return 0.0;
}

double CurveFn::integral(double a, double b) const {
    switch (kind_) {
        case CurveKind::Constant: return params_[0] * (b - a);
        case CurveKind::Linear:
            return params_[0] * (b - a) + 0.5 * params_[1] * (b * b - a * a);
        case CurveKind::Exponential: {
            const double k = params_[1];
            if (k == 0.0) return (params_[0] + params_[2]) * (b - a);
            return params_[0] / k * (std::exp(k * b) - std::exp(k * a)) + params_[2] * (b - a);
        }
        case CurveKind::Sinusoid: {
            const double w = params_[1];
            if (w == 0.0) return (params_[0] * std::sin(params_[2]) + params_[3]) * (b - a);
            return -params_[0] / w *
                       (std::cos(w * b + params_[2]) - std::cos(w * a + params_[2])) +
                   params_[3] * (b - a);
        }
        case CurveKind::TabulatedSpline:
            return quad::integrate_composite([this](double t) { return value(t); }, a, b, 32);
    }
    return 0.0;
}

std::string CurveFn::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case CurveKind::Constant: os << "constant(" << params_[0] << ")"; break;
        case CurveKind::Linear: os << "linear(" << params_[0] << " + " << params_[1] << "*t)"; break;
        case CurveKind::Exponential:
            os << "exponential(" << params_[0] << "*exp(" << params_[1] << "*t) + " << params_[2] << ")";
            break;
        case CurveKind::Sinusoid:
            os << "sinusoid(" << params_[0] << "*sin(" << params_[1] << "*t + " << params_[2]
               << ") + " << params_[3] << ")";
            break;
        case CurveKind::TabulatedSpline:
            os << "spline(" << knots_.size() << " knots on [" << knots_.front() << ", "
               << knots_.back() << "])";
            break;
    }
    return os.str();
}

}  // namespace dbarrier
