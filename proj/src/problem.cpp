#include "dbarrier/problem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dbarrier {

bool ValidationReport::has_warning(const std::string& code) const {
    for (const auto& v : items)
        if (v.code == code) return true;
    return false;
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& v : items)
        os << (v.severity == Violation::Severity::Error ? "error: " : "warning: ") << v.code
           << ": " << v.message << "\n";
    return os.str();
}

ValidationReport validate(const HeatStripProblem& p, int samples, double corner_tol) {
    ValidationReport rep;
    auto err = [&](std::string code, std::string msg) {
        rep.items.push_back({Violation::Severity::Error, std::move(code), std::move(msg)});
    };
    auto warn = [&](std::string code, std::string msg) {
        rep.items.push_back({Violation::Severity::Warning, std::move(code), std::move(msg)});
    };

    if (!(p.horizon > 0.0) || !std::isfinite(p.horizon)) {
        err("bad-horizon", "horizon must be positive and finite");
        return rep;
    }

    bool curves_ok = true;
    double collapse_at = -1.0;
    for (int i = 0; i < samples; ++i) {
        const double t = p.horizon * i / (samples - 1);
        double y, z, fmv, fpv, ypv, zpv;
        try {
            y = p.y(t);
            z = p.z(t);
            fmv = p.fm(t);
            fpv = p.fp(t);
            ypv = p.yp(t);
            zpv = p.zp(t);
        } catch (const std::exception& e) {
            err("curve-eval", std::string("curve evaluation failed at t=") + std::to_string(t) +
                                  ": " + e.what());
            curves_ok = false;
            break;
        }
        if (!std::isfinite(y) || !std::isfinite(z) || !std::isfinite(fmv) ||
            !std::isfinite(fpv) || !std::isfinite(ypv) || !std::isfinite(zpv)) {
            err("non-finite-curve", "non-finite curve value at t=" + std::to_string(t));
            curves_ok = false;
            break;
        }
        if (!(z > y) && collapse_at < 0.0) collapse_at = t;
    }

    if (curves_ok && collapse_at >= 0.0) {
        // refine the first crossing of z - y by bisection
        double lo = 0.0, hi = collapse_at;
        if (hi > 0.0 && p.width(0.0) > 0.0) {
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (p.width(mid) > 0.0 ? lo : hi) = mid;
            }
            collapse_at = hi;
        }
        std::ostringstream os;
        os << "strip collapses at t=" << collapse_at;
        err("strip-collapse", os.str());
    }

    if (curves_ok && collapse_at < 0.0) {
        const double y0 = p.y(0.0), z0 = p.z(0.0);
        double u_lo, u_hi;
        bool init_ok = true;
        try {
            u_lo = p.u0(y0);
            u_hi = p.u0(z0);
            for (int i = 0; i < samples; ++i) {
                const double x = y0 + (z0 - y0) * i / (samples - 1);
                if (!std::isfinite(p.u0(x))) {
                    err("non-finite-initial", "non-finite U0 at x=" + std::to_string(x));
                    init_ok = false;
                    break;
                }
            }
        } catch (const std::exception& e) {
            err("initial-eval", std::string("U0 evaluation failed: ") + e.what());
            init_ok = false;
            u_lo = u_hi = 0.0;
        }
        if (init_ok) {
            if (std::abs(u_lo - p.fm(0.0)) > corner_tol) {
                std::ostringstream os;
                os << "U0(y(0))=" << u_lo << " != f-(0)=" << p.fm(0.0) << " at the lower corner";
                warn("corner-mismatch", os.str());
            }
            if (std::abs(u_hi - p.fp(0.0)) > corner_tol) {
                std::ostringstream os;
                os << "U0(z(0))=" << u_hi << " != f+(0)=" << p.fp(0.0) << " at the upper corner";
                warn("corner-mismatch", os.str());
            }
        }
    }
    return rep;
}

void require_valid(const HeatStripProblem& p) {
    const ValidationReport rep = validate(p);
    if (!rep.ok()) throw std::invalid_argument("invalid problem:\n" + rep.to_string());
}

double HomogenizedProblem::A(double t) const {
    return -(base.fp(t) * base.y(t) - base.fm(t) * base.z(t)) / base.width(t);
}

double HomogenizedProblem::B(double t) const {
    return (base.fp(t) - base.fm(t)) / base.width(t);
}

double HomogenizedProblem::Ap(double t) const {
    const double y = base.y(t), z = base.z(t), yp = base.yp(t), zp = base.zp(t);
    const double fm = base.fm(t), fp = base.fp(t), fmp = base.fmp(t), fpp = base.fpp(t);
    const double l = z - y, lp = zp - yp;
    const double num = fp * y - fm * z;
    const double nump = fpp * y + fp * yp - fmp * z - fm * zp;
    return -(nump * l - num * lp) / (l * l);
}

double HomogenizedProblem::Bp(double t) const {
    const double l = base.width(t), lp = base.zp(t) - base.yp(t);
    const double num = base.fp(t) - base.fm(t);
    const double nump = base.fpp(t) - base.fmp(t);
    return (nump * l - num * lp) / (l * l);
}

HomogenizedProblem homogenize(const HeatStripProblem& p) {
    require_valid(p);
    return HomogenizedProblem{p};
}

}  // namespace dbarrier
