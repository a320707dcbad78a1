#include "dbarrier/reduction.hpp"
#include "dbarrier/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace dbarrier {

namespace {

void check_spec(const MarketSpec& s) {
    if (s.model == ModelKind::HeatNative)
        throw std::invalid_argument("reduce_model: heat-native takes a HeatStripProblem");
    if (!(s.maturity > 0.0)) throw std::invalid_argument("reduce_model: maturity must be positive");
    for (int i = 0; i <= 200; ++i) {
        const double t = s.maturity * i / 200;
        if (!(s.sigma.value(t) > 0.0))
            throw std::invalid_argument("reduce_model: sigma must be positive on [0, T]");
        if (!(s.barrier_lo.value(t) < s.barrier_hi.value(t)))
            throw std::invalid_argument("reduce_model: barriers must satisfy L < H");
        if (s.model == ModelKind::BsTimeDep && !(s.barrier_lo.value(t) > 0.0))
            throw std::invalid_argument("reduce_model: bs barriers must be positive");
    }
}

bool is_const(const CurveFn& c) { return c.kind() == CurveKind::Constant; }

CurveFn sample_spline(const std::function<double(double)>& f, double a, double b, int knots) {
    std::vector<double> xs(knots), vs(knots);
    for (int i = 0; i < knots; ++i) {
        xs[i] = a + (b - a) * i / (knots - 1);
        vs[i] = f(xs[i]);
    }
    return CurveFn(std::move(xs), std::move(vs));
}

}  // namespace

ReductionMap ReductionMap::identity() {
    ReductionMap m;
    m.model_ = ModelKind::HeatNative;
    return m;
}

ReductionMap ReductionMap::from_spec(const MarketSpec& spec) {
    check_spec(spec);
    ReductionMap m;
    m.model_ = spec.model;
    m.spec_ = spec;
    m.maturity_ = spec.maturity;
    m.tau_end_ = m.tau_of_t(0.0);
    return m;
}

double ReductionMap::ou_A(double t) const { return std::exp(-spec_->kappa.integral(t, maturity_)); }

double ReductionMap::ou_b(double t) const {
    return quad::integrate_composite(
        [&](double s) {
            return std::exp(-spec_->kappa.integral(s, maturity_)) * spec_->kappa.value(s) *
                   spec_->theta_bar.value(s);
        },
        t, maturity_, 16);
}

double ReductionMap::tau_of_t(double t) const {
    switch (model_) {
        case ModelKind::HeatNative: return t;
        case ModelKind::BsTimeDep:
            return 0.5 * quad::integrate_composite(
                             [&](double u) {
                                 const double s = spec_->sigma.value(u);
                                 return s * s;
                             },
                             t, maturity_, 16);
        case ModelKind::OuTimeDep:
            return 0.5 * quad::integrate_composite(
                             [&](double u) {
                                 const double a = ou_A(u), s = spec_->sigma.value(u);
                                 return a * a * s * s;
                             },
                             t, maturity_, 16);
    }
    return t;
}

double ReductionMap::t_of_tau(double tau) const {
    if (model_ == ModelKind::HeatNative) return tau;
    if (tau < -1e-14 || tau > tau_end_ * (1.0 + 1e-12))
        throw std::invalid_argument("t_of_tau: tau out of range");
    double lo = 0.0, hi = maturity_;  // tau_of_t decreases from tau_end_ to 0
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (tau_of_t(mid) > tau ? lo : hi) = mid;
        if (hi - lo < 1e-15 * (1.0 + maturity_)) break;
    }
    return 0.5 * (lo + hi);
}

bool ReductionMap::inside_strip(double t, double S) const {
    if (model_ == ModelKind::HeatNative) return true;
    return S >= spec_->barrier_lo.value(t) && S <= spec_->barrier_hi.value(t);
}

double ReductionMap::x_of(double t, double S) const {
    switch (model_) {
        case ModelKind::HeatNative: return S;
        case ModelKind::BsTimeDep: {
            if (!(S > 0.0)) throw std::invalid_argument("x_of: S must be positive");
            const double drift = quad::integrate_composite(
                [&](double u) {
                    const double s = spec_->sigma.value(u);
                    return spec_->rate.value(u) - 0.5 * s * s;
                },
                t, maturity_, 16);
            return std::log(S) + drift;
        }
        case ModelKind::OuTimeDep: return ou_A(t) * S + ou_b(t);
    }
    return S;
}

double ReductionMap::S_of(double t, double x) const {
    switch (model_) {
        case ModelKind::HeatNative: return x;
        case ModelKind::BsTimeDep: return std::exp(x - (x_of(t, 1.0)));  // x_of(t,1) = drift
        case ModelKind::OuTimeDep: return (x - ou_b(t)) / ou_A(t);
    }
    return x;
}

double ReductionMap::discount(double t) const {
    if (model_ == ModelKind::HeatNative) return 1.0;
    return std::exp(-spec_->rate.integral(t, maturity_));
}

double ReductionMap::rate_at(double t) const {
    return model_ == ModelKind::HeatNative ? 0.0 : spec_->rate.value(t);
}

double ReductionMap::dxdS(double t, double S) const {
    switch (model_) {
        case ModelKind::HeatNative: return 1.0;
        case ModelKind::BsTimeDep: return 1.0 / S;
        case ModelKind::OuTimeDep: return ou_A(t);
    }
    return 1.0;
}

double ReductionMap::d2xdS2(double t, double S) const {
    (void)t;
    return model_ == ModelKind::BsTimeDep ? -1.0 / (S * S) : 0.0;
}

double ReductionMap::dtau_dt(double t) const {
    switch (model_) {
        case ModelKind::HeatNative: return 1.0;
        case ModelKind::BsTimeDep: {
            const double s = spec_->sigma.value(t);
            return -0.5 * s * s;
        }
        case ModelKind::OuTimeDep: {
            const double a = ou_A(t), s = spec_->sigma.value(t);
            return -0.5 * a * a * s * s;
        }
    }
    return 1.0;
}

double ReductionMap::dx_dt(double t, double S) const {
    switch (model_) {
        case ModelKind::HeatNative: return 0.0;
        case ModelKind::BsTimeDep: {
            const double s = spec_->sigma.value(t);
            return -(spec_->rate.value(t) - 0.5 * s * s);
        }
        case ModelKind::OuTimeDep:
            return spec_->kappa.value(t) * ou_A(t) * (S - spec_->theta_bar.value(t));
    }
    return 0.0;
}

Reduction reduce_model(const HeatStripProblem& heat_native) {
    require_valid(heat_native);
    return {heat_native, ReductionMap::identity()};
}

Reduction reduce_model(const MarketSpec& spec) {
    check_spec(spec);
    ReductionMap map = ReductionMap::from_spec(spec);
    const double tau_end = map.tau_end();

    HeatStripProblem p;
    p.horizon = tau_end;

    auto mapped_lower = [&](double tau) {
        const double t = map.t_of_tau(tau);
        return map.x_of(t, spec.barrier_lo.value(t));
    };
    auto mapped_upper = [&](double tau) {
        const double t = map.t_of_tau(tau);
        return map.x_of(t, spec.barrier_hi.value(t));
    };
    auto mapped_rebate = [&](const CurveFn& reb) {
        return [&map, reb](double tau) {
            const double t = map.t_of_tau(tau);
            return reb.value(t) / map.discount(t);
        };
    };

    const bool bs_closed = spec.model == ModelKind::BsTimeDep && is_const(spec.rate) &&
                           is_const(spec.sigma) && is_const(spec.barrier_lo) &&
                           is_const(spec.barrier_hi);
    if (bs_closed) {
        // constant coefficients: barriers are affine in tau in log coordinates
        const double r = spec.rate.value(0.0), sg = spec.sigma.value(0.0);
        const double slope = 2.0 * r / (sg * sg) - 1.0;
        p.lower = CurveFn::linear(std::log(spec.barrier_lo.value(0.0)), slope);
        p.upper = CurveFn::linear(std::log(spec.barrier_hi.value(0.0)), slope);
        auto reb = [&](const CurveFn& c) {
            if (is_const(c) && c.value(0.0) == 0.0) return CurveFn::constant(0.0);
            if (is_const(c))
                return CurveFn::exponential(c.value(0.0), 2.0 * r / (sg * sg), 0.0);
            return sample_spline(mapped_rebate(c), 0.0, tau_end, 513);
        };
        p.rebate_lower = reb(spec.rebate_lo);
        p.rebate_upper = reb(spec.rebate_hi);
    } else {
        p.lower = sample_spline(mapped_lower, 0.0, tau_end, 513);
        p.upper = sample_spline(mapped_upper, 0.0, tau_end, 513);
        p.rebate_lower = sample_spline(mapped_rebate(spec.rebate_lo), 0.0, tau_end, 513);
        p.rebate_upper = sample_spline(mapped_rebate(spec.rebate_hi), 0.0, tau_end, 513);
    }

    if (spec.model == ModelKind::BsTimeDep)
        p.initial = spec.is_put ? Payoff::exp_put(spec.strike) : Payoff::exp_call(spec.strike);
    else
        p.initial = spec.is_put ? Payoff::put(spec.strike) : Payoff::call(spec.strike);

    return {p, map};
}

MappedValue map_back(const ReductionMap& map, double heat_value, double dudx, double d2udx2,
                     double t, double S) {
    if (!map.inside_strip(t, S))
        throw std::invalid_argument("map_back: (t, S) outside the barrier corridor");
    const double D = map.discount(t);
    const double xs = map.dxdS(t, S), xss = map.d2xdS2(t, S);
    MappedValue v;
    v.price = D * heat_value;
    v.delta = D * dudx * xs;
    v.gamma = D * (d2udx2 * xs * xs + dudx * xss);
    return v;
}

}  // namespace dbarrier
