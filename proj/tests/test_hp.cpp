#include "dbarrier/hp.hpp"
#include "dbarrier/quadrature.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace dbarrier;
using namespace testutil;

namespace {

const HeatStripProblem& eigen_p() {
    static const HeatStripProblem p = eigenfunction_problem();
    return p;
}

const PotentialPair& eigen_d() {
    static const PotentialPair d = solve_densities(eigen_p(), TimeGrid::uniform(1.0, 256));
    return d;
}

const HeatStripProblem& trace_p() {
    static const HeatStripProblem p = moving_trace_problem();
    return p;
}

const PotentialPair& trace_d() {
    static const PotentialPair d = solve_densities(trace_p(), TimeGrid::uniform(0.5, 256));
    return d;
}

}  // namespace

TEST_CASE("boundary data: zero initial profile passes the rebates through") {
    HeatStripProblem p = trace_p();
    p.initial = Payoff::constant(0.0);
    const auto bd = boundary_data(p, 0.2);
    CHECK(bd.phi1 == doctest::Approx(p.fm(0.2)).epsilon(1e-14));
    CHECK(bd.psi1 == doctest::Approx(p.fp(0.2)).epsilon(1e-14));
}

TEST_CASE("boundary data: constant profile loses half its mass at an edge") {
    const HeatStripProblem p = constant_problem(0.8);
    const auto bd = boundary_data(p, 0.01);
    CHECK(std::abs(bd.phi1 - (0.8 - 0.4)) < 1e-4);
    CHECK(std::abs(bd.psi1 - (0.8 - 0.4)) < 1e-4);
}

TEST_CASE("boundary data small-time limit matches refined quadrature") {
    const HeatStripProblem& p = eigen_p();
    const double tau = 1e-6;
    const auto bd = boundary_data(p, tau);
    // independent high-resolution oracle on the substituted variable
    const double w = 2.0 * std::sqrt(tau);
    double conv = 0.0;
    const int K = 400000;
    const double hi = std::min(1.0, 40.0 * w);
    for (int i = 0; i < K; ++i) {
        const double xi = hi * (i + 0.5) / K;
        conv += p.u0(xi) * std::exp(-xi * xi / (4.0 * tau)) * (hi / K);
    }
    conv /= 2.0 * std::sqrt(M_PI * tau);
    CHECK(std::abs(bd.phi1 - (0.0 - conv)) < 1e-6);
}

TEST_CASE("zero data gives zero densities") {
    HeatStripProblem p = trace_p();
    p.initial = Payoff::constant(0.0);
    p.rebate_lower = CurveFn::constant(0.0);
    p.rebate_upper = CurveFn::constant(0.0);
    const auto d = solve_densities(p, TimeGrid::uniform(0.5, 64));
    for (int i = 0; i <= 64; ++i) {
        CHECK(std::abs(d.omega[i]) < 1e-13);
        CHECK(std::abs(d.theta[i]) < 1e-13);
    }
    CHECK(std::abs(price_hp(p, d, 0.25, p.y(0.25) + 0.4 * p.width(0.25))) < 1e-13);
}

TEST_CASE("price_hp reproduces the eigenfunction solution") {
    const double v = price_hp(eigen_p(), eigen_d(), 0.1, 0.5);
    CHECK(std::abs(v - eigen_exact(0.1, 0.5)) < 1e-5);
    double err = 0.0;
    for (int i = 1; i <= 8; ++i)
        for (int j = 1; j <= 8; ++j) {
            const double tau = i / 9.0, x = j / 9.0;
            err = std::max(err, std::abs(price_hp(eigen_p(), eigen_d(), tau, x) -
                                         eigen_exact(tau, x)));
        }
    CHECK(err < 1e-5);
}

TEST_CASE("small-time heat-potential prices are sharp") {
    // the exponents of the potential kernels scale with 1/tau, so a short
    // march over [0, tau] resolves the price to near machine level
    const double tau = 0.02;
    const HeatStripProblem& p = eigen_p();
    const auto d = solve_densities(p, TimeGrid::graded(tau, 192));
    HpPriceOptions fine;
    fine.time_nodes = 8192;
    CHECK(std::abs(price_hp(p, d, tau, 0.5, fine) - eigen_exact(tau, 0.5)) < 1e-8);
}

TEST_CASE("constant solution is preserved to machine accuracy") {
    const HeatStripProblem p = constant_problem(0.7);
    const auto d = solve_densities(p, TimeGrid::uniform(1.0, 64));
    for (double tau : {0.2, 0.6, 1.0})
        CHECK(std::abs(price_hp(p, d, tau, 0.3) - 0.7) < 1e-12);
}

TEST_CASE("hp and git prices agree on the trace problem") {
    const auto& p = trace_p();
    const TimeGrid grid = TimeGrid::uniform(0.5, 512);
    const auto g = solve_gradients(p, grid);
    const auto d = solve_densities(p, grid);
    double dmax = 0.0;
    for (int i = 1; i <= 5; ++i) {
        const double tau = p.horizon * i / 6;
        for (int j = 1; j <= 5; ++j) {
            const double x = p.y(tau) + p.width(tau) * j / 6;
            dmax = std::max(dmax, std::abs(price_hp(p, d, tau, x) -
                                           price_theta(p, g, tau, x)));
        }
    }
    CHECK(dmax < 1e-6);
}

TEST_CASE("hp price converges under march refinement") {
    const auto& p = trace_p();
    std::vector<double> errs;
    for (int N : {64, 128, 256}) {
        const auto d = solve_densities(p, TimeGrid::uniform(0.5, N));
        double err = 0.0;
        for (int i = 1; i <= 4; ++i) {
            const double tau = p.horizon * i / 5;
            for (int j = 1; j <= 4; ++j) {
                const double x = p.y(tau) + p.width(tau) * j / 5;
                err = std::max(err, std::abs(price_hp(p, d, tau, x) - eigen_exact(tau, x)));
            }
        }
        errs.push_back(err);
    }
    CHECK(errs[0] / errs[1] >= 1.8);
    CHECK(errs[1] / errs[2] >= 1.8);
}

TEST_CASE("jump relation: unit density on a flat curve") {
    const auto jc = jump_check(CurveFn::constant(1.0), CurveFn::constant(0.0), 0.5);
    CHECK(std::abs(jc.jump - 1.0) < 1e-4);
    CHECK(std::abs(jc.interior_measured - jc.interior_analytic) < 1e-4);
    CHECK(std::abs(jc.exterior_measured - jc.exterior_analytic) < 1e-4);
}

TEST_CASE("jump relation: zero density has no jump") {
    const auto jc = jump_check(CurveFn::constant(0.0), CurveFn::linear(0.0, 0.3), 0.4);
    CHECK(std::abs(jc.interior_measured) < 1e-10);
    CHECK(std::abs(jc.exterior_measured) < 1e-10);
}

TEST_CASE("jump relation: linear density on a moving curve") {
    const auto jc = jump_check(CurveFn::linear(0.0, 1.0), CurveFn::linear(0.0, 0.1), 0.7);
    CHECK(std::abs(jc.jump - 0.7) < 1e-3);
}

TEST_CASE("jump relation on random C1 density/curve pairs") {
    for (int rep = 0; rep < 10; ++rep) {
        const CurveFn den = CurveFn::sinusoid(uniform(0.3, 1.2), uniform(0.5, 3.0),
                                              uniform(0.0, 3.0), uniform(-0.5, 0.5));
        const CurveFn crv = CurveFn::sinusoid(uniform(0.05, 0.25), uniform(0.5, 2.0),
                                              uniform(0.0, 3.0), uniform(-0.3, 0.3));
        const double tau = uniform(0.3, 0.9);
        const auto jc = jump_check(den, crv, tau);
        CHECK(std::abs(jc.jump - den.value(tau)) < 1e-3);
    }
}

TEST_CASE("gradient limit: zero density") {
    CHECK(gradient_limit(CurveFn::constant(0.0), CurveFn::constant(0.0), 0.5,
                         Approach::FromAbove) == doctest::Approx(0.0));
}

TEST_CASE("gradient limit: unit density on a flat curve") {
    // closed form: psi(tau) = -1 / (2 sqrt(pi tau)); cross-check against the
    // epsilon-extrapolated direct x-derivative of the dipole integral
    const double tau = 0.5;
    const double got = gradient_limit(CurveFn::constant(1.0), CurveFn::constant(0.0), tau,
                                      Approach::FromAbove);
    const double expect = -1.0 / (2.0 * std::sqrt(M_PI * tau));
    CHECK(std::abs(got - expect) < 1e-10);

    auto q_of = [&](double x) {
        // dipole in the q normalization, flat curve: q = Erfc(x / 2 sqrt(tau)) / 2
        return 0.5 * std::erfc(x / (2.0 * std::sqrt(tau)));
    };
    // epsilon-extrapolated direct differentiation oracle
    const double h = 1e-6;
    double es[3] = {1e-2, 5e-3, 2.5e-3}, dq[3];
    for (int k = 0; k < 3; ++k) dq[k] = (q_of(es[k] + h) - q_of(es[k] - h)) / (2 * h);
    const double l0 = (0 - es[1]) * (0 - es[2]) / ((es[0] - es[1]) * (es[0] - es[2]));
    const double l1 = (0 - es[0]) * (0 - es[2]) / ((es[1] - es[0]) * (es[1] - es[2]));
    const double l2 = (0 - es[0]) * (0 - es[1]) / ((es[2] - es[0]) * (es[2] - es[1]));
    CHECK(std::abs(got - (l0 * dq[0] + l1 * dq[1] + l2 * dq[2])) < 1e-4);
}

TEST_CASE("gradient limit: side flip carries the curve-velocity term") {
    const CurveFn den = CurveFn::sinusoid(0.8, 1.5, 0.3, 0.2);
    const CurveFn crv = CurveFn::linear(0.1, 0.25);
    const double tau = 0.6, sigma = 1.0;
    const double above = gradient_limit(den, crv, tau, Approach::FromAbove, sigma);
    const double below = gradient_limit(den, crv, tau, Approach::FromBelow, sigma);
    const double expect = -den.value(tau) * crv.derivative(tau) / std::pow(sigma, 4);
    CHECK(above - below == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("gradient limit at general sigma against direct differencing") {
    // sigma = 1/sqrt(2) exercises the general-constant derivation
    const double sigma = 1.0 / std::sqrt(2.0), tau = 0.4;
    const CurveFn den = CurveFn::constant(1.0);
    const CurveFn crv = CurveFn::constant(0.0);
    const double got = gradient_limit(den, crv, tau, Approach::FromAbove, sigma);
    // flat-curve closed form scales by 1/sigma^3 in the q normalization
    const double expect = -1.0 / (2.0 * sigma * sigma * sigma * std::sqrt(M_PI * tau));
    CHECK(std::abs(got - expect) < 1e-9);
}

TEST_CASE("the two free-term forms of the gradient limit agree") {
    // Both sides of the exact-differential identity, integrated to tau - eps.
    for (int rep = 0; rep < 8; ++rep) {
        const CurveFn crv = CurveFn::sinusoid(uniform(0.05, 0.3), uniform(0.5, 2.5),
                                              uniform(0.0, 3.0), uniform(-0.2, 0.2));
        const double tau = uniform(0.2, 0.9);
        const double eps = uniform(0.02, 0.2) * tau;
        const double sigma = 1.0;

        auto X = [&](double k) {
            const double dy = crv.value(tau) - crv.value(k);
            return -dy * dy / (4.0 * sigma * sigma * (tau - k));
        };
        // integral form
        const double lhs = quad::integrate_composite(
            [&](double k) {
                const double dy = crv.value(tau) - crv.value(k);
                const double dt = tau - k;
                return std::exp(X(k)) / (2.0 * std::sqrt(dt * dt * dt)) *
                       (1.0 + crv.derivative(k) * dy / (sigma * sigma) -
                        dy * dy / (2.0 * sigma * sigma * dt));
            },
            0.0, tau - eps, 2000, 16);
        // exact-differential form
        const double rhs = (std::exp(X(tau - eps)) - 1.0) / std::sqrt(eps) -
                           (std::exp(X(0.0)) - 1.0) / std::sqrt(tau) +
                           (1.0 / std::sqrt(eps) - 1.0 / std::sqrt(tau));
        CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("hp_to_git recovers the transform-route gradients") {
    // graded nodes resolve the square-root opening of the densities
    const auto& p = eigen_p();
    const TimeGrid grid = TimeGrid::graded(1.0, 256);
    const auto g_hp = hp_to_git(p, solve_densities(p, grid));
    const auto g = solve_gradients(p, grid);
    double err = 0.0;
    for (int i = 1; i <= 256; ++i) {
        err = std::max(err, std::abs(g_hp.psi[i] - g.psi[i]));
        err = std::max(err, std::abs(g_hp.phi[i] - g.phi[i]));
    }
    CHECK(err < 1e-4);
}

TEST_CASE("zero-data problem maps to a zero gradient pair") {
    HeatStripProblem p = trace_p();
    p.initial = Payoff::constant(0.0);
    p.rebate_lower = CurveFn::constant(0.0);
    p.rebate_upper = CurveFn::constant(0.0);
    const auto d = solve_densities(p, TimeGrid::uniform(0.5, 64));
    const auto g = hp_to_git(p, d);
    for (int i = 0; i <= 64; ++i) {
        CHECK(std::abs(g.psi[i]) < 1e-12);
        CHECK(std::abs(g.phi[i]) < 1e-12);
    }
}

TEST_CASE("bridge round trip: hp densities price through the image route") {
    const auto& p = trace_p();
    const PotentialPair d_graded = solve_densities(p, TimeGrid::graded(0.5, 256));
    const auto g_hp = hp_to_git(p, d_graded);
    double dmax = 0.0;
    for (int i = 1; i <= 4; ++i) {
        const double tau = p.horizon * i / 5;
        for (int j = 1; j <= 4; ++j) {
            const double x = p.y(tau) + p.width(tau) * j / 5;
            dmax = std::max(dmax, std::abs(price_images(p, g_hp, tau, x) -
                                           price_hp(p, d_graded, tau, x)));
        }
    }
    CHECK(dmax < 1e-5);
}

TEST_CASE("hp price attains the rebates near the boundary") {
    const auto& p = trace_p();
    const double tau = 0.3, l = p.width(tau);
    CHECK(std::abs(price_hp(p, trace_d(), tau, p.y(tau) + l / 200) - p.fm(tau)) < 5e-3);
    CHECK(std::abs(price_hp(p, trace_d(), tau, p.z(tau) - l / 200) - p.fp(tau)) < 5e-3);
}
