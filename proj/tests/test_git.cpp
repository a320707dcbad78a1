#include "dbarrier/git.hpp"
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

const GradientPair& eigen_g() {
    static const GradientPair g = solve_gradients(eigen_p(), TimeGrid::uniform(1.0, 256));
    return g;
}

const HeatStripProblem& trace_p() {
    static const HeatStripProblem p = moving_trace_problem();
    return p;
}

const GradientPair& trace_g() {
    static const GradientPair g = solve_gradients(trace_p(), TimeGrid::uniform(0.5, 256));
    return g;
}

double trace_psi_exact(double t) {
    return -M_PI * std::exp(-M_PI * M_PI * t) * std::cos(M_PI * 0.1 * t);
}
double trace_phi_exact(double t) {
    return M_PI * std::exp(-M_PI * M_PI * t) * std::cos(M_PI * (1.0 + 0.05 * t));
}

}  // namespace

TEST_CASE("eigenfunction march reproduces the exact boundary gradients") {
    const auto& g = eigen_g();
    double err = 0.0;
    for (int i = 0; i <= g.grid.steps(); ++i) {
        const double t = g.grid.nodes[i];
        err = std::max(err, std::abs(g.psi[i] + M_PI * std::exp(-M_PI * M_PI * t)));
        err = std::max(err, std::abs(g.phi[i] + M_PI * std::exp(-M_PI * M_PI * t)));
    }
    CHECK(err < 1e-6);
}

TEST_CASE("constant solution solves to identically zero gradients") {
    const HeatStripProblem p = constant_problem(0.7);
    const auto g = solve_gradients(p, TimeGrid::uniform(1.0, 64));
    for (int i = 0; i <= 64; ++i) {
        CHECK(std::abs(g.psi[i]) < 1e-13);
        CHECK(std::abs(g.phi[i]) < 1e-13);
    }
}

TEST_CASE("moving-strip march converges to the trace-problem gradients") {
    const double T = 0.5;
    double prev_err = 0.0;
    std::vector<double> errs;
    for (int N : {64, 128, 256}) {
        const auto g = solve_gradients(trace_p(), TimeGrid::uniform(T, N));
        double err = 0.0;
        for (int i = N / 8; i <= N; ++i) {
            const double t = g.grid.nodes[i];
            err = std::max(err, std::abs(g.psi[i] - trace_psi_exact(t)));
            err = std::max(err, std::abs(g.phi[i] - trace_phi_exact(t)));
        }
        errs.push_back(err);
        prev_err = err;
    }
    (void)prev_err;
    CHECK(errs[2] < 2e-4);
    CHECK(errs[0] / errs[1] >= 1.8);
    CHECK(errs[1] / errs[2] >= 1.8);
}

TEST_CASE("price_theta reproduces the eigenfunction solution") {
    const double v = price_theta(eigen_p(), eigen_g(), 0.1, 0.5);
    CHECK(std::abs(v - eigen_exact(0.1, 0.5)) < 1e-6);
    CHECK(v == doctest::Approx(0.372708).epsilon(3e-6));
}

TEST_CASE("price at the boundary rows returns the rebate directly") {
    const auto& p = trace_p();
    const auto& g = trace_g();
    CHECK(price_theta(p, g, 0.3, p.y(0.3)) == p.fm(0.3));
    CHECK(price_theta(p, g, 0.3, p.z(0.3)) == p.fp(0.3));
    CHECK(price_images(p, g, 0.3, p.z(0.3)) == p.fp(0.3));
}

TEST_CASE("theta and image representations agree on interior lattices") {
    for (const bool use_trace : {false, true}) {
        const auto& p = use_trace ? trace_p() : eigen_p();
        const auto& g = use_trace ? trace_g() : eigen_g();
        const double T = p.horizon;
        double dmax = 0.0;
        for (int i = 1; i <= 10; ++i) {
            const double tau = T * i / 11;
            for (int j = 1; j <= 10; ++j) {
                const double x = p.y(tau) + p.width(tau) * j / 11;
                dmax = std::max(dmax,
                                std::abs(price_theta(p, g, tau, x) - price_images(p, g, tau, x)));
            }
        }
        CHECK(dmax < 1e-8);
    }
}

TEST_CASE("trace problem prices match the exact solution") {
    const auto& p = trace_p();
    const auto& g = trace_g();
    double err = 0.0;
    for (int i = 1; i <= 6; ++i) {
        const double tau = p.horizon * i / 7;
        for (int j = 1; j <= 6; ++j) {
            const double x = p.y(tau) + p.width(tau) * j / 7;
            err = std::max(err, std::abs(price_theta(p, g, tau, x) - eigen_exact(tau, x)));
        }
    }
    CHECK(err < 2e-5);
}

TEST_CASE("small-time image evaluation is exact with few terms") {
    const double tau = 0.02;
    const double v = price_images(eigen_p(), eigen_g(), tau, 0.5);
    CHECK(std::abs(v - eigen_exact(tau, 0.5)) < 1e-8);

    // audit the per-call term count in this regime
    int max_terms = 0;
    for (double s : {0.0, 0.005, 0.015, 0.0199}) {
        KernelQuery q;
        q.tau = tau;
        q.s = s;
        q.xi = 0.3;
        q.x = 0.5;
        q.lower = &eigen_p().lower;
        q.upper = &eigen_p().upper;
        EvalStats st{};
        upsilon_sum_derivs(q, &st);
        max_terms = std::max(max_terms, st.terms);
    }
    CHECK(max_terms <= 7);
}

TEST_CASE("image representation continued to the boundary gives the rebate") {
    const auto& p = trace_p();
    const auto& g = trace_g();
    for (double tau : {0.1, 0.3, 0.45}) {
        CHECK(std::abs(price_images_boundary(p, g, tau, Side::Lower) - p.fm(tau)) < 1e-6);
        CHECK(std::abs(price_images_boundary(p, g, tau, Side::Upper) - p.fp(tau)) < 1e-6);
    }
}

TEST_CASE("near-boundary interior prices approach the rebates") {
    const auto& p = trace_p();
    const auto& g = trace_g();
    const double tau = 0.25, l = p.width(tau);
    CHECK(std::abs(price_images(p, g, tau, p.y(tau) + l / 100) - p.fm(tau)) < 5e-3);
    CHECK(std::abs(price_images(p, g, tau, p.z(tau) - l / 100) - p.fp(tau)) < 5e-3);
}

TEST_CASE("initial consistency at vanishing time") {
    const auto& p = eigen_p();
    const auto& g = eigen_g();
    double err = 0.0;
    for (int j = 1; j < 20; ++j) {
        const double x = j / 20.0;
        err = std::max(err, std::abs(price_theta(p, g, 1e-4, x) - p.u0(x)));
    }
    CHECK(err < 1e-2);
}

TEST_CASE("fourier coefficients of the eigenfunction isolate the first mode") {
    const double tau = 0.3;
    const auto A = fourier_coefficients(eigen_p(), eigen_g(), tau, 8);
    CHECK(std::abs(A[0] - std::exp(-M_PI * M_PI * tau)) < 1e-8);
    for (int n = 2; n <= 8; ++n) CHECK(std::abs(A[n - 1]) < 1e-8);
}

TEST_CASE("fourier coefficients of the constant problem vanish") {
    const HeatStripProblem p = constant_problem(1.3);
    const auto g = solve_gradients(p, TimeGrid::uniform(1.0, 64));
    const auto A = fourier_coefficients(p, g, 0.5, 6);
    for (double a : A) CHECK(std::abs(a) < 1e-10);
}

TEST_CASE("series reconstruction matches price_theta in the interior") {
    const auto& p = trace_p();
    const auto& g = trace_g();
    const double tau = 0.3;
    const auto A = fourier_coefficients(p, g, tau, 64);
    const auto h = homogenize(p);
    const double l = p.width(tau), y = p.y(tau);
    for (double f : {0.2, 0.5, 0.8}) {
        const double x = y + f * l;
        double u = 0.0;
        for (int n = 1; n <= 64; ++n) u += A[n - 1] * std::sin(M_PI * n * (x - y) / l);
        const double U = u + h.A(tau) + h.B(tau) * x;
        CHECK(std::abs(U - price_theta(p, g, tau, x)) < 1e-6);
    }
}

TEST_CASE("residue identity holds at real spectral points") {
    // The gentle wide-strip window keeps the gradient-interpolant bias of the
    // march below the identity tolerance.
    const HeatStripProblem p = wide_trace_problem();
    const auto g = solve_gradients(p, TimeGrid::uniform(p.horizon, 256));
    for (double sp : {0.7, -1.3, 1.9}) {
        const auto [lhs, rhs] = residue_identity(p, g, 0.3, sp, 64);
        CHECK(std::abs(lhs - rhs) < 1e-6 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("lebesgue-stieltjes assembly agrees with the default path") {
    GitSolveOptions ls;
    ls.lebesgue_stieltjes = true;
    const auto g_ls = solve_gradients(trace_p(), TimeGrid::uniform(0.5, 256), ls);
    const auto& g = trace_g();
    double dmax = 0.0, err = 0.0;
    for (int i = 32; i <= 256; ++i) {
        dmax = std::max(dmax, std::abs(g_ls.psi[i] - g.psi[i]));
        dmax = std::max(dmax, std::abs(g_ls.phi[i] - g.phi[i]));
        err = std::max(err, std::abs(g_ls.psi[i] - trace_psi_exact(g_ls.grid.nodes[i])));
    }
    CHECK(dmax < 1e-3);
    CHECK(err < 1e-3);
}

TEST_CASE("price preconditions") {
    const auto& p = eigen_p();
    const auto& g = eigen_g();
    CHECK_THROWS_AS(price_theta(p, g, 0.1, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(price_theta(p, g, -0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(price_theta(p, g, 1.5, 0.5), std::invalid_argument);
}
