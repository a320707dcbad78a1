#include "dbarrier/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace dbarrier::quad {

namespace {

struct GLRule {
    std::vector<double> x, w;
};

// Newton iteration on Legendre polynomials; standard construction.
GLRule build_gl(int n) {
    GLRule r;
    r.x.resize(n);
    r.w.resize(n);
    const double eps = 1e-15;
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < eps) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    return r;
}

const GLRule& gl_rule(int order) {
    static std::map<int, GLRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_gl(order)).first;
    return it->second;
}

}  // namespace

const std::vector<double>& gl_nodes(int order) { return gl_rule(order).x; }
const std::vector<double>& gl_weights(int order) { return gl_rule(order).w; }

double integrate_gl(const std::function<double(double)>& f, double a, double b, int order) {
    const GLRule& r = gl_rule(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < order; ++i) sum += r.w[i] * f(mid + half * r.x[i]);
    return sum * half;
}

double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, int order) {
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        sum += integrate_gl(f, pa, pb, order);
    }
    return sum;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        std::vector<double> breakpoints, int order) {
    if (!(a < b)) return 0.0;
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    std::vector<double> pts;
    for (double p : breakpoints) {
        if (p < a || p > b) continue;
        if (!pts.empty() && p - pts.back() < 1e-14 * (1.0 + std::abs(p))) continue;
        pts.push_back(p);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) sum += integrate_gl(f, pts[i], pts[i + 1], order);
    return sum;
}

std::vector<double> gaussian_breakpoints(double a, double b, const std::vector<double>& centers,
                                         double dt, const std::vector<double>& kinks) {
    std::vector<double> bp(kinks);
    const double w = std::sqrt(std::max(dt, 0.0));
    static const double bands[] = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
    for (double c : centers) {
        if (w <= 0.0) continue;
        bp.push_back(c);
        for (double k : bands) {
            bp.push_back(c - k * w);
            bp.push_back(c + k * w);
        }
    }
    std::erase_if(bp, [&](double p) { return p <= a || p >= b; });
    return bp;
}

SqrtTimeRule sqrt_rule_from_grid(const std::vector<double>& t_nodes, double tau) {
    SqrtTimeRule r;
    r.tau = tau;
    for (auto it = t_nodes.rbegin(); it != t_nodes.rend(); ++it) {
        if (*it > tau + 1e-15 * (1.0 + tau)) continue;
        const double d = std::max(tau - *it, 0.0);
        r.v.push_back(std::sqrt(d));
        r.s.push_back(*it);
    }
    if (r.v.size() < 2) throw std::invalid_argument("sqrt_rule_from_grid: need >= 2 nodes <= tau");
    return r;
}

SqrtTimeRule sqrt_rule_uniform(double tau, int n) {
    if (n < 1 || !(tau > 0.0)) throw std::invalid_argument("sqrt_rule_uniform: bad arguments");
    SqrtTimeRule r;
    r.tau = tau;
    const double vmax = std::sqrt(tau);
    r.v.resize(n + 1);
    r.s.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        r.v[i] = vmax * i / n;
        r.s[i] = tau - r.v[i] * r.v[i];
    }
    r.s[0] = tau;
    r.s[n] = 0.0;
    return r;
}

double trapezoid_v(const SqrtTimeRule& rule, const std::function<double(double, double)>& h) {
    double sum = 0.0;
    double prev = h(rule.v[0], rule.s[0]);
    for (std::size_t i = 1; i < rule.v.size(); ++i) {
        const double cur = h(rule.v[i], rule.s[i]);
        sum += 0.5 * (rule.v[i] - rule.v[i - 1]) * (prev + cur);
        prev = cur;
    }
    return sum;
}

}  // namespace dbarrier::quad
