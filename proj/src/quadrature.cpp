#include "tdnns/quadrature.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tdnns {

LineRule gauss_legendre(int n) {
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: n must be positive");
    LineRule rule;
    rule.degree = 2 * n - 1;
    rule.points.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // Newton on P_n starting from the Chebyshev-like guess
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1, 1] -> [0, 1]
        rule.points[static_cast<std::size_t>(i)][0] = 0.5 * (1.0 - x);
        rule.weights[static_cast<std::size_t>(i)] = 0.5 * w;
    }
    return rule;
}

namespace {

void check_degree(int degree, const char* who) {
    if (degree < 0 || degree > kMaxQuadratureDegree)
        throw std::invalid_argument(std::string(who) + ": unsupported degree " + std::to_string(degree));
}

LineRule make_line(int degree) {
    LineRule r = gauss_legendre(degree / 2 + 1);
    r.degree = degree;
    return r;
}

// Duffy map (u, v) -> (u, v (1 - u)), jacobian (1 - u).
TriRule make_tri(int degree) {
    const int n = (degree + 2) / 2 + 1;
    const LineRule g = gauss_legendre(n);
    TriRule r;
    r.degree = degree;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double u = g.points[i][0];
            const double v = g.points[j][0];
            r.points.emplace_back(u, v * (1.0 - u));
            r.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - u));
        }
    return r;
}

// (u, v, w) -> (u, v (1 - u), w (1 - u)(1 - v)), jacobian (1 - u)^2 (1 - v).
TetRule make_tet(int degree) {
    const int n = (degree + 3) / 2 + 1;
    const LineRule g = gauss_legendre(n);
    TetRule r;
    r.degree = degree;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
            for (std::size_t k = 0; k < g.size(); ++k) {
                const double u = g.points[i][0];
                const double v = g.points[j][0];
                const double w = g.points[k][0];
                r.points.emplace_back(u, v * (1.0 - u), w * (1.0 - u) * (1.0 - v));
                r.weights.push_back(g.weights[i] * g.weights[j] * g.weights[k] * (1.0 - u) * (1.0 - u) * (1.0 - v));
            }
    return r;
}

template <class Rule, class Make>
const Rule& cached(int degree, Make make, const char* who) {
    check_degree(degree, who);
    static std::once_flag flags[kMaxQuadratureDegree + 1];
    static Rule rules[kMaxQuadratureDegree + 1];
    std::call_once(flags[degree], [&] { rules[degree] = make(degree); });
    return rules[degree];
}

} // namespace

const LineRule& line_rule(int degree) { return cached<LineRule>(degree, make_line, "line_rule"); }
const TriRule& tri_rule(int degree) { return cached<TriRule>(degree, make_tri, "tri_rule"); }
const TetRule& tet_rule(int degree) { return cached<TetRule>(degree, make_tet, "tet_rule"); }

} // namespace tdnns
