#include <doctest.h>

#include <cmath>
#include <random>

#include "tdnns/polynomial.hpp"
#include "tdnns/quadrature.hpp"

using namespace tdnns;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Closed-form integral of the barycentric monomial prod lambda_i^{a_i} over
// the reference simplex of dimension `dim`: prod a_i! * dim! / (sum a + dim)!
// times the simplex measure 1/dim!.
double barycentric_integral(const std::vector<int>& a, int dim) {
    double num = 1.0;
    int total = 0;
    for (int e : a) {
        num *= factorial(e);
        total += e;
    }
    return num / factorial(total + dim);
}

template <int Dim>
double integrate_barycentric(const QuadRule<Dim>& rule, const std::vector<int>& a) {
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto l = rule.barycentric(q);
        double v = rule.weights[q];
        for (int i = 0; i <= Dim; ++i)
            v *= std::pow(l[i], a[static_cast<std::size_t>(i)]);
        s += v;
    }
    return s;
}

} // namespace

TEST_CASE("reference measures and worked examples") {
    const TetRule& t = tet_rule(2);
    const TriRule& f = tri_rule(2);
    double vol = 0.0, lam1 = 0.0, lam12 = 0.0;
    for (std::size_t q = 0; q < t.size(); ++q) {
        vol += t.weights[q];
        lam1 += t.weights[q] * t.points[q][0];
        lam12 += t.weights[q] * t.points[q][0] * t.points[q][1];
    }
    CHECK(vol == doctest::Approx(1.0 / 6).epsilon(1e-14));
    CHECK(lam1 == doctest::Approx(1.0 / 24).epsilon(1e-14));
    CHECK(lam12 == doctest::Approx(1.0 / 120).epsilon(1e-14));

    double area = 0.0, m1 = 0.0, m11 = 0.0;
    for (std::size_t q = 0; q < f.size(); ++q) {
        area += f.weights[q];
        m1 += f.weights[q] * f.points[q][0];
        m11 += f.weights[q] * f.points[q][0] * f.points[q][0];
    }
    CHECK(area == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m1 == doctest::Approx(1.0 / 6).epsilon(1e-14));
    CHECK(m11 == doctest::Approx(1.0 / 12).epsilon(1e-14));
}

TEST_CASE("every supported degree integrates barycentric monomials exactly") {
    for (int deg = 0; deg <= kMaxQuadratureDegree; ++deg) {
        CAPTURE(deg);
        const TetRule& t = tet_rule(deg);
        const TriRule& f = tri_rule(deg);
        const LineRule& l = line_rule(deg);
        CHECK(t.degree >= deg);
        for (int a = 0; a <= deg; ++a)
            for (int b = 0; a + b <= deg; ++b) {
                for (int c = 0; a + b + c <= deg; ++c) {
                    const int d = deg - a - b - c;
                    const double exact = barycentric_integral({a, b, c, d}, 3);
                    CHECK(std::abs(integrate_barycentric(t, {a, b, c, d}) - exact) <= 1e-12 * exact);
                }
                const int c = deg - a - b;
                const double exact = barycentric_integral({a, b, c}, 2);
                CHECK(std::abs(integrate_barycentric(f, {a, b, c}) - exact) <= 1e-12 * exact);
            }
        for (int a = 0; a <= deg; ++a) {
            const double exact = barycentric_integral({a, deg - a}, 1);
            CHECK(std::abs(integrate_barycentric(l, {a, deg - a}) - exact) <= 1e-12 * exact);
        }
    }
}

TEST_CASE("random polynomials of degree <= 8 match the closed-form oracle") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int deg = 1; deg <= 8; ++deg) {
        const Monomials mono(3, deg);
        const TetRule& t = tet_rule(deg);
        for (int trial = 0; trial < 5; ++trial) {
            Eigen::VectorXd c(mono.size());
            for (int i = 0; i < mono.size(); ++i)
                c[i] = coef(rng);
            double exact = 0.0;
            for (int i = 0; i < mono.size(); ++i)
                exact += c[i] * simplex_monomial_integral(3, mono.exponents(i));
            double quad = 0.0;
            for (std::size_t q = 0; q < t.size(); ++q)
                quad += t.weights[q] * mono.values(t.points[q]).dot(c);
            CHECK(std::abs(quad - exact) <= 1e-12 * std::max(1e-3, std::abs(exact)));
        }
    }
}

TEST_CASE("unsupported degrees are rejected") {
    CHECK_THROWS_AS(tet_rule(-1), std::invalid_argument);
    CHECK_THROWS_AS(tet_rule(kMaxQuadratureDegree + 1), std::invalid_argument);
    CHECK_THROWS_AS(tri_rule(kMaxQuadratureDegree + 1), std::invalid_argument);
    CHECK_THROWS_AS(line_rule(-2), std::invalid_argument);
}

TEST_CASE("rules are cached") {
    CHECK(&tet_rule(4) == &tet_rule(4));
    CHECK(&tri_rule(3) == &tri_rule(3));
}

TEST_CASE("gauss_legendre on [0,1]") {
    const LineRule r = gauss_legendre(4);
    double s = 0.0, m7 = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) {
        s += r.weights[q];
        m7 += r.weights[q] * std::pow(r.points[q][0], 7);
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m7 == doctest::Approx(1.0 / 8).epsilon(1e-14));
}
