#include "tdnns/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace tdnns {

namespace {

double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i)
        r *= x;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}

// d^k/dx^k of x^p
double dpow(double x, int p, int k) {
    if (k > p)
        return 0.0;
    double c = 1.0;
    for (int i = 0; i < k; ++i)
        c *= (p - i);
    return c * ipow(x, p - k);
}

} // namespace

Monomials::Monomials(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim < 1 || dim > 3 || degree < 0)
        throw std::invalid_argument("Monomials: invalid dim/degree");
    for (int total = 0; total <= degree; ++total) {
        if (dim == 1) {
            exps_.push_back({total, 0, 0});
            continue;
        }
        for (int a = total; a >= 0; --a) {
            if (dim == 2) {
                exps_.push_back({a, total - a, 0});
                continue;
            }
            for (int b = total - a; b >= 0; --b)
                exps_.push_back({a, b, total - a - b});
        }
    }
}

Eigen::VectorXd Monomials::values(const Vec3& x) const {
    Eigen::VectorXd v(size());
    for (int i = 0; i < size(); ++i) {
        const auto& e = exps_[static_cast<std::size_t>(i)];
        v[i] = ipow(x[0], e[0]) * (dim_ > 1 ? ipow(x[1], e[1]) : 1.0) * (dim_ > 2 ? ipow(x[2], e[2]) : 1.0);
    }
    return v;
}

Eigen::MatrixX3d Monomials::gradients(const Vec3& x) const {
    Eigen::MatrixX3d g = Eigen::MatrixX3d::Zero(size(), 3);
    for (int i = 0; i < size(); ++i) {
        const auto& e = exps_[static_cast<std::size_t>(i)];
        for (int d = 0; d < dim_; ++d) {
            double prod = 1.0;
            for (int j = 0; j < dim_; ++j)
                prod *= dpow(x[j], e[static_cast<std::size_t>(j)], j == d ? 1 : 0);
            g(i, d) = prod;
        }
    }
    return g;
}

Eigen::Matrix<double, Eigen::Dynamic, 6> Monomials::hessians(const Vec3& x) const {
    static constexpr int pairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};
    Eigen::Matrix<double, Eigen::Dynamic, 6> h = Eigen::Matrix<double, Eigen::Dynamic, 6>::Zero(size(), 6);
    for (int i = 0; i < size(); ++i) {
        const auto& e = exps_[static_cast<std::size_t>(i)];
        for (int p = 0; p < 6; ++p) {
            const int a = pairs[p][0];
            const int b = pairs[p][1];
            if (a >= dim_ || b >= dim_)
                continue;
            double prod = 1.0;
            for (int j = 0; j < dim_; ++j) {
                const int order = (j == a) + (j == b);
                prod *= dpow(x[j], e[static_cast<std::size_t>(j)], order);
            }
            h(i, p) = prod;
        }
    }
    return h;
}

double simplex_monomial_integral(int dim, const std::array<int, 3>& e) {
    return factorial(e[0]) * factorial(e[1]) * factorial(e[2]) / factorial(e[0] + e[1] + e[2] + dim);
}

int poly_dim(int d, int p) {
    switch (d) {
    case 1: return p + 1;
    case 2: return (p + 1) * (p + 2) / 2;
    case 3: return (p + 1) * (p + 2) * (p + 3) / 6;
    default: throw std::invalid_argument("poly_dim: dimension must be 1..3");
    }
}

OrthonormalBasis::OrthonormalBasis(int dim, int degree) : mono_(dim, degree) {
    const int n = mono_.size();
    Eigen::MatrixXd gram(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& a = mono_.exponents(i);
            const auto& b = mono_.exponents(j);
            gram(i, j) = simplex_monomial_integral(dim, {a[0] + b[0], a[1] + b[1], a[2] + b[2]});
        }
    // gram = L L^T; columns of L^{-T} are orthonormal coefficient vectors
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    Eigen::MatrixXd lower = llt.matrixL();
    coeffs_ = lower.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
}

Polynomial3 Polynomial3::constant(double c) { return monomial(0, 0, 0, c); }

Polynomial3 Polynomial3::monomial(int a, int b, int c, double coef) {
    Polynomial3 p;
    if (coef != 0.0)
        p.terms_[{a, b, c}] = coef;
    return p;
}

double Polynomial3::operator()(const Vec3& x) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_)
        s += c * ipow(x[0], e[0]) * ipow(x[1], e[1]) * ipow(x[2], e[2]);
    return s;
}

Polynomial3 Polynomial3::derivative(int var) const {
    Polynomial3 d;
    for (const auto& [e, c] : terms_) {
        if (e[static_cast<std::size_t>(var)] == 0)
            continue;
        auto f = e;
        f[static_cast<std::size_t>(var)] -= 1;
        d.terms_[f] += c * e[static_cast<std::size_t>(var)];
    }
    return d;
}

int Polynomial3::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_)
        d = std::max(d, e[0] + e[1] + e[2]);
    return d;
}

Polynomial3& Polynomial3::operator+=(const Polynomial3& o) {
    for (const auto& [e, c] : o.terms_)
        terms_[e] += c;
    return *this;
}

Polynomial3& Polynomial3::operator*=(double s) {
    for (auto& [e, c] : terms_)
        c *= s;
    return *this;
}

Polynomial3 operator*(const Polynomial3& a, const Polynomial3& b) {
    Polynomial3 r;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_)
            r.terms_[{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}] += ca * cb;
    return r;
}

} // namespace tdnns
