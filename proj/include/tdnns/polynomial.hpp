#pragma once

#include <array>
#include <map>
#include <vector>

#include "tdnns/linalg.hpp"

namespace tdnns {

/// All monomials x^a y^b z^c of total degree <= degree in `dim` variables
/// (unused exponents are zero), ordered by total degree.
class Monomials {
public:
    Monomials(int dim, int degree);

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    int size() const { return static_cast<int>(exps_.size()); }
    const std::array<int, 3>& exponents(int i) const { return exps_[static_cast<std::size_t>(i)]; }

    /// Values at a point (only the first dim() coordinates are read).
    Eigen::VectorXd values(const Vec3& x) const;
    /// Rows: monomials; columns: d/dx_j.
    Eigen::MatrixX3d gradients(const Vec3& x) const;
    /// Second derivatives d2/dx_i dx_j for the ordered pairs
    /// (00, 11, 22, 12, 02, 01).
    Eigen::Matrix<double, Eigen::Dynamic, 6> hessians(const Vec3& x) const;

private:
    int dim_;
    int degree_;
    std::vector<std::array<int, 3>> exps_;
};

/// Exact integral of a monomial over the reference simplex of dimension dim:
/// a! b! c! / (a + b + c + dim)!.
double simplex_monomial_integral(int dim, const std::array<int, 3>& exps);

/// Number of polynomials of degree <= p in d variables.
int poly_dim(int d, int p);

/// Basis of P^p on the reference simplex of dimension dim, orthonormal in L2.
class OrthonormalBasis {
public:
    OrthonormalBasis(int dim, int degree);

    int size() const { return mono_.size(); }
    int degree() const { return mono_.degree(); }
    Eigen::VectorXd values(const Vec3& x) const { return coeffs_.transpose() * mono_.values(x); }
    /// Column j: coefficients of basis polynomial j over the monomials.
    const Eigen::MatrixXd& coefficients() const { return coeffs_; }
    const Monomials& monomials() const { return mono_; }

private:
    Monomials mono_;
    Eigen::MatrixXd coeffs_;
};

/// Sparse trivariate polynomial with exact differentiation; used for
/// symbolic checks.
class Polynomial3 {
public:
    Polynomial3() = default;
    static Polynomial3 constant(double c);
    static Polynomial3 monomial(int a, int b, int c, double coef = 1.0);

    double operator()(const Vec3& x) const;
    Polynomial3 derivative(int var) const;
    int degree() const;

    Polynomial3& operator+=(const Polynomial3& o);
    Polynomial3& operator*=(double s);
    friend Polynomial3 operator+(Polynomial3 a, const Polynomial3& b) { return a += b; }
    friend Polynomial3 operator*(Polynomial3 a, double s) { return a *= s; }
    friend Polynomial3 operator*(const Polynomial3& a, const Polynomial3& b);

    const std::map<std::array<int, 3>, double>& terms() const { return terms_; }

private:
    std::map<std::array<int, 3>, double> terms_;
};

} // namespace tdnns
