#pragma once

#include <vector>

#include "tdnns/linalg.hpp"

namespace tdnns {

/// Quadrature rule on a reference simplex. Points are stored in reference
/// cartesian coordinates; barycentric coordinates follow from them
/// (lambda_0 = 1 - sum of coordinates).
template <int Dim>
struct QuadRule {
    using Point = Eigen::Matrix<double, Dim, 1>;
    std::vector<Point> points;
    std::vector<double> weights;
    int degree = 0;

    std::size_t size() const { return points.size(); }

    Eigen::Matrix<double, Dim + 1, 1> barycentric(std::size_t q) const {
        Eigen::Matrix<double, Dim + 1, 1> l;
        l[0] = 1.0 - points[q].sum();
        l.template tail<Dim>() = points[q];
        return l;
    }
};

using TetRule = QuadRule<3>;
using TriRule = QuadRule<2>;
using LineRule = QuadRule<1>;

inline constexpr int kMaxQuadratureDegree = 12;

/// Gauss-Legendre rule on [0, 1] with n points (exact to degree 2n-1).
LineRule gauss_legendre(int n);

/// Collapsed (Duffy) Gauss products; exact for polynomials up to `degree`.
/// Rules are cached and shared.
const LineRule& line_rule(int degree);
const TriRule& tri_rule(int degree);
const TetRule& tet_rule(int degree);

} // namespace tdnns
