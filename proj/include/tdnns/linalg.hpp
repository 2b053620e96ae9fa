#pragma once

#include <array>

#include <Eigen/Dense>

namespace tdnns {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Symmetric 3x3 tensor stored by its six independent entries in the order
/// (11, 22, 33, 23, 13, 12).
class SymTensor3 {
public:
    SymTensor3() { v_.fill(0.0); }
    SymTensor3(double s11, double s22, double s33, double s23, double s13, double s12)
        : v_{s11, s22, s33, s23, s13, s12} {}

    /// Symmetric part of m.
    static SymTensor3 from_matrix(const Mat3& m) {
        return {m(0, 0), m(1, 1), m(2, 2), 0.5 * (m(1, 2) + m(2, 1)),
                0.5 * (m(0, 2) + m(2, 0)), 0.5 * (m(0, 1) + m(1, 0))};
    }

    Mat3 to_matrix() const {
        Mat3 m;
        m << v_[0], v_[5], v_[4],
             v_[5], v_[1], v_[3],
             v_[4], v_[3], v_[2];
        return m;
    }

    double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return v_[static_cast<std::size_t>(i)]; }

    double operator()(int i, int j) const { return v_[index(i, j)]; }

    /// Frobenius product A : B.
    double frobenius(const SymTensor3& o) const {
        return v_[0] * o.v_[0] + v_[1] * o.v_[1] + v_[2] * o.v_[2]
             + 2.0 * (v_[3] * o.v_[3] + v_[4] * o.v_[4] + v_[5] * o.v_[5]);
    }

    /// n^T S n
    double normal_normal(const Vec3& n) const { return n.dot(to_matrix() * n); }

    double trace() const { return v_[0] + v_[1] + v_[2]; }

    bool operator==(const SymTensor3&) const = default;

    /// Unit symmetric tensor associated with storage slot c (off-diagonal
    /// slots carry a 1 in both mirrored positions).
    static SymTensor3 unit(int c) {
        SymTensor3 s;
        s[c] = 1.0;
        return s;
    }

    static std::size_t index(int i, int j) {
        static constexpr std::size_t map[3][3] = {{0, 5, 4}, {5, 1, 3}, {4, 3, 2}};
        return map[i][j];
    }

private:
    std::array<double, 6> v_;
};

inline Vec3 curl_from_jacobian(const Mat3& jac) {
    // jac(i, j) = d v_i / d x_j
    return {jac(2, 1) - jac(1, 2), jac(0, 2) - jac(2, 0), jac(1, 0) - jac(0, 1)};
}

inline Mat3 sym(const Mat3& m) { return 0.5 * (m + m.transpose()); }

} // namespace tdnns
