#include "tdnns/transform.hpp"

namespace tdnns {

PushedScalar push_w(double value, const Vec3& ref_gradient, const ElementTransform& xf) {
    return {value, xf.inverse_transpose * ref_gradient};
}

PushedVector push_v(const Vec3& value, const Mat3& ref_jacobian, const ElementTransform& xf) {
    PushedVector out;
    out.value = xf.inverse_transpose * value;
    out.jacobian = xf.inverse_transpose * ref_jacobian * xf.inverse;
    out.strain = sym(out.jacobian);
    // affine: curl v = F curl_ref / J
    out.curl = xf.jacobian * curl_from_jacobian(ref_jacobian) / xf.det;
    return out;
}

PushedTensor push_sigma(const SymTensor3& value, const ElementTransform& xf) {
    const Mat3 m = xf.jacobian * value.to_matrix() * xf.jacobian.transpose() / (xf.det * xf.det);
    return {SymTensor3::from_matrix(m)};
}

Vec3 pull_v(const Vec3& value, const ElementTransform& xf) { return xf.jacobian.transpose() * value; }

SymTensor3 pull_sigma(const SymTensor3& value, const ElementTransform& xf) {
    const Mat3 m = xf.det * xf.det * xf.inverse * value.to_matrix() * xf.inverse_transpose;
    return SymTensor3::from_matrix(m);
}

Eigen::Matrix<double, 6, 6> sigma_push_matrix(const ElementTransform& xf) {
    Eigen::Matrix<double, 6, 6> t;
    for (int c = 0; c < 6; ++c) {
        const SymTensor3 out = push_sigma(SymTensor3::unit(c), xf).value;
        for (int r = 0; r < 6; ++r)
            t(r, c) = out[r];
    }
    return t;
}

Mat3 PhysicalShapes::jacobian(int j) const {
    Mat3 m;
    if (value.rows() == 1) {
        const auto h = hessian.col(j);
        m << h[0], h[5], h[4],
             h[5], h[1], h[3],
             h[4], h[3], h[2];
        return m;
    }
    for (int l = 0; l < 3; ++l)
        m.col(l) = deriv[static_cast<std::size_t>(l)].col(j);
    return m;
}

SymTensor3 PhysicalShapes::tensor(int j) const {
    const auto c = value.col(j);
    return {c[0], c[1], c[2], c[3], c[4], c[5]};
}

PhysicalShapes push_shapes(const ShapeValues& ref, Space space, const ElementTransform& xf) {
    PhysicalShapes out;
    const Mat3& finv = xf.inverse;
    switch (space) {
    case Space::Sigma:
        out.value = sigma_push_matrix(xf) * ref.value;
        break;
    case Space::V:
        out.value = xf.inverse_transpose * ref.value;
        for (int l = 0; l < 3; ++l) {
            Eigen::MatrixXd acc = ref.deriv[0] * finv(0, l) + ref.deriv[1] * finv(1, l) + ref.deriv[2] * finv(2, l);
            out.deriv[static_cast<std::size_t>(l)] = xf.inverse_transpose * acc;
        }
        break;
    case Space::W: {
        out.value = ref.value;
        const Eigen::Index n = ref.value.cols();
        for (int l = 0; l < 3; ++l)
            out.deriv[static_cast<std::size_t>(l)] =
                ref.deriv[0] * finv(0, l) + ref.deriv[1] * finv(1, l) + ref.deriv[2] * finv(2, l);
        out.hessian.resize(6, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto h = ref.hessian.col(j);
            Mat3 hr;
            hr << h[0], h[5], h[4],
                  h[5], h[1], h[3],
                  h[4], h[3], h[2];
            const Mat3 hp = xf.inverse_transpose * hr * finv;
            out.hessian.col(j) << hp(0, 0), hp(1, 1), hp(2, 2), hp(1, 2), hp(0, 2), hp(0, 1);
        }
        break;
    }
    }
    return out;
}

} // namespace tdnns
