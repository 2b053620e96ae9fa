#pragma once

#include "tdnns/linalg.hpp"
#include "tdnns/mesh.hpp"
#include "tdnns/reference.hpp"

namespace tdnns {

struct PushedScalar {
    double value;
    Vec3 gradient;
};

struct PushedVector {
    Vec3 value;
    Mat3 jacobian; ///< d v_i / d x_j
    Mat3 strain;
    Vec3 curl;
};

struct PushedTensor {
    SymTensor3 value;
};

/// H^1 map: value unchanged, gradient F^{-T} grad_ref.
PushedScalar push_w(double value, const Vec3& ref_gradient, const ElementTransform& xf);

/// Covariant map v = F^{-T} v_ref; ref_jacobian(i, j) = d v_ref_i / d x_ref_j.
PushedVector push_v(const Vec3& value, const Mat3& ref_jacobian, const ElementTransform& xf);

/// Normal-normal trace preserving map tau = F tau_ref F^T / J^2.
PushedTensor push_sigma(const SymTensor3& value, const ElementTransform& xf);

/// Inverses of the value maps, for pulling physical fields back to the
/// reference element.
Vec3 pull_v(const Vec3& value, const ElementTransform& xf);
SymTensor3 pull_sigma(const SymTensor3& value, const ElementTransform& xf);

/// The stress map as a linear operator on symmetric-slot vectors.
Eigen::Matrix<double, 6, 6> sigma_push_matrix(const ElementTransform& xf);

/// All shape functions of a basis mapped to a physical cell. For V the
/// derivatives are the physical partials d v / d x_j; for W `hessian` holds
/// physical second derivatives in pair order (00, 11, 22, 12, 02, 01).
struct PhysicalShapes {
    Eigen::MatrixXd value;
    std::array<Eigen::MatrixXd, 3> deriv;
    Eigen::MatrixXd hessian;

    /// Physical jacobian d v_i / d x_l of V shape j, or the Hessian of W shape j.
    Mat3 jacobian(int j) const;
    SymTensor3 tensor(int j) const;
};

PhysicalShapes push_shapes(const ShapeValues& ref, Space space, const ElementTransform& xf);

} // namespace tdnns
