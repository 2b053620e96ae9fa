#pragma once

#include "tdnns/dofmap.hpp"
#include "tdnns/fields.hpp"

namespace tdnns {

/// Canonical interpolants: each cell pulls the field back to the reference
/// element and applies the DOF functionals of its basis. Shared DOFs receive
/// the same value from every incident cell. Moments of non-polynomial fields
/// use quadrature of degree `degree` (-1 selects 2k + 4, with k the stress
/// order of the family the space belongs to).
Eigen::VectorXd interpolate_w(const Mesh& mesh, const DofMap& w, const ScalarField& f, int degree = -1);
Eigen::VectorXd interpolate_v(const Mesh& mesh, const DofMap& v, const VectorField& f, int degree = -1);
Eigen::VectorXd interpolate_sigma(const Mesh& mesh, const DofMap& sigma, const TensorField& f, int degree = -1);

} // namespace tdnns
