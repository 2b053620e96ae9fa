#pragma once

#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "tdnns/mesh.hpp"
#include "tdnns/quadrature.hpp"
#include "tdnns/reference.hpp"
#include "tdnns/transform.hpp"

namespace tdnns {

/// Caches reference shape tables per (basis, rule, face). Not thread-safe;
/// keep one per element loop.
class ShapeCache {
public:
    const std::vector<ShapeValues>& volume(const ReferenceBasis& basis, const TetRule& rule);
    /// Tables at the points of `rule` mapped onto local face `face` with the
    /// basis' rank-ordered face parametrization.
    const std::vector<ShapeValues>& face(const ReferenceBasis& basis, const TriRule& rule, int face);

private:
    std::map<std::tuple<const void*, const void*, int>, std::vector<ShapeValues>> tables_;
};

struct FaceQuadPoint {
    Vec3 ref;
    Vec3 x;
    double weight; ///< includes the surface measure
};

/// Quadrature points of a cell face in the rank-ordered parametrization, so
/// both cells sharing the face produce the same physical points.
std::vector<FaceQuadPoint> face_points(const ReferenceBasis& basis, const ElementTransform& xf, int face,
                                       const TriRule& rule);

/// Physical area of a local face.
inline double face_area(const ElementTransform& xf, int face) { return xf.face_scale[face] * ref::face_area(face); }

/// Value of a finite element function at a reference point of one cell.
Eigen::VectorXd evaluate_fe(const ReferenceBasis& basis, const ElementTransform& xf,
                            std::span<const int> dofs, const Eigen::VectorXd& coeffs, const Vec3& ref);

/// Gathers the local coefficient vector of a cell.
Eigen::VectorXd gather(std::span<const int> dofs, const Eigen::VectorXd& coeffs);

} // namespace tdnns
