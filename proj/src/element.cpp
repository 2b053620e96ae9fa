#include "tdnns/element.hpp"

namespace tdnns {

const std::vector<ShapeValues>& ShapeCache::volume(const ReferenceBasis& basis, const TetRule& rule) {
    auto& t = tables_[{&basis, &rule, -1}];
    if (t.empty()) {
        t.reserve(rule.size());
        for (const auto& p : rule.points)
            t.push_back(basis.evaluate(p));
    }
    return t;
}

const std::vector<ShapeValues>& ShapeCache::face(const ReferenceBasis& basis, const TriRule& rule, int face) {
    auto& t = tables_[{&basis, &rule, face}];
    if (t.empty()) {
        t.reserve(rule.size());
        for (const auto& p : rule.points)
            t.push_back(basis.evaluate(basis.face_point(face, p[0], p[1])));
    }
    return t;
}

std::vector<FaceQuadPoint> face_points(const ReferenceBasis& basis, const ElementTransform& xf, int face,
                                       const TriRule& rule) {
    std::vector<FaceQuadPoint> out;
    out.reserve(rule.size());
    // the parameter triangle has area 1/2
    const double scale = 2.0 * face_area(xf, face);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec3 r = basis.face_point(face, rule.points[q][0], rule.points[q][1]);
        out.push_back({r, xf.map(r), rule.weights[q] * scale});
    }
    return out;
}

Eigen::VectorXd gather(std::span<const int> dofs, const Eigen::VectorXd& coeffs) {
    Eigen::VectorXd local(static_cast<Eigen::Index>(dofs.size()));
    for (std::size_t i = 0; i < dofs.size(); ++i)
        local[static_cast<Eigen::Index>(i)] = coeffs[dofs[i]];
    return local;
}

Eigen::VectorXd evaluate_fe(const ReferenceBasis& basis, const ElementTransform& xf, std::span<const int> dofs,
                            const Eigen::VectorXd& coeffs, const Vec3& ref) {
    const PhysicalShapes ps = push_shapes(basis.evaluate(ref), basis.space(), xf);
    return ps.value * gather(dofs, coeffs);
}

} // namespace tdnns
