#include "tdnns/interpolation.hpp"

#include "tdnns/assembly.hpp"
#include "tdnns/transform.hpp"

namespace tdnns {

namespace {

using Pullback = std::function<Eigen::VectorXd(const ElementTransform&, const Vec3&)>;

Eigen::VectorXd interpolate(const Mesh& mesh, const DofMap& map, const Pullback& pull, int degree) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(map.size());
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const ElementTransform xf = element_transform(mesh, c);
        const ReferenceBasis& b = map.basis(c);
        const Eigen::VectorXd vals = b.apply_dofs([&](const Vec3& r) { return pull(xf, r); }, degree);
        const auto dofs = map.cell_dofs(c);
        for (std::size_t i = 0; i < dofs.size(); ++i)
            out[dofs[i]] = vals[static_cast<Eigen::Index>(i)];
    }
    return out;
}

} // namespace

Eigen::VectorXd interpolate_w(const Mesh& mesh, const DofMap& w, const ScalarField& f, int degree) {
    if (degree < 0)
        degree = data_quadrature_degree(w.order() - 1);
    return interpolate(
        mesh, w,
        [&](const ElementTransform& xf, const Vec3& r) {
            Eigen::VectorXd v(1);
            v[0] = f.value(xf.map(r));
            return v;
        },
        degree);
}

Eigen::VectorXd interpolate_v(const Mesh& mesh, const DofMap& v, const VectorField& f, int degree) {
    if (degree < 0)
        degree = data_quadrature_degree(v.order());
    return interpolate(
        mesh, v,
        [&](const ElementTransform& xf, const Vec3& r) -> Eigen::VectorXd { return pull_v(f.value(xf.map(r)), xf); },
        degree);
}

Eigen::VectorXd interpolate_sigma(const Mesh& mesh, const DofMap& sigma, const TensorField& f, int degree) {
    if (degree < 0)
        degree = data_quadrature_degree(sigma.order());
    return interpolate(
        mesh, sigma,
        [&](const ElementTransform& xf, const Vec3& r) {
            const SymTensor3 t = pull_sigma(f.value(xf.map(r)), xf);
            Eigen::VectorXd v(6);
            for (int i = 0; i < 6; ++i)
                v[i] = t[i];
            return v;
        },
        degree);
}

} // namespace tdnns
