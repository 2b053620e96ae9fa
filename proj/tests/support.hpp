#pragma once

#include <algorithm>
#include <map>
#include <random>

#include "tdnns/mesh.hpp"

namespace testing {

using tdnns::BoundaryTag;
using tdnns::Mesh;
using tdnns::Vec3;

/// Tags every boundary face (faces used by exactly one cell) via `tag_of`.
template <class TagFn>
Mesh make_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> cells, TagFn tag_of) {
    std::map<std::array<int, 3>, int> count;
    for (const auto& c : cells)
        for (const auto& lf : tdnns::kLocalFaces) {
            std::array<int, 3> f = {c[lf[0]], c[lf[1]], c[lf[2]]};
            std::sort(f.begin(), f.end());
            ++count[f];
        }
    std::vector<tdnns::TaggedFace> tagged;
    for (const auto& [f, n] : count)
        if (n == 1)
            tagged.push_back({f, tag_of(f)});
    return Mesh(std::move(vertices), std::move(cells), tagged);
}

inline Mesh make_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> cells) {
    return make_mesh(std::move(vertices), std::move(cells), [](const auto&) { return BoundaryTag::Dirichlet; });
}

/// Reorders a cell so its signed volume is positive.
inline std::array<int, 4> oriented(const std::vector<Vec3>& v, std::array<int, 4> c) {
    const double vol = (v[c[1]] - v[c[0]]).cross(v[c[2]] - v[c[0]]).dot(v[c[3]] - v[c[0]]);
    if (vol < 0)
        std::swap(c[2], c[3]);
    return c;
}

/// Two skewed tetrahedra sharing one face, with scrambled global numbering
/// so the cells see different local rank patterns.
inline Mesh two_cell_mesh(unsigned variant = 0) {
    std::vector<Vec3> pts = {Vec3(0.1, -0.05, 0.0), Vec3(1.2, 0.1, -0.1), Vec3(0.2, 1.1, 0.05),
                             Vec3(0.0, 0.15, 0.9), Vec3(0.9, 0.8, 0.95)};
    std::array<int, 5> perm = {0, 1, 2, 3, 4};
    std::mt19937 rng(variant);
    if (variant > 0)
        std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Vec3> v(5);
    for (int i = 0; i < 5; ++i)
        v[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = pts[static_cast<std::size_t>(i)];
    std::vector<std::array<int, 4>> cells = {oriented(v, {perm[0], perm[1], perm[2], perm[3]}),
                                             oriented(v, {perm[1], perm[2], perm[3], perm[4]})};
    return make_mesh(v, cells);
}

inline Mesh reference_tet_mesh(double scale = 1.0) {
    std::vector<Vec3> v = {Vec3(0, 0, 0), Vec3(scale, 0, 0), Vec3(0, scale, 0), Vec3(0, 0, scale)};
    return make_mesh(v, {{0, 1, 2, 3}});
}

inline Eigen::VectorXd random_vector(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i)
        x[i] = d(rng);
    return x;
}

inline Vec3 random_point_in_reference(std::mt19937& rng) {
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (;;) {
        Vec3 p(d(rng), d(rng), d(rng));
        if (p.sum() < 1.0)
            return p;
    }
}

} // namespace testing

#include "tdnns/dofmap.hpp"
#include "tdnns/element.hpp"
#include "tdnns/fields.hpp"

namespace testing {

/// First cell containing x (tolerant on faces) and the reference point.
inline std::pair<int, Vec3> locate(const Mesh& m, const Vec3& x) {
    for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
        const Vec3 r = tdnns::element_transform(m, c).map_back(x);
        if (r.minCoeff() >= -1e-10 && r.sum() <= 1.0 + 1e-10)
            return {c, r};
    }
    throw std::runtime_error("point outside mesh");
}

/// Discrete functions wrapped as analytic fields (values only).
inline tdnns::TensorField as_tensor_field(const Mesh& m, const tdnns::DofMap& d, const Eigen::VectorXd& coeffs) {
    return {[&m, &d, coeffs](const Vec3& x) {
        const auto [c, r] = locate(m, x);
        const Eigen::VectorXd e = tdnns::evaluate_fe(d.basis(c), tdnns::element_transform(m, c), d.cell_dofs(c), coeffs, r);
        return tdnns::SymTensor3(e[0], e[1], e[2], e[3], e[4], e[5]);
    }};
}

inline tdnns::VectorField as_vector_field(const Mesh& m, const tdnns::DofMap& d, const Eigen::VectorXd& coeffs) {
    return {[&m, &d, coeffs](const Vec3& x) {
                const auto [c, r] = locate(m, x);
                return Vec3(tdnns::evaluate_fe(d.basis(c), tdnns::element_transform(m, c), d.cell_dofs(c), coeffs, r));
            },
            nullptr};
}

inline tdnns::ScalarField as_scalar_field(const Mesh& m, const tdnns::DofMap& d, const Eigen::VectorXd& coeffs) {
    return {[&m, &d, coeffs](const Vec3& x) {
                const auto [c, r] = locate(m, x);
                return tdnns::evaluate_fe(d.basis(c), tdnns::element_transform(m, c), d.cell_dofs(c), coeffs, r)[0];
            },
            nullptr};
}

} // namespace testing
