#include "tdnns/reference.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>

#include "tdnns/mesh.hpp"
#include "tdnns/quadrature.hpp"

namespace tdnns {

const char* to_string(Space s) {
    switch (s) {
    case Space::Sigma: return "sigma";
    case Space::V: return "v";
    case Space::W: return "w";
    }
    return "?";
}

std::array<SymTensor3, 6> reference_tensors() {
    // (11, 22, 33, 23, 13, 12)
    return {SymTensor3(-6, 0, 0, 1, 1, 1), SymTensor3(0, -6, 0, 1, 1, 1), SymTensor3(0, 0, -6, 1, 1, 1),
            SymTensor3(0, 0, 0, 1, 1, 1), SymTensor3(0, 0, 0, 1, -1, 0), SymTensor3(0, 0, 0, 1, 0, -1)};
}

SymTensor3 face_tensor(int local_face) {
    const auto s = reference_tensors();
    return local_face == 0 ? s[3] : s[static_cast<std::size_t>(local_face - 1)];
}

SymTensor3 interior_tensor(int n) { return reference_tensors()[static_cast<std::size_t>(4 + n)]; }

Vec3 barycentric_gradient(int i) {
    switch (i) {
    case 0: return Vec3(-1, -1, -1);
    case 1: return Vec3(1, 0, 0);
    case 2: return Vec3(0, 1, 0);
    case 3: return Vec3(0, 0, 1);
    default: throw std::out_of_range("barycentric index");
    }
}

namespace {

int components(Space s) {
    switch (s) {
    case Space::Sigma: return 6;
    case Space::V: return 3;
    case Space::W: return 1;
    }
    return 0;
}

// Weights turning symmetric-slot values into n^T S n and S : T.
Eigen::Matrix<double, 6, 1> nn_weights(const Vec3& n) {
    Eigen::Matrix<double, 6, 1> w;
    w << n[0] * n[0], n[1] * n[1], n[2] * n[2], 2 * n[1] * n[2], 2 * n[0] * n[2], 2 * n[0] * n[1];
    return w;
}

Eigen::Matrix<double, 6, 1> frobenius_weights(const SymTensor3& s) {
    Eigen::Matrix<double, 6, 1> w;
    w << s[0], s[1], s[2], 2 * s[3], 2 * s[4], 2 * s[5];
    return w;
}

// Tangential test fields for face moments of the k = 2 displacement space,
// in face-parameter coordinates (s, t).
Eigen::Vector2d face_test_field(int m, double s, double t) {
    switch (m) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    default: return {s, t};
    }
}

} // namespace

ReferenceBasis::ReferenceBasis(Space space, int order, std::array<int, 4> ranks, WVariant variant)
    : space_(space), order_(order), ranks_(ranks), variant_(variant), ncomp_(components(space)),
      mono_(3, order) {
    const bool ok = space == Space::W ? (order == 2 || order == 3) : (order == 1 || order == 2);
    if (!ok)
        throw std::invalid_argument(std::string("unsupported order ") + std::to_string(order) + " for space " +
                                    to_string(space));
    std::array<int, 4> seen{};
    for (int r : ranks) {
        if (r < 0 || r > 3 || seen[static_cast<std::size_t>(r)]++)
            throw std::invalid_argument("ranks must be a permutation of 0..3");
    }
    build_dofs();

    const int nm = mono_.size();
    const int n = ncomp_ * nm;
    if (n != size())
        throw BasisError("DOF count " + std::to_string(size()) + " does not match space dimension " +
                         std::to_string(n));

    // Vandermonde: dof i applied to raw function (component c, monomial a)
    Sampler raw = [&](const Vec3& x) {
        Eigen::MatrixXd vals = Eigen::MatrixXd::Zero(ncomp_, n);
        const Eigen::VectorXd m = mono_.values(x);
        for (int c = 0; c < ncomp_; ++c)
            vals.block(c, c * nm, 1, nm) = m.transpose();
        return vals;
    };
    const Eigen::MatrixXd vdm = apply_dofs(raw, n, exact_degree());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(vdm);
    const auto& sv = svd.singularValues();
    condition_ = sv[n - 1] > 0.0 ? sv[0] / sv[n - 1] : std::numeric_limits<double>::infinity();
    if (!(condition_ < 1e12))
        throw BasisError(std::string("singular DOF-Vandermonde matrix for space ") + to_string(space) +
                         ", order " + std::to_string(order));
    coeffs_ = vdm.fullPivLu().inverse();
}

int ReferenceBasis::exact_degree() const { return 2 * order_; }

int ReferenceBasis::dofs_on(EntityKind kind) const {
    int c = 0;
    for (const auto& d : dofs_)
        c += d.kind == kind;
    return c;
}

std::array<int, 3> ReferenceBasis::face_vertices(int f) const {
    auto v = kLocalFaces[static_cast<std::size_t>(f)];
    std::sort(v.begin(), v.end(), [&](int a, int b) { return ranks_[a] < ranks_[b]; });
    return v;
}

std::array<int, 2> ReferenceBasis::edge_vertices(int e) const {
    auto v = kLocalEdges[static_cast<std::size_t>(e)];
    if (ranks_[v[0]] > ranks_[v[1]])
        std::swap(v[0], v[1]);
    return v;
}

Vec3 ReferenceBasis::face_point(int f, double s, double t) const {
    const auto v = face_vertices(f);
    const Vec3& a = ref::vertices[v[0]];
    return a + s * (ref::vertices[v[1]] - a) + t * (ref::vertices[v[2]] - a);
}

void ReferenceBasis::build_dofs() {
    const int k = order_;
    auto add = [&](EntityKind kind, int entity, int count) {
        for (int m = 0; m < count; ++m)
            dofs_.push_back({kind, entity, m});
    };
    switch (space_) {
    case Space::Sigma:
        for (int f = 0; f < 4; ++f)
            add(EntityKind::Face, f, poly_dim(2, k));
        add(EntityKind::Interior, 0, 4 * poly_dim(3, k - 1) + 2 * poly_dim(3, k));
        break;
    case Space::V:
        for (int e = 0; e < 6; ++e)
            add(EntityKind::Edge, e, k + 1);
        for (int f = 0; f < 4; ++f)
            add(EntityKind::Face, f, (k - 1) * (k + 1));
        break;
    case Space::W:
        for (int v = 0; v < 4; ++v)
            add(EntityKind::Vertex, v, 1);
        for (int e = 0; e < 6; ++e)
            add(EntityKind::Edge, e, k - 1);
        for (int f = 0; f < 4; ++f)
            add(EntityKind::Face, f, k >= 3 ? poly_dim(2, k - 3) : 0);
        break;
    }
}

Eigen::VectorXd ReferenceBasis::apply_dofs(const std::function<Eigen::VectorXd(const Vec3&)>& field,
                                           int quad_degree) const {
    Sampler s = [&](const Vec3& x) { return Eigen::MatrixXd(field(x)); };
    return apply_dofs(s, 1, quad_degree).col(0);
}

Eigen::MatrixXd ReferenceBasis::apply_dofs(const Sampler& field, int nfields, int quad_degree) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size(), nfields);
    const int k = order_;
    int row = 0;

    auto edge_param = [&](int e, double s) {
        const auto v = edge_vertices(e);
        return Vec3(ref::vertices[v[0]] + s * (ref::vertices[v[1]] - ref::vertices[v[0]]));
    };

    if (space_ == Space::Sigma) {
        const OrthonormalBasis q2(2, k);
        const TriRule& tri = tri_rule(quad_degree);
        for (int f = 0; f < 4; ++f) {
            const auto w = nn_weights(barycentric_gradient(f));
            for (std::size_t p = 0; p < tri.size(); ++p) {
                const double s = tri.points[p][0];
                const double t = tri.points[p][1];
                const Eigen::MatrixXd vals = field(face_point(f, s, t));
                const Eigen::RowVectorXd nn = w.transpose() * vals;
                const Eigen::VectorXd q = q2.values(Vec3(s, t, 0));
                for (int j = 0; j < q2.size(); ++j)
                    out.row(row + j) += tri.weights[p] * q[j] * nn;
            }
            row += q2.size();
        }
        const OrthonormalBasis qlow(3, k - 1);
        const OrthonormalBasis qfull(3, k);
        const TetRule& tet = tet_rule(quad_degree);
        for (std::size_t p = 0; p < tet.size(); ++p) {
            const Vec3 x = tet.points[p];
            const Eigen::MatrixXd vals = field(x);
            const Eigen::VectorXd pl = qlow.values(x);
            const Eigen::VectorXd pf = qfull.values(x);
            int r = row;
            for (int m = 0; m < 4; ++m) {
                const Eigen::RowVectorXd fr = frobenius_weights(face_tensor(m)).transpose() * vals;
                for (int i = 0; i < qlow.size(); ++i)
                    out.row(r++) += tet.weights[p] * pl[i] * fr;
            }
            for (int n = 0; n < 2; ++n) {
                const Eigen::RowVectorXd fr = frobenius_weights(interior_tensor(n)).transpose() * vals;
                for (int i = 0; i < qfull.size(); ++i)
                    out.row(r++) += tet.weights[p] * pf[i] * fr;
            }
        }
        return out;
    }

    if (space_ == Space::V) {
        const OrthonormalBasis q1(1, k);
        const LineRule& line = line_rule(quad_degree);
        for (int e = 0; e < 6; ++e) {
            const auto v = edge_vertices(e);
            const Vec3 t = ref::vertices[v[1]] - ref::vertices[v[0]];
            for (std::size_t p = 0; p < line.size(); ++p) {
                const double s = line.points[p][0];
                const Eigen::RowVectorXd tang = t.transpose() * field(edge_param(e, s));
                const Eigen::VectorXd q = q1.values(Vec3(s, 0, 0));
                for (int j = 0; j < q1.size(); ++j)
                    out.row(row + j) += line.weights[p] * q[j] * tang;
            }
            row += q1.size();
        }
        const int nface = (k - 1) * (k + 1);
        if (nface > 0) {
            const TriRule& tri = tri_rule(quad_degree);
            for (int f = 0; f < 4; ++f) {
                const auto v = face_vertices(f);
                const Vec3 e1 = ref::vertices[v[1]] - ref::vertices[v[0]];
                const Vec3 e2 = ref::vertices[v[2]] - ref::vertices[v[0]];
                for (std::size_t p = 0; p < tri.size(); ++p) {
                    const double s = tri.points[p][0];
                    const double t = tri.points[p][1];
                    const Eigen::MatrixXd vals = field(face_point(f, s, t));
                    for (int m = 0; m < nface; ++m) {
                        const Eigen::Vector2d q = face_test_field(m, s, t);
                        const Vec3 dir = q[0] * e1 + q[1] * e2;
                        out.row(row + m) += tri.weights[p] * (dir.transpose() * vals);
                    }
                }
                row += nface;
            }
        }
        return out;
    }

    // W
    for (int v = 0; v < 4; ++v)
        out.row(row++) = field(ref::vertices[v]);
    if (variant_ == WVariant::Nodal) {
        for (int e = 0; e < 6; ++e)
            for (int j = 1; j < k; ++j)
                out.row(row++) = field(edge_param(e, double(j) / k));
        if (k == 3)
            for (int f = 0; f < 4; ++f)
                out.row(row++) = field(face_point(f, 1.0 / 3.0, 1.0 / 3.0));
        return out;
    }
    const OrthonormalBasis q1(1, k - 2);
    const LineRule& line = line_rule(quad_degree);
    for (int e = 0; e < 6; ++e) {
        for (std::size_t p = 0; p < line.size(); ++p) {
            const double s = line.points[p][0];
            const Eigen::RowVectorXd val = field(edge_param(e, s));
            const Eigen::VectorXd q = q1.values(Vec3(s, 0, 0));
            for (int j = 0; j < q1.size(); ++j)
                out.row(row + j) += line.weights[p] * q[j] * val;
        }
        row += q1.size();
    }
    if (k >= 3) {
        const OrthonormalBasis q2(2, k - 3);
        const TriRule& tri = tri_rule(quad_degree);
        for (int f = 0; f < 4; ++f) {
            for (std::size_t p = 0; p < tri.size(); ++p) {
                const double s = tri.points[p][0];
                const double t = tri.points[p][1];
                const Eigen::RowVectorXd val = field(face_point(f, s, t));
                const Eigen::VectorXd q = q2.values(Vec3(s, t, 0));
                for (int j = 0; j < q2.size(); ++j)
                    out.row(row + j) += tri.weights[p] * q[j] * val;
            }
            row += q2.size();
        }
    }
    return out;
}

ShapeValues ReferenceBasis::evaluate(const Vec3& x) const {
    const int nm = mono_.size();
    const int n = size();
    ShapeValues sv;
    const Eigen::VectorXd m = mono_.values(x);
    const Eigen::MatrixX3d g = mono_.gradients(x);
    sv.value.resize(ncomp_, n);
    for (auto& d : sv.deriv)
        d.resize(ncomp_, n);
    for (int c = 0; c < ncomp_; ++c) {
        const auto block = coeffs_.middleRows(c * nm, nm);
        sv.value.row(c) = m.transpose() * block;
        for (int j = 0; j < 3; ++j)
            sv.deriv[static_cast<std::size_t>(j)].row(c) = g.col(j).transpose() * block;
    }
    if (ncomp_ == 1)
        sv.hessian = mono_.hessians(x).transpose() * coeffs_;
    return sv;
}

ReferenceBasis build_sigma_basis(int k, std::array<int, 4> ranks) { return ReferenceBasis(Space::Sigma, k, ranks); }
ReferenceBasis build_v_basis(int k, std::array<int, 4> ranks) { return ReferenceBasis(Space::V, k, ranks); }
ReferenceBasis build_w_basis(int order, WVariant variant, std::array<int, 4> ranks) {
    return ReferenceBasis(Space::W, order, ranks, variant);
}

const ReferenceBasis& cached_basis(Space space, int order, const std::array<int, 4>& ranks, WVariant variant) {
    using Key = std::tuple<Space, int, std::array<int, 4>, WVariant>;
    static std::mutex mutex;
    static std::map<Key, std::unique_ptr<ReferenceBasis>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[Key{space, order, ranks, variant}];
    if (!slot)
        slot = std::make_unique<ReferenceBasis>(space, order, ranks, variant);
    return *slot;
}

} // namespace tdnns
