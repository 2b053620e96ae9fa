#include "tdnns/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "tdnns/element.hpp"

namespace tdnns {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
using Slots = Eigen::Matrix<double, 6, 1>;

// Weights w such that w . slots(S) = n^T S n.
Slots nn_slots(const Vec3& n) {
    Slots w;
    w << n[0] * n[0], n[1] * n[1], n[2] * n[2], 2 * n[1] * n[2], 2 * n[0] * n[2], 2 * n[0] * n[1];
    return w;
}

// Frobenius product in slot form: a : b = a^T D b.
const Eigen::Matrix<double, 6, 6>& frobenius_metric() {
    static const Eigen::Matrix<double, 6, 6> d = [] {
        Eigen::Matrix<double, 6, 1> diag;
        diag << 1, 1, 1, 2, 2, 2;
        return Eigen::Matrix<double, 6, 6>(diag.asDiagonal());
    }();
    return d;
}

Slots strain_slots(const Mat3& jac) {
    const Mat3 e = sym(jac);
    Slots s;
    s << e(0, 0), e(1, 1), e(2, 2), e(1, 2), e(0, 2), e(0, 1);
    return s;
}

Slots to_slots(const SymTensor3& t) {
    Slots s;
    for (int i = 0; i < 6; ++i)
        s[i] = t[i];
    return s;
}

void scatter(Triplets& out, std::span<const int> rows, std::span<const int> cols, const Eigen::MatrixXd& local) {
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const double v = local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (v != 0.0)
                out.emplace_back(rows[i], cols[j], v);
        }
}

SparseMatrix from_triplets(int rows, int cols, const Triplets& t) {
    SparseMatrix m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    m.prune(0.0);
    return m;
}

// Local b(sigma_i, v_j) for one cell: rows V shapes, columns Sigma shapes.
Eigen::MatrixXd local_b(const ReferenceBasis& sb, const ReferenceBasis& vb, const ElementTransform& xf,
                        ShapeCache& cache, int degree) {
    const int ns = sb.size();
    const int nv = vb.size();
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nv, ns);
    const auto& d = frobenius_metric();

    const TetRule& tet = tet_rule(degree);
    const auto& st = cache.volume(sb, tet);
    const auto& vt = cache.volume(vb, tet);
    Eigen::MatrixXd eps(6, nv);
    for (std::size_t q = 0; q < tet.size(); ++q) {
        const PhysicalShapes ps = push_shapes(st[q], Space::Sigma, xf);
        const PhysicalShapes pv = push_shapes(vt[q], Space::V, xf);
        for (int j = 0; j < nv; ++j)
            eps.col(j) = strain_slots(pv.jacobian(j));
        local -= (tet.weights[q] * std::abs(xf.det)) * eps.transpose() * d * ps.value;
    }

    const TriRule& tri = tri_rule(degree);
    for (int f = 0; f < 4; ++f) {
        const Vec3& n = xf.face_normal[f];
        const Slots w = nn_slots(n);
        const auto pts = face_points(sb, xf, f, tri);
        const auto& sf = cache.face(sb, tri, f);
        const auto& vf = cache.face(vb, tri, f);
        // both bases of a cell share the rank pattern, so the face points agree
        for (std::size_t q = 0; q < tri.size(); ++q) {
            const PhysicalShapes ps = push_shapes(sf[q], Space::Sigma, xf);
            const PhysicalShapes pv = push_shapes(vf[q], Space::V, xf);
            const Eigen::RowVectorXd snn = w.transpose() * ps.value;
            const Eigen::VectorXd vn = pv.value.transpose() * n;
            local += pts[q].weight * vn * snn;
        }
    }
    return local;
}

} // namespace

void MaterialLaw::validate() const {
    if (!(E > 0.0) || !std::isfinite(E))
        throw MaterialError("Young's modulus must be positive");
    if (!(nu > -1.0 && nu < 0.5))
        throw MaterialError("Poisson ratio must lie in (-1, 1/2)");
}

SymTensor3 MaterialLaw::compliance(const SymTensor3& sigma) const {
    SymTensor3 out;
    const double tr = sigma.trace();
    for (int i = 0; i < 6; ++i)
        out[i] = (1.0 + nu) * sigma[i] / E;
    for (int i = 0; i < 3; ++i)
        out[i] -= nu * tr / E;
    return out;
}

SymTensor3 MaterialLaw::stiffness(const SymTensor3& strain) const {
    SymTensor3 out;
    const double tr = strain.trace();
    for (int i = 0; i < 6; ++i)
        out[i] = 2.0 * mu() * strain[i];
    for (int i = 0; i < 3; ++i)
        out[i] += lambda() * tr;
    return out;
}

double MaterialLaw::compliance_min_eigenvalue() const {
    // deviatoric part scales by (1 + nu) / E, the spherical part by (1 - 2 nu) / E
    return std::min(1.0 + nu, 1.0 - 2.0 * nu) / E;
}

SparseMatrix assemble_A(const Mesh& mesh, const MaterialLaw& material, const DofMap& sigma) {
    material.validate();
    Eigen::Matrix<double, 6, 6> ca;
    for (int c = 0; c < 6; ++c)
        ca.col(c) = to_slots(material.compliance(SymTensor3::unit(c)));
    const Eigen::Matrix<double, 6, 6> metric = frobenius_metric() * ca;

    const TetRule& tet = tet_rule(2 * sigma.order());
    ShapeCache cache;
    Triplets trip;
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const ElementTransform xf = element_transform(mesh, c);
        const ReferenceBasis& b = sigma.basis(c);
        const auto& tab = cache.volume(b, tet);
        Eigen::MatrixXd local = Eigen::MatrixXd::Zero(b.size(), b.size());
        for (std::size_t q = 0; q < tet.size(); ++q) {
            const PhysicalShapes ps = push_shapes(tab[q], Space::Sigma, xf);
            local += (tet.weights[q] * std::abs(xf.det)) * ps.value.transpose() * metric * ps.value;
        }
        scatter(trip, sigma.cell_dofs(c), sigma.cell_dofs(c), local);
    }
    return from_triplets(sigma.size(), sigma.size(), trip);
}

SparseMatrix assemble_B(const Mesh& mesh, const DofMap& sigma, const DofMap& v) {
    const int degree = 2 * sigma.order();
    ShapeCache cache;
    Triplets trip;
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const ElementTransform xf = element_transform(mesh, c);
        const Eigen::MatrixXd local = local_b(sigma.basis(c), v.basis(c), xf, cache, degree);
        scatter(trip, v.cell_dofs(c), sigma.cell_dofs(c), local);
    }
    return from_triplets(v.size(), sigma.size(), trip);
}

RightHandSide assemble_rhs(const Mesh& mesh, const LoadData& data, const DofMap& sigma, const DofMap& v) {
    RightHandSide rhs{Eigen::VectorXd::Zero(sigma.size()), Eigen::VectorXd::Zero(v.size())};
    const int degree = data_quadrature_degree(sigma.order());
    const TetRule& tet = tet_rule(degree);
    const TriRule& tri = tri_rule(degree);
    ShapeCache cache;

    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const ElementTransform xf = element_transform(mesh, c);
        const ReferenceBasis& vb = v.basis(c);
        const ReferenceBasis& sb = sigma.basis(c);
        const auto vd = v.cell_dofs(c);
        const auto sd = sigma.cell_dofs(c);

        if (data.body_force) {
            const auto& tab = cache.volume(vb, tet);
            Eigen::VectorXd local = Eigen::VectorXd::Zero(vb.size());
            for (std::size_t q = 0; q < tet.size(); ++q) {
                const Vec3 f = data.body_force(xf.map(tet.points[q]));
                const PhysicalShapes pv = push_shapes(tab[q], Space::V, xf);
                local -= (tet.weights[q] * std::abs(xf.det)) * pv.value.transpose() * f;
            }
            for (std::size_t i = 0; i < vd.size(); ++i)
                rhs.v[vd[i]] += local[static_cast<Eigen::Index>(i)];
        }

        for (int f = 0; f < 4; ++f) {
            const int gf = mesh.cell_faces(c)[f];
            const auto tag = mesh.boundary_tag(gf);
            if (!tag)
                continue;
            const Vec3& n = xf.face_normal[f];
            if (*tag == BoundaryTag::Neumann) {
                if (!data.traction)
                    throw std::invalid_argument("Neumann boundary requires traction data");
                const auto pts = face_points(vb, xf, f, tri);
                const auto& tab = cache.face(vb, tri, f);
                Eigen::VectorXd local = Eigen::VectorXd::Zero(vb.size());
                for (std::size_t q = 0; q < tri.size(); ++q) {
                    const Vec3 t = data.traction(pts[q].x, n);
                    const Vec3 tt = t - t.dot(n) * n;
                    const PhysicalShapes pv = push_shapes(tab[q], Space::V, xf);
                    // v_t . t_t = v . t_t since t_t is tangential
                    local -= pts[q].weight * pv.value.transpose() * tt;
                }
                for (std::size_t i = 0; i < vd.size(); ++i)
                    rhs.v[vd[i]] += local[static_cast<Eigen::Index>(i)];
            } else {
                if (!data.displacement)
                    throw std::invalid_argument("Dirichlet boundary requires displacement data");
                const auto pts = face_points(sb, xf, f, tri);
                const auto& tab = cache.face(sb, tri, f);
                const Slots w = nn_slots(n);
                Eigen::VectorXd local = Eigen::VectorXd::Zero(sb.size());
                for (std::size_t q = 0; q < tri.size(); ++q) {
                    const double un = data.displacement(pts[q].x).dot(n);
                    const PhysicalShapes ps = push_shapes(tab[q], Space::Sigma, xf);
                    local += (pts[q].weight * un) * (ps.value.transpose() * w);
                }
                for (std::size_t i = 0; i < sd.size(); ++i)
                    rhs.sigma[sd[i]] += local[static_cast<Eigen::Index>(i)];
            }
        }
    }
    return rhs;
}

EssentialValues essential_values(const Mesh& mesh, const LoadData& data, const DofMap& sigma, const DofMap& v) {
    EssentialValues out{Eigen::VectorXd::Zero(sigma.size()), Eigen::VectorXd::Zero(v.size())};
    const int degree = data_quadrature_degree(sigma.order());
    const int sface = sigma.entity_count(EntityKind::Face);

    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const ElementTransform xf = element_transform(mesh, c);
        bool touches_dirichlet = false;
        for (int f = 0; f < 4; ++f) {
            const int gf = mesh.cell_faces(c)[f];
            const auto tag = mesh.boundary_tag(gf);
            if (!tag)
                continue;
            if (*tag == BoundaryTag::Dirichlet) {
                touches_dirichlet = true;
                continue;
            }
            if (!data.traction)
                throw std::invalid_argument("Neumann boundary requires traction data");
            const Vec3 n = xf.face_normal[f];
            const ReferenceBasis& sb = sigma.basis(c);
            auto sampler = [&](const Vec3& r) -> Eigen::VectorXd {
                const double tn = data.traction(xf.map(r), n).dot(n);
                const SymTensor3 s = SymTensor3::from_matrix(tn * n * n.transpose());
                return to_slots(pull_sigma(s, xf));
            };
            const Eigen::VectorXd vals = sb.apply_dofs(sampler, degree);
            const auto sd = sigma.cell_dofs(c);
            const int first = sigma.entity_offset(EntityKind::Face, gf);
            for (int i = 0; i < sb.size(); ++i) {
                const int g = sd[static_cast<std::size_t>(i)];
                if (g >= first && g < first + sface)
                    out.sigma[g] = vals[i];
            }
        }
        // Dirichlet edges may touch a cell only through an edge, so check the
        // constraint flags directly
        const auto vd = v.cell_dofs(c);
        bool any = touches_dirichlet;
        for (int g : vd)
            any = any || v.is_constrained(g);
        if (!any)
            continue;
        if (!data.displacement)
            throw std::invalid_argument("Dirichlet boundary requires displacement data");
        const ReferenceBasis& vb = v.basis(c);
        auto sampler = [&](const Vec3& r) -> Eigen::VectorXd { return pull_v(data.displacement(xf.map(r)), xf); };
        const Eigen::VectorXd vals = vb.apply_dofs(sampler, degree);
        for (int i = 0; i < vb.size(); ++i) {
            const int g = vd[static_cast<std::size_t>(i)];
            if (v.is_constrained(g))
                out.v[g] = vals[i];
        }
    }
    return out;
}

SparseMatrix submatrix(const SparseMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    std::vector<int> rmap(static_cast<std::size_t>(m.rows()), -1);
    std::vector<int> cmap(static_cast<std::size_t>(m.cols()), -1);
    for (std::size_t i = 0; i < rows.size(); ++i)
        rmap[static_cast<std::size_t>(rows[i])] = static_cast<int>(i);
    for (std::size_t j = 0; j < cols.size(); ++j)
        cmap[static_cast<std::size_t>(cols[j])] = static_cast<int>(j);
    Triplets trip;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            const int r = rmap[static_cast<std::size_t>(it.row())];
            const int c = cmap[static_cast<std::size_t>(it.col())];
            if (r >= 0 && c >= 0)
                trip.emplace_back(r, c, it.value());
        }
    SparseMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SaddleSystem apply_essential(const SparseMatrix& A, const SparseMatrix& B, const RightHandSide& rhs,
                             const EssentialValues& values, const DofMap& sigma, const DofMap& v) {
    SaddleSystem sys;
    sys.sigma_free = sigma.free_dofs();
    sys.v_free = v.free_dofs();
    sys.sigma_prescribed = values.sigma;
    sys.v_prescribed = values.v;
    for (int i = 0; i < sigma.size(); ++i)
        if (!sigma.is_constrained(i))
            sys.sigma_prescribed[i] = 0.0;
    for (int i = 0; i < v.size(); ++i)
        if (!v.is_constrained(i))
            sys.v_prescribed[i] = 0.0;

    sys.A = submatrix(A, sys.sigma_free, sys.sigma_free);
    sys.B = submatrix(B, sys.v_free, sys.sigma_free);

    const Eigen::VectorXd a_lift = A * sys.sigma_prescribed;
    const Eigen::VectorXd bt_lift = B.transpose() * sys.v_prescribed;
    const Eigen::VectorXd b_lift = B * sys.sigma_prescribed;
    sys.rhs_sigma.resize(static_cast<Eigen::Index>(sys.sigma_free.size()));
    for (std::size_t i = 0; i < sys.sigma_free.size(); ++i) {
        const int g = sys.sigma_free[i];
        sys.rhs_sigma[static_cast<Eigen::Index>(i)] = rhs.sigma[g] - a_lift[g] - bt_lift[g];
    }
    sys.rhs_v.resize(static_cast<Eigen::Index>(sys.v_free.size()));
    for (std::size_t i = 0; i < sys.v_free.size(); ++i) {
        const int g = sys.v_free[i];
        sys.rhs_v[static_cast<Eigen::Index>(i)] = rhs.v[g] - b_lift[g];
    }
    return sys;
}

SaddleSystem assemble_system(const Mesh& mesh, const MaterialLaw& material, const LoadData& data,
                             const DofMap& sigma, const DofMap& v) {
    const SparseMatrix A = assemble_A(mesh, material, sigma);
    const SparseMatrix B = assemble_B(mesh, sigma, v);
    const RightHandSide rhs = assemble_rhs(mesh, data, sigma, v);
    const EssentialValues ess = essential_values(mesh, data, sigma, v);
    return apply_essential(A, B, rhs, ess, sigma, v);
}

SparseMatrix SaddleSystem::block_matrix() const {
    const Eigen::Index ns = A.rows();
    const Eigen::Index nv = B.rows();
    Triplets trip;
    trip.reserve(static_cast<std::size_t>(A.nonZeros() + 2 * B.nonZeros()));
    for (int k = 0; k < A.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(A, k); it; ++it)
            trip.emplace_back(it.row(), it.col(), it.value());
    for (int k = 0; k < B.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(B, k); it; ++it) {
            trip.emplace_back(ns + it.row(), it.col(), it.value());
            trip.emplace_back(it.col(), ns + it.row(), it.value());
        }
    SparseMatrix m(ns + nv, ns + nv);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

Eigen::VectorXd SaddleSystem::block_rhs() const {
    Eigen::VectorXd r(rhs_sigma.size() + rhs_v.size());
    r << rhs_sigma, rhs_v;
    return r;
}

Eigen::VectorXd SaddleSystem::expand_sigma(const Eigen::VectorXd& free) const {
    Eigen::VectorXd out = sigma_prescribed;
    for (std::size_t i = 0; i < sigma_free.size(); ++i)
        out[sigma_free[i]] = free[static_cast<Eigen::Index>(i)];
    return out;
}

Eigen::VectorXd SaddleSystem::expand_v(const Eigen::VectorXd& free) const {
    Eigen::VectorXd out = v_prescribed;
    for (std::size_t i = 0; i < v_free.size(); ++i)
        out[v_free[i]] = free[static_cast<Eigen::Index>(i)];
    return out;
}

Eigen::VectorXd cell_b_against_v(const Mesh& mesh, int cell, const TensorField& tau, const DofMap& v, int degree) {
    const ElementTransform xf = element_transform(mesh, cell);
    const ReferenceBasis& vb = v.basis(cell);
    const auto& d = frobenius_metric();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(vb.size());

    const TetRule& tet = tet_rule(degree);
    for (std::size_t q = 0; q < tet.size(); ++q) {
        const Slots t = to_slots(tau.value(xf.map(tet.points[q])));
        const PhysicalShapes pv = push_shapes(vb.evaluate(tet.points[q]), Space::V, xf);
        for (int j = 0; j < vb.size(); ++j)
            out[j] -= tet.weights[q] * std::abs(xf.det) * strain_slots(pv.jacobian(j)).dot(d * t);
    }
    const TriRule& tri = tri_rule(degree);
    for (int f = 0; f < 4; ++f) {
        const Vec3& n = xf.face_normal[f];
        for (const auto& p : face_points(vb, xf, f, tri)) {
            const double snn = tau.value(p.x).normal_normal(n);
            const PhysicalShapes pv = push_shapes(vb.evaluate(p.ref), Space::V, xf);
            out += (p.weight * snn) * (pv.value.transpose() * n);
        }
    }
    return out;
}

SparseMatrix assemble_gradient_coupling(const Mesh& mesh, const DofMap& sigma, const DofMap& w) {
    const int degree = 2 * sigma.order();
    const auto& d = frobenius_metric();
    const TetRule& tet = tet_rule(degree);
    const TriRule& tri = tri_rule(degree);
    ShapeCache cache;
    Triplets trip;
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const ElementTransform xf = element_transform(mesh, c);
        const ReferenceBasis& sb = sigma.basis(c);
        const ReferenceBasis& wb = w.basis(c);
        Eigen::MatrixXd local = Eigen::MatrixXd::Zero(sb.size(), wb.size());
        const auto& st = cache.volume(sb, tet);
        const auto& wt = cache.volume(wb, tet);
        Eigen::MatrixXd hess(6, wb.size());
        for (std::size_t q = 0; q < tet.size(); ++q) {
            const PhysicalShapes ps = push_shapes(st[q], Space::Sigma, xf);
            const PhysicalShapes pw = push_shapes(wt[q], Space::W, xf);
            for (int j = 0; j < wb.size(); ++j)
                hess.col(j) = strain_slots(pw.jacobian(j));
            local -= (tet.weights[q] * std::abs(xf.det)) * ps.value.transpose() * d * hess;
        }
        for (int f = 0; f < 4; ++f) {
            const Vec3& n = xf.face_normal[f];
            const Slots nn = nn_slots(n);
            const auto pts = face_points(sb, xf, f, tri);
            const auto& sf = cache.face(sb, tri, f);
            const auto& wf = cache.face(wb, tri, f);
            for (std::size_t q = 0; q < tri.size(); ++q) {
                const PhysicalShapes ps = push_shapes(sf[q], Space::Sigma, xf);
                const PhysicalShapes pw = push_shapes(wf[q], Space::W, xf);
                Eigen::RowVectorXd dn = Eigen::RowVectorXd::Zero(wb.size());
                for (int l = 0; l < 3; ++l)
                    dn += n[l] * pw.deriv[static_cast<std::size_t>(l)];
                local += pts[q].weight * (ps.value.transpose() * nn) * dn;
            }
        }
        scatter(trip, sigma.cell_dofs(c), w.cell_dofs(c), local);
    }
    return from_triplets(sigma.size(), w.size(), trip);
}

SparseMatrix gradient_embedding(const Mesh& mesh, const DofMap& v, const DofMap& w) {
    const int degree = 2 * w.order();
    Triplets trip;
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const ReferenceBasis& vb = v.basis(c);
        const ReferenceBasis& wb = w.basis(c);
        // the covariant pullback of a physical gradient is the reference gradient
        auto sampler = [&](const Vec3& r) -> Eigen::MatrixXd {
            const ShapeValues sv = wb.evaluate(r);
            Eigen::MatrixXd g(3, wb.size());
            for (int l = 0; l < 3; ++l)
                g.row(l) = sv.deriv[static_cast<std::size_t>(l)].row(0);
            return g;
        };
        const Eigen::MatrixXd local = vb.apply_dofs(sampler, wb.size(), degree);
        scatter(trip, v.cell_dofs(c), w.cell_dofs(c), local);
    }
    SparseMatrix m(v.size(), w.size());
    // shared entities produce identical entries; keep one copy
    m.setFromTriplets(trip.begin(), trip.end(), [](double, double b) { return b; });
    m.prune(1e-14, 1.0);
    return m;
}

SparseMatrix assemble_w_stiffness(const Mesh& mesh, const DofMap& w) {
    const TetRule& tet = tet_rule(2 * (w.order() - 1));
    ShapeCache cache;
    Triplets trip;
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const ElementTransform xf = element_transform(mesh, c);
        const ReferenceBasis& wb = w.basis(c);
        const auto& tab = cache.volume(wb, tet);
        Eigen::MatrixXd local = Eigen::MatrixXd::Zero(wb.size(), wb.size());
        Eigen::MatrixXd g(3, wb.size());
        for (std::size_t q = 0; q < tet.size(); ++q) {
            const PhysicalShapes pw = push_shapes(tab[q], Space::W, xf);
            for (int l = 0; l < 3; ++l)
                g.row(l) = pw.deriv[static_cast<std::size_t>(l)].row(0);
            local += (tet.weights[q] * std::abs(xf.det)) * g.transpose() * g;
        }
        scatter(trip, w.cell_dofs(c), w.cell_dofs(c), local);
    }
    return from_triplets(w.size(), w.size(), trip);
}

} // namespace tdnns
