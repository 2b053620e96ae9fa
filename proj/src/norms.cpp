#include "tdnns/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "tdnns/element.hpp"

namespace tdnns {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

int local_face_index(const Mesh& mesh, int cell, int face) {
    const auto& cf = mesh.cell_faces(cell);
    for (int i = 0; i < 4; ++i)
        if (cf[i] == face)
            return i;
    throw std::logic_error("face not on cell");
}

Eigen::VectorXd local_coeffs(std::span<const int> dofs, const Eigen::VectorXd& coeffs) {
    if (coeffs.size() == 0)
        return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dofs.size()));
    return gather(dofs, coeffs);
}

SymTensor3 slots_to_tensor(const Eigen::VectorXd& s) { return {s[0], s[1], s[2], s[3], s[4], s[5]}; }

double nn_of(const Eigen::VectorXd& slots, const Vec3& n) { return slots_to_tensor(slots).normal_normal(n); }

Eigen::Matrix<double, 6, 1> nn_slots(const Vec3& n) {
    Eigen::Matrix<double, 6, 1> w;
    w << n[0] * n[0], n[1] * n[1], n[2] * n[2], 2 * n[1] * n[2], 2 * n[0] * n[2], 2 * n[0] * n[1];
    return w;
}

void scatter(Triplets& out, std::span<const int> dofs, const Eigen::MatrixXd& local) {
    for (std::size_t i = 0; i < dofs.size(); ++i)
        for (std::size_t j = 0; j < dofs.size(); ++j) {
            const double v = local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (v != 0.0)
                out.emplace_back(dofs[i], dofs[j], v);
        }
}

SparseMatrix build(int n, const Triplets& t) {
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

Mat3 v_jacobian(const PhysicalShapes& ps, const Eigen::VectorXd& c) {
    Mat3 m;
    for (int l = 0; l < 3; ++l)
        m.col(l) = ps.deriv[static_cast<std::size_t>(l)] * c;
    return m;
}

} // namespace

SigmaNorm::SigmaNorm(const Mesh& mesh, const DofMap& sigma, const DofMap& w) : mesh_(mesh), sigma_(sigma), w_(w) {
    std::vector<int> all(static_cast<std::size_t>(sigma.size()));
    for (int i = 0; i < sigma.size(); ++i)
        all[static_cast<std::size_t>(i)] = i;
    g_free_ = submatrix(assemble_gradient_coupling(mesh, sigma, w), all, w.free_dofs());
    k_free_ = submatrix(assemble_w_stiffness(mesh, w), w.free_dofs(), w.free_dofs());
    k_solver_ = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix>>(k_free_);
    if (k_solver_->info() != Eigen::Success)
        throw std::runtime_error("W stiffness matrix is singular (no Dirichlet boundary?)");
}

double SigmaNorm::dual(const Eigen::VectorXd& g, double* residual) const {
    const double gn = g.norm();
    if (gn == 0.0) {
        if (residual)
            *residual = 0.0;
        return 0.0;
    }
    Eigen::VectorXd x = k_solver_->solve(g);
    // one refinement step keeps the residual at round-off level
    const Eigen::VectorXd r = g - k_free_ * x;
    x += k_solver_->solve(r);
    if (residual)
        *residual = (k_free_ * x - g).norm() / gn;
    return std::sqrt(std::max(0.0, g.dot(x)));
}

NormReport SigmaNorm::of_coefficients(const Eigen::VectorXd& coeffs) const {
    return of_difference(nullptr, coeffs, 2 * sigma_.order());
}

NormReport SigmaNorm::of_difference(const TensorField* exact, const Eigen::VectorXd& coeffs, int degree) const {
    NormReport r;
    const TetRule& tet = tet_rule(degree);
    const TriRule& tri = tri_rule(degree);
    ShapeCache cache;
    double l2 = 0.0;
    for (int c = 0; c < static_cast<int>(mesh_.num_cells()); ++c) {
        const ElementTransform xf = element_transform(mesh_, c);
        const ReferenceBasis& b = sigma_.basis(c);
        const Eigen::VectorXd lc = local_coeffs(sigma_.cell_dofs(c), coeffs);
        const auto& tab = cache.volume(b, tet);
        for (std::size_t q = 0; q < tet.size(); ++q) {
            const PhysicalShapes ps = push_shapes(tab[q], Space::Sigma, xf);
            SymTensor3 d = slots_to_tensor(-(ps.value * lc));
            if (exact) {
                const SymTensor3 e = exact->value(xf.map(tet.points[q]));
                for (int i = 0; i < 6; ++i)
                    d[i] += e[i];
            }
            l2 += tet.weights[q] * std::abs(xf.det) * d.frobenius(d);
        }
    }

    double face = 0.0;
    for (int f = 0; f < static_cast<int>(mesh_.num_faces()); ++f) {
        const int c = mesh_.face_cells(f)[0];
        const int lf = local_face_index(mesh_, c, f);
        const ElementTransform xf = element_transform(mesh_, c);
        const ReferenceBasis& b = sigma_.basis(c);
        const Eigen::VectorXd lc = local_coeffs(sigma_.cell_dofs(c), coeffs);
        const Vec3& n = xf.face_normal[lf];
        const auto pts = face_points(b, xf, lf, tri);
        const auto& tab = cache.face(b, tri, lf);
        double acc = 0.0;
        for (std::size_t q = 0; q < tri.size(); ++q) {
            const PhysicalShapes ps = push_shapes(tab[q], Space::Sigma, xf);
            double d = -nn_of(ps.value * lc, n);
            if (exact)
                d += exact->value(pts[q].x).normal_normal(n);
            acc += pts[q].weight * d * d;
        }
        face += face_jump_measure(mesh_, f) * acc;
    }

    Eigen::VectorXd g = Eigen::VectorXd::Zero(w_.num_free());
    if (coeffs.size() != 0)
        g -= g_free_.transpose() * coeffs;
    if (exact) {
        const Eigen::VectorXd full = b_field_against_gradients(mesh_, *exact, w_, degree);
        for (int i = 0; i < w_.num_free(); ++i)
            g[i] += full[w_.free_dofs()[static_cast<std::size_t>(i)]];
    }
    r.l2_sigma = std::sqrt(l2);
    r.face_term = std::sqrt(face);
    r.dual_term = dual(g, &r.dual_residual);
    r.sigma_h_norm = std::sqrt(l2 + face + r.dual_term * r.dual_term);
    return r;
}

Eigen::VectorXd b_field_against_gradients(const Mesh& mesh, const TensorField& tau, const DofMap& w, int degree) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(w.size());
    const TetRule& tet = tet_rule(degree);
    const TriRule& tri = tri_rule(degree);
    ShapeCache cache;
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const ElementTransform xf = element_transform(mesh, c);
        const ReferenceBasis& b = w.basis(c);
        Eigen::VectorXd local = Eigen::VectorXd::Zero(b.size());
        const auto& tab = cache.volume(b, tet);
        for (std::size_t q = 0; q < tet.size(); ++q) {
            const SymTensor3 t = tau.value(xf.map(tet.points[q]));
            const PhysicalShapes pw = push_shapes(tab[q], Space::W, xf);
            for (int j = 0; j < b.size(); ++j)
                local[j] -= tet.weights[q] * std::abs(xf.det) * t.frobenius(SymTensor3::from_matrix(pw.jacobian(j)));
        }
        for (int f = 0; f < 4; ++f) {
            const Vec3& n = xf.face_normal[f];
            const auto pts = face_points(b, xf, f, tri);
            const auto& ft = cache.face(b, tri, f);
            for (std::size_t q = 0; q < tri.size(); ++q) {
                const double snn = tau.value(pts[q].x).normal_normal(n);
                const PhysicalShapes pw = push_shapes(ft[q], Space::W, xf);
                for (int j = 0; j < b.size(); ++j) {
                    double dn = 0.0;
                    for (int l = 0; l < 3; ++l)
                        dn += n[l] * pw.deriv[static_cast<std::size_t>(l)](0, j);
                    local[j] += pts[q].weight * snn * dn;
                }
            }
        }
        const auto dofs = w.cell_dofs(c);
        for (std::size_t i = 0; i < dofs.size(); ++i)
            out[dofs[i]] += local[static_cast<Eigen::Index>(i)];
    }
    return out;
}

HCurlReport hcurl_norm(const Mesh& mesh, const DofMap& v, const Eigen::VectorXd& coeffs, const VectorField* exact,
                       int degree) {
    const TetRule& tet = tet_rule(degree);
    ShapeCache cache;
    double l2 = 0.0;
    double curl = 0.0;
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const ElementTransform xf = element_transform(mesh, c);
        const ReferenceBasis& b = v.basis(c);
        const Eigen::VectorXd lc = local_coeffs(v.cell_dofs(c), coeffs);
        const auto& tab = cache.volume(b, tet);
        for (std::size_t q = 0; q < tet.size(); ++q) {
            const PhysicalShapes pv = push_shapes(tab[q], Space::V, xf);
            Vec3 d = -(pv.value * lc);
            Mat3 jac = -v_jacobian(pv, lc);
            if (exact) {
                const Vec3 x = xf.map(tet.points[q]);
                d += exact->value(x);
                jac += exact->jacobian(x);
            }
            const double wq = tet.weights[q] * std::abs(xf.det);
            l2 += wq * d.squaredNorm();
            curl += wq * curl_from_jacobian(jac).squaredNorm();
        }
    }
    return {std::sqrt(l2), std::sqrt(curl), std::sqrt(l2 + curl)};
}

BrokenH1Report broken_h1_norm(const Mesh& mesh, const DofMap& v, const Eigen::VectorXd& coeffs,
                              const VectorField* exact, int degree) {
    const TetRule& tet = tet_rule(degree);
    const TriRule& tri = tri_rule(degree);
    ShapeCache cache;
    double strain = 0.0;
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const ElementTransform xf = element_transform(mesh, c);
        const ReferenceBasis& b = v.basis(c);
        const Eigen::VectorXd lc = local_coeffs(v.cell_dofs(c), coeffs);
        const auto& tab = cache.volume(b, tet);
        for (std::size_t q = 0; q < tet.size(); ++q) {
            const PhysicalShapes pv = push_shapes(tab[q], Space::V, xf);
            Mat3 jac = -v_jacobian(pv, lc);
            if (exact)
                jac += exact->jacobian(xf.map(tet.points[q]));
            strain += tet.weights[q] * std::abs(xf.det) * sym(jac).squaredNorm();
        }
    }

    double jump = 0.0;
    if (coeffs.size() != 0) {
        for (int f = 0; f < static_cast<int>(mesh.num_faces()); ++f) {
            if (mesh.is_boundary_face(f))
                continue;
            const int ca = mesh.face_cells(f)[0];
            const int cb = mesh.face_cells(f)[1];
            const int lf = local_face_index(mesh, ca, f);
            const ElementTransform xa = element_transform(mesh, ca);
            const ElementTransform xb = element_transform(mesh, cb);
            const ReferenceBasis& ba = v.basis(ca);
            const ReferenceBasis& bb = v.basis(cb);
            const Eigen::VectorXd la = gather(v.cell_dofs(ca), coeffs);
            const Eigen::VectorXd lb = gather(v.cell_dofs(cb), coeffs);
            const Vec3& n = xa.face_normal[lf];
            double acc = 0.0;
            for (const auto& p : face_points(ba, xa, lf, tri)) {
                const Vec3 va = push_shapes(ba.evaluate(p.ref), Space::V, xa).value * la;
                const Vec3 vb = push_shapes(bb.evaluate(xb.map_back(p.x)), Space::V, xb).value * lb;
                const double d = (va - vb).dot(n);
                acc += p.weight * d * d;
            }
            jump += acc / face_jump_measure(mesh, f);
        }
    }
    return {std::sqrt(strain), std::sqrt(jump), std::sqrt(strain + jump)};
}

H1Report h1_norm(const Mesh& mesh, const DofMap& w, const Eigen::VectorXd& coeffs, const ScalarField* exact,
                 int degree) {
    const TetRule& tet = tet_rule(degree);
    ShapeCache cache;
    double l2 = 0.0;
    double grad = 0.0;
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const ElementTransform xf = element_transform(mesh, c);
        const ReferenceBasis& b = w.basis(c);
        const Eigen::VectorXd lc = local_coeffs(w.cell_dofs(c), coeffs);
        const auto& tab = cache.volume(b, tet);
        for (std::size_t q = 0; q < tet.size(); ++q) {
            const PhysicalShapes pw = push_shapes(tab[q], Space::W, xf);
            double d = -(pw.value.row(0).dot(lc));
            Vec3 g;
            for (int l = 0; l < 3; ++l)
                g[l] = -(pw.deriv[static_cast<std::size_t>(l)].row(0).dot(lc));
            if (exact) {
                const Vec3 x = xf.map(tet.points[q]);
                d += exact->value(x);
                g += exact->gradient(x);
            }
            const double wq = tet.weights[q] * std::abs(xf.det);
            l2 += wq * d * d;
            grad += wq * g.squaredNorm();
        }
    }
    return {std::sqrt(l2), std::sqrt(grad), std::sqrt(l2 + grad)};
}

SparseMatrix sigma_l2_gram(const Mesh& mesh, const DofMap& sigma) {
    Eigen::Matrix<double, 6, 1> diag;
    diag << 1, 1, 1, 2, 2, 2;
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
            local += (tet.weights[q] * std::abs(xf.det)) * ps.value.transpose() * diag.asDiagonal() * ps.value;
        }
        scatter(trip, sigma.cell_dofs(c), local);
    }
    return build(sigma.size(), trip);
}

SparseMatrix sigma_face_gram(const Mesh& mesh, const DofMap& sigma) {
    const TriRule& tri = tri_rule(2 * sigma.order());
    ShapeCache cache;
    Triplets trip;
    for (int f = 0; f < static_cast<int>(mesh.num_faces()); ++f) {
        const int c = mesh.face_cells(f)[0];
        const int lf = local_face_index(mesh, c, f);
        const ElementTransform xf = element_transform(mesh, c);
        const ReferenceBasis& b = sigma.basis(c);
        const auto w = nn_slots(xf.face_normal[lf]);
        const auto pts = face_points(b, xf, lf, tri);
        const auto& tab = cache.face(b, tri, lf);
        Eigen::MatrixXd local = Eigen::MatrixXd::Zero(b.size(), b.size());
        for (std::size_t q = 0; q < tri.size(); ++q) {
            const Eigen::VectorXd nn = push_shapes(tab[q], Space::Sigma, xf).value.transpose() * w;
            local += pts[q].weight * nn * nn.transpose();
        }
        local *= face_jump_measure(mesh, f);
        scatter(trip, sigma.cell_dofs(c), local);
    }
    return build(sigma.size(), trip);
}

SparseMatrix hcurl_gram(const Mesh& mesh, const DofMap& v) {
    const TetRule& tet = tet_rule(2 * v.order());
    ShapeCache cache;
    Triplets trip;
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const ElementTransform xf = element_transform(mesh, c);
        const ReferenceBasis& b = v.basis(c);
        const auto& tab = cache.volume(b, tet);
        Eigen::MatrixXd local = Eigen::MatrixXd::Zero(b.size(), b.size());
        Eigen::MatrixXd curls(3, b.size());
        for (std::size_t q = 0; q < tet.size(); ++q) {
            const PhysicalShapes pv = push_shapes(tab[q], Space::V, xf);
            for (int j = 0; j < b.size(); ++j)
                curls.col(j) = curl_from_jacobian(pv.jacobian(j));
            const double wq = tet.weights[q] * std::abs(xf.det);
            local += wq * (pv.value.transpose() * pv.value + curls.transpose() * curls);
        }
        scatter(trip, v.cell_dofs(c), local);
    }
    return build(v.size(), trip);
}

} // namespace tdnns
