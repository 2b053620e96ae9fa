#include <cmath>
#include <ostream>

#include "tdnns/element.hpp"
#include "tdnns/harness.hpp"

namespace tdnns {

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
    out << "n,h,unknowns,sigma_l2,sigma_face,sigma_dual,sigma_h,u_l2,u_curl,u_hcurl,combined,rate,residual\n";
    for (const auto& r : rows)
        out << r.n << ',' << r.h << ',' << r.unknowns << ',' << r.sigma.l2_sigma << ',' << r.sigma.face_term << ','
            << r.sigma.dual_term << ',' << r.sigma.sigma_h_norm << ',' << r.u.l2 << ',' << r.u.curl << ','
            << r.u.total << ',' << r.combined << ',' << r.rate << ',' << r.residual << '\n';
}

void write_interp_csv(std::ostream& out, const std::vector<InterpRow>& rows) {
    out << "n,h,sigma_l2,sigma_face,sigma_dual,sigma_h,u_hcurl,u_h1h,w_h1,"
           "sigma_l2_rate,sigma_h_rate,u_hcurl_rate,u_h1h_rate,w_h1_rate\n";
    for (const auto& r : rows)
        out << r.n << ',' << r.h << ',' << r.sigma.l2_sigma << ',' << r.sigma.face_term << ',' << r.sigma.dual_term
            << ',' << r.sigma.sigma_h_norm << ',' << r.u_hcurl.total << ',' << r.u_h1h.total << ',' << r.w_h1.total
            << ',' << r.sigma_l2_rate << ',' << r.sigma_h_rate << ',' << r.u_hcurl_rate << ',' << r.u_h1h_rate << ','
            << r.w_h1_rate << '\n';
}

void write_stability_csv(std::ostream& out, const std::vector<StabilityReport>& rows) {
    out << "n,h,sigma_dofs,v_dofs,kernel_dim,infsup,kernel_coercivity,continuity,compliance_bound\n";
    for (const auto& r : rows)
        out << r.level << ',' << r.h << ',' << r.num_sigma << ',' << r.num_v << ',' << r.kernel_dim << ','
            << r.infsup << ',' << r.kernel_coercivity << ',' << r.continuity << ',' << r.compliance_bound << '\n';
}

void write_basis_csv(std::ostream& out, int k) {
    out << "space,order,variant,dofs,vertex,edge,face,interior,vandermonde_condition\n";
    auto row = [&](const ReferenceBasis& b, const char* variant) {
        out << to_string(b.space()) << ',' << b.order() << ',' << variant << ',' << b.size() << ','
            << b.dofs_on(EntityKind::Vertex) << ',' << b.dofs_on(EntityKind::Edge) << ','
            << b.dofs_on(EntityKind::Face) << ',' << b.dofs_on(EntityKind::Interior) << ','
            << b.vandermonde_condition() << '\n';
    };
    row(cached_basis(Space::Sigma, k, kIdentityRanks), "moment");
    row(cached_basis(Space::V, k, kIdentityRanks), "moment");
    row(cached_basis(Space::W, k + 1, kIdentityRanks), "moment");
    row(cached_basis(Space::W, k + 1, kIdentityRanks, WVariant::Nodal), "nodal");
}

void write_vtk(std::ostream& out, const Mesh& mesh, const DofMap& sigma, const DofMap& v,
               const Eigen::VectorXd& sigma_coeffs, const Eigen::VectorXd& u_coeffs) {
    const std::size_t nv = mesh.num_vertices();
    const std::size_t nc = mesh.num_cells();
    std::vector<Vec3> u(nv, Vec3::Zero());
    std::vector<int> count(nv, 0);
    std::vector<double> trace(nc), mises(nc);
    for (int c = 0; c < static_cast<int>(nc); ++c) {
        const ElementTransform xf = element_transform(mesh, c);
        for (int i = 0; i < 4; ++i) {
            const auto gv = static_cast<std::size_t>(mesh.cell(c)[i]);
            u[gv] += evaluate_fe(v.basis(c), xf, v.cell_dofs(c), u_coeffs, ref::vertices[i]);
            ++count[gv];
        }
        const Eigen::VectorXd s = evaluate_fe(sigma.basis(c), xf, sigma.cell_dofs(c), sigma_coeffs, Vec3::Constant(0.25));
        const SymTensor3 t(s[0], s[1], s[2], s[3], s[4], s[5]);
        const Mat3 m = t.to_matrix();
        const Mat3 dev = m - t.trace() / 3.0 * Mat3::Identity();
        trace[static_cast<std::size_t>(c)] = t.trace();
        mises[static_cast<std::size_t>(c)] = std::sqrt(1.5 * dev.squaredNorm());
    }

    out << "# vtk DataFile Version 3.0\ntdnns solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << nv << " double\n";
    for (const auto& p : mesh.vertices())
        out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
    out << "CELLS " << nc << ' ' << 5 * nc << '\n';
    for (std::size_t c = 0; c < nc; ++c) {
        const auto& cv = mesh.cell(static_cast<int>(c));
        out << "4 " << cv[0] << ' ' << cv[1] << ' ' << cv[2] << ' ' << cv[3] << '\n';
    }
    out << "CELL_TYPES " << nc << '\n';
    for (std::size_t c = 0; c < nc; ++c)
        out << "10\n";
    out << "POINT_DATA " << nv << "\nVECTORS displacement double\n";
    for (std::size_t i = 0; i < nv; ++i) {
        const Vec3 a = count[i] > 0 ? Vec3(u[i] / count[i]) : Vec3::Zero();
        out << a[0] << ' ' << a[1] << ' ' << a[2] << '\n';
    }
    out << "CELL_DATA " << nc << "\nSCALARS stress_trace double 1\nLOOKUP_TABLE default\n";
    for (double t : trace)
        out << t << '\n';
    out << "SCALARS von_mises double 1\nLOOKUP_TABLE default\n";
    for (double m : mises)
        out << m << '\n';
}

void write_coordinate(std::ostream& out, const SparseMatrix& m) {
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

} // namespace tdnns
