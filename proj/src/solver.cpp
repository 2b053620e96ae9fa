#include "tdnns/solver.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>
#include <Eigen/UmfPackSupport>
#include <lapacke.h>

#include "tdnns/norms.hpp"

namespace tdnns {

Inertia symmetric_inertia(const Eigen::MatrixXd& m, double zero_tol) {
    const lapack_int n = static_cast<lapack_int>(m.rows());
    Inertia out;
    if (n == 0)
        return out;
    Eigen::MatrixXd a = m;
    std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
    const lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, a.data(), n, ipiv.data());
    if (info < 0)
        throw SolverError("dsytrf: invalid argument");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    auto classify = [&](double ev) {
        if (std::abs(ev) <= zero_tol * scale)
            ++out.zero;
        else if (ev > 0)
            ++out.positive;
        else
            ++out.negative;
    };
    for (lapack_int i = 0; i < n;) {
        if (ipiv[static_cast<std::size_t>(i)] > 0) {
            classify(a(i, i));
            ++i;
        } else {
            // 2x2 pivot block
            Eigen::Matrix2d d;
            d << a(i, i), a(i + 1, i), a(i + 1, i), a(i + 1, i + 1);
            const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(d).eigenvalues();
            classify(ev[0]);
            classify(ev[1]);
            i += 2;
        }
    }
    return out;
}

SaddleSolution solve_saddle(const SaddleSystem& system, const SolveOptions& options) {
    const SparseMatrix m = system.block_matrix();
    const Eigen::VectorXd rhs = system.block_rhs();
    SaddleSolution out;
    if (options.inertia_limit > 0 && m.rows() <= options.inertia_limit)
        out.inertia = symmetric_inertia(Eigen::MatrixXd(m));

    auto describe = [&] {
        std::ostringstream s;
        s << "saddle system of size " << m.rows() << " (" << system.num_sigma() << " stress, " << system.num_v()
          << " displacement unknowns)";
        if (out.inertia)
            s << ", inertia (+" << out.inertia->positive << ", -" << out.inertia->negative << ", 0:"
              << out.inertia->zero << ")";
        return s.str();
    };

    Eigen::VectorXd x;
    if (m.rows() > 0) {
        Eigen::UmfPackLU<SparseMatrix> lu;
        lu.compute(m);
        if (lu.info() != Eigen::Success)
            throw SolverError("factorization failed for " + describe());
        x = lu.solve(rhs);
        if (lu.info() != Eigen::Success || !x.allFinite())
            throw SolverError("solve failed for " + describe());
        // one step of iterative refinement
        const Eigen::VectorXd r = rhs - m * x;
        x += lu.solve(r);
    } else {
        x.resize(0);
    }
    const double rn = rhs.norm();
    out.residual = m.rows() > 0 ? (m * x - rhs).norm() : 0.0;
    out.relative_residual = rn > 0 ? out.residual / rn : out.residual;
    if (!(out.relative_residual <= options.max_relative_residual)) {
        std::ostringstream s;
        s << "relative residual " << out.relative_residual << " exceeds " << options.max_relative_residual << " for "
          << describe();
        throw SolverError(s.str());
    }
    out.sigma = x.head(system.num_sigma());
    out.u = x.tail(system.num_v());
    return out;
}

StabilityReport stability_constants(const Mesh& mesh, const MaterialLaw& material, int k, int dof_cap) {
    const DofMap sigma(mesh, Space::Sigma, k);
    const DofMap v(mesh, Space::V, k);
    const DofMap w(mesh, Space::W, k + 1);
    if (sigma.num_free() > dof_cap) {
        std::ostringstream s;
        s << "stability eigenproblem has " << sigma.num_free() << " stress unknowns, above the dense cap of "
          << dof_cap << "; use a coarser mesh";
        throw SolverError(s.str());
    }

    const auto& sf = sigma.free_dofs();
    const auto& vf = v.free_dofs();
    const Eigen::MatrixXd a = Eigen::MatrixXd(submatrix(assemble_A(mesh, material, sigma), sf, sf));
    const Eigen::MatrixXd b = Eigen::MatrixXd(submatrix(assemble_B(mesh, sigma, v), vf, sf));

    // discrete stress norm Gram matrix with the dual-norm correction G K^-1 G^T
    const SparseMatrix g = submatrix(assemble_gradient_coupling(mesh, sigma, w), sf, w.free_dofs());
    const SparseMatrix kw = submatrix(assemble_w_stiffness(mesh, w), w.free_dofs(), w.free_dofs());
    Eigen::SimplicialLDLT<SparseMatrix> kfac(kw);
    if (kfac.info() != Eigen::Success)
        throw SolverError("W stiffness matrix is singular");
    const Eigen::MatrixXd gt = Eigen::MatrixXd(SparseMatrix(g.transpose()));
    const Eigen::MatrixXd kinv_gt = kfac.solve(gt);
    Eigen::MatrixXd msig = Eigen::MatrixXd(submatrix(sigma_l2_gram(mesh, sigma), sf, sf))
                         + Eigen::MatrixXd(submatrix(sigma_face_gram(mesh, sigma), sf, sf)) + gt.transpose() * kinv_gt;
    msig = 0.5 * (msig + msig.transpose()).eval();
    const Eigen::MatrixXd nv = Eigen::MatrixXd(submatrix(hcurl_gram(mesh, v), vf, vf));

    StabilityReport r;
    r.h = mesh.max_cell_size();
    r.num_sigma = static_cast<int>(sf.size());
    r.num_v = static_cast<int>(vf.size());
    r.compliance_bound = material.compliance_min_eigenvalue();

    const Eigen::LLT<Eigen::MatrixXd> mllt(msig);
    if (mllt.info() != Eigen::Success)
        throw SolverError("stress norm Gram matrix is not positive definite");

    if (r.num_v > 0) {
        Eigen::MatrixXd s = b * mllt.solve(b.transpose());
        s = 0.5 * (s + s.transpose()).eval();
        const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(s, nv, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw SolverError("inf-sup eigenproblem failed");
        r.infsup = std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
        r.continuity = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    }

    // kernel of B from a rank-revealing QR of B^T
    Eigen::MatrixXd z;
    if (r.num_v > 0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(b.transpose());
        qr.setThreshold(1e-10);
        const Eigen::Index rank = qr.rank();
        const Eigen::MatrixXd q = qr.householderQ();
        z = q.rightCols(b.cols() - rank);
    } else {
        z = Eigen::MatrixXd::Identity(b.cols(), b.cols());
    }
    r.kernel_dim = static_cast<int>(z.cols());
    if (r.kernel_dim > 0) {
        Eigen::MatrixXd za = z.transpose() * a * z;
        Eigen::MatrixXd zm = z.transpose() * msig * z;
        za = 0.5 * (za + za.transpose()).eval();
        zm = 0.5 * (zm + zm.transpose()).eval();
        const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(za, zm, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw SolverError("kernel coercivity eigenproblem failed");
        r.kernel_coercivity = es.eigenvalues().minCoeff();
    }
    return r;
}

} // namespace tdnns
