#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>

#include "tdnns/dofmap.hpp"
#include "tdnns/fields.hpp"
#include "tdnns/mesh.hpp"

namespace tdnns {

using SparseMatrix = Eigen::SparseMatrix<double>;

class MaterialError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Isotropic Hooke law given by Young's modulus and Poisson ratio.
struct MaterialLaw {
    double E = 1.0;
    double nu = 0.3;

    /// Throws MaterialError unless E > 0 and -1 < nu < 1/2.
    void validate() const;

    double lambda() const { return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
    double mu() const { return E / (2.0 * (1.0 + nu)); }

    /// A sigma = ((1 + nu) sigma - nu tr(sigma) I) / E
    SymTensor3 compliance(const SymTensor3& sigma) const;
    /// C eps = lambda tr(eps) I + 2 mu eps
    SymTensor3 stiffness(const SymTensor3& strain) const;
    /// Smallest eigenvalue of the compliance tensor on symmetric tensors.
    double compliance_min_eigenvalue() const;
};

/// Volume load and boundary data. `displacement` is needed when the mesh has
/// Dirichlet faces, `traction` (as a function of point and outward normal)
/// when it has Neumann faces.
struct LoadData {
    std::function<Vec3(const Vec3&)> body_force;
    std::function<Vec3(const Vec3&)> displacement;
    std::function<Vec3(const Vec3&, const Vec3&)> traction;
};

/// Quadrature degree used for integrals of non-polynomial data at order k.
inline int data_quadrature_degree(int k) { return 2 * k + 4; }

/// A_ij = int (A sigma_j) : sigma_i over all Sigma DOFs.
SparseMatrix assemble_A(const Mesh& mesh, const MaterialLaw& material, const DofMap& sigma);

/// B(j, i) = b(sigma_i, v_j) with
/// b(tau, v) = -sum_T ( int_T tau : eps(v) - int_{dT} tau_nn v_n ),
/// all four faces of every cell included. Rows: V DOFs, columns: Sigma DOFs.
SparseMatrix assemble_B(const Mesh& mesh, const DofMap& sigma, const DofMap& v);

struct RightHandSide {
    Eigen::VectorXd sigma;
    Eigen::VectorXd v;
};

/// rhs_sigma_i = int_{Gamma_D} (sigma_i)_nn u_{D,n} ds,
/// rhs_v_j = -int f . v_j - int_{Gamma_N} t_{N,t} . (v_j)_t ds.
RightHandSide assemble_rhs(const Mesh& mesh, const LoadData& data, const DofMap& sigma, const DofMap& v);

/// Saddle-point system restricted to free DOFs:
///   [ A  B^T ] [sigma]   [rhs_sigma]
///   [ B  0   ] [  u  ] = [rhs_v    ]
struct SaddleSystem {
    SparseMatrix A;
    SparseMatrix B;
    Eigen::VectorXd rhs_sigma;
    Eigen::VectorXd rhs_v;
    /// Full-length coefficient vectors holding the prescribed values on
    /// constrained DOFs (zero elsewhere).
    Eigen::VectorXd sigma_prescribed;
    Eigen::VectorXd v_prescribed;
    std::vector<int> sigma_free;
    std::vector<int> v_free;

    int num_sigma() const { return static_cast<int>(A.rows()); }
    int num_v() const { return static_cast<int>(B.rows()); }
    SparseMatrix block_matrix() const;
    Eigen::VectorXd block_rhs() const;

    /// Full coefficient vectors from free-DOF values.
    Eigen::VectorXd expand_sigma(const Eigen::VectorXd& free) const;
    Eigen::VectorXd expand_v(const Eigen::VectorXd& free) const;
};

/// Essential values: nn-trace DOFs on Neumann faces from t_N . n and
/// tangential DOFs on the Dirichlet boundary from u_D, both by applying the
/// DOF functionals to the boundary data.
struct EssentialValues {
    Eigen::VectorXd sigma;
    Eigen::VectorXd v;
};
EssentialValues essential_values(const Mesh& mesh, const LoadData& data, const DofMap& sigma, const DofMap& v);

/// Eliminates constrained DOFs, moving their columns to the right-hand side.
SaddleSystem apply_essential(const SparseMatrix& A, const SparseMatrix& B, const RightHandSide& rhs,
                             const EssentialValues& values, const DofMap& sigma, const DofMap& v);

/// Convenience: assemble and reduce the full problem.
SaddleSystem assemble_system(const Mesh& mesh, const MaterialLaw& material, const LoadData& data,
                             const DofMap& sigma, const DofMap& v);

/// Element-local b(tau, v) evaluated with the distributional (strain plus
/// nn-trace) formula for a smooth stress field on one cell and each V shape
/// function; used by tests and norms.
Eigen::VectorXd cell_b_against_v(const Mesh& mesh, int cell, const TensorField& tau, const DofMap& v, int degree);

/// G(i, j) = b(sigma_i, grad w_j) over all Sigma and W DOFs, by direct
/// quadrature with the W Hessians.
SparseMatrix assemble_gradient_coupling(const Mesh& mesh, const DofMap& sigma, const DofMap& w);

/// E(l, j) = V coefficients of grad w_j (V DOFs applied to the gradient).
SparseMatrix gradient_embedding(const Mesh& mesh, const DofMap& v, const DofMap& w);

/// K_ij = int grad w_i . grad w_j over all W DOFs.
SparseMatrix assemble_w_stiffness(const Mesh& mesh, const DofMap& w);

/// Rows/columns of a sparse matrix selected by index lists.
SparseMatrix submatrix(const SparseMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols);

} // namespace tdnns
