#pragma once

#include <memory>
#include <optional>

#include <Eigen/SparseCholesky>

#include "tdnns/assembly.hpp"

namespace tdnns {

/// Parts of the discrete stress norm
///   |tau|^2 = |tau|_{L2}^2 + sum_F h_F |tau_nn|_{L2(F)}^2 + (sup_w b(tau, grad w) / |grad w|)^2.
struct NormReport {
    double l2_sigma = 0.0;
    double face_term = 0.0;
    double dual_term = 0.0;
    double sigma_h_norm = 0.0;
    /// Relative residual of the stiffness solve behind the dual term.
    double dual_residual = 0.0;
};

/// Evaluates the discrete stress norm. The supremum runs over W_h functions
/// vanishing on the Dirichlet boundary and is computed as sqrt(g^T K^{-1} g).
class SigmaNorm {
public:
    SigmaNorm(const Mesh& mesh, const DofMap& sigma, const DofMap& w);

    /// Norm of (exact - tau_h), where tau_h has coefficients `coeffs` (empty
    /// means zero) and `exact` is optional. Non-polynomial integrals use
    /// quadrature of degree `degree`.
    NormReport of_difference(const TensorField* exact, const Eigen::VectorXd& coeffs, int degree) const;
    NormReport of_coefficients(const Eigen::VectorXd& coeffs) const;

    /// sqrt(g^T K^{-1} g) for a functional g over the free W DOFs; the
    /// relative solve residual is written to `residual` when given.
    double dual(const Eigen::VectorXd& g, double* residual = nullptr) const;

    /// G restricted to (all Sigma DOFs) x (free W DOFs).
    const SparseMatrix& coupling() const { return g_free_; }
    const SparseMatrix& stiffness() const { return k_free_; }

private:
    const Mesh& mesh_;
    const DofMap& sigma_;
    const DofMap& w_;
    SparseMatrix g_free_;
    SparseMatrix k_free_;
    std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix>> k_solver_;
};

/// g_j = b(tau, grad w_j) for a smooth tensor field over all W DOFs, using the
/// elementwise (Hessian plus face) formula.
Eigen::VectorXd b_field_against_gradients(const Mesh& mesh, const TensorField& tau, const DofMap& w, int degree);

struct HCurlReport {
    double l2 = 0.0;
    double curl = 0.0;
    double total = 0.0;
};

/// H(curl) norm of (exact - v_h); either part may be absent.
HCurlReport hcurl_norm(const Mesh& mesh, const DofMap& v, const Eigen::VectorXd& coeffs, const VectorField* exact,
                       int degree);

struct BrokenH1Report {
    double strain = 0.0;
    double jump = 0.0;
    double total = 0.0;
};

/// Broken H1 norm of (exact - v_h): elementwise strain plus
/// sum over interior faces of h_F^{-1} |[v_n]|^2. The exact field is assumed
/// continuous, so only v_h contributes jumps.
BrokenH1Report broken_h1_norm(const Mesh& mesh, const DofMap& v, const Eigen::VectorXd& coeffs,
                              const VectorField* exact, int degree);

/// H1 norm of (exact - w_h).
struct H1Report {
    double l2 = 0.0;
    double gradient = 0.0;
    double total = 0.0;
};
H1Report h1_norm(const Mesh& mesh, const DofMap& w, const Eigen::VectorXd& coeffs, const ScalarField* exact,
                 int degree);

/// Gram matrices over all DOFs of a space.
SparseMatrix sigma_l2_gram(const Mesh& mesh, const DofMap& sigma);
SparseMatrix sigma_face_gram(const Mesh& mesh, const DofMap& sigma);
SparseMatrix hcurl_gram(const Mesh& mesh, const DofMap& v);

} // namespace tdnns
