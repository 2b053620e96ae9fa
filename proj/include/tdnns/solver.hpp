#pragma once

#include <optional>
#include <stdexcept>

#include "tdnns/assembly.hpp"

namespace tdnns {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Signs of the eigenvalues of a symmetric matrix.
struct Inertia {
    int positive = 0;
    int negative = 0;
    int zero = 0;
};

/// Inertia from a Bunch-Kaufman factorization (Sylvester's law), for dense
/// matrices of moderate size.
Inertia symmetric_inertia(const Eigen::MatrixXd& m, double zero_tol = 1e-12);

struct SolveOptions {
    /// Relative residual above which solving fails.
    double max_relative_residual = 1e-8;
    /// Compute the inertia of the saddle matrix when it has at most this many
    /// rows (dense factorization).
    int inertia_limit = 0;
};

struct SaddleSolution {
    Eigen::VectorXd sigma; ///< free Sigma coefficients
    Eigen::VectorXd u;     ///< free V coefficients
    double residual = 0.0;
    double relative_residual = 0.0;
    std::optional<Inertia> inertia;
};

/// Sparse LU with partial pivoting (UMFPACK) on the symmetric block matrix,
/// followed by a mandatory residual check.
SaddleSolution solve_saddle(const SaddleSystem& system, const SolveOptions& options = {});

struct StabilityReport {
    int level = 0;
    double h = 0.0;
    int num_sigma = 0;
    int num_v = 0;
    int kernel_dim = 0;
    double infsup = 0.0;
    double kernel_coercivity = 0.0;
    double continuity = 0.0;
    /// Smallest eigenvalue of the compliance tensor, the lower bound the
    /// coercivity argument predicts on the kernel.
    double compliance_bound = 0.0;
};

inline constexpr int kStabilityDofCap = 3000;

/// Discrete inf-sup, kernel-coercivity and continuity constants from dense
/// generalized eigenproblems in the discrete stress norm and the H(curl) norm.
/// Throws SolverError when the free Sigma DOFs exceed `dof_cap`.
StabilityReport stability_constants(const Mesh& mesh, const MaterialLaw& material, int k,
                                   int dof_cap = kStabilityDofCap);

} // namespace tdnns
