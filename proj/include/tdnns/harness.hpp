#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdnns/assembly.hpp"
#include "tdnns/norms.hpp"
#include "tdnns/solver.hpp"

namespace tdnns {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Closed-form solution of the elasticity problem on the unit cube:
/// displacement u, stress sigma = C eps(u), load f = -div sigma and the
/// boundary data derived from them.
struct ManufacturedCase {
    std::string name;
    MaterialLaw material;
    std::set<CubeFace> dirichlet;
    VectorField u;
    TensorField sigma;
    std::function<Vec3(const Vec3&)> f;
    /// Scalar field for W-interpolation studies.
    ScalarField w;

    LoadData load() const;
    /// Largest deviation of -div sigma (central differences, step 1e-5) from f
    /// over 20 pseudo-random interior points, relative to max(1, |f|).
    double equilibrium_defect(unsigned seed = 7) const;
};

std::vector<std::string> builtin_case_names();

/// Builds a case and checks equilibrium; unknown names raise ConfigError
/// listing the valid options.
ManufacturedCase builtin_case(const std::string& name, const MaterialLaw& material);

enum class StudyKind { Converge, Interp, Stability, DumpBasis };

struct StudyConfig {
    StudyKind kind = StudyKind::Converge;
    std::string case_name = "trig";
    int order = 1;
    std::vector<int> levels = {2, 4};
    double E = 1.0;
    double nu = 0.3;
    std::string csv;
    bool vtk = false;
    /// Prefix for VTK files (level number and ".vtk" appended).
    std::string vtk_prefix = "tdnns";
    /// Optional path for a coordinate-format dump of the finest saddle matrix.
    std::string matrix;

    /// Throws ConfigError on invalid combinations.
    void validate() const;
};

StudyKind parse_study_kind(const std::string& s);
const char* to_string(StudyKind k);

/// Flat `key = value` file; '#' starts a comment. Keys: study, case, order,
/// levels, E, nu, csv, vtk, vtk_prefix, matrix. Unknown keys are rejected.
StudyConfig parse_config(std::istream& in, StudyConfig base = {});
StudyConfig read_config_file(const std::string& path, StudyConfig base = {});
std::vector<int> parse_levels(const std::string& s);

struct ConvergenceRow {
    int n = 0;
    double h = 0.0;
    int unknowns = 0;
    NormReport sigma;
    HCurlReport u;
    double combined = 0.0; ///< Sigma_h error plus H(curl) error
    double residual = 0.0;
    double rate = 0.0; ///< of `combined` against the previous level
};

struct InterpRow {
    int n = 0;
    double h = 0.0;
    NormReport sigma;
    HCurlReport u_hcurl;
    BrokenH1Report u_h1h;
    H1Report w_h1;
    double sigma_l2_rate = 0.0;
    double sigma_h_rate = 0.0;
    double u_hcurl_rate = 0.0;
    double u_h1h_rate = 0.0;
    double w_h1_rate = 0.0;
};

/// Solves on each level of the config and measures errors against the exact
/// solution. Solver failures are rethrown with the level attached.
std::vector<ConvergenceRow> run_convergence(const StudyConfig& config, std::ostream* log = nullptr);
std::vector<InterpRow> run_interp_rates(const StudyConfig& config, std::ostream* log = nullptr);
std::vector<StabilityReport> run_stability(const StudyConfig& config, std::ostream* log = nullptr);

/// log(e_prev / e) / log(h_prev / h); 0 when undefined.
double observed_rate(double e_prev, double e, double h_prev, double h);

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);
void write_interp_csv(std::ostream& out, const std::vector<InterpRow>& rows);
void write_stability_csv(std::ostream& out, const std::vector<StabilityReport>& rows);
/// Summary of the reference bases of order k: one row per space.
void write_basis_csv(std::ostream& out, int k);

/// Legacy ASCII VTK unstructured grid with u_h averaged to the vertices and
/// per-cell stress invariants (trace, von Mises) at the centroid.
void write_vtk(std::ostream& out, const Mesh& mesh, const DofMap& sigma, const DofMap& v,
               const Eigen::VectorXd& sigma_coeffs, const Eigen::VectorXd& u_coeffs);

/// `row col value` lines, 0-based.
void write_coordinate(std::ostream& out, const SparseMatrix& m);

/// Runs the study selected by the config, writing CSV to the configured path
/// (or `out` if empty) and VTK files when requested.
void run_study(const StudyConfig& config, std::ostream& out, std::ostream* log = nullptr);

} // namespace tdnns
