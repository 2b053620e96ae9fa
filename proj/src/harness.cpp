#include "tdnns/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "tdnns/interpolation.hpp"

namespace tdnns {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
    }
    if (pos != v.size())
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
    return d;
}

int parse_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    int i = 0;
    try {
        i = std::stoi(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
    }
    if (pos != v.size())
        throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
    return i;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw ConfigError("'" + key + "' expects true or false, got '" + v + "'");
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    f << std::setprecision(12);
    return f;
}

MaterialLaw material_of(const StudyConfig& c) { return {c.E, c.nu}; }

} // namespace

StudyKind parse_study_kind(const std::string& s) {
    if (s == "converge")
        return StudyKind::Converge;
    if (s == "interp")
        return StudyKind::Interp;
    if (s == "stability")
        return StudyKind::Stability;
    if (s == "dump-basis")
        return StudyKind::DumpBasis;
    throw ConfigError("unknown study '" + s + "'; valid: converge interp stability dump-basis");
}

const char* to_string(StudyKind k) {
    switch (k) {
    case StudyKind::Converge: return "converge";
    case StudyKind::Interp: return "interp";
    case StudyKind::Stability: return "stability";
    case StudyKind::DumpBasis: return "dump-basis";
    }
    return "?";
}

std::vector<int> parse_levels(const std::string& s) {
    std::vector<int> out;
    std::string token;
    std::istringstream in(s);
    while (std::getline(in, token, ',')) {
        std::istringstream words(token);
        std::string w;
        while (words >> w)
            out.push_back(parse_int("levels", w));
    }
    return out;
}

void StudyConfig::validate() const {
    if (order != 1 && order != 2)
        throw ConfigError("order must be 1 or 2");
    if (!(E > 0.0))
        throw ConfigError("E must be positive");
    if (!(nu > -1.0 && nu < 0.49))
        throw ConfigError("nu must lie in (-1, 0.49)");
    if (kind == StudyKind::DumpBasis)
        return;
    if (levels.empty())
        throw ConfigError("levels must not be empty");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 1)
            throw ConfigError("levels must be positive");
        if (i > 0 && levels[i] <= levels[i - 1])
            throw ConfigError("levels must be strictly increasing");
    }
    // interpolation needs no solve, so only solve and eigensolve studies get the tighter cap
    const int cap = (kind == StudyKind::Stability || (kind == StudyKind::Converge && order == 2)) ? 4 : 8;
    if (levels.back() > cap) {
        std::ostringstream s;
        s << "level " << levels.back() << " exceeds the cap n <= " << cap << " for " << to_string(kind)
          << " at order " << order;
        throw ConfigError(s.str());
    }
    const auto names = builtin_case_names();
    if (std::find(names.begin(), names.end(), case_name) == names.end())
        builtin_case(case_name, {E, nu}); // throws the listed-options error
}

StudyConfig parse_config(std::istream& in, StudyConfig base) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "study")
                base.kind = parse_study_kind(value);
            else if (key == "case")
                base.case_name = value;
            else if (key == "order")
                base.order = parse_int(key, value);
            else if (key == "levels")
                base.levels = parse_levels(value);
            else if (key == "E")
                base.E = parse_double(key, value);
            else if (key == "nu")
                base.nu = parse_double(key, value);
            else if (key == "csv")
                base.csv = value;
            else if (key == "vtk")
                base.vtk = parse_bool(key, value);
            else if (key == "vtk_prefix")
                base.vtk_prefix = value;
            else if (key == "matrix")
                base.matrix = value;
            else
                throw ConfigError("unknown key '" + key + "'");
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

StudyConfig read_config_file(const std::string& path, StudyConfig base) {
    std::ifstream f(path);
    if (!f)
        throw ConfigError("cannot open config '" + path + "'");
    try {
        return parse_config(f, std::move(base));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

double observed_rate(double e_prev, double e, double h_prev, double h) {
    if (!(e_prev > 0.0) || !(e > 0.0) || h_prev == h)
        return 0.0;
    return std::log(e_prev / e) / std::log(h_prev / h);
}

std::vector<ConvergenceRow> run_convergence(const StudyConfig& config, std::ostream* log) {
    config.validate();
    const ManufacturedCase mc = builtin_case(config.case_name, material_of(config));
    const int k = config.order;
    const int degree = data_quadrature_degree(k);
    std::vector<ConvergenceRow> rows;
    for (std::size_t li = 0; li < config.levels.size(); ++li) {
        const int n = config.levels[li];
        try {
            const Mesh mesh = build_structured_cube(n, mc.dirichlet);
            const SpaceSet s(mesh, k);
            const SaddleSystem sys = assemble_system(mesh, mc.material, mc.load(), s.sigma, s.v);
            const SaddleSolution sol = solve_saddle(sys);
            const Eigen::VectorXd sc = sys.expand_sigma(sol.sigma);
            const Eigen::VectorXd uc = sys.expand_v(sol.u);

            ConvergenceRow row;
            row.n = n;
            row.h = 1.0 / n;
            row.unknowns = sys.num_sigma() + sys.num_v();
            row.residual = sol.relative_residual;
            const SigmaNorm sn(mesh, s.sigma, s.w);
            row.sigma = sn.of_difference(&mc.sigma, sc, degree);
            row.u = hcurl_norm(mesh, s.v, uc, &mc.u, degree);
            row.combined = row.sigma.sigma_h_norm + row.u.total;
            if (!rows.empty())
                row.rate = observed_rate(rows.back().combined, row.combined, rows.back().h, row.h);
            rows.push_back(row);

            if (config.vtk) {
                std::ofstream f = open_output(config.vtk_prefix + "_n" + std::to_string(n) + ".vtk");
                write_vtk(f, mesh, s.sigma, s.v, sc, uc);
            }
            if (!config.matrix.empty() && li + 1 == config.levels.size()) {
                std::ofstream f = open_output(config.matrix);
                write_coordinate(f, sys.block_matrix());
            }
            if (log)
                *log << "level n=" << n << ": " << row.unknowns << " unknowns, combined error " << row.combined
                     << ", residual " << row.residual << '\n';
        } catch (const SolverError& e) {
            throw SolverError("level n=" + std::to_string(n) + ": " + e.what());
        }
    }
    return rows;
}

std::vector<InterpRow> run_interp_rates(const StudyConfig& config, std::ostream* log) {
    config.validate();
    const ManufacturedCase mc = builtin_case(config.case_name, material_of(config));
    const int k = config.order;
    const int degree = data_quadrature_degree(k);
    std::vector<InterpRow> rows;
    for (const int n : config.levels) {
        const Mesh mesh = build_structured_cube(n, mc.dirichlet);
        const SpaceSet s(mesh, k);
        InterpRow row;
        row.n = n;
        row.h = 1.0 / n;
        const SigmaNorm sn(mesh, s.sigma, s.w);
        row.sigma = sn.of_difference(&mc.sigma, interpolate_sigma(mesh, s.sigma, mc.sigma), degree);
        const Eigen::VectorXd uc = interpolate_v(mesh, s.v, mc.u);
        row.u_hcurl = hcurl_norm(mesh, s.v, uc, &mc.u, degree);
        row.u_h1h = broken_h1_norm(mesh, s.v, uc, &mc.u, degree);
        row.w_h1 = h1_norm(mesh, s.w, interpolate_w(mesh, s.w, mc.w), &mc.w, degree);
        if (!rows.empty()) {
            const InterpRow& p = rows.back();
            row.sigma_l2_rate = observed_rate(p.sigma.l2_sigma, row.sigma.l2_sigma, p.h, row.h);
            row.sigma_h_rate = observed_rate(p.sigma.sigma_h_norm, row.sigma.sigma_h_norm, p.h, row.h);
            row.u_hcurl_rate = observed_rate(p.u_hcurl.total, row.u_hcurl.total, p.h, row.h);
            row.u_h1h_rate = observed_rate(p.u_h1h.total, row.u_h1h.total, p.h, row.h);
            row.w_h1_rate = observed_rate(p.w_h1.total, row.w_h1.total, p.h, row.h);
        }
        rows.push_back(row);
        if (log)
            *log << "level n=" << n << ": sigma L2 " << row.sigma.l2_sigma << ", u H(curl) " << row.u_hcurl.total
                 << '\n';
    }
    return rows;
}

std::vector<StabilityReport> run_stability(const StudyConfig& config, std::ostream* log) {
    config.validate();
    const ManufacturedCase mc = builtin_case(config.case_name, material_of(config));
    std::vector<StabilityReport> out;
    for (const int n : config.levels) {
        const Mesh mesh = build_structured_cube(n, mc.dirichlet);
        StabilityReport r = stability_constants(mesh, mc.material, config.order);
        r.level = n;
        out.push_back(r);
        if (log)
            *log << "level n=" << n << ": inf-sup " << r.infsup << ", kernel coercivity " << r.kernel_coercivity
                 << ", continuity " << r.continuity << '\n';
    }
    return out;
}

void run_study(const StudyConfig& config, std::ostream& out, std::ostream* log) {
    std::ofstream file;
    std::ostream* dest = &out;
    if (!config.csv.empty()) {
        config.validate();
        file = open_output(config.csv);
        dest = &file;
    }
    *dest << std::setprecision(12);
    switch (config.kind) {
    case StudyKind::Converge: write_convergence_csv(*dest, run_convergence(config, log)); break;
    case StudyKind::Interp: write_interp_csv(*dest, run_interp_rates(config, log)); break;
    case StudyKind::Stability: write_stability_csv(*dest, run_stability(config, log)); break;
    case StudyKind::DumpBasis:
        config.validate();
        write_basis_csv(*dest, config.order);
        break;
    }
}

} // namespace tdnns
