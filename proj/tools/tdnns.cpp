// Command-line driver for the convergence, interpolation and stability studies.
#include <iostream>

#include <CLI11.hpp>

#include "tdnns/harness.hpp"

namespace {

const char* kColumns = R"(CSV columns
  converge:   n,h,unknowns,sigma_l2,sigma_face,sigma_dual,sigma_h,u_l2,u_curl,u_hcurl,combined,rate,residual
              (errors of the discrete solution against the exact one; combined = sigma_h + u_hcurl,
               rate = observed order of `combined` against the previous level)
  interp:     n,h,sigma_l2,sigma_face,sigma_dual,sigma_h,u_hcurl,u_h1h,w_h1 and a *_rate column per error
  stability:  n,h,sigma_dofs,v_dofs,kernel_dim,infsup,kernel_coercivity,continuity,compliance_bound
  dump-basis: space,order,variant,dofs,vertex,edge,face,interior,vandermonde_condition

Config file: one `key = value` per line, '#' comments. Keys: study, case, order,
levels (e.g. "2, 4, 8"), E, nu, csv, vtk (true/false), vtk_prefix, matrix.
Cases: linear, linear-mixed, trig, mixed.)";

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed finite element studies for 3D linear elasticity"};
    app.footer(kColumns);
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string case_name;
    int order = 0;
    std::string levels;
    double E = 0.0;
    double nu = 0.0;
    std::string csv;
    bool vtk = false;
    std::string matrix;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Config file")->check(CLI::ExistingFile);
        sub->add_option("--case", case_name, "Manufactured case");
        sub->add_option("--order", order, "Polynomial order k (1 or 2)");
        sub->add_option("--levels", levels, "Refinement levels, e.g. 2,4,8");
        sub->add_option("--E", E, "Young's modulus");
        sub->add_option("--nu", nu, "Poisson ratio");
        sub->add_option("--csv", csv, "CSV output path (default: stdout)");
        sub->add_flag("--vtk", vtk, "Write VTK files of the discrete solution (converge only)");
        sub->add_option("--matrix", matrix, "Dump the finest saddle matrix in coordinate format (converge only)");
    };
    CLI::App* converge = app.add_subcommand("converge", "Solve and measure errors against the exact solution");
    CLI::App* interp = app.add_subcommand("interp", "Measure interpolation errors");
    CLI::App* stability = app.add_subcommand("stability", "Compute discrete stability constants");
    CLI::App* dump = app.add_subcommand("dump-basis", "Summarize the reference bases");
    for (CLI::App* sub : {converge, interp, stability, dump})
        add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        tdnns::StudyConfig cfg;
        if (!config_path.empty())
            cfg = tdnns::read_config_file(config_path);
        const std::string name = app.get_subcommands().front()->get_name();
        cfg.kind = tdnns::parse_study_kind(name);
        CLI::App* sub = app.get_subcommands().front();
        if (sub->count("--case"))
            cfg.case_name = case_name;
        if (sub->count("--order"))
            cfg.order = order;
        if (sub->count("--levels"))
            cfg.levels = tdnns::parse_levels(levels);
        if (sub->count("--E"))
            cfg.E = E;
        if (sub->count("--nu"))
            cfg.nu = nu;
        if (sub->count("--csv"))
            cfg.csv = csv;
        if (vtk)
            cfg.vtk = true;
        if (sub->count("--matrix"))
            cfg.matrix = matrix;
        cfg.validate();
        tdnns::run_study(cfg, std::cout, &std::cerr);
    } catch (const tdnns::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
