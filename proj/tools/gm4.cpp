// gm4: second-order invariants and Gauss map component singularities of
// surfaces immersed in R^4.
//
//   gm4 invariants surface.surf [--point u v] [--grid N]
//   gm4 singular   surface.surf [--component 1|2] [--svg out.svg]
//   gm4 verify-gb  surface.surf [--grid N]
//   gm4 genericity surface.surf
//
// Exit codes: 0 success, 1 identity failure, 2 parse error, 3 domain error,
// 4 not a closed surface, 5 genericity violation.
#include <CLI11.hpp>

#include "gm4/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Gauss map component analysis for surfaces in R^4"};
    app.require_subcommand(1);

    std::string surface_path;
    gm4::CommandOptions opts;
    std::vector<double> point;
    std::vector<std::string> params;
    int grid = 0;
    double tol = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("surface", surface_path, "surface definition file")->required();
        cmd->add_option("--grid", grid, "sampling resolution per chart");
        cmd->add_option("--tol", tol, "numerical tolerance");
        cmd->add_option("--param", params, "override a parameter, name=value");
        cmd->add_option("--svg", opts.svg_path, "write an SVG figure to this path");
        cmd->add_option("--report", opts.report_path, "write the report to this path");
    };

    CLI::App* inv = app.add_subcommand("invariants", "curvature invariants at a point or grid");
    add_common(inv);
    inv->add_option("--point", point, "evaluate at a single (u, v)")->expected(2);

    CLI::App* sng = app.add_subcommand("singular", "trace and classify the singular set");
    add_common(sng);
    sng->add_option("--component", opts.component, "Gauss map component (1 or 2)");

    CLI::App* ver = app.add_subcommand("verify-gb", "verify the Gauss-Bonnet-type identities");
    add_common(ver);

    CLI::App* gen = app.add_subcommand("genericity", "check the genericity conditions");
    add_common(gen);

    CLI11_PARSE(app, argc, argv);

    if (grid > 0) opts.grid = grid;
    if (tol > 0) opts.tol = tol;
    if (point.size() == 2) opts.point = {point[0], point[1]};
    for (const std::string& p : params) {
        const size_t eq = p.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "--param expects name=value, got '%s'\n", p.c_str());
            return 2;
        }
        opts.param_overrides[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
    }

    std::string command;
    if (inv->parsed()) command = "invariants";
    if (sng->parsed()) command = "singular";
    if (ver->parsed()) command = "verify-gb";
    if (gen->parsed()) command = "genericity";
    return gm4::run_command(command, surface_path, opts);
}
