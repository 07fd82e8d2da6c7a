// Command layer shared by the CLI tool and the test suites.
#pragma once

#include <optional>
#include <string>

#include "gm4/topology.hpp"
#include "gm4/surface_io.hpp"

namespace gm4 {

struct CommandOptions {
    int component = 2;
    std::optional<int> grid;
    std::optional<double> tol;
    std::optional<std::pair<double, double>> point;
    std::string svg_path;
    std::string report_path;
    ParamTable param_overrides;
};

struct CommandOutput {
    int exit_code = 0;
    std::string report;
    std::string svg;
};

CommandOutput cmd_invariants(Atlas atlas, const CommandOptions& opts);
CommandOutput cmd_singular(Atlas atlas, const CommandOptions& opts);
CommandOutput cmd_verify_gb(Atlas atlas, const CommandOptions& opts);
CommandOutput cmd_genericity(Atlas atlas, const CommandOptions& opts);

// Maps the library's error types onto the documented process exit codes:
// 2 parse, 3 domain, 4 not closed, 5 genericity violation.
int run_command(const std::string& command, const std::string& surface_path,
                const CommandOptions& opts, std::string* out_text = nullptr);

}  // namespace gm4
