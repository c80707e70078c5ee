#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sam/sensitivity.hpp"
#include "sam/sweep.hpp"

namespace sam::cli {

enum class Command { Check, Sens, Mc, Wcd, Sweep };
enum class Format { Json, Csv };

struct RunConfig {
    Command command = Command::Check;
    std::string input_path;
    Format format = Format::Json;
    std::optional<std::string> output_path;  // default: standard output
    unsigned threads = 1;

    // mc
    std::uint64_t samples = 100000;
    std::optional<std::uint64_t> seed;  // chosen randomly (and echoed) if absent
    double level = 0.95;

    // sens
    Scheme scheme = Scheme::Central;
    double rel_step = 1e-6;

    // wcd
    std::size_t max_iter = 100;
    double tol = 1e-9;
    bool oracle = false;
    double oracle_radius = 5.0;
    std::size_t oracle_points = 201;

    // sweep
    AxisSpec axis_x;
    AxisSpec axis_y;
};

/// Parses argv-style tokens (program name excluded). Returns nullopt when
/// help was requested (help text goes to `out`); throws UsageError on any
/// invalid usage. All option validation happens here, before any
/// computation.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out);

/// Runs one validated command. Results go to `out` (or the configured
/// output file); diagnostics go to `err`. Returns the process exit code:
/// 0 success, 2 usage/io, 3 netlist parse error, 4 numerical failure.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + execute with uniform error-to-exit-code mapping.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sam::cli
