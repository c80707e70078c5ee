#include "sam/cli.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sam/error.hpp"
#include "sam/montecarlo.hpp"
#include "sam/netlist.hpp"
#include "sam/worstcase.hpp"

namespace sam::cli {
namespace {

using nlohmann::ordered_json;

const char* command_name(Command c) {
    switch (c) {
        case Command::Check: return "check";
        case Command::Sens: return "sens";
        case Command::Mc: return "mc";
        case Command::Wcd: return "wcd";
        case Command::Sweep: return "sweep";
    }
    return "?";
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Central: return "central";
        case Scheme::Forward: return "forward";
        case Scheme::Analytic: return "analytic";
    }
    return "?";
}

const char* relation_name(Relation r) { return r == Relation::GE ? "ge" : "le"; }

AxisSpec parse_axis(const std::string& flag, const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(':', start);
        parts.push_back(text.substr(start, pos == std::string::npos ? pos : pos - start));
        if (pos == std::string::npos) {
            break;
        }
        start = pos + 1;
    }
    const auto malformed = [&]() -> UsageError {
        return UsageError(flag + " expects NAME:MIN:MAX:POINTS, got '" + text + "'");
    };
    if (parts.size() != 4 || parts[0].empty()) {
        throw malformed();
    }
    AxisSpec axis;
    axis.name = parts[0];
    try {
        std::size_t used = 0;
        axis.min = std::stod(parts[1], &used);
        if (used != parts[1].size()) {
            throw malformed();
        }
        axis.max = std::stod(parts[2], &used);
        if (used != parts[2].size()) {
            throw malformed();
        }
        const long long n = std::stoll(parts[3], &used);
        if (used != parts[3].size() || n < 0) {
            throw malformed();
        }
        axis.n = static_cast<std::size_t>(n);
    } catch (const std::logic_error&) {
        throw malformed();
    }
    if (axis.n < 2) {
        throw UsageError(flag + ": POINTS must be at least 2");
    }
    if (!(axis.min < axis.max)) {
        throw UsageError(flag + ": MIN must be below MAX");
    }
    return axis;
}

std::uint64_t random_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
}

ordered_json dist_json(const Distribution& d) {
    switch (d.kind()) {
        case DistKind::Fixed: return {{"kind", "none"}};
        case DistKind::Gaussian: return {{"kind", "gaussian"}, {"mu", d.mu()}, {"sigma", d.sigma()}};
        case DistKind::Uniform: return {{"kind", "uniform"}, {"lo", d.lo()}, {"hi", d.hi()}};
        case DistKind::Exponential:
            return {{"kind", "exponential"}, {"offset", d.offset()}, {"rate", d.rate()}};
    }
    return {};
}

ordered_json spec_json(const Specification& spec) {
    return {{"metric", spec.metric}, {"relation", relation_name(spec.relation)},
            {"bound", spec.bound}};
}

ordered_json run_check(const DesignProblem& problem) {
    ordered_json j;
    j["device"] = device_kind(problem.device);
    j["n_parameters"] = problem.parameters.size();
    j["n_variable_parameters"] = problem.variable_indices().size();
    j["n_specs"] = problem.specs.size();
    ordered_json params = ordered_json::array();
    for (const StatisticalParameter& p : problem.parameters) {
        params.push_back(
            {{"name", p.name}, {"nominal", p.nominal}, {"dist", dist_json(p.dist)}});
    }
    j["parameters"] = std::move(params);
    j["metrics"] = problem.metrics;
    ordered_json specs = ordered_json::array();
    for (const Specification& s : problem.specs) {
        specs.push_back(spec_json(s));
    }
    j["specs"] = std::move(specs);
    return j;
}

ordered_json run_sens(const DesignProblem& problem, const RunConfig& cfg) {
    const SensitivityReport report = jacobian(problem, cfg.scheme, cfg.rel_step);
    ordered_json j;
    j["scheme"] = scheme_name(cfg.scheme);
    j["rel_step"] = cfg.rel_step;
    j["metric_names"] = report.metric_names;
    j["param_names"] = report.param_names;
    ordered_json nominal = ordered_json::object();
    for (const auto& [name, value] : report.nominal_metrics.values()) {
        nominal[name] = value;
    }
    j["nominal_metrics"] = std::move(nominal);
    const std::size_t cols = report.param_names.size();
    ordered_json jac = ordered_json::array();
    ordered_json scaled = ordered_json::array();
    for (std::size_t r = 0; r < report.metric_names.size(); ++r) {
        ordered_json row = ordered_json::array();
        ordered_json srow = ordered_json::array();
        for (std::size_t c = 0; c < cols; ++c) {
            row.push_back(report.jacobian[r * cols + c]);
            srow.push_back(report.scaled[r * cols + c]);
        }
        jac.push_back(std::move(row));
        scaled.push_back(std::move(srow));
    }
    j["jacobian"] = std::move(jac);
    j["scaled"] = std::move(scaled);
    ordered_json ranking = ordered_json::object();
    for (const std::string& m : report.metric_names) {
        ranking[m] = report.ranking.at(m);
    }
    j["ranking"] = std::move(ranking);
    return j;
}

ordered_json run_mc(const DesignProblem& problem, const RunConfig& cfg, std::uint64_t seed) {
    MonteCarloOptions opt;
    opt.n = cfg.samples;
    opt.seed = seed;
    opt.threads = cfg.threads;
    opt.retain_samples = false;
    const MonteCarloResult res = run_monte_carlo(problem, opt);
    const auto [lo, hi] = confidence_interval(res, cfg.level);
    ordered_json j;
    j["n_samples"] = res.n_samples;
    j["n_pass"] = res.n_pass;
    j["yield_estimate"] = res.yield_estimate;
    j["eval_failures"] = res.eval_failures;
    ordered_json per_spec = ordered_json::array();
    for (std::size_t s = 0; s < problem.specs.size(); ++s) {
        ordered_json entry = spec_json(problem.specs[s]);
        entry["pass_count"] = res.per_spec_pass[s];
        per_spec.push_back(std::move(entry));
    }
    j["per_spec"] = std::move(per_spec);
    j["ci"] = {{"level", cfg.level}, {"lo", lo}, {"hi", hi}};
    return j;
}

ordered_json run_wcd(const DesignProblem& problem, const RunConfig& cfg) {
    ordered_json j;
    j["param_names"] = problem.variable_names();
    std::vector<WorstCaseResult> relined;
    ordered_json per_spec = ordered_json::array();
    for (const Specification& spec : problem.specs) {
        const LinearModel lin = linearize(problem, spec.metric);
        const WorstCaseResult one = wcd_linear(lin, problem, spec);
        const WorstCaseResult rel = wcd_relinearized(problem, spec, cfg.max_iter, cfg.tol);
        ordered_json entry = spec_json(spec);
        entry["beta"] = rel.beta;
        entry["yield"] = rel.linear_yield;
        entry["iterations"] = rel.iterations;
        entry["one_shot_beta"] = one.beta;
        entry["one_shot_yield"] = one.linear_yield;
        entry["worst_u"] = rel.worst_u;
        entry["worst_x"] = rel.worst_x;
        if (cfg.oracle) {
            entry["oracle_beta"] =
                wcd_brute_oracle(problem, spec, cfg.oracle_radius, cfg.oracle_points);
        }
        per_spec.push_back(std::move(entry));
        relined.push_back(rel);
    }
    j["per_spec"] = std::move(per_spec);
    j["joint_yield"] = joint_linear_yield(relined);
    return j;
}

ordered_json sweep_json(const YieldMap& map) {
    const auto axis_json = [](const AxisSpec& a) -> ordered_json {
        return {{"name", a.name}, {"min", a.min}, {"max", a.max}, {"n", a.n}};
    };
    ordered_json j;
    j["axis_x"] = axis_json(map.axis_x);
    j["axis_y"] = axis_json(map.axis_y);
    j["xs"] = map.xs;
    j["ys"] = map.ys;
    ordered_json rows = ordered_json::array();
    for (std::size_t iy = 0; iy < map.ys.size(); ++iy) {
        ordered_json row = ordered_json::array();
        for (std::size_t ix = 0; ix < map.xs.size(); ++ix) {
            row.push_back(map.pass_at(ix, iy) ? 1 : 0);
        }
        rows.push_back(std::move(row));
    }
    j["pass"] = std::move(rows);
    j["yield_fraction"] = map.yield_fraction;
    if (map.nominal_index) {
        j["nominal_index"] = {{"ix", map.nominal_index->first},
                              {"iy", map.nominal_index->second}};
    } else {
        j["nominal_index"] = nullptr;
    }
    ordered_json cells = ordered_json::array();
    for (const auto& [ix, iy] : map.boundary_cells) {
        cells.push_back({ix, iy});
    }
    j["boundary_cells"] = std::move(cells);
    j["eval_failures"] = map.eval_failures;
    return j;
}

std::string sweep_csv(const YieldMap& map) {
    std::string out = "x,y,pass\n";
    for (std::size_t iy = 0; iy < map.ys.size(); ++iy) {
        for (std::size_t ix = 0; ix < map.xs.size(); ++ix) {
            out += format_real(map.xs[ix]);
            out += ',';
            out += format_real(map.ys[iy]);
            out += ',';
            out += map.pass_at(ix, iy) ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

void flatten(const ordered_json& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            flatten(value, prefix.empty() ? key : prefix + "." + key, out);
        }
    } else if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& value : j) {
            flatten(value, prefix + "[" + std::to_string(i++) + "]", out);
        }
    } else {
        out += prefix;
        out += ',';
        out += j.dump();
        out += '\n';
    }
}

std::string flatten_csv(const ordered_json& envelope) {
    std::string out = "key,value\n";
    flatten(envelope, "", out);
    return out;
}

}  // namespace

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out) {
    RunConfig cfg;
    CLI::App app{"Statistical yield analysis for parametric device designs"};
    app.require_subcommand(1);

    std::string format_str = "json";
    std::string scheme_str = "central";
    std::string axis_x_str;
    std::string axis_y_str;

    CLI::App* check = app.add_subcommand("check", "Parse a design and summarize it");
    CLI::App* sens = app.add_subcommand("sens", "Sensitivity Jacobian and parameter rankings");
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo yield estimate");
    CLI::App* wcd = app.add_subcommand("wcd", "Worst-case distance analysis per spec");
    CLI::App* sweep = app.add_subcommand("sweep", "Two-parameter design-space sweep");

    for (CLI::App* sub : {check, sens, mc, wcd, sweep}) {
        sub->add_option("input", cfg.input_path, "design netlist (.sam)")->required();
        sub->add_option("--format", format_str, "output format: json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", cfg.output_path, "write output to this file instead of stdout");
    }
    for (CLI::App* sub : {mc, sweep}) {
        sub->add_option("--threads", cfg.threads, "worker threads (result is independent of N)");
    }

    mc->add_option("--samples", cfg.samples, "Monte Carlo sample count");
    mc->add_option("--seed", cfg.seed, "RNG seed (random and echoed when omitted)");
    mc->add_option("--level", cfg.level, "confidence level for the yield interval");

    sens->add_option("--scheme", scheme_str, "derivative scheme: central, forward or analytic")
        ->check(CLI::IsMember({"central", "forward", "analytic"}));
    sens->add_option("--rel-step", cfg.rel_step, "relative finite-difference step");

    wcd->add_option("--max-iter", cfg.max_iter, "relinearization iteration cap");
    wcd->add_option("--tol", cfg.tol, "u-space convergence tolerance");
    wcd->add_flag("--oracle", cfg.oracle, "also run the brute-force grid oracle");
    wcd->add_option("--oracle-radius", cfg.oracle_radius, "grid search radius in u-space");
    wcd->add_option("--oracle-points", cfg.oracle_points, "grid points per axis");

    sweep->add_option("--axis-x", axis_x_str, "x axis as NAME:MIN:MAX:POINTS")->required();
    sweep->add_option("--axis-y", axis_y_str, "y axis as NAME:MIN:MAX:POINTS")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (check->parsed()) {
        cfg.command = Command::Check;
    } else if (sens->parsed()) {
        cfg.command = Command::Sens;
    } else if (mc->parsed()) {
        cfg.command = Command::Mc;
    } else if (wcd->parsed()) {
        cfg.command = Command::Wcd;
    } else {
        cfg.command = Command::Sweep;
    }
    cfg.format = format_str == "csv" ? Format::Csv : Format::Json;
    if (cfg.threads < 1) {
        throw UsageError("--threads must be at least 1");
    }
    if (cfg.command == Command::Mc) {
        if (cfg.samples < 1) {
            throw UsageError("--samples must be at least 1");
        }
        if (!(cfg.level > 0.0) || !(cfg.level < 1.0)) {
            throw UsageError("--level must lie in (0, 1)");
        }
    }
    if (cfg.command == Command::Sens) {
        cfg.scheme = scheme_str == "central"   ? Scheme::Central
                     : scheme_str == "forward" ? Scheme::Forward
                                               : Scheme::Analytic;
        if (!(cfg.rel_step > 0.0) || cfg.rel_step > 0.1) {
            throw UsageError("--rel-step must lie in (0, 0.1]");
        }
    }
    if (cfg.command == Command::Wcd) {
        if (cfg.max_iter < 1) {
            throw UsageError("--max-iter must be at least 1");
        }
        if (!(cfg.tol > 0.0)) {
            throw UsageError("--tol must be positive");
        }
        if (cfg.oracle) {
            if (!(cfg.oracle_radius > 0.0)) {
                throw UsageError("--oracle-radius must be positive");
            }
            if (cfg.oracle_points < 11) {
                throw UsageError("--oracle-points must be at least 11");
            }
        }
    }
    if (cfg.command == Command::Sweep) {
        cfg.axis_x = parse_axis("--axis-x", axis_x_str);
        cfg.axis_y = parse_axis("--axis-y", axis_y_str);
        if (cfg.axis_x.name == cfg.axis_y.name) {
            throw UsageError("--axis-x and --axis-y must name distinct parameters");
        }
    }
    return cfg;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::ifstream in(cfg.input_path, std::ios::binary);
    if (!in) {
        err << "cannot read '" << cfg.input_path << "'\n";
        return 2;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();

    DesignProblem problem;
    try {
        problem = parse(buffer.str());
    } catch (const ParseError& e) {
        err << cfg.input_path << ": " << e.what() << "\n";
        return 3;
    }

    try {
        ordered_json envelope;
        envelope["schema"] = 1;
        envelope["command"] = command_name(cfg.command);
        envelope["input"] = cfg.input_path;
        std::string csv_text;
        switch (cfg.command) {
            case Command::Check:
                envelope["result"] = run_check(problem);
                break;
            case Command::Sens:
                envelope["result"] = run_sens(problem, cfg);
                break;
            case Command::Mc: {
                const std::uint64_t seed = cfg.seed ? *cfg.seed : random_seed();
                envelope["seed"] = seed;
                envelope["result"] = run_mc(problem, cfg, seed);
                break;
            }
            case Command::Wcd:
                envelope["result"] = run_wcd(problem, cfg);
                break;
            case Command::Sweep: {
                const YieldMap map = run_sweep(problem, cfg.axis_x, cfg.axis_y, cfg.threads);
                envelope["result"] = sweep_json(map);
                if (cfg.format == Format::Csv) {
                    csv_text = sweep_csv(map);
                }
                break;
            }
        }
        std::string text;
        if (cfg.format == Format::Json) {
            text = envelope.dump(2);
            text += '\n';
        } else if (cfg.command == Command::Sweep) {
            text = std::move(csv_text);
        } else {
            text = flatten_csv(envelope);
        }
        if (cfg.output_path) {
            std::ofstream file(*cfg.output_path, std::ios::binary);
            if (!file) {
                err << "cannot write '" << *cfg.output_path << "'\n";
                return 2;
            }
            file << text;
            file.flush();
            if (!file) {
                err << "cannot write '" << *cfg.output_path << "'\n";
                return 2;
            }
        } else {
            out << text;
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const std::optional<RunConfig> cfg = parse_args(args, out);
        if (!cfg) {
            return 0;
        }
        return execute(*cfg, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace sam::cli
