#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sam/problem.hpp"

namespace sam {

struct MonteCarloOptions {
    std::uint64_t n = 100000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    // Keep the sampled parameter rows in the result. Defaults to on for
    // n <= 1e5 and off above that to bound memory.
    std::optional<bool> retain_samples;
};

struct MonteCarloResult {
    std::uint64_t n_samples = 0;
    std::uint64_t n_pass = 0;  // samples satisfying ALL specs
    double yield_estimate = 0.0;
    std::uint64_t seed = 0;
    // Aligned with the problem's spec list; each entry >= n_pass.
    std::vector<std::uint64_t> per_spec_pass;
    // Samples whose metric evaluation threw; they count as failing every
    // spec rather than being dropped.
    std::uint64_t eval_failures = 0;
    // Retained sample matrix, row-major n_samples x param_names.size(),
    // populated when retention is on.
    bool retained = false;
    std::vector<std::string> param_names;  // non-Fixed, declaration order
    std::vector<double> samples;
};

/// Samples every non-Fixed parameter from its distribution, evaluates the
/// spec'd metrics, and counts joint and per-spec passes. Sample i draws
/// from a generator derived from (seed, i), so the result is bit-identical
/// for any thread count.
MonteCarloResult run_monte_carlo(const DesignProblem& problem, const MonteCarloOptions& options);

MonteCarloResult run_monte_carlo(const DesignProblem& problem, std::uint64_t n,
                                 std::uint64_t seed);

/// Wilson score interval for the yield estimate at the given confidence
/// level (0 < level < 1). Satisfies 0 <= lo <= yield <= hi <= 1.
std::pair<double, double> confidence_interval(const MonteCarloResult& result, double level);

}  // namespace sam
