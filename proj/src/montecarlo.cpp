#include "sam/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "sam/distributions.hpp"
#include "sam/error.hpp"
#include "sam/rng.hpp"

namespace sam {
namespace {

constexpr std::uint64_t kRetainDefaultLimit = 100000;

struct Tally {
    std::uint64_t n_pass = 0;
    std::uint64_t eval_failures = 0;
    std::vector<std::uint64_t> per_spec_pass;
};

}  // namespace

MonteCarloResult run_monte_carlo(const DesignProblem& problem,
                                 const MonteCarloOptions& options) {
    if (options.n < 1) {
        throw DomainError("sample count must be at least 1");
    }
    if (problem.specs.empty()) {
        throw DomainError("Monte Carlo needs at least one specification");
    }

    const std::vector<double> nominal = problem.nominal_values();
    const std::vector<std::size_t> var = problem.variable_indices();
    const std::vector<std::string> metrics = problem.spec_metrics();
    const std::size_t n_specs = problem.specs.size();
    const bool retain = options.retain_samples.value_or(options.n <= kRetainDefaultLimit);

    MonteCarloResult result;
    result.n_samples = options.n;
    result.seed = options.seed;
    result.per_spec_pass.assign(n_specs, 0);
    result.param_names = problem.variable_names();
    result.retained = retain;
    if (retain) {
        result.samples.assign(options.n * var.size(), 0.0);
    }

    const auto run_range = [&](std::uint64_t begin, std::uint64_t end, Tally& tally) {
        tally.per_spec_pass.assign(n_specs, 0);
        std::vector<double> x = nominal;
        for (std::uint64_t i = begin; i < end; ++i) {
            Rng rng = Rng::for_sample(options.seed, i);
            for (const std::size_t pi : var) {
                x[pi] = problem.parameters[pi].dist.sample(rng);
            }
            if (retain) {
                double* row = result.samples.data() + i * var.size();
                for (std::size_t c = 0; c < var.size(); ++c) {
                    row[c] = x[var[c]];
                }
            }
            bool all_pass = false;
            try {
                const MetricSet values = problem.evaluate_at(x, metrics);
                all_pass = true;
                for (std::size_t s = 0; s < n_specs; ++s) {
                    const Specification& spec = problem.specs[s];
                    if (spec.satisfied_by(values.at(spec.metric))) {
                        ++tally.per_spec_pass[s];
                    } else {
                        all_pass = false;
                    }
                }
            } catch (const Error&) {
                ++tally.eval_failures;
            }
            if (all_pass) {
                ++tally.n_pass;
            }
        }
    };

    const unsigned hw = std::max(1u, options.threads);
    const std::uint64_t n_workers = std::min<std::uint64_t>(hw, options.n);
    if (n_workers <= 1) {
        Tally tally;
        run_range(0, options.n, tally);
        result.n_pass = tally.n_pass;
        result.eval_failures = tally.eval_failures;
        result.per_spec_pass = tally.per_spec_pass;
    } else {
        std::vector<Tally> tallies(n_workers);
        std::vector<std::thread> workers;
        workers.reserve(n_workers);
        const std::uint64_t chunk = options.n / n_workers;
        const std::uint64_t rem = options.n % n_workers;
        std::uint64_t begin = 0;
        for (std::uint64_t w = 0; w < n_workers; ++w) {
            const std::uint64_t end = begin + chunk + (w < rem ? 1 : 0);
            workers.emplace_back(run_range, begin, end, std::ref(tallies[w]));
            begin = end;
        }
        for (auto& t : workers) {
            t.join();
        }
        for (const Tally& tally : tallies) {
            result.n_pass += tally.n_pass;
            result.eval_failures += tally.eval_failures;
            for (std::size_t s = 0; s < n_specs; ++s) {
                result.per_spec_pass[s] += tally.per_spec_pass[s];
            }
        }
    }

    result.yield_estimate =
        static_cast<double>(result.n_pass) / static_cast<double>(result.n_samples);
    return result;
}

MonteCarloResult run_monte_carlo(const DesignProblem& problem, std::uint64_t n,
                                 std::uint64_t seed) {
    MonteCarloOptions options;
    options.n = n;
    options.seed = seed;
    return run_monte_carlo(problem, options);
}

std::pair<double, double> confidence_interval(const MonteCarloResult& result, double level) {
    if (!(level > 0.0) || !(level < 1.0)) {
        throw DomainError("confidence level must lie in (0, 1)");
    }
    const double n = static_cast<double>(result.n_samples);
    const double p = result.yield_estimate;
    const double z = std_normal_quantile(0.5 * (1.0 + level));
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // The score interval's endpoints are exactly 0 and 1 at the boundary
    // counts; compute them as such rather than through the rounded surd.
    const double lo = result.n_pass == 0 ? 0.0 : std::clamp(center - half, 0.0, 1.0);
    const double hi =
        result.n_pass == result.n_samples ? 1.0 : std::clamp(center + half, 0.0, 1.0);
    return {lo, hi};
}

}  // namespace sam
