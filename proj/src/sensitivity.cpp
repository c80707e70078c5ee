#include "sam/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <span>

#include "sam/error.hpp"

namespace sam {
namespace {

constexpr double kTinyFloor = 1e-30;

std::string brief_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

MetricSet eval_perturbed(const DesignProblem& problem, std::span<const double> x,
                         std::span<const std::string> which, const std::string& param,
                         double value) {
    try {
        return problem.evaluate_at(x, which);
    } catch (const Error& e) {
        throw EvaluationError("evaluation failed with " + param + " = " + brief_real(value) +
                              ": " + e.what());
    }
}

std::size_t index_of(const std::vector<std::string>& names, const std::string& wanted,
                     const char* what) {
    const auto it = std::find(names.begin(), names.end(), wanted);
    if (it == names.end()) {
        throw UnknownMetricError(std::string(what) + " '" + wanted + "' not present in report");
    }
    return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

double SensitivityReport::entry(const std::string& metric, const std::string& param) const {
    const std::size_t r = index_of(metric_names, metric, "metric");
    const std::size_t c = index_of(param_names, param, "parameter");
    return jacobian[r * param_names.size() + c];
}

double SensitivityReport::scaled_entry(const std::string& metric,
                                       const std::string& param) const {
    const std::size_t r = index_of(metric_names, metric, "metric");
    const std::size_t c = index_of(param_names, param, "parameter");
    return scaled[r * param_names.size() + c];
}

SensitivityReport jacobian(const DesignProblem& problem, Scheme scheme, double rel_step) {
    if (!(rel_step > 0.0) || rel_step > 0.1) {
        throw DomainError("rel_step must lie in (0, 0.1]");
    }
    SensitivityReport report;
    report.metric_names = problem.metrics;
    report.param_names = problem.variable_names();

    const std::vector<double> x0 = problem.nominal_values();
    report.nominal_metrics = problem.evaluate_at(x0, problem.metrics);

    const std::vector<std::size_t> var = problem.variable_indices();
    const std::size_t rows = report.metric_names.size();
    const std::size_t cols = var.size();
    report.jacobian.assign(rows * cols, 0.0);

    if (scheme == Scheme::Analytic) {
        for (std::size_t r = 0; r < rows; ++r) {
            const std::vector<double> g = problem.metric_gradient_at(report.metric_names[r], x0);
            for (std::size_t c = 0; c < cols; ++c) {
                report.jacobian[r * cols + c] = g[var[c]];
            }
        }
    } else {
        // Perturb one parameter at a time and fill that column across all
        // metrics in a single device evaluation.
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t pi = var[c];
            const double h = rel_step * std::max(std::abs(x0[pi]), kTinyFloor);
            std::vector<double> x = x0;
            x[pi] = x0[pi] + h;
            const MetricSet up =
                eval_perturbed(problem, x, problem.metrics, report.param_names[c], x[pi]);
            MetricSet down;
            if (scheme == Scheme::Central) {
                x[pi] = x0[pi] - h;
                down = eval_perturbed(problem, x, problem.metrics, report.param_names[c], x[pi]);
            }
            for (std::size_t r = 0; r < rows; ++r) {
                const std::string& m = report.metric_names[r];
                report.jacobian[r * cols + c] =
                    scheme == Scheme::Central
                        ? (up.at(m) - down.at(m)) / (2.0 * h)
                        : (up.at(m) - report.nominal_metrics.at(m)) / h;
            }
        }
    }

    report.scaled = report.jacobian;
    std::vector<double> scale(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        scale[c] = problem.parameters[var[c]].dist.stddev();
    }
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            report.scaled[r * cols + c] *= scale[c];
        }
    }

    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<std::size_t> order(cols);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(report.scaled[r * cols + a]) > std::abs(report.scaled[r * cols + b]);
        });
        // Magnitudes within 1e-12 relative are one tie: equal sensitivities
        // computed along different algebraic routes differ by an ulp or two,
        // and rank order must not hinge on that. Ties keep declaration order.
        std::size_t lo = 0;
        while (lo < cols) {
            const double top = std::abs(report.scaled[r * cols + order[lo]]);
            std::size_t hi = lo + 1;
            while (hi < cols &&
                   top - std::abs(report.scaled[r * cols + order[hi]]) <= 1e-12 * top) {
                ++hi;
            }
            std::sort(order.begin() + static_cast<std::ptrdiff_t>(lo),
                      order.begin() + static_cast<std::ptrdiff_t>(hi));
            lo = hi;
        }
        std::vector<std::string> names(cols);
        for (std::size_t c = 0; c < cols; ++c) {
            names[c] = report.param_names[order[c]];
        }
        report.ranking.emplace(report.metric_names[r], std::move(names));
    }
    return report;
}

std::vector<std::string> most_sensitive(const SensitivityReport& report,
                                        const std::string& metric, std::size_t k) {
    const auto it = report.ranking.find(metric);
    if (it == report.ranking.end()) {
        throw UnknownMetricError("metric '" + metric + "' not present in report");
    }
    if (k < 1 || k > it->second.size()) {
        throw DomainError("k must lie in [1, #parameters]");
    }
    return {it->second.begin(), it->second.begin() + static_cast<std::ptrdiff_t>(k)};
}

LinearModel linearize(const DesignProblem& problem, const std::string& metric) {
    if (std::find(problem.metrics.begin(), problem.metrics.end(), metric) ==
        problem.metrics.end()) {
        throw UnknownMetricError("metric '" + metric + "' is not declared in the problem");
    }
    LinearModel lin;
    lin.metric = metric;
    lin.param_names = problem.variable_names();

    const std::vector<double> x0 = problem.nominal_values();
    const std::string which[] = {metric};
    lin.value_at_nominal = problem.evaluate_at(x0, which).at(metric);

    const std::vector<double> g = problem.metric_gradient_at(metric, x0);
    const std::vector<std::size_t> var = problem.variable_indices();
    lin.gradient.reserve(var.size());
    for (const std::size_t pi : var) {
        lin.gradient.push_back(g[pi]);
    }
    return lin;
}

}  // namespace sam
