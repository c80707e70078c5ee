#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sam/devices.hpp"
#include "sam/problem.hpp"

namespace sam {

enum class Scheme { Central, Forward, Analytic };

/// Jacobian of every declared metric with respect to every non-Fixed
/// parameter at the nominal point, plus dispersion-scaled rankings.
///
/// `jacobian` and `scaled` are row-major (metric x parameter) in the
/// order given by `metric_names` / `param_names`. `scaled` multiplies
/// each column by that parameter's dispersion scale (sigma for Gaussian,
/// (hi-lo)/sqrt(12) for Uniform, 1/rate for Exponential) so magnitudes
/// are comparable across distribution kinds.
struct SensitivityReport {
    MetricSet nominal_metrics;
    std::vector<std::string> metric_names;
    std::vector<std::string> param_names;  // non-Fixed, declaration order
    std::vector<double> jacobian;
    std::vector<double> scaled;
    // Per metric: parameter names by |scaled| descending; ties keep
    // declaration order.
    std::map<std::string, std::vector<std::string>> ranking;

    double entry(const std::string& metric, const std::string& param) const;
    double scaled_entry(const std::string& metric, const std::string& param) const;
};

/// First-order model of one metric around the nominal point:
///   metric(x) ~ value_at_nominal + gradient . (x - x_nominal)
/// with one gradient component per non-Fixed parameter.
struct LinearModel {
    std::string metric;
    double value_at_nominal = 0.0;
    std::vector<double> gradient;
    std::vector<std::string> param_names;
};

/// Builds the sensitivity report. Central/Forward difference steps are
/// h = rel_step * max(|nominal|, 1e-30) per parameter; rel_step must lie
/// in (0, 0.1]. Analytic requires the device to expose closed-form
/// gradients (both built-ins do).
SensitivityReport jacobian(const DesignProblem& problem, Scheme scheme = Scheme::Central,
                           double rel_step = 1e-6);

/// First k names of the report's ranking for `metric`; 1 <= k <= #parameters.
std::vector<std::string> most_sensitive(const SensitivityReport& report,
                                        const std::string& metric, std::size_t k);

/// Linearizes one declared metric around the nominal point using the
/// analytic gradient.
LinearModel linearize(const DesignProblem& problem, const std::string& metric);

}  // namespace sam
