#ifndef SAM_PROBLEM_HPP
#define SAM_PROBLEM_HPP

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sam/devices.hpp"
#include "sam/distributions.hpp"

namespace sam {

/// A design parameter modeled as a random variable. `nominal` is the designed
/// value (the mean for a Gaussian) and must lie in the distribution support.
struct StatisticalParameter {
    std::string name;
    double nominal = 0.0;
    Distribution dist = Distribution::fixed(0.0);

    bool operator==(const StatisticalParameter&) const = default;
};

enum class Relation { GE, LE };

const char* to_string(Relation r);

/// One performance requirement: metric >= bound or metric <= bound.
struct Specification {
    std::string metric;
    Relation relation = Relation::GE;
    double bound = 0.0;

    bool satisfied_by(double value) const noexcept {
        return relation == Relation::GE ? value >= bound : value <= bound;
    }

    bool operator==(const Specification&) const = default;
};

/// Connects one device field to either a named parameter or a literal value.
struct Binding {
    std::string field;
    std::optional<std::string> param;  // engaged: bound to a parameter
    double literal = 0.0;              // used when param is disengaged

    bool operator==(const Binding&) const = default;
};

/// Metric closures over a flat field vector; lets analysis code run on
/// arbitrary functions (test oracles, linear probes) through the same
/// machinery as the built-in device models. Not expressible in a netlist.
struct FunctionDevice {
    struct Metric {
        std::function<double(std::span<const double>)> value;
        // optional; empty function means no analytic gradient
        std::function<std::vector<double>(std::span<const double>)> gradient;
    };

    std::vector<std::string> fields;
    std::map<std::string, Metric, std::less<>> metrics;
    std::vector<double> field_values;  // aligned with `fields`
};

using Device = std::variant<CantileverModel, PressureSensorModel, FunctionDevice>;

const char* device_kind(const Device& device);
std::vector<std::string> device_field_names(const Device& device);
std::vector<std::string> device_metric_names(const Device& device);

/// A device binding, a set of statistical parameters, and the performance
/// specifications to judge it by; the unit every analysis operates on.
///
/// Parameter-space points are flat vectors aligned with `parameters`
/// (Fixed parameters included). Evaluation stamps the point into the device
/// through the bindings and evaluates the requested metrics.
class DesignProblem {
public:
    Device device;
    std::vector<StatisticalParameter> parameters;
    std::vector<Binding> bindings;
    std::vector<std::string> metrics;
    std::vector<Specification> specs;

    /// Enforces the structural invariants: unique parameter names, bindings
    /// referencing declared parameters and device fields, specs referencing
    /// declared metrics, nominals inside distribution supports. Throws Error.
    void validate() const;

    std::vector<double> nominal_values() const;

    /// Indices (into `parameters`) of the non-Fixed parameters, in order.
    std::vector<std::size_t> variable_indices() const;
    std::vector<std::string> variable_names() const;

    std::optional<std::size_t> parameter_index(std::string_view name) const;

    /// Evaluate `which` metrics at parameter point x (aligned with
    /// `parameters`). Throws on evaluation failure.
    MetricSet evaluate_at(std::span<const double> x, std::span<const std::string> which) const;

    MetricSet evaluate_nominal() const;

    /// d(metric)/d(parameter_i) at x via the device's analytical field
    /// partials and the binding chain rule; aligned with `parameters`
    /// (Fixed parameters get their true partial as well).
    std::vector<double> metric_gradient_at(std::string_view metric,
                                           std::span<const double> x) const;

    /// Metrics referenced by at least one spec, in declaration order.
    std::vector<std::string> spec_metrics() const;

    bool operator==(const DesignProblem& other) const;
};

/// Convenience builder for analysis on synthetic metrics: one field per
/// parameter, bound by name.
DesignProblem make_function_problem(std::vector<StatisticalParameter> params,
                                    std::map<std::string, FunctionDevice::Metric, std::less<>> metrics,
                                    std::vector<Specification> specs);

}  // namespace sam

#endif  // SAM_PROBLEM_HPP
