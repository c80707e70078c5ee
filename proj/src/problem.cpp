#include "sam/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sam/error.hpp"

namespace sam {

namespace {

struct FieldNamesVisitor {
    std::vector<std::string> operator()(const CantileverModel& m) const {
        auto fields = bindable_fields(m);
        return {fields.begin(), fields.end()};
    }
    std::vector<std::string> operator()(const PressureSensorModel& m) const {
        auto fields = bindable_fields(m);
        return {fields.begin(), fields.end()};
    }
    std::vector<std::string> operator()(const FunctionDevice& m) const { return m.fields; }
};

double function_device_metric(const FunctionDevice& dev, std::string_view name,
                              std::span<const double> fields) {
    auto it = dev.metrics.find(name);
    if (it == dev.metrics.end()) {
        throw UnknownMetricError("metric '" + std::string(name) +
                                 "' is not defined for this synthetic device");
    }
    const double v = it->second.value(fields);
    if (!std::isfinite(v)) {
        throw EvaluationError("metric '" + std::string(name) + "' evaluated to a non-finite value");
    }
    return v;
}

}  // namespace

const char* to_string(Relation r) {
    return r == Relation::GE ? "ge" : "le";
}

const char* device_kind(const Device& device) {
    switch (device.index()) {
        case 0: return "cantilever";
        case 1: return "pressure_sensor";
        default: return "synthetic";
    }
}

std::vector<std::string> device_field_names(const Device& device) {
    return std::visit(FieldNamesVisitor{}, device);
}

std::vector<std::string> device_metric_names(const Device& device) {
    return std::visit(
        [](const auto& m) -> std::vector<std::string> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, FunctionDevice>) {
                std::vector<std::string> names;
                for (const auto& [name, fn] : m.metrics) names.push_back(name);
                return names;
            } else {
                return supported_metrics(m);
            }
        },
        device);
}

void DesignProblem::validate() const {
    std::set<std::string> names;
    for (const auto& p : parameters) {
        if (p.name.empty()) {
            throw Error("parameter with empty name");
        }
        if (!names.insert(p.name).second) {
            throw Error("duplicate parameter '" + p.name + "'");
        }
        if (!p.dist.in_support(p.nominal)) {
            throw Error("parameter '" + p.name + "': nominal " + std::to_string(p.nominal) +
                        " lies outside the distribution support");
        }
        if (p.dist.kind() == DistKind::Gaussian && p.nominal != p.dist.mu()) {
            throw Error("parameter '" + p.name + "': nominal must equal the Gaussian mean");
        }
    }

    const auto fields = device_field_names(device);
    std::set<std::string> bound_fields;
    for (const auto& b : bindings) {
        if (std::find(fields.begin(), fields.end(), b.field) == fields.end()) {
            throw Error("binding references unknown device field '" + b.field + "'");
        }
        if (!bound_fields.insert(b.field).second) {
            throw Error("device field '" + b.field + "' bound more than once");
        }
        if (b.param && !names.contains(*b.param)) {
            throw Error("binding for field '" + b.field + "' references undeclared parameter '" +
                        *b.param + "'");
        }
    }

    const auto supported = device_metric_names(device);
    std::set<std::string> declared;
    for (const auto& m : metrics) {
        if (std::find(supported.begin(), supported.end(), m) == supported.end()) {
            throw Error("metric '" + m + "' is not defined for device " +
                        std::string(device_kind(device)));
        }
        if (!declared.insert(m).second) {
            throw Error("duplicate metric '" + m + "'");
        }
    }
    for (const auto& s : specs) {
        if (!declared.contains(s.metric)) {
            throw Error("spec references undeclared metric '" + s.metric + "'");
        }
        if (!std::isfinite(s.bound)) {
            throw Error("spec bound for '" + s.metric + "' is not finite");
        }
    }
}

std::vector<double> DesignProblem::nominal_values() const {
    std::vector<double> out;
    out.reserve(parameters.size());
    for (const auto& p : parameters) out.push_back(p.nominal);
    return out;
}

std::vector<std::size_t> DesignProblem::variable_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < parameters.size(); ++i) {
        if (!parameters[i].dist.is_fixed()) out.push_back(i);
    }
    return out;
}

std::vector<std::string> DesignProblem::variable_names() const {
    std::vector<std::string> out;
    for (const auto& p : parameters) {
        if (!p.dist.is_fixed()) out.push_back(p.name);
    }
    return out;
}

std::optional<std::size_t> DesignProblem::parameter_index(std::string_view name) const {
    for (std::size_t i = 0; i < parameters.size(); ++i) {
        if (parameters[i].name == name) return i;
    }
    return std::nullopt;
}

MetricSet DesignProblem::evaluate_at(std::span<const double> x,
                                     std::span<const std::string> which) const {
    if (x.size() != parameters.size()) {
        throw Error("parameter point has wrong dimension");
    }
    return std::visit(
        [&](const auto& dev) -> MetricSet {
            using T = std::decay_t<decltype(dev)>;
            if constexpr (std::is_same_v<T, FunctionDevice>) {
                std::vector<double> fields = dev.field_values;
                fields.resize(dev.fields.size(), 0.0);
                for (const auto& b : bindings) {
                    auto it = std::find(dev.fields.begin(), dev.fields.end(), b.field);
                    const auto fi = static_cast<std::size_t>(it - dev.fields.begin());
                    fields[fi] = b.param ? x[*parameter_index(*b.param)] : b.literal;
                }
                MetricSet out;
                for (const auto& name : which) {
                    out.set(name, function_device_metric(dev, name, fields));
                }
                return out;
            } else {
                T local = dev;
                for (const auto& b : bindings) {
                    set_field(local, b.field, b.param ? x[*parameter_index(*b.param)] : b.literal);
                }
                return evaluate(local, which);
            }
        },
        device);
}

MetricSet DesignProblem::evaluate_nominal() const {
    const auto x = nominal_values();
    return evaluate_at(x, metrics);
}

std::vector<double> DesignProblem::metric_gradient_at(std::string_view metric,
                                                      std::span<const double> x) const {
    if (x.size() != parameters.size()) {
        throw Error("parameter point has wrong dimension");
    }
    std::vector<double> grad(parameters.size(), 0.0);
    std::visit(
        [&](const auto& dev) {
            using T = std::decay_t<decltype(dev)>;
            if constexpr (std::is_same_v<T, FunctionDevice>) {
                auto it = dev.metrics.find(metric);
                if (it == dev.metrics.end()) {
                    throw UnknownMetricError("metric '" + std::string(metric) +
                                             "' is not defined for this synthetic device");
                }
                if (!it->second.gradient) {
                    throw UnsupportedOperation("synthetic metric '" + std::string(metric) +
                                               "' provides no analytic gradient");
                }
                std::vector<double> fields = dev.field_values;
                fields.resize(dev.fields.size(), 0.0);
                for (const auto& b : bindings) {
                    auto fit = std::find(dev.fields.begin(), dev.fields.end(), b.field);
                    const auto fi = static_cast<std::size_t>(fit - dev.fields.begin());
                    fields[fi] = b.param ? x[*parameter_index(*b.param)] : b.literal;
                }
                const std::vector<double> fgrad = it->second.gradient(fields);
                for (const auto& b : bindings) {
                    if (!b.param) continue;
                    auto fit = std::find(dev.fields.begin(), dev.fields.end(), b.field);
                    const auto fi = static_cast<std::size_t>(fit - dev.fields.begin());
                    grad[*parameter_index(*b.param)] += fgrad.at(fi);
                }
            } else {
                T local = dev;
                for (const auto& b : bindings) {
                    set_field(local, b.field, b.param ? x[*parameter_index(*b.param)] : b.literal);
                }
                const FieldGradient fgrad = evaluate_gradient(local, metric);
                for (const auto& b : bindings) {
                    if (!b.param) continue;
                    for (const auto& [field, partial] : fgrad) {
                        if (field == b.field) {
                            grad[*parameter_index(*b.param)] += partial;
                        }
                    }
                }
            }
        },
        device);
    return grad;
}

std::vector<std::string> DesignProblem::spec_metrics() const {
    std::vector<std::string> out;
    for (const auto& s : specs) {
        if (std::find(out.begin(), out.end(), s.metric) == out.end()) {
            out.push_back(s.metric);
        }
    }
    return out;
}

bool DesignProblem::operator==(const DesignProblem& other) const {
    if (parameters != other.parameters || bindings != other.bindings ||
        metrics != other.metrics || specs != other.specs) {
        return false;
    }
    if (device.index() != other.device.index()) return false;
    if (const auto* c = std::get_if<CantileverModel>(&device)) {
        const auto& o = std::get<CantileverModel>(other.device);
        return c->E == o.E && c->t == o.t && c->w == o.w && c->l == o.l && c->c_f == o.c_f;
    }
    if (const auto* p = std::get_if<PressureSensorModel>(&device)) {
        const auto& o = std::get<PressureSensorModel>(other.device);
        return p->E == o.E && p->t == o.t && p->w == o.w && p->l == o.l && p->g0 == o.g0;
    }
    return false;  // synthetic devices compare unequal
}

DesignProblem make_function_problem(
    std::vector<StatisticalParameter> params,
    std::map<std::string, FunctionDevice::Metric, std::less<>> metrics,
    std::vector<Specification> specs) {
    FunctionDevice dev;
    DesignProblem problem;
    for (const auto& p : params) {
        dev.fields.push_back(p.name);
        dev.field_values.push_back(p.nominal);
        problem.bindings.push_back(Binding{p.name, p.name, 0.0});
    }
    for (const auto& [name, fn] : metrics) {
        problem.metrics.push_back(name);
    }
    dev.metrics = std::move(metrics);
    problem.device = std::move(dev);
    problem.parameters = std::move(params);
    problem.specs = std::move(specs);
    return problem;
}

}  // namespace sam
