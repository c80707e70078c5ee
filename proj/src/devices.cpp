#include "sam/devices.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "sam/error.hpp"

namespace sam {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(name) + " must be finite and > 0");
    }
}

void check_finite_metric(const char* metric, double v) {
    if (!std::isfinite(v)) {
        throw EvaluationError(std::string("metric '") + metric + "' evaluated to a non-finite value");
    }
}

constexpr std::array<std::string_view, 4> kCantileverFields{"E", "t", "w", "l"};
constexpr std::array<std::string_view, 5> kPressureFields{"E", "t", "w", "l", "g0"};

[[noreturn]] void unknown_field(std::string_view field, const char* device) {
    throw DomainError("unknown field '" + std::string(field) + "' for device " + device);
}

[[noreturn]] void unknown_metric(std::string_view metric, const char* device) {
    throw UnknownMetricError("metric '" + std::string(metric) + "' is not defined for device " +
                             device);
}

}  // namespace

void MetricSet::set(const std::string& name, double value) {
    values_[name] = value;
}

double MetricSet::at(std::string_view name) const {
    auto it = values_.find(name);
    if (it == values_.end()) {
        throw UnknownMetricError("metric '" + std::string(name) + "' not present in metric set");
    }
    return it->second;
}

bool MetricSet::contains(std::string_view name) const noexcept {
    return values_.find(name) != values_.end();
}

double spring_constant(double E, double t, double w, double l) {
    require_positive(E, "E");
    require_positive(t, "t");
    require_positive(w, "w");
    require_positive(l, "l");
    return E * t * (w * w * w) / (l * l * l);
}

double mass_change(double k, double f0, double f1) {
    require_positive(k, "k");
    require_positive(f0, "f0");
    require_positive(f1, "f1");
    const double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
    return k / four_pi_sq * (1.0 / (f1 * f1) - 1.0 / (f0 * f0));
}

double resonant_frequency(const CantileverModel& model) {
    require_positive(model.w, "w");
    require_positive(model.l, "l");
    if (model.c_f == 0.0) {
        throw UncalibratedModelError("resonant_frequency requires a calibrated model (c_f > 0)");
    }
    require_positive(model.c_f, "c_f");
    return model.c_f * std::sqrt((model.w * model.w * model.w) / (model.l * model.l * model.l));
}

double calibrate_frequency_constant(double w0, double l0, double f_target) {
    require_positive(w0, "w0");
    require_positive(l0, "l0");
    require_positive(f_target, "f_target");
    return f_target / std::sqrt((w0 * w0 * w0) / (l0 * l0 * l0));
}

double touchdown_force(const PressureSensorModel& model) {
    require_positive(model.E, "E");
    require_positive(model.t, "t");
    require_positive(model.w, "w");
    require_positive(model.l, "l");
    require_positive(model.g0, "g0");
    return 16.0 * model.E * model.w * (model.t * model.t * model.t) * model.g0 /
           (model.l * model.l * model.l);
}

double CantileverModel::spring_constant() const {
    return sam::spring_constant(E, t, w, l);
}

double CantileverModel::resonant_frequency() const {
    return sam::resonant_frequency(*this);
}

double PressureSensorModel::touchdown_force() const {
    return sam::touchdown_force(*this);
}

std::vector<std::string> supported_metrics(const CantileverModel&) {
    return {"spring_constant", "resonant_frequency"};
}

std::vector<std::string> supported_metrics(const PressureSensorModel&) {
    return {"touchdown_force"};
}

std::span<const std::string_view> bindable_fields(const CantileverModel&) {
    return kCantileverFields;
}

std::span<const std::string_view> bindable_fields(const PressureSensorModel&) {
    return kPressureFields;
}

double get_field(const CantileverModel& m, std::string_view field) {
    if (field == "E") return m.E;
    if (field == "t") return m.t;
    if (field == "w") return m.w;
    if (field == "l") return m.l;
    unknown_field(field, "cantilever");
}

double get_field(const PressureSensorModel& m, std::string_view field) {
    if (field == "E") return m.E;
    if (field == "t") return m.t;
    if (field == "w") return m.w;
    if (field == "l") return m.l;
    if (field == "g0") return m.g0;
    unknown_field(field, "pressure_sensor");
}

void set_field(CantileverModel& m, std::string_view field, double value) {
    if (field == "E") { m.E = value; return; }
    if (field == "t") { m.t = value; return; }
    if (field == "w") { m.w = value; return; }
    if (field == "l") { m.l = value; return; }
    unknown_field(field, "cantilever");
}

void set_field(PressureSensorModel& m, std::string_view field, double value) {
    if (field == "E") { m.E = value; return; }
    if (field == "t") { m.t = value; return; }
    if (field == "w") { m.w = value; return; }
    if (field == "l") { m.l = value; return; }
    if (field == "g0") { m.g0 = value; return; }
    unknown_field(field, "pressure_sensor");
}

MetricSet evaluate(const CantileverModel& m, std::span<const std::string> metric_names) {
    MetricSet out;
    for (const auto& name : metric_names) {
        double v;
        if (name == "spring_constant") {
            v = m.spring_constant();
        } else if (name == "resonant_frequency") {
            v = m.resonant_frequency();
        } else {
            unknown_metric(name, "cantilever");
        }
        check_finite_metric(name.c_str(), v);
        out.set(name, v);
    }
    return out;
}

MetricSet evaluate(const PressureSensorModel& m, std::span<const std::string> metric_names) {
    MetricSet out;
    for (const auto& name : metric_names) {
        if (name != "touchdown_force") {
            unknown_metric(name, "pressure_sensor");
        }
        const double v = m.touchdown_force();
        check_finite_metric(name.c_str(), v);
        out.set(name, v);
    }
    return out;
}

FieldGradient evaluate_gradient(const CantileverModel& m, std::string_view metric) {
    if (metric == "spring_constant") {
        const double k = m.spring_constant();
        return {{"E", k / m.E}, {"t", k / m.t}, {"w", 3.0 * k / m.w}, {"l", -3.0 * k / m.l}};
    }
    if (metric == "resonant_frequency") {
        const double f = m.resonant_frequency();
        return {{"E", 0.0}, {"t", 0.0}, {"w", 1.5 * f / m.w}, {"l", -1.5 * f / m.l}};
    }
    unknown_metric(metric, "cantilever");
}

FieldGradient evaluate_gradient(const PressureSensorModel& m, std::string_view metric) {
    if (metric == "touchdown_force") {
        const double f = m.touchdown_force();
        return {{"E", f / m.E},
                {"t", 3.0 * f / m.t},
                {"w", f / m.w},
                {"l", -3.0 * f / m.l},
                {"g0", f / m.g0}};
    }
    unknown_metric(metric, "pressure_sensor");
}

}  // namespace sam
