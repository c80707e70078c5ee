#ifndef SAM_DEVICES_HPP
#define SAM_DEVICES_HPP

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sam {

/// Named metric values in SI units. Evaluation guarantees every requested
/// metric is present exactly once and finite.
class MetricSet {
public:
    void set(const std::string& name, double value);
    double at(std::string_view name) const;
    bool contains(std::string_view name) const noexcept;
    std::size_t size() const noexcept { return values_.size(); }
    const std::map<std::string, double, std::less<>>& values() const noexcept { return values_; }

private:
    std::map<std::string, double, std::less<>> values_;
};

/// Partial derivatives of one metric with respect to named device fields.
using FieldGradient = std::vector<std::pair<std::string, double>>;

// ---------------------------------------------------------------------------
// Closed-form device models. All quantities SI.
// ---------------------------------------------------------------------------

/// Rectangular cantilever beam with a calibrated resonance law.
///
/// Spring constant K = E*t*w^3 / l^3. The resonant frequency follows the
/// w^{3/2}/l^{3/2} geometry scaling with an absolute level pinned by the
/// calibration constant c_f: f_r = c_f * sqrt(w^3/l^3). A model with
/// c_f == 0 is uncalibrated and cannot evaluate frequency.
struct CantileverModel {
    double E = 1.0;    // Young's modulus (Pa)
    double t = 1.0;    // thickness (m)
    double w = 1.0;    // width (m)
    double l = 1.0;    // length (m)
    double c_f = 0.0;  // frequency calibration constant (Hz)

    double spring_constant() const;
    double resonant_frequency() const;
};

/// Capacitive pressure sensor: clamped-clamped membrane strip over a chamber
/// of depth g0. Touchdown force F_td = 16*E*w*t^3*g0 / l^3 (plate stiffness
/// 192*E*I/l^3 with I = w*t^3/12, times the gap).
struct PressureSensorModel {
    double E = 1.0;   // Young's modulus (Pa)
    double t = 1.0;   // membrane thickness (m)
    double w = 1.0;   // membrane width (m)
    double l = 1.0;   // membrane length (m)
    double g0 = 1.0;  // chamber gap (m)

    double touchdown_force() const;
};

// ---------------------------------------------------------------------------
// Formula-level operations
// ---------------------------------------------------------------------------

/// K = E*t*w^3/l^3. All inputs must be > 0.
double spring_constant(double E, double t, double w, double l);

/// Mass change inferred from a resonance shift:
/// dm = k/(4*pi^2) * (1/f1^2 - 1/f0^2). Positive when f1 < f0.
double mass_change(double k, double f0, double f1);

/// Frequency of a calibrated cantilever; throws UncalibratedModelError when
/// c_f == 0.
double resonant_frequency(const CantileverModel& model);

/// c_f such that a beam with geometry (w0, l0) resonates at f_target.
double calibrate_frequency_constant(double w0, double l0, double f_target);

double touchdown_force(const PressureSensorModel& model);

// ---------------------------------------------------------------------------
// Uniform evaluation surface
// ---------------------------------------------------------------------------

/// Metric names a model supports.
std::vector<std::string> supported_metrics(const CantileverModel&);
std::vector<std::string> supported_metrics(const PressureSensorModel&);

/// Statistical-parameter-bindable field names, in canonical order.
std::span<const std::string_view> bindable_fields(const CantileverModel&);
std::span<const std::string_view> bindable_fields(const PressureSensorModel&);

double get_field(const CantileverModel&, std::string_view field);
double get_field(const PressureSensorModel&, std::string_view field);
void set_field(CantileverModel&, std::string_view field, double value);
void set_field(PressureSensorModel&, std::string_view field, double value);

/// Evaluate the requested metrics. Unknown names throw UnknownMetricError.
MetricSet evaluate(const CantileverModel&, std::span<const std::string> metric_names);
MetricSet evaluate(const PressureSensorModel&, std::span<const std::string> metric_names);

/// Analytical partials of one metric with respect to every bindable field.
FieldGradient evaluate_gradient(const CantileverModel&, std::string_view metric);
FieldGradient evaluate_gradient(const PressureSensorModel&, std::string_view metric);

}  // namespace sam

#endif  // SAM_DEVICES_HPP
