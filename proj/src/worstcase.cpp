#include "sam/worstcase.hpp"

#include <cmath>
#include <limits>

#include "sam/distributions.hpp"
#include "sam/error.hpp"

namespace sam {
namespace {

// Shared view of the problem's non-Fixed parameters and the machinery to
// move between u-space and parameter space.
struct USpaceView {
    const DesignProblem& problem;
    std::vector<std::size_t> var;
    std::vector<std::string> names;
    std::vector<double> nominal;

    explicit USpaceView(const DesignProblem& p)
        : problem(p),
          var(p.variable_indices()),
          names(p.variable_names()),
          nominal(p.nominal_values()) {}

    std::vector<double> u_nominal() const {
        std::vector<double> u(var.size());
        for (std::size_t j = 0; j < var.size(); ++j) {
            const StatisticalParameter& param = problem.parameters[var[j]];
            u[j] = param.dist.to_u(param.nominal);
        }
        return u;
    }

    std::vector<double> x_of(std::span<const double> u) const {
        std::vector<double> x = nominal;
        for (std::size_t j = 0; j < var.size(); ++j) {
            x[var[j]] = problem.parameters[var[j]].dist.from_u(u[j]);
        }
        return x;
    }

    double metric_at(const std::string& metric, std::span<const double> x) const {
        const std::string which[] = {metric};
        return problem.evaluate_at(x, which).at(metric);
    }

    // Gradient of the metric with respect to u, chain-ruled through the
    // per-parameter u -> x maps.
    std::vector<double> grad_u(const std::string& metric, std::span<const double> u,
                               std::span<const double> x) const {
        const std::vector<double> gx = problem.metric_gradient_at(metric, x);
        std::vector<double> g(var.size());
        for (std::size_t j = 0; j < var.size(); ++j) {
            g[j] = gx[var[j]] * problem.parameters[var[j]].dist.from_u_derivative(u[j]);
        }
        return g;
    }
};

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double boundary_tolerance(double bound, double nominal_value) {
    return 1e-6 * std::max({std::abs(bound), std::abs(nominal_value), 1e-12});
}

}  // namespace

double yield_from_beta(double beta) { return std_normal_cdf(beta); }

WorstCaseResult wcd_linear(const LinearModel& lin, const DesignProblem& problem,
                           const Specification& spec) {
    if (lin.metric != spec.metric) {
        throw DomainError("linear model is for metric '" + lin.metric +
                          "', spec references '" + spec.metric + "'");
    }
    USpaceView view(problem);
    if (view.var.empty()) {
        throw DegenerateGradientError("no non-Fixed parameters to vary");
    }
    if (lin.gradient.size() != view.var.size()) {
        throw DomainError("linear model dimension does not match the problem");
    }

    const std::vector<double> u_nom = view.u_nominal();
    std::vector<double> gamma(view.var.size());
    double norm2 = 0.0;
    for (std::size_t j = 0; j < view.var.size(); ++j) {
        const StatisticalParameter& param = problem.parameters[view.var[j]];
        gamma[j] = lin.gradient[j] * param.dist.from_u_derivative(u_nom[j]);
        norm2 += gamma[j] * gamma[j];
    }
    if (norm2 == 0.0) {
        throw DegenerateGradientError("metric gradient vanishes in u-space; "
                                      "no finite worst-case distance");
    }

    // Value of the linearized metric at the u-space origin (the median
    // point of the parameter distributions); for Gaussian nominals this
    // is exactly the nominal value.
    const double g0 = lin.value_at_nominal - dot(gamma, u_nom);
    const double margin = spec.relation == Relation::GE ? g0 - spec.bound : spec.bound - g0;

    WorstCaseResult result;
    result.spec = spec;
    result.param_names = view.names;
    result.beta = margin / std::sqrt(norm2);
    result.iterations = 1;
    const double scale = (spec.bound - g0) / norm2;
    result.worst_u.resize(view.var.size());
    for (std::size_t j = 0; j < view.var.size(); ++j) {
        result.worst_u[j] = scale * gamma[j];
    }
    const std::vector<double> x = view.x_of(result.worst_u);
    for (const std::size_t pi : view.var) {
        result.worst_x.push_back(x[pi]);
    }
    result.linear_yield = yield_from_beta(result.beta);
    return result;
}

WorstCaseResult wcd_relinearized(const DesignProblem& problem, const Specification& spec,
                                 std::size_t max_iter, double tol) {
    if (max_iter < 1) {
        throw DomainError("max_iter must be at least 1");
    }
    if (!(tol > 0.0)) {
        throw DomainError("tol must be positive");
    }

    const LinearModel lin0 = linearize(problem, spec.metric);
    WorstCaseResult seed = wcd_linear(lin0, problem, spec);
    USpaceView view(problem);

    const bool nominal_ok = spec.satisfied_by(lin0.value_at_nominal);
    const double tol_bound = boundary_tolerance(spec.bound, lin0.value_at_nominal);

    std::vector<double> u = seed.worst_u;
    double step = std::numeric_limits<double>::infinity();
    std::size_t updates = 0;
    bool converged = false;
    for (std::size_t k = 0; k <= max_iter; ++k) {
        const std::vector<double> x = view.x_of(u);
        const double h = view.metric_at(spec.metric, x);
        if (updates > 0 && step <= tol && std::abs(h - spec.bound) <= tol_bound) {
            converged = true;
            break;
        }
        if (k == max_iter) {
            break;
        }
        const std::vector<double> gamma = view.grad_u(spec.metric, u, x);
        const double norm2 = dot(gamma, gamma);
        if (norm2 == 0.0) {
            throw DegenerateGradientError("metric gradient vanishes at the worst-case "
                                          "candidate; cannot relinearize");
        }
        const double scale = (dot(gamma, u) - (h - spec.bound)) / norm2;
        double moved2 = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) {
            const double next = scale * gamma[j];
            const double d = next - u[j];
            moved2 += d * d;
            u[j] = next;
        }
        step = std::sqrt(moved2);
        ++updates;
    }
    if (!converged) {
        throw ConvergenceError("worst-case search did not converge within " +
                                   std::to_string(max_iter) + " iterations",
                               u, static_cast<int>(updates));
    }

    WorstCaseResult result;
    result.spec = spec;
    result.param_names = view.names;
    result.worst_u = u;
    const std::vector<double> x = view.x_of(u);
    for (const std::size_t pi : view.var) {
        result.worst_x.push_back(x[pi]);
    }
    const double norm = std::sqrt(dot(u, u));
    result.beta = nominal_ok ? norm : -norm;
    result.linear_yield = yield_from_beta(result.beta);
    result.iterations = updates;
    return result;
}

double wcd_brute_oracle(const DesignProblem& problem, const Specification& spec,
                        double grid_radius, std::size_t grid_points_per_axis) {
    USpaceView view(problem);
    const std::size_t d = view.var.size();
    if (d < 1 || d > 3) {
        throw DomainError("grid oracle supports 1 to 3 non-Fixed parameters");
    }
    if (grid_points_per_axis < 11) {
        throw DomainError("grid oracle needs at least 11 points per axis");
    }
    if (!(grid_radius > 0.0)) {
        throw DomainError("grid radius must be positive");
    }

    const auto violated_at = [&](std::span<const double> u) {
        try {
            const std::vector<double> x = view.x_of(u);
            return !spec.satisfied_by(view.metric_at(spec.metric, x));
        } catch (const Error&) {
            return true;  // unevaluable corner counts as failing
        }
    };

    // The nominal design violating its own spec is distance zero by
    // convention, independent of where the nominal sits in u-space.
    try {
        if (!spec.satisfied_by(view.metric_at(spec.metric, view.nominal))) {
            return 0.0;
        }
    } catch (const Error&) {
        return 0.0;
    }

    std::vector<double> axis(grid_points_per_axis);
    for (std::size_t i = 0; i < grid_points_per_axis; ++i) {
        axis[i] = -grid_radius + 2.0 * grid_radius * static_cast<double>(i) /
                                     static_cast<double>(grid_points_per_axis - 1);
    }

    double best2 = std::numeric_limits<double>::infinity();
    std::vector<double> u(d, 0.0);
    std::size_t total = 1;
    for (std::size_t j = 0; j < d; ++j) {
        total *= grid_points_per_axis;
    }
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rest = flat;
        double r2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            u[j] = axis[rest % grid_points_per_axis];
            rest /= grid_points_per_axis;
            r2 += u[j] * u[j];
        }
        if (r2 >= best2) {
            continue;  // cannot improve on the best violating point
        }
        if (violated_at(u)) {
            best2 = r2;
        }
    }
    if (!std::isfinite(best2)) {
        throw NoBoundaryError("no spec-violating point within radius " +
                              std::to_string(grid_radius));
    }
    return std::sqrt(best2);
}

double joint_linear_yield(std::span<const WorstCaseResult> results) {
    if (results.empty()) {
        throw DomainError("joint yield needs at least one per-spec result");
    }
    double y = 1.0;
    for (const WorstCaseResult& r : results) {
        y = std::min(y, r.linear_yield);
    }
    return y;
}

}  // namespace sam
