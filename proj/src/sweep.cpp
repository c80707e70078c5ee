#include "sam/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "sam/error.hpp"

namespace sam {
namespace {

std::size_t axis_param(const DesignProblem& problem, const AxisSpec& axis) {
    if (axis.n < 2) {
        throw DomainError("axis '" + axis.name + "' needs at least 2 grid points");
    }
    if (!(axis.min < axis.max)) {
        throw DomainError("axis '" + axis.name + "' needs min < max");
    }
    const auto idx = problem.parameter_index(axis.name);
    if (!idx) {
        throw DomainError("axis parameter '" + axis.name + "' is not declared in the problem");
    }
    return *idx;
}

std::vector<double> axis_values(const AxisSpec& axis) {
    std::vector<double> v(axis.n);
    for (std::size_t i = 0; i < axis.n; ++i) {
        v[i] = axis.min + (axis.max - axis.min) * static_cast<double>(i) /
                              static_cast<double>(axis.n - 1);
    }
    return v;
}

std::optional<std::size_t> nearest_index(const std::vector<double>& values, double target,
                                         double lo, double hi) {
    if (target < lo || target > hi) {
        return std::nullopt;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (std::abs(values[i] - target) < std::abs(values[best] - target)) {
            best = i;
        }
    }
    return best;
}

}  // namespace

YieldMap run_sweep(const DesignProblem& problem, const AxisSpec& axis_x, const AxisSpec& axis_y,
                   unsigned threads) {
    const std::size_t px = axis_param(problem, axis_x);
    const std::size_t py = axis_param(problem, axis_y);
    if (px == py) {
        throw DomainError("sweep axes must name distinct parameters");
    }
    if (problem.specs.empty()) {
        throw DomainError("sweep needs at least one specification");
    }

    YieldMap map;
    map.axis_x = axis_x;
    map.axis_y = axis_y;
    map.xs = axis_values(axis_x);
    map.ys = axis_values(axis_y);
    const std::size_t nx = map.xs.size();
    const std::size_t ny = map.ys.size();
    map.pass.assign(nx * ny, 0);

    const std::vector<double> nominal = problem.nominal_values();
    const std::vector<std::string> metrics = problem.spec_metrics();

    const auto classify_range = [&](std::size_t begin, std::size_t end,
                                    std::uint64_t& failures) {
        std::vector<double> x = nominal;
        for (std::size_t flat = begin; flat < end; ++flat) {
            x[px] = map.xs[flat % nx];
            x[py] = map.ys[flat / nx];
            bool ok = false;
            try {
                const MetricSet values = problem.evaluate_at(x, metrics);
                ok = true;
                for (const Specification& spec : problem.specs) {
                    if (!spec.satisfied_by(values.at(spec.metric))) {
                        ok = false;
                        break;
                    }
                }
            } catch (const Error&) {
                ++failures;
            }
            map.pass[flat] = ok ? 1 : 0;
        }
    };

    const std::size_t total = nx * ny;
    const std::size_t n_workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, total));
    if (n_workers <= 1) {
        classify_range(0, total, map.eval_failures);
    } else {
        std::vector<std::uint64_t> failures(n_workers, 0);
        std::vector<std::thread> workers;
        workers.reserve(n_workers);
        const std::size_t chunk = total / n_workers;
        const std::size_t rem = total % n_workers;
        std::size_t begin = 0;
        for (std::size_t w = 0; w < n_workers; ++w) {
            const std::size_t end = begin + chunk + (w < rem ? 1 : 0);
            workers.emplace_back(classify_range, begin, end, std::ref(failures[w]));
            begin = end;
        }
        for (auto& t : workers) {
            t.join();
        }
        for (const std::uint64_t f : failures) {
            map.eval_failures += f;
        }
    }

    std::size_t n_pass = 0;
    for (const std::uint8_t p : map.pass) {
        n_pass += p;
    }
    map.yield_fraction = static_cast<double>(n_pass) / static_cast<double>(total);

    for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
        for (std::size_t ix = 0; ix + 1 < nx; ++ix) {
            const std::uint8_t c00 = map.pass[iy * nx + ix];
            const std::uint8_t c10 = map.pass[iy * nx + ix + 1];
            const std::uint8_t c01 = map.pass[(iy + 1) * nx + ix];
            const std::uint8_t c11 = map.pass[(iy + 1) * nx + ix + 1];
            if (c00 != c10 || c00 != c01 || c00 != c11) {
                map.boundary_cells.emplace_back(ix, iy);
            }
        }
    }

    const auto nix = nearest_index(map.xs, nominal[px], axis_x.min, axis_x.max);
    const auto niy = nearest_index(map.ys, nominal[py], axis_y.min, axis_y.max);
    if (nix && niy) {
        map.nominal_index = std::make_pair(*nix, *niy);
    }
    return map;
}

}  // namespace sam
