#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sam/problem.hpp"

namespace sam {

struct AxisSpec {
    std::string name;  // parameter to sweep
    double min = 0.0;
    double max = 0.0;
    std::size_t n = 0;  // grid points, endpoints included
};

/// Two-parameter design-space classification grid. `pass` is row-major
/// with y as the slow axis: pass[iy * nx + ix]. boundary_cells lists the
/// (ix, iy) lower corners of grid cells whose four corners do not all
/// classify the same way; nominal_index is the grid point nearest the
/// nominal design when the nominal lies inside both axis ranges.
struct YieldMap {
    AxisSpec axis_x;
    AxisSpec axis_y;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<std::uint8_t> pass;
    double yield_fraction = 0.0;
    std::optional<std::pair<std::size_t, std::size_t>> nominal_index;
    std::vector<std::pair<std::size_t, std::size_t>> boundary_cells;
    // Grid points whose evaluation threw (classified Fail).
    std::uint64_t eval_failures = 0;

    bool pass_at(std::size_t ix, std::size_t iy) const {
        return pass[iy * xs.size() + ix] != 0;
    }
};

/// Evaluates every grid point with all other parameters at nominal; a
/// point passes iff every spec holds there. Grid points are evenly
/// spaced, endpoints included; each axis needs n >= 2 and min < max, and
/// the two axes must name distinct parameters.
YieldMap run_sweep(const DesignProblem& problem, const AxisSpec& axis_x, const AxisSpec& axis_y,
                   unsigned threads = 1);

}  // namespace sam
