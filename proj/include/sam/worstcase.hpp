#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sam/problem.hpp"
#include "sam/sensitivity.hpp"

namespace sam {

/// Worst-case distance result for one specification.
///
/// beta is the signed distance in u-space (every non-Fixed parameter
/// mapped to an independent standard normal) from the origin to the
/// specification boundary: positive when the nominal design satisfies
/// the spec, negative when it violates it. linear_yield is the standard
/// normal CDF of beta.
struct WorstCaseResult {
    Specification spec;
    double beta = 0.0;
    std::vector<double> worst_u;  // boundary point, u-space
    std::vector<double> worst_x;  // same point, parameter space
    std::vector<std::string> param_names;  // non-Fixed, declaration order
    double linear_yield = 0.0;
    std::size_t iterations = 0;
};

/// One-shot solve against the linearized metric: transforms the gradient
/// to u-space through the parameter maps, then projects the origin onto
/// the hyperplane {lin(u) = bound}. The returned worst_u satisfies
/// lin(worst_u) = bound and |worst_u| = |beta|.
WorstCaseResult wcd_linear(const LinearModel& lin, const DesignProblem& problem,
                           const Specification& spec);

/// Yield of a linearized spec at worst-case distance beta: Phi(beta).
/// Strictly increasing, 0.5 at beta = 0.
double yield_from_beta(double beta);

/// Iteratively re-linearizes the true metric at the current boundary
/// candidate until the candidate moves at most tol in u-space and sits on
/// the boundary to 1e-6 relative. Exactly one iteration for metrics that
/// are linear in u-space.
WorstCaseResult wcd_relinearized(const DesignProblem& problem, const Specification& spec,
                                 std::size_t max_iter = 100, double tol = 1e-9);

/// Independent grid-search estimate of |beta|: the minimum |u| over a
/// [-radius, radius]^d grid (d = #non-Fixed parameters, at most 3) whose
/// mapped parameter point violates the spec. Error is bounded by the grid
/// cell diagonal. Returns 0 when the nominal design already violates.
double wcd_brute_oracle(const DesignProblem& problem, const Specification& spec,
                        double grid_radius, std::size_t grid_points_per_axis);

/// Summary yield over several per-spec results: the minimum per-spec
/// linear yield (a lower-bound-flavored summary, not the joint yield).
double joint_linear_yield(std::span<const WorstCaseResult> results);

}  // namespace sam
