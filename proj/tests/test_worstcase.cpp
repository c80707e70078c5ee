#include <doctest.h>

#include <cmath>
#include <vector>

#include "sam/error.hpp"
#include "sam/montecarlo.hpp"
#include "sam/rng.hpp"
#include "sam/sensitivity.hpp"
#include "sam/worstcase.hpp"
#include "support/builders.hpp"
#include "support/normal_oracle.hpp"

using namespace sam;

namespace {

// One-shot linear solve for a synthetic linear metric problem.
WorstCaseResult solve_linear(const DesignProblem& p) {
    return wcd_linear(linearize(p, "g"), p, p.specs.at(0));
}

double norm(std::span<const double> v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("yield curve values and shape") {
    CHECK(yield_from_beta(0.0) == 0.5);
    CHECK(std::abs(yield_from_beta(3.0) - 0.9986501) <= 1e-6);
    CHECK(std::abs(yield_from_beta(-1.0) - 0.1586553) <= 1e-6);

    // Quadrature oracle across the working range.
    for (double b = -8.0; b <= 8.0; b += 0.25) {
        CHECK(std::abs(yield_from_beta(b) - oracle::cdf(b)) <= 1e-12);
        CHECK(std::abs(yield_from_beta(b) + yield_from_beta(-b) - 1.0) <= 1e-12);
    }

    // Strictly increasing wherever Phi is representable away from 1; the
    // far tails saturate to 0 and 1 in double precision.
    double prev = yield_from_beta(-8.0);
    for (double b = -7.75; b <= 8.0; b += 0.25) {
        const double y = yield_from_beta(b);
        CHECK(y > prev);
        prev = y;
    }
    CHECK(yield_from_beta(-40.0) >= 0.0);
    CHECK(yield_from_beta(40.0) <= 1.0);
    CHECK(yield_from_beta(-40.0) <= yield_from_beta(-8.0));
    CHECK(yield_from_beta(8.0) <= yield_from_beta(40.0));
}

TEST_CASE("one-shot solve projects the origin onto the boundary plane") {
    SUBCASE("single active direction") {
        const auto p = builders::linear_gaussian_problem({1.0, 0.0, 0.0}, Relation::LE, 3.0);
        const auto r = solve_linear(p);
        CHECK(r.beta == doctest::Approx(3.0).epsilon(1e-12));
        REQUIRE(r.worst_u.size() == 3);
        CHECK(r.worst_u[0] == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(r.worst_u[1] == 0.0);
        CHECK(r.worst_u[2] == 0.0);
        CHECK(std::abs(r.linear_yield - 0.99865) <= 1e-5);
        CHECK(r.iterations == 1);
        // Standard-normal parameters: u is the parameter value itself.
        CHECK(r.worst_x[0] == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("nominal exactly on the boundary") {
        const auto p = builders::linear_gaussian_problem({1.0, 2.0}, Relation::GE, 0.0);
        const auto r = solve_linear(p);
        CHECK(r.beta == 0.0);
        CHECK(r.linear_yield == 0.5);
        CHECK(norm(r.worst_u) == 0.0);
    }
    SUBCASE("diagonal plane") {
        const auto p = builders::linear_gaussian_problem({1.0, 1.0}, Relation::LE, 2.0);
        const auto r = solve_linear(p);
        CHECK(r.beta == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        CHECK(r.worst_u[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.worst_u[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("lower bound flips the boundary side") {
        const auto p = builders::linear_gaussian_problem({1.0, 0.0}, Relation::GE, -3.0);
        const auto r = solve_linear(p);
        CHECK(r.beta == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(r.worst_u[0] == doctest::Approx(-3.0).epsilon(1e-12));
    }
    SUBCASE("violated nominal gives negative distance") {
        const auto p = builders::linear_gaussian_problem({1.0, 0.0}, Relation::GE, 1.0);
        const auto r = solve_linear(p);
        CHECK(r.beta == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(std::abs(r.linear_yield - 0.1586553) <= 1e-6);
        CHECK(r.worst_u[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(norm(r.worst_u) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("one-shot invariants over random linear problems") {
    Rng rng(4242);
    for (int i = 0; i < 50; ++i) {
        const std::size_t dim = 1 + rng.next_u64() % 4;
        std::vector<double> coeffs(dim);
        double norm2 = 0.0;
        for (auto& c : coeffs) {
            c = rng.next_open() * 4.0 - 2.0;
            norm2 += c * c;
        }
        if (norm2 < 1e-6) continue;
        const double bound = rng.next_open() * 6.0 - 3.0;
        const Relation rel = rng.next_u64() % 2 ? Relation::GE : Relation::LE;
        const auto p = builders::linear_gaussian_problem(coeffs, rel, bound);
        const auto r = solve_linear(p);

        // Distance, boundary membership, sign, and yield all cohere.
        CHECK(std::abs(norm(r.worst_u) - std::abs(r.beta)) <= 1e-9);
        double at_worst = 0.0;
        for (std::size_t j = 0; j < dim; ++j) at_worst += coeffs[j] * r.worst_u[j];
        CHECK(std::abs(at_worst - bound) <= 1e-9 * std::max(1.0, std::abs(bound)));
        CHECK((r.beta > 0.0) == p.specs[0].satisfied_by(0.0));
        CHECK(r.linear_yield == yield_from_beta(r.beta));
    }
}

TEST_CASE("degenerate gradients are rejected") {
    const auto p = builders::linear_gaussian_problem({0.0, 0.0}, Relation::LE, 1.0);
    CHECK_THROWS_AS((void)solve_linear(p), DegenerateGradientError);

    // All parameters Fixed: nothing to vary.
    auto frozen = builders::cantilever_problem();
    frozen.parameters[0].dist = Distribution::fixed(2e-6);
    const LinearModel lin{"resonant_frequency", 50e3, {}, {}};
    CHECK_THROWS_AS((void)wcd_linear(lin, frozen, frozen.specs[0]), DegenerateGradientError);
}

TEST_CASE("linear model and spec must reference the same metric") {
    const auto p = builders::linear_gaussian_problem({1.0}, Relation::LE, 1.0);
    const auto lin = linearize(p, "g");
    const Specification other{"h", Relation::LE, 1.0};
    CHECK_THROWS_AS((void)wcd_linear(lin, p, other), DomainError);
}

TEST_CASE("scale invariance of the distance") {
    const auto base = builders::linear_gaussian_problem({2.0, 3.0}, Relation::LE, 4.0);
    const double beta0 = solve_linear(base).beta;
    for (double c : {10.0, 1e-6, 3.7e4}) {
        const auto scaled =
            builders::linear_gaussian_problem({2.0 * c, 3.0 * c}, Relation::LE, 4.0 * c);
        CHECK(solve_linear(scaled).beta == doctest::Approx(beta0).epsilon(1e-9));
    }
}

TEST_CASE("uniform parameters enter through the normal-matching map") {
    const auto p = builders::cantilever_problem();
    const auto lin = linearize(p, "resonant_frequency");
    const auto r = wcd_linear(lin, p, p.specs[0]);

    // Hand-built gamma: df/dw times the u->w map slope at the median.
    const auto& dist = p.parameters[0].dist;
    const double gamma = lin.gradient[0] * dist.from_u_derivative(0.0);
    const double expect = (lin.value_at_nominal - 49e3) / std::abs(gamma);
    CHECK(r.beta == doctest::Approx(expect).epsilon(1e-12));
    CHECK(r.beta == doctest::Approx(0.6995).epsilon(1e-3));
    // The worst point maps back inside the uniform support.
    CHECK(r.worst_x[0] > dist.lo());
    CHECK(r.worst_x[0] < dist.hi());
}

TEST_CASE("relinearized solve is exact after one pass for linear metrics") {
    for (const auto& coeffs : {std::vector<double>{2.0, 3.0}, std::vector<double>{-1.0, 0.5}}) {
        const auto p = builders::linear_gaussian_problem(coeffs, Relation::LE, 2.5);
        const auto linear = solve_linear(p);
        const auto relin = wcd_relinearized(p, p.specs[0]);
        CHECK(relin.iterations == 1);
        CHECK(relin.beta == doctest::Approx(linear.beta).epsilon(1e-12));
        REQUIRE(relin.worst_u.size() == linear.worst_u.size());
        for (std::size_t j = 0; j < relin.worst_u.size(); ++j) {
            CHECK(relin.worst_u[j] == doctest::Approx(linear.worst_u[j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("relinearized point sits on the true resonance boundary") {
    const auto p = builders::cantilever_problem();
    const auto r = wcd_relinearized(p, p.specs[0]);

    REQUIRE(r.worst_x.size() == 1);
    const std::vector<double> x = {r.worst_x[0], 100e-6};
    const double f = p.evaluate_at(x, p.metrics).at("resonant_frequency");
    CHECK(std::abs(f - 49e3) <= 0.05);

    // Monotone one-parameter problem: the boundary width is the exact
    // threshold and the yield matches the tail probability exactly.
    const double w_crit = 2e-6 * std::pow(49.0 / 50.0, 2.0 / 3.0);
    CHECK(r.worst_x[0] == doctest::Approx(w_crit).epsilon(1e-9));
    const double exact_yield = 1.0 - p.parameters[0].dist.cdf(w_crit);
    CHECK(r.linear_yield == doctest::Approx(exact_yield).epsilon(1e-9));
    CHECK(r.beta > 0.0);
}

TEST_CASE("relinearized touchdown boundary membership") {
    const auto p = builders::pressure_sensor_problem();
    const auto r = wcd_relinearized(p, p.specs[0]);

    std::vector<double> x = p.nominal_values();
    x[2] = r.worst_x[0];
    x[3] = r.worst_x[1];
    const double f = p.evaluate_at(x, p.metrics).at("touchdown_force");
    const double f_nom = p.evaluate_nominal().at("touchdown_force");
    CHECK(std::abs(f - 5.5e-6) <= 1e-6 * std::max(5.5e-6, f_nom) * 1.01);
    CHECK(r.beta > 0.0);
    CHECK(r.iterations >= 2);  // genuinely nonlinear: needs relinearization
    CHECK(r.linear_yield == yield_from_beta(r.beta));
}

TEST_CASE("non-convergence reports the last iterate") {
    const auto p = builders::pressure_sensor_problem();
    try {
        (void)wcd_relinearized(p, p.specs[0], 1, 1e-12);
        FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
        CHECK(e.iterations() == 1);
        CHECK(e.last_iterate().size() == 2);
        CHECK(std::string(e.what()).find("did not converge") != std::string::npos);
    }
}

TEST_CASE("relinearized input domain") {
    const auto p = builders::pressure_sensor_problem();
    CHECK_THROWS_AS((void)wcd_relinearized(p, p.specs[0], 0, 1e-9), DomainError);
    CHECK_THROWS_AS((void)wcd_relinearized(p, p.specs[0], 10, 0.0), DomainError);
    CHECK_THROWS_AS((void)wcd_relinearized(p, p.specs[0], 10, -1.0), DomainError);
}

TEST_CASE("scale invariance holds through relinearization") {
    FunctionDevice::Metric curved;
    curved.value = [](std::span<const double> x) {
        return x[0] * x[0] * x[0] + x[0] + x[1];
    };
    curved.gradient = [](std::span<const double> x) {
        return std::vector<double>{3.0 * x[0] * x[0] + 1.0, 1.0};
    };
    const double c = 40.0;
    FunctionDevice::Metric scaled;
    scaled.value = [c](std::span<const double> x) {
        return c * (x[0] * x[0] * x[0] + x[0] + x[1]);
    };
    scaled.gradient = [c](std::span<const double> x) {
        return std::vector<double>{c * (3.0 * x[0] * x[0] + 1.0), c};
    };

    const auto params = [] {
        return std::vector<StatisticalParameter>{
            {"u1", 0.0, Distribution::gaussian(0.0, 1.0)},
            {"u2", 0.0, Distribution::gaussian(0.0, 1.0)},
        };
    };
    const auto a = make_function_problem(params(), {{"g", curved}},
                                         {{"g", Relation::LE, 5.0}});
    const auto b = make_function_problem(params(), {{"g", scaled}},
                                         {{"g", Relation::LE, 5.0 * c}});
    const auto ra = wcd_relinearized(a, a.specs[0]);
    const auto rb = wcd_relinearized(b, b.specs[0]);
    CHECK(rb.beta == doctest::Approx(ra.beta).epsilon(1e-9));
}

TEST_CASE("grid oracle recovers closed-form distances") {
    SUBCASE("single axis") {
        const auto p = builders::linear_gaussian_problem({1.0}, Relation::LE, 3.0);
        const double est = wcd_brute_oracle(p, p.specs[0], 5.0, 501);
        CHECK(std::abs(est - 3.0) <= 0.02);
    }
    SUBCASE("violated nominal is distance zero") {
        const auto p = builders::linear_gaussian_problem({1.0}, Relation::GE, 1.0);
        CHECK(wcd_brute_oracle(p, p.specs[0], 5.0, 501) == 0.0);
    }
    SUBCASE("diagonal plane in two axes") {
        const auto p = builders::linear_gaussian_problem({1.0, 1.0}, Relation::LE, 2.0);
        const double est = wcd_brute_oracle(p, p.specs[0], 5.0, 501);
        CHECK(std::abs(est - std::sqrt(2.0)) <= 0.02);
    }
}

TEST_CASE("grid oracle input domain") {
    const auto p4 = builders::linear_gaussian_problem({1.0, 1.0, 1.0, 1.0}, Relation::LE, 2.0);
    CHECK_THROWS_AS((void)wcd_brute_oracle(p4, p4.specs[0], 5.0, 101), DomainError);

    const auto p = builders::linear_gaussian_problem({1.0}, Relation::LE, 2.0);
    CHECK_THROWS_AS((void)wcd_brute_oracle(p, p.specs[0], 5.0, 10), DomainError);
    CHECK_THROWS_AS((void)wcd_brute_oracle(p, p.specs[0], 0.0, 101), DomainError);
    CHECK_THROWS_AS((void)wcd_brute_oracle(p, p.specs[0], -1.0, 101), DomainError);

    // Nothing violates within the grid radius.
    const auto far = builders::linear_gaussian_problem({1.0}, Relation::LE, 1000.0);
    CHECK_THROWS_AS((void)wcd_brute_oracle(far, far.specs[0], 5.0, 101), NoBoundaryError);
}

TEST_CASE("solvers and grid oracle agree on the device problems") {
    SUBCASE("width-driven resonator") {
        const auto p = builders::cantilever_problem();
        const auto relin = wcd_relinearized(p, p.specs[0]);
        const double est = wcd_brute_oracle(p, p.specs[0], 5.0, 501);
        CHECK(std::abs(relin.beta - est) <= 0.02 + 1e-6);
    }
    SUBCASE("membrane touchdown") {
        const auto p = builders::pressure_sensor_problem();
        const auto relin = wcd_relinearized(p, p.specs[0]);
        const double est = wcd_brute_oracle(p, p.specs[0], 5.0, 501);
        // Allowance: grid cell diagonal at 0.02 spacing per axis.
        CHECK(std::abs(relin.beta - est) <= 0.02 * std::sqrt(2.0) + 1e-6);
    }
}

TEST_CASE("linear yield matches sampled yield for linear gaussian metrics") {
    const auto p = builders::linear_gaussian_problem({2.0, 3.0}, Relation::LE, 2.0);
    const auto r = solve_linear(p);

    MonteCarloOptions opts;
    opts.n = 1000000;
    opts.seed = 8;
    opts.threads = 4;
    opts.retain_samples = false;
    const auto mc = run_monte_carlo(p, opts);
    CHECK(std::abs(r.linear_yield - mc.yield_estimate) <= 0.002);
}

TEST_CASE("joint yield is the weakest per-spec yield") {
    auto p = builders::cantilever_problem();
    p.specs = {{"resonant_frequency", Relation::GE, 49e3},
               {"resonant_frequency", Relation::LE, 50.7e3}};

    std::vector<WorstCaseResult> results;
    for (const auto& spec : p.specs) {
        results.push_back(wcd_relinearized(p, spec));
    }
    const double joint = joint_linear_yield(results);
    CHECK(joint == std::min(results[0].linear_yield, results[1].linear_yield));
    CHECK(joint <= results[0].linear_yield);
    CHECK(joint <= results[1].linear_yield);

    CHECK_THROWS_AS((void)joint_linear_yield({}), DomainError);
}
