#include "pulseopt/optimize.hpp"

#include <doctest.h>

#include <cmath>

using namespace pulseopt;

namespace {

double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double rastrigin(std::span<const double> x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * M_PI * v);
    return s;
}

double rosenbrock(std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

Bounds box(std::size_t dim, double lo, double hi) {
    Bounds b;
    b.ranges.assign(dim, {lo, hi});
    return b;
}

}  // namespace

TEST_CASE("differential evolution on the sphere") {
    DeConfig cfg;
    cfg.max_generations = 200;
    cfg.rng_seed = 42;
    const OptimizationRun run = differential_evolution(sphere, box(5, -5.0, 5.0), cfg);
    CHECK(run.best_cost < 1e-6);
    for (double v : run.best_params) CHECK(std::abs(v) < 1e-2);
}

TEST_CASE("differential evolution finds the rastrigin basin") {
    DeConfig cfg;
    cfg.population_size = 40;
    cfg.max_generations = 300;
    cfg.rng_seed = 3;
    const OptimizationRun run = differential_evolution(rastrigin, box(2, -5.12, 5.12), cfg);
    CHECK(run.best_cost < 1.0);
}

TEST_CASE("constant cost leaves the population untouched") {
    DeConfig cfg;
    cfg.population_size = 12;
    cfg.max_generations = 5;
    cfg.rng_seed = 9;
    cfg.tol = 0.0;  // never converge on spread
    const CostFn constant = [](std::span<const double>) { return 7.25; };
    const OptimizationRun run = differential_evolution(constant, box(3, 0.0, 1.0), cfg);
    CHECK(run.best_cost == 7.25);
    CHECK(run.generations == 5);
    // greedy selection is strict, so the trace stays flat
    for (double c : run.cost_trace) CHECK(c == 7.25);
}

TEST_CASE("de reproducibility is bitwise and thread-count independent") {
    DeConfig cfg;
    cfg.population_size = 20;
    cfg.max_generations = 40;
    cfg.rng_seed = 1234;
    const Bounds b = box(4, -3.0, 3.0);
    const OptimizationRun a = differential_evolution(rastrigin, b, cfg);
    const OptimizationRun c = differential_evolution(rastrigin, b, cfg);
    CHECK(a.best_params == c.best_params);
    CHECK(a.best_cost == c.best_cost);
    CHECK(a.cost_trace == c.cost_trace);

    cfg.n_threads = 1;
    const OptimizationRun serial = differential_evolution(rastrigin, b, cfg);
    cfg.n_threads = 4;
    const OptimizationRun parallel = differential_evolution(rastrigin, b, cfg);
    CHECK(serial.best_params == parallel.best_params);
    CHECK(serial.cost_trace == parallel.cost_trace);
}

TEST_CASE("de trace is non-increasing and bounds are respected") {
    DeConfig cfg;
    cfg.population_size = 16;
    cfg.max_generations = 60;
    cfg.rng_seed = 5;
    const Bounds b = box(3, -2.0, 2.0);
    // instrumented cost checks every evaluated point
    const CostFn guarded = [&](std::span<const double> x) {
        REQUIRE(b.contains(x));
        return rastrigin(x);
    };
    const OptimizationRun run = differential_evolution(guarded, b, cfg);
    for (std::size_t i = 1; i < run.cost_trace.size(); ++i)
        CHECK(run.cost_trace[i] <= run.cost_trace[i - 1]);
    CHECK(b.contains(run.best_params));
}

TEST_CASE("de rejects non-finite objectives with the offending parameters") {
    DeConfig cfg;
    cfg.population_size = 8;
    cfg.max_generations = 4;
    cfg.rng_seed = 2;
    const CostFn bad = [](std::span<const double> x) {
        return x[0] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    };
    CHECK_THROWS_AS(differential_evolution(bad, box(1, -1.0, 1.0), cfg), EvaluationError);
    try {
        differential_evolution(bad, box(1, -1.0, 1.0), cfg);
    } catch (const EvaluationError& e) {
        REQUIRE(e.params.size() == 1);
        CHECK(e.params[0] > 0.0);
    }
}

TEST_CASE("initial guesses join the population") {
    DeConfig cfg;
    cfg.population_size = 10;
    cfg.max_generations = 1;
    cfg.rng_seed = 8;
    cfg.initial_guesses = {{0.001, 0.001}};
    const OptimizationRun run = differential_evolution(sphere, box(2, -5.0, 5.0), cfg);
    CHECK(run.best_cost <= sphere(std::vector<double>{0.001, 0.001}));
}

TEST_CASE("nelder-mead refinement") {
    NmConfig cfg;
    SUBCASE("1-d quadratic") {
        const CostFn f = [](std::span<const double> x) { return (x[0] - 3.0) * (x[0] - 3.0); };
        const OptimizationRun run = nelder_mead(f, std::vector<double>{0.0}, cfg);
        CHECK(std::abs(run.best_params[0] - 3.0) < 1e-6);
    }
    SUBCASE("rosenbrock from the classic start") {
        NmConfig hard;
        hard.max_iterations = 2000;
        hard.f_tol = 1e-14;
        const OptimizationRun run =
            nelder_mead(rosenbrock, std::vector<double>{-1.2, 1.0}, hard);
        CHECK(run.best_cost < 1e-6);
        CHECK(std::abs(run.best_params[0] - 1.0) < 1e-3);
        CHECK(std::abs(run.best_params[1] - 1.0) < 1e-3);
    }
    SUBCASE("an already-optimal start is a fixed point") {
        const CostFn f = sphere;
        const OptimizationRun run = nelder_mead(f, std::vector<double>{0.0, 0.0}, cfg);
        CHECK(run.best_cost <= f(std::vector<double>{0.0, 0.0}) + 1e-15);
        for (double v : run.best_params) CHECK(std::abs(v) < 0.2);
    }
    SUBCASE("never returns worse than the start") {
        Rng rng(77);
        for (int i = 0; i < 20; ++i) {
            std::vector<double> x0{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
            const double f0 = rastrigin(x0);
            const OptimizationRun run = nelder_mead(rastrigin, x0, cfg);
            CHECK(run.best_cost <= f0);
        }
    }
    SUBCASE("bounds clip every evaluation") {
        const Bounds b = box(2, -0.5, 0.5);
        const CostFn guarded = [&](std::span<const double> x) {
            REQUIRE(b.contains(x));
            return sphere(x);
        };
        const OptimizationRun run = nelder_mead(guarded, std::vector<double>{0.4, 0.4}, NmConfig{}, &b);
        CHECK(b.contains(run.best_params));
    }
}

TEST_CASE("bounds validation") {
    Bounds bad;
    bad.ranges = {{1.0, 1.0}};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    Bounds empty;
    CHECK_THROWS_AS(empty.validate(), ConfigError);
}
