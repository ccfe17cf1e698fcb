// optimize.hpp — differential evolution global search and Nelder-Mead refinement
#pragma once

#include "pulseopt/common.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace pulseopt {

struct Bounds {
    std::vector<std::array<double, 2>> ranges;  // {lo, hi} per parameter

    std::size_t size() const { return ranges.size(); }
    void validate() const;
    void clip(std::vector<double>& x) const;
    bool contains(std::span<const double> x) const;
};

struct DeConfig {
    int population_size{0};  // 0 selects min(15 * dimension, 150)
    double f_min{0.5};       // mutation dither range, one draw per generation
    double f_max{1.0};
    double crossover_rate{0.7};
    int max_generations{300};
    std::uint64_t rng_seed{1};
    double tol{1e-8};  // converged when std(costs) < tol * |mean(costs)|
    int n_threads{0};  // 0 = hardware concurrency; 1 = serial
    // optional members injected into the initial population (clipped to bounds)
    std::vector<std::vector<double>> initial_guesses;
};

struct NmConfig {
    double simplex_scale{0.05};  // initial spread, fraction of each bound range
    double alpha{1.0};           // reflection
    double gamma{2.0};           // expansion
    double rho{0.5};             // contraction
    double sigma{0.5};           // shrink
    int max_iterations{400};
    double f_tol{1e-12};
};

struct OptimizationRun {
    std::vector<double> best_params;
    double best_cost{0.0};
    std::vector<double> cost_trace;  // best-so-far per generation/iteration
    long evaluations{0};
    std::uint64_t seed{0};
    int generations{0};
    bool converged{false};
};

using CostFn = std::function<double(std::span<const double>)>;

// DE/rand/1/bin with greedy selection. All random draws happen on one thread
// in a fixed order, and trial costs are written to indexed slots, so the
// result is identical for any n_threads. Throws EvaluationError when the
// cost returns a non-finite value.
OptimizationRun differential_evolution(const CostFn& cost, const Bounds& bounds,
                                       const DeConfig& cfg);

// Standard simplex refinement; evaluation points are clipped to bounds when
// bounds are given. The returned cost never exceeds cost(x0).
OptimizationRun nelder_mead(const CostFn& cost, std::span<const double> x0, const NmConfig& cfg,
                            const Bounds* bounds = nullptr);

}  // namespace pulseopt
