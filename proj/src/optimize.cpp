#include "pulseopt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pulseopt {

void Bounds::validate() const {
    if (ranges.empty()) throw ConfigError("bounds must not be empty");
    for (const auto& r : ranges) {
        if (!(r[0] < r[1])) throw ConfigError("each bound must satisfy lo < hi");
        if (!std::isfinite(r[0]) || !std::isfinite(r[1]))
            throw ConfigError("bounds must be finite");
    }
}

void Bounds::clip(std::vector<double>& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], ranges[i][0], ranges[i][1]);
}

bool Bounds::contains(std::span<const double> x) const {
    if (x.size() != ranges.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < ranges[i][0] - 1e-12 || x[i] > ranges[i][1] + 1e-12) return false;
    return true;
}

namespace {

double checked_cost(const CostFn& cost, const std::vector<double>& x) {
    const double value = cost(x);
    if (!std::isfinite(value))
        throw EvaluationError("objective returned a non-finite value", x);
    return value;
}

}  // namespace

OptimizationRun differential_evolution(const CostFn& cost, const Bounds& bounds,
                                       const DeConfig& cfg) {
    bounds.validate();
    const std::size_t dim = bounds.size();
    std::size_t pop_size = cfg.population_size > 0
                               ? static_cast<std::size_t>(cfg.population_size)
                               : std::min<std::size_t>(15 * dim, 150);
    pop_size = std::max<std::size_t>(pop_size, 4);
    if (cfg.crossover_rate <= 0.0 || cfg.crossover_rate > 1.0)
        throw ConfigError("crossover rate must be in (0, 1]");
    if (!(cfg.f_min > 0.0) || cfg.f_max > 2.0 || cfg.f_min > cfg.f_max)
        throw ConfigError("mutation factor range must satisfy 0 < f_min <= f_max <= 2");

    Rng rng(cfg.rng_seed);
    std::vector<std::vector<double>> population(pop_size, std::vector<double>(dim));
    for (auto& member : population)
        for (std::size_t d = 0; d < dim; ++d)
            member[d] = rng.uniform(bounds.ranges[d][0], bounds.ranges[d][1]);
    for (std::size_t g = 0; g < cfg.initial_guesses.size() && g < pop_size; ++g) {
        std::vector<double> guess = cfg.initial_guesses[g];
        if (guess.size() != dim) throw ConfigError("initial guess has wrong dimension");
        bounds.clip(guess);
        population[g] = std::move(guess);
    }

    OptimizationRun run;
    run.seed = cfg.rng_seed;

    std::vector<double> costs(pop_size);
    parallel_for(
        pop_size, [&](std::size_t i) { costs[i] = checked_cost(cost, population[i]); },
        cfg.n_threads);
    run.evaluations += static_cast<long>(pop_size);

    auto best_index = [&] {
        return static_cast<std::size_t>(
            std::distance(costs.begin(), std::min_element(costs.begin(), costs.end())));
    };
    std::size_t best = best_index();
    run.cost_trace.push_back(costs[best]);

    std::vector<std::vector<double>> trials(pop_size, std::vector<double>(dim));
    std::vector<double> trial_costs(pop_size);

    for (int gen = 0; gen < cfg.max_generations; ++gen) {
        const double f = rng.uniform(cfg.f_min, cfg.f_max);
        // draw all randomness up front so evaluation order cannot matter
        for (std::size_t i = 0; i < pop_size; ++i) {
            std::size_t a, b, c;
            do a = rng.index(pop_size); while (a == i);
            do b = rng.index(pop_size); while (b == i || b == a);
            do c = rng.index(pop_size); while (c == i || c == a || c == b);
            const std::size_t j_rand = rng.index(dim);
            auto& trial = trials[i];
            for (std::size_t d = 0; d < dim; ++d) {
                const bool cross = rng.uniform() < cfg.crossover_rate || d == j_rand;
                trial[d] = cross ? population[a][d] + f * (population[b][d] - population[c][d])
                                 : population[i][d];
            }
            bounds.clip(trial);
        }
        parallel_for(
            pop_size, [&](std::size_t i) { trial_costs[i] = checked_cost(cost, trials[i]); },
            cfg.n_threads);
        run.evaluations += static_cast<long>(pop_size);

        for (std::size_t i = 0; i < pop_size; ++i) {
            if (trial_costs[i] < costs[i]) {
                population[i] = trials[i];
                costs[i] = trial_costs[i];
            }
        }
        best = best_index();
        run.cost_trace.push_back(std::min(run.cost_trace.back(), costs[best]));
        run.generations = gen + 1;

        const double mean = std::accumulate(costs.begin(), costs.end(), 0.0) /
                            static_cast<double>(pop_size);
        double var = 0.0;
        for (double v : costs) var += (v - mean) * (v - mean);
        const double sd = std::sqrt(var / static_cast<double>(pop_size));
        if (sd < cfg.tol * std::abs(mean)) {
            run.converged = true;
            break;
        }
    }

    run.best_params = population[best];
    run.best_cost = costs[best];
    return run;
}

OptimizationRun nelder_mead(const CostFn& cost, std::span<const double> x0, const NmConfig& cfg,
                            const Bounds* bounds) {
    const std::size_t dim = x0.size();
    if (dim == 0) throw ConfigError("nelder_mead requires at least one parameter");
    if (!(cfg.alpha > 0.0) || !(cfg.gamma > 1.0) || !(cfg.rho > 0.0) || cfg.rho >= 1.0 ||
        !(cfg.sigma > 0.0) || cfg.sigma >= 1.0)
        throw ConfigError("nelder_mead coefficients out of range");

    auto clipped = [&](std::vector<double> x) {
        if (bounds) bounds->clip(x);
        return x;
    };

    OptimizationRun run;
    std::vector<std::vector<double>> simplex;
    simplex.push_back(clipped(std::vector<double>(x0.begin(), x0.end())));
    for (std::size_t d = 0; d < dim; ++d) {
        std::vector<double> v(x0.begin(), x0.end());
        double step;
        if (bounds) {
            step = cfg.simplex_scale * (bounds->ranges[d][1] - bounds->ranges[d][0]);
        } else {
            step = cfg.simplex_scale * std::max(std::abs(v[d]), 1.0);
        }
        v[d] += step;
        if (bounds && v[d] > bounds->ranges[d][1]) v[d] = x0[d] - step;
        simplex.push_back(clipped(std::move(v)));
    }

    std::vector<double> f(simplex.size());
    for (std::size_t i = 0; i < simplex.size(); ++i) {
        f[i] = checked_cost(cost, simplex[i]);
        ++run.evaluations;
    }

    std::vector<std::size_t> order(simplex.size());
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    };
    sort_simplex();
    run.cost_trace.push_back(f[order[0]]);

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        const std::size_t ib = order[0];
        const std::size_t iw = order[dim];
        const std::size_t is = order[dim - 1];
        const bool f_converged =
            std::abs(f[iw] - f[ib]) <= cfg.f_tol * (std::abs(f[ib]) + cfg.f_tol);
        double diameter = 0.0;
        double scale = 1.0;
        for (std::size_t d = 0; d < dim; ++d) {
            scale = std::max(scale, std::abs(simplex[ib][d]));
            for (const auto& v : simplex)
                diameter = std::max(diameter, std::abs(v[d] - simplex[ib][d]));
        }
        // the f test alone triggers on simplexes straddling a minimum
        if (f_converged && diameter <= 0.1 * std::sqrt(cfg.f_tol) * scale) {
            run.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (order[i] == iw) continue;
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[order[i]][d];
        }
        for (double& cval : centroid) cval /= static_cast<double>(dim);

        auto combine = [&](double coef) {
            std::vector<double> x(dim);
            for (std::size_t d = 0; d < dim; ++d)
                x[d] = centroid[d] + coef * (centroid[d] - simplex[iw][d]);
            return clipped(std::move(x));
        };

        std::vector<double> xr = combine(cfg.alpha);
        const double fr = checked_cost(cost, xr);
        ++run.evaluations;

        if (fr < f[ib]) {
            std::vector<double> xe = combine(cfg.alpha * cfg.gamma);
            const double fe = checked_cost(cost, xe);
            ++run.evaluations;
            if (fe < fr) {
                simplex[iw] = std::move(xe);
                f[iw] = fe;
            } else {
                simplex[iw] = std::move(xr);
                f[iw] = fr;
            }
        } else if (fr < f[is]) {
            simplex[iw] = std::move(xr);
            f[iw] = fr;
        } else {
            const bool outside = fr < f[iw];
            std::vector<double> xc = combine(outside ? cfg.rho * cfg.alpha : -cfg.rho);
            const double fc = checked_cost(cost, xc);
            ++run.evaluations;
            if (fc < std::min(fr, f[iw])) {
                simplex[iw] = std::move(xc);
                f[iw] = fc;
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 0; i < order.size(); ++i) {
                    if (order[i] == ib) continue;
                    auto& v = simplex[order[i]];
                    for (std::size_t d = 0; d < dim; ++d)
                        v[d] = simplex[ib][d] + cfg.sigma * (v[d] - simplex[ib][d]);
                    v = clipped(std::move(v));
                    f[order[i]] = checked_cost(cost, v);
                    ++run.evaluations;
                }
            }
        }
        sort_simplex();
        run.cost_trace.push_back(std::min(run.cost_trace.back(), f[order[0]]));
        run.generations = iter + 1;
    }

    sort_simplex();
    run.best_params = simplex[order[0]];
    run.best_cost = f[order[0]];
    return run;
}

}  // namespace pulseopt
