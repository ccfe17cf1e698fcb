// lu_fit.hpp — local-unitary fitting against canonical target states
#pragma once

#include "pulseopt/metrics.hpp"
#include "pulseopt/optimize.hpp"

#include <span>

namespace pulseopt {

// Rz(a) Ry(b) Rz(c)
Eigen::Matrix2cd su2_zyz(double a, double b, double c);

// applies U_{n-1} (x) ... (x) U_0 (one 2x2 unitary per site, site order matching
// the vector index convention)
StateVector apply_local_unitaries(const StateVector& psi,
                                  std::span<const Eigen::Matrix2cd> unitaries);

struct LuFitConfig {
    DeConfig de{.population_size = 45, .max_generations = 250, .rng_seed = 11, .n_threads = 1};
    NmConfig nm{.max_iterations = 600, .f_tol = 1e-16};
    int restarts{3};       // extra DE starts if the target is not reached
    double target{1e-8};   // stop restarting below this Bures distance
};

struct LuFitResult {
    std::vector<double> angles;  // 3 per site, zyz order
    double bures{0.0};
    long evaluations{0};
};

// Minimizes D_B(U_0 (x) ... (x) U_{n-1} psi, target) over per-site unitaries
// parameterized by zyz Euler angles; differential evolution followed by
// Nelder-Mead. The identity angles are seeded into the population, so the
// result never exceeds the unrotated distance.
LuFitResult fit_local_unitaries(const StateVector& psi, const StateVector& target,
                                const LuFitConfig& cfg = {});

}  // namespace pulseopt
