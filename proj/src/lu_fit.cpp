#include "pulseopt/lu_fit.hpp"

#include <cmath>

namespace pulseopt {

Eigen::Matrix2cd su2_zyz(double a, double b, double c) {
    const Complex ea = std::exp(Complex{0.0, -0.5 * a});
    const Complex ec = std::exp(Complex{0.0, -0.5 * c});
    const double cb = std::cos(0.5 * b);
    const double sb = std::sin(0.5 * b);
    Eigen::Matrix2cd u;
    u << ea * cb * ec, -ea * sb * std::conj(ec),  //
        std::conj(ea) * sb * ec, std::conj(ea) * cb * std::conj(ec);
    return u;
}

StateVector apply_local_unitaries(const StateVector& psi,
                                  std::span<const Eigen::Matrix2cd> unitaries) {
    const int sites = static_cast<int>(unitaries.size());
    if (psi.dim() != (Eigen::Index(1) << sites))
        throw DimensionError("apply_local_unitaries: dimension mismatch");
    ComplexVector v = psi.amplitudes;
    for (int s = 0; s < sites; ++s) {
        const Eigen::Index stride = Eigen::Index(1) << s;
        const auto& u = unitaries[s];
        for (Eigen::Index base = 0; base < v.size(); ++base) {
            if (base & stride) continue;
            const Complex lo = v[base];
            const Complex hi = v[base | stride];
            v[base] = u(0, 0) * lo + u(0, 1) * hi;
            v[base | stride] = u(1, 0) * lo + u(1, 1) * hi;
        }
    }
    return {std::move(v)};
}

LuFitResult fit_local_unitaries(const StateVector& psi, const StateVector& target,
                                const LuFitConfig& cfg) {
    if (psi.dim() != target.dim())
        throw DimensionError("fit_local_unitaries: dimension mismatch");
    int sites = 0;
    while ((Eigen::Index(1) << sites) < psi.dim()) ++sites;
    if ((Eigen::Index(1) << sites) != psi.dim())
        throw DimensionError("fit_local_unitaries: state is not a qubit register");

    const StateVector psi_n = StateVector::normalized(psi.amplitudes);
    const StateVector target_n = StateVector::normalized(target.amplitudes);

    const std::size_t dim = 3 * static_cast<std::size_t>(sites);
    CostFn cost = [&](std::span<const double> x) {
        std::vector<Eigen::Matrix2cd> us(sites);
        for (int s = 0; s < sites; ++s) us[s] = su2_zyz(x[3 * s], x[3 * s + 1], x[3 * s + 2]);
        return bures_distance(apply_local_unitaries(psi_n, us), target_n);
    };

    Bounds bounds;
    bounds.ranges.assign(dim, {-2.0 * M_PI, 2.0 * M_PI});

    LuFitResult result;
    result.bures = cost(std::vector<double>(dim, 0.0));
    result.angles.assign(dim, 0.0);

    for (int attempt = 0; attempt <= cfg.restarts; ++attempt) {
        DeConfig de = cfg.de;
        de.rng_seed = cfg.de.rng_seed + static_cast<std::uint64_t>(attempt) * 977;
        de.initial_guesses = {std::vector<double>(dim, 0.0)};
        OptimizationRun global = differential_evolution(cost, bounds, de);
        OptimizationRun local = nelder_mead(cost, global.best_params, cfg.nm, &bounds);
        result.evaluations += global.evaluations + local.evaluations;
        if (local.best_cost < result.bures) {
            result.bures = local.best_cost;
            result.angles = local.best_params;
        }
        if (result.bures < cfg.target) break;
    }
    return result;
}

}  // namespace pulseopt
