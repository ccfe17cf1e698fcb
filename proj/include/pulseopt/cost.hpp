// cost.hpp — resource cost functions over pulse-schedule parameters
#pragma once

#include "pulseopt/metrics.hpp"
#include "pulseopt/protocols.hpp"

#include <optional>
#include <span>

namespace pulseopt {

struct CostSpec {
    enum class Objective {
        MaximizeNegativity,   // 2 qubits
        MaximizeThreeTangle,  // 3 qubits
        MinimizeWCost,        // 3 qubits
        MinimizeBures,        // either; requires target
    };

    Objective objective{Objective::MaximizeNegativity};
    std::vector<int> cut{0};   // negativity bipartition (transposed sites)
    ComplexVector target;      // MinimizeBures only

    void validate(int qubits) const;
};

// Raw metric of a normalized qubit state (negativity, tau_3, ...).
double metric_value(const CostSpec& spec, const StateVector& qubit_state);

// The same metric folded to minimization (-N, -tau_3, +w_cost, +D_B).
double signed_cost(const CostSpec& spec, const StateVector& qubit_state);

struct CostContext {
    DeviceModel device;
    ProtocolKind kind{ProtocolKind::Bell};
    ProtocolOptions options;
    SolverConfig solver;
    StateVector initial_state;  // empty -> ground state
};

// Final qubit state of one protocol instantiation: build, evolve from the
// initial state, project out the third level when present, and renormalize.
struct PipelineResult {
    StateVector qubit_state;
    double leakage{0.0};
    double norm_drift{0.0};
};
PipelineResult run_pipeline(const CostContext& ctx, std::span<const double> params);

// Signed objective used by the optimizers. Solver and projection failures
// are logged and mapped to a large finite penalty so a population search can
// continue around them.
double evaluate_cost(const CostSpec& spec, const CostContext& ctx,
                     std::span<const double> params);

inline constexpr double kCostPenalty = 1e30;

std::string to_string(CostSpec::Objective objective);
CostSpec::Objective objective_from_string(const std::string& name);

}  // namespace pulseopt
