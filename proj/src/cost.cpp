#include "pulseopt/cost.hpp"

#include <cstdio>
#include <mutex>

namespace pulseopt {

void CostSpec::validate(int qubits) const {
    switch (objective) {
        case Objective::MaximizeNegativity:
            if (qubits != 2) throw ConfigError("negativity objective needs a 2-qubit system");
            for (int s : cut)
                if (s < 0 || s >= qubits) throw ConfigError("negativity cut site out of range");
            if (cut.empty()) throw ConfigError("negativity objective needs a bipartition");
            break;
        case Objective::MaximizeThreeTangle:
        case Objective::MinimizeWCost:
            if (qubits != 3) throw ConfigError("tripartite objective needs a 3-qubit system");
            break;
        case Objective::MinimizeBures:
            if (target.size() != (Eigen::Index(1) << qubits))
                throw ConfigError("bures objective target has wrong dimension");
            break;
    }
}

double metric_value(const CostSpec& spec, const StateVector& qubit_state) {
    switch (spec.objective) {
        case CostSpec::Objective::MaximizeNegativity:
            return negativity(density_from_state(qubit_state), spec.cut);
        case CostSpec::Objective::MaximizeThreeTangle:
            return three_tangle(qubit_state);
        case CostSpec::Objective::MinimizeWCost:
            return w_cost(qubit_state);
        case CostSpec::Objective::MinimizeBures:
            return bures_distance(qubit_state, StateVector{spec.target});
    }
    throw ConfigError("unknown objective");
}

double signed_cost(const CostSpec& spec, const StateVector& qubit_state) {
    const double value = metric_value(spec, qubit_state);
    switch (spec.objective) {
        case CostSpec::Objective::MaximizeNegativity:
        case CostSpec::Objective::MaximizeThreeTangle:
            return -value;
        case CostSpec::Objective::MinimizeWCost:
        case CostSpec::Objective::MinimizeBures:
            return value;
    }
    return value;
}

PipelineResult run_pipeline(const CostContext& ctx, std::span<const double> params) {
    const PulseSchedule schedule = build_protocol(ctx.kind, ctx.device, params, ctx.options);
    const StateVector psi0 = ctx.initial_state.dim() == ctx.device.dim()
                                 ? ctx.initial_state
                                 : StateVector::ground(ctx.device.dim());
    const EvolveResult evolved = evolve(ctx.device, schedule, psi0, ctx.solver);

    PipelineResult out;
    out.norm_drift = evolved.norm_drift;
    if (ctx.device.levels == 3) {
        ProjectionResult projected =
            project_to_qubits(evolved.state, ctx.device.levels, ctx.device.sites());
        out.leakage = projected.leakage;
        out.qubit_state = std::move(projected.state);
    } else {
        out.qubit_state = StateVector::normalized(evolved.state.amplitudes);
    }
    return out;
}

double evaluate_cost(const CostSpec& spec, const CostContext& ctx,
                     std::span<const double> params) {
    try {
        const PipelineResult result = run_pipeline(ctx, params);
        return signed_cost(spec, result.qubit_state);
    } catch (const Error& e) {
        static std::mutex log_mutex;
        std::lock_guard<std::mutex> lock(log_mutex);
        std::fprintf(stderr, "[pulseopt] cost evaluation failed (%s); penalizing\n", e.what());
        return kCostPenalty;
    }
}

std::string to_string(CostSpec::Objective objective) {
    switch (objective) {
        case CostSpec::Objective::MaximizeNegativity: return "negativity";
        case CostSpec::Objective::MaximizeThreeTangle: return "three_tangle";
        case CostSpec::Objective::MinimizeWCost: return "w_cost";
        case CostSpec::Objective::MinimizeBures: return "bures";
    }
    return "?";
}

CostSpec::Objective objective_from_string(const std::string& name) {
    if (name == "negativity") return CostSpec::Objective::MaximizeNegativity;
    if (name == "three_tangle") return CostSpec::Objective::MaximizeThreeTangle;
    if (name == "w_cost") return CostSpec::Objective::MinimizeWCost;
    if (name == "bures") return CostSpec::Objective::MinimizeBures;
    throw ConfigError("unknown objective '" + name + "'");
}

}  // namespace pulseopt
