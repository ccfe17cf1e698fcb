#include "pulseopt/runner.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace pulseopt {

BudgetPreset budget_preset(const std::string& name) {
    if (name == "fast") return {30, 60, 80};
    if (name == "paper") return {150, 300, 300};
    throw ConfigError("unknown budget '" + name + "' (expected fast|paper)");
}

void ExperimentConfig::validate() const {
    device.validate();
    cost.validate(qubits());
    const int expected = protocol_param_count(kind, options);
    if (!bounds.ranges.empty() && static_cast<int>(bounds.size()) != expected)
        throw ConfigError("bounds size does not match the protocol parameter count");
    if (options.family == EnvelopeFamily::GaussianSquare &&
        static_cast<int>(options.widths_dt.size()) != protocol_segment_count(kind))
        throw ConfigError("gaussian-square experiments need one width per segment");
    if (qubits() == 2 && device.sites() != 2)
        throw ConfigError("bell experiments need a 2-transmon device");
    if (qubits() == 3 && device.sites() != 3)
        throw ConfigError("ghz/w experiments need a 3-transmon device");
}

namespace {

SolverConfig solver_from_json(const Json& j, SolverConfig base) {
    if (j.contains("rtol")) base.rtol = j.at("rtol").get<double>();
    if (j.contains("atol")) base.atol = j.at("atol").get<double>();
    if (j.contains("max_step")) base.max_step = j.at("max_step").get<double>();
    if (j.contains("frame_freq")) base.frame_freq = j.at("frame_freq").get<double>();
    return base;
}

StateVector named_or_inline_state(const Json& j) {
    if (j.is_string()) return canonical_target(j.get<std::string>());
    return state_from_json(j);
}

}  // namespace

ExperimentConfig experiment_from_json(const Json& j, const std::filesystem::path& base_dir) {
    if (!j.contains("schema") || j.at("schema").get<std::string>() != "pulseopt.experiment/1")
        throw ConfigError("expected schema tag 'pulseopt.experiment/1'");

    ExperimentConfig cfg;
    cfg.name = j.at("name").get<std::string>();
    if (j.at("device").is_string()) {
        const std::filesystem::path p = j.at("device").get<std::string>();
        cfg.device = device_from_json(load_json_file(p.is_absolute() ? p : base_dir / p));
    } else {
        cfg.device = device_from_json(j.at("device"));
    }

    cfg.kind = protocol_from_string(j.at("protocol").get<std::string>());
    if (j.contains("family")) cfg.options.family = family_from_string(j.at("family").get<std::string>());
    if (j.contains("widths_dt"))
        cfg.options.widths_dt = j.at("widths_dt").get<std::vector<double>>();
    if (j.contains("risefall_sigmas"))
        cfg.options.risefall_sigmas = j.at("risefall_sigmas").get<double>();
    if (j.contains("final_cross_on_u1"))
        cfg.options.final_cross_on_u1 = j.at("final_cross_on_u1").get<bool>();
    if (j.contains("include_phases"))
        cfg.options.include_phases = j.at("include_phases").get<bool>();

    cfg.cost.objective = objective_from_string(j.at("objective").get<std::string>());
    if (j.contains("cut")) cfg.cost.cut = j.at("cut").get<std::vector<int>>();
    if (j.contains("target")) cfg.cost.target = named_or_inline_state(j.at("target")).amplitudes;

    if (j.contains("bounds")) {
        for (const auto& r : j.at("bounds"))
            cfg.bounds.ranges.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
    }

    cfg.budget = j.value("budget", std::string{"fast"});
    const BudgetPreset preset = budget_preset(cfg.budget);
    cfg.de.population_size = preset.de_population;
    cfg.de.max_generations = preset.de_generations;
    cfg.nm.max_iterations = preset.nm_iterations;
    cfg.de.rng_seed = j.value("seed", std::uint64_t{1});

    if (j.contains("de")) {
        const auto& d = j.at("de");
        if (d.contains("population_size")) cfg.de.population_size = d.at("population_size").get<int>();
        if (d.contains("max_generations")) cfg.de.max_generations = d.at("max_generations").get<int>();
        if (d.contains("crossover_rate")) cfg.de.crossover_rate = d.at("crossover_rate").get<double>();
        if (d.contains("f_min")) cfg.de.f_min = d.at("f_min").get<double>();
        if (d.contains("f_max")) cfg.de.f_max = d.at("f_max").get<double>();
        if (d.contains("tol")) cfg.de.tol = d.at("tol").get<double>();
        if (d.contains("n_threads")) cfg.de.n_threads = d.at("n_threads").get<int>();
    }
    if (j.contains("initial_guesses"))
        cfg.de.initial_guesses = j.at("initial_guesses").get<std::vector<std::vector<double>>>();
    if (j.contains("nm")) {
        const auto& nmj = j.at("nm");
        if (nmj.contains("max_iterations")) cfg.nm.max_iterations = nmj.at("max_iterations").get<int>();
        if (nmj.contains("simplex_scale")) cfg.nm.simplex_scale = nmj.at("simplex_scale").get<double>();
        if (nmj.contains("f_tol")) cfg.nm.f_tol = nmj.at("f_tol").get<double>();
    }
    cfg.nm_refine = j.value("nm_refine", true);

    cfg.search_solver.rtol = 1e-6;
    cfg.search_solver.atol = 1e-9;
    if (j.contains("search_solver"))
        cfg.search_solver = solver_from_json(j.at("search_solver"), cfg.search_solver);
    if (j.contains("final_solver"))
        cfg.final_solver = solver_from_json(j.at("final_solver"), cfg.final_solver);

    if (j.contains("initial_state"))
        cfg.initial_state = state_from_json(j.at("initial_state"));
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();

    // self-contained echo: device inlined, seed/budget explicit
    cfg.echo = j;
    cfg.echo["device"] = device_to_json(cfg.device);
    cfg.echo["seed"] = cfg.de.rng_seed;
    cfg.echo["budget"] = cfg.budget;

    cfg.validate();
    return cfg;
}

namespace {

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
}

std::string amplitude_table(const StateVector& psi, int qubits) {
    const auto labels = basis_labels(qubits, 2);
    std::ostringstream os;
    os << "# label re im prob\n" << std::setprecision(12);
    for (Eigen::Index i = 0; i < psi.dim(); ++i)
        os << labels[i] << " " << psi.amplitudes[i].real() << " " << psi.amplitudes[i].imag()
           << " " << std::norm(psi.amplitudes[i]) << "\n";
    return os.str();
}

std::string probability_table(const MetricReport& report) {
    std::ostringstream os;
    os << "# label prob\n" << std::setprecision(12);
    for (std::size_t i = 0; i < report.probability.size(); ++i)
        os << report.labels[i] << " " << report.probability[i] << "\n";
    return os.str();
}

}  // namespace

namespace {

struct GridAlignment {
    OptimizationRun run;
    ProtocolOptions options;  // include_phases may have been switched on
};

// Freezes every duration parameter at its nearest grid multiple and refines
// the remaining parameters against the exported (snapped) schedule, so the
// reported metric is what was optimized last. Snapping a stage boundary by up
// to dt/2 shifts the carrier phase relations between stages by omega * dt/2
// (tens of radians); per-segment carrier phases are therefore opened up as
// free parameters, which restores any phase relation exactly.
GridAlignment align_to_grid(const ExperimentConfig& cfg, const Bounds& bounds,
                            const CostContext& ctx, const OptimizationRun& best) {
    const auto names = protocol_param_names(cfg.kind, cfg.options);
    const double dt = kDefaultDt;
    ProtocolOptions phased = cfg.options;
    phased.include_phases = true;
    const std::size_t full_count =
        static_cast<std::size_t>(protocol_param_count(cfg.kind, phased));

    std::vector<double> frozen = best.best_params;
    frozen.resize(full_count, 0.0);  // appended phases start at zero
    std::vector<std::size_t> free_dims;
    std::vector<std::array<double, 2>> free_ranges;
    for (std::size_t d = 0; d < names.size(); ++d) {
        if (names[d].rfind("dur_", 0) == 0) {
            double q = std::round(frozen[d] / dt) * dt;
            const double lo_q = std::ceil(bounds.ranges[d][0] / dt - 1e-9) * dt;
            const double hi_q = std::floor(bounds.ranges[d][1] / dt + 1e-9) * dt;
            if (lo_q <= hi_q) q = std::clamp(q, lo_q, hi_q);
            frozen[d] = std::max(q, dt);
        } else {
            free_dims.push_back(d);
            free_ranges.push_back(bounds.ranges[d]);
        }
    }
    for (std::size_t d = names.size(); d < full_count; ++d) {
        free_dims.push_back(d);
        free_ranges.push_back({-M_PI, M_PI});
    }

    const CostFn snapped_cost = [&](std::span<const double> reduced) {
        std::vector<double> full = frozen;
        for (std::size_t i = 0; i < free_dims.size(); ++i) full[free_dims[i]] = reduced[i];
        try {
            const PulseSchedule snapped =
                snap_to_grid(build_protocol(cfg.kind, cfg.device, full, phased));
            const StateVector psi0 = ctx.initial_state.dim() == ctx.device.dim()
                                         ? ctx.initial_state
                                         : StateVector::ground(ctx.device.dim());
            const EvolveResult evolved = evolve(ctx.device, snapped, psi0, ctx.solver);
            StateVector qubit_state =
                ctx.device.levels == 3
                    ? project_to_qubits(evolved.state, 3, ctx.device.sites()).state
                    : StateVector::normalized(evolved.state.amplitudes);
            return signed_cost(cfg.cost, qubit_state);
        } catch (const Error&) {
            return kCostPenalty;
        }
    };

    std::vector<double> x0(free_dims.size());
    Bounds reduced_bounds;
    for (std::size_t i = 0; i < free_dims.size(); ++i) {
        x0[i] = frozen[free_dims[i]];
        reduced_bounds.ranges.push_back(free_ranges[i]);
    }
    NmConfig nm = cfg.nm;
    nm.simplex_scale = 0.02;
    nm.max_iterations = std::max(cfg.nm.max_iterations, 60 * static_cast<int>(free_dims.size()));
    OptimizationRun aligned = nelder_mead(snapped_cost, x0, nm, &reduced_bounds);

    GridAlignment out;
    out.options = phased;
    out.run = best;
    out.run.evaluations += aligned.evaluations;
    out.run.best_params = frozen;
    for (std::size_t i = 0; i < free_dims.size(); ++i)
        out.run.best_params[free_dims[i]] = aligned.best_params[i];
    out.run.best_cost = aligned.best_cost;
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const auto t_begin = std::chrono::steady_clock::now();
    cfg.validate();

    Bounds bounds = cfg.bounds;
    if (bounds.ranges.empty())
        bounds.ranges = default_parameter_ranges(cfg.kind, cfg.options);

    CostContext search_ctx{cfg.device, cfg.kind, cfg.options, cfg.search_solver,
                           cfg.initial_state};
    const CostFn objective = [&](std::span<const double> params) {
        return evaluate_cost(cfg.cost, search_ctx, params);
    };

    ExperimentResult result;
    result.effective_options = cfg.options;
    result.run = differential_evolution(objective, bounds, cfg.de);
    if (cfg.nm_refine) {
        OptimizationRun refined = nelder_mead(objective, result.run.best_params, cfg.nm, &bounds);
        if (refined.best_cost <= result.run.best_cost) {
            result.run.best_params = refined.best_params;
            result.run.best_cost = refined.best_cost;
        }
        result.run.evaluations += refined.evaluations;
        for (double c : refined.cost_trace)
            result.run.cost_trace.push_back(std::min(result.run.cost_trace.back(), c));
        GridAlignment aligned = align_to_grid(cfg, bounds, search_ctx, result.run);
        result.run = std::move(aligned.run);
        result.effective_options = aligned.options;
    }

    // final evaluation happens on the exported (grid-snapped) schedule at the
    // reporting tolerances
    result.schedule = snap_to_grid(
        build_protocol(cfg.kind, cfg.device, result.run.best_params, result.effective_options));
    result.duration_dt = schedule_duration_dt(result.schedule);

    const StateVector psi0 = cfg.initial_state.dim() == cfg.device.dim()
                                 ? cfg.initial_state
                                 : StateVector::ground(cfg.device.dim());
    const EvolveResult evolved = evolve(cfg.device, result.schedule, psi0, cfg.final_solver);
    result.norm_drift = evolved.norm_drift;
    if (cfg.device.levels == 3) {
        ProjectionResult projected =
            project_to_qubits(evolved.state, cfg.device.levels, cfg.device.sites());
        result.leakage = projected.leakage;
        result.final_state = std::move(projected.state);
    } else {
        result.final_state = StateVector::normalized(evolved.state.amplitudes);
    }
    result.metrics = compute_metrics(result.final_state);
    result.objective_value = metric_value(cfg.cost, result.final_state);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        save_json_file(cfg.out_dir / "schedule.json", schedule_to_json(result.schedule));
        save_json_file(cfg.out_dir / "metrics.json", metric_report_to_json(result.metrics));
        save_json_file(cfg.out_dir / "result.json", result_to_json(cfg, result));
        Json run_json = optimization_run_to_json(result.run);
        run_json["config"] = cfg.echo;
        run_json["param_names"] = protocol_param_names(cfg.kind, result.effective_options);
        run_json["wall_seconds"] = result.wall_seconds;
        save_json_file(cfg.out_dir / "run.json", run_json);
        write_text_file(cfg.out_dir / "amplitudes.txt",
                        amplitude_table(result.final_state, cfg.qubits()));
        write_text_file(cfg.out_dir / "probabilities.txt", probability_table(result.metrics));
    }
    return result;
}

Json result_to_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
    Json j;
    j["schema"] = "pulseopt.result/1";
    j["name"] = cfg.name;
    j["protocol"] = to_string(cfg.kind);
    j["family"] = to_string(cfg.options.family);
    j["objective"] = to_string(cfg.cost.objective);
    j["objective_value"] = result.objective_value;
    j["best_cost"] = result.run.best_cost;
    j["duration_dt"] = result.duration_dt;
    j["leakage"] = result.leakage;
    j["norm_drift"] = result.norm_drift;
    j["wall_seconds"] = result.wall_seconds;
    j["final_state"] = state_to_json(result.final_state);
    j["metrics"] = metric_report_to_json(result.metrics);
    j["config"] = cfg.echo;
    return j;
}

DurationComparison compare_durations(const std::map<std::string, long>& pulse_durations_dt) {
    if (pulse_durations_dt.empty())
        throw ConfigError("compare_durations needs at least one pulse duration");
    const std::map<std::string, long> gates{{"bell", BaselineTable::kBellGateDt},
                                            {"ghz", BaselineTable::kGhzGateDt},
                                            {"w", BaselineTable::kWGateDt}};
    DurationComparison cmp;
    for (const auto& [state, gate_dt] : gates) {
        const auto it = pulse_durations_dt.find(state);
        if (it == pulse_durations_dt.end()) continue;
        cmp.rows.push_back({state, gate_dt, it->second, it->second < gate_dt});
    }
    for (const auto& [state, _] : pulse_durations_dt)
        if (!gates.count(state)) throw ConfigError("unknown state '" + state + "' in comparison");
    cmp.note = "ghz gate baseline: published figure variant quotes " +
               std::to_string(BaselineTable::kGhzGateDtVariant) + " dt; the table value " +
               std::to_string(BaselineTable::kGhzGateDt) + " dt is used";
    return cmp;
}

std::string format_duration_table(const DurationComparison& cmp) {
    std::ostringstream os;
    os << "state  gate_dt  pulse_dt  pulse_faster\n";
    for (const auto& row : cmp.rows)
        os << std::left << std::setw(7) << row.state << std::setw(9) << row.gate_dt
           << std::setw(10) << row.pulse_dt << (row.pulse_faster ? "yes" : "NO") << "\n";
    os << "# " << cmp.note << "\n";
    return os.str();
}

StateVector canonical_target(const std::string& name) {
    if (name == "bell") return canonical_bell();
    if (name == "ghz") return canonical_ghz();
    if (name == "w") return canonical_w();
    throw ConfigError("unknown canonical state '" + name + "' (expected bell|ghz|w)");
}

LuValidation validate_lu(const StateVector& state, const std::string& target_name,
                         const LuFitConfig& cfg) {
    LuValidation v;
    v.target_name = target_name;
    v.fit = fit_local_unitaries(state, canonical_target(target_name), cfg);
    return v;
}

std::vector<SweepPoint> sweep_correlations(
    const CostContext& ctx, const Bounds& bounds, int n_random, std::uint64_t seed,
    const std::vector<std::vector<double>>& extra_samples) {
    if (ctx.kind == ProtocolKind::Bell)
        throw ConfigError("sweep_correlations needs a 3-qubit protocol");
    bounds.validate();
    Rng rng(seed);
    std::vector<std::vector<double>> samples = extra_samples;
    for (int i = 0; i < n_random; ++i) {
        std::vector<double> x(bounds.size());
        for (std::size_t d = 0; d < x.size(); ++d)
            x[d] = rng.uniform(bounds.ranges[d][0], bounds.ranges[d][1]);
        samples.push_back(std::move(x));
    }
    std::vector<SweepPoint> points;
    for (const auto& sample : samples) {
        try {
            const PipelineResult r = run_pipeline(ctx, sample);
            points.push_back({sample, w_cost(r.qubit_state), three_tangle(r.qubit_state)});
        } catch (const Error&) {
            // skip unevaluable samples
        }
    }
    return points;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& points) {
    std::ostringstream os;
    os << "w_cost,three_tangle\n" << std::setprecision(12);
    for (const auto& p : points) os << p.w_cost << "," << p.three_tangle << "\n";
    write_text_file(path, os.str());
}

ReplayReport replay_experiment(const Json& bundle) {
    if (!bundle.contains("config")) throw ConfigError("bundle has no embedded config");
    ExperimentConfig cfg = experiment_from_json(bundle.at("config"), ".");
    cfg.out_dir.clear();
    const ExperimentResult replayed = run_experiment(cfg);

    ReplayReport report;
    report.replay_cost = replayed.run.best_cost;
    report.recorded_cost = bundle.at("best_cost").get<double>();
    bool params_match = true;
    if (bundle.contains("best_params")) {
        const auto recorded_params = bundle.at("best_params").get<std::vector<double>>();
        params_match = recorded_params == replayed.run.best_params;
    }
    report.match = params_match && report.recorded_cost == report.replay_cost;
    return report;
}

std::filesystem::path default_out_dir(const std::string& experiment_name) {
    if (const char* env = std::getenv("PULSEOPT_OUT"))
        return std::filesystem::path(env) / experiment_name;
    return std::filesystem::path("results") / experiment_name;
}

}  // namespace pulseopt
