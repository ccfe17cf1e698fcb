// pulseopt — pulse-level entanglement preparation experiments
//
// subcommands: run, compare-durations, validate-lu, sweep, replay
#include "pulseopt/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace pulseopt;

int cmd_run(const std::string& config_path, long seed, const std::string& budget,
            const std::string& out) {
    Json j = load_json_file(config_path);
    if (seed >= 0) j["seed"] = static_cast<std::uint64_t>(seed);
    if (!budget.empty()) j["budget"] = budget;
    ExperimentConfig cfg =
        experiment_from_json(j, std::filesystem::path(config_path).parent_path());
    if (!out.empty())
        cfg.out_dir = out;
    else if (cfg.out_dir.empty())
        cfg.out_dir = default_out_dir(cfg.name);

    std::printf("experiment %s: protocol=%s family=%s objective=%s seed=%llu budget=%s\n",
                cfg.name.c_str(), to_string(cfg.kind).c_str(),
                to_string(cfg.options.family).c_str(), to_string(cfg.cost.objective).c_str(),
                static_cast<unsigned long long>(cfg.de.rng_seed), cfg.budget.c_str());
    const ExperimentResult result = run_experiment(cfg);
    std::printf("best objective %s = %.6f (cost %.6f) after %ld evaluations\n",
                to_string(cfg.cost.objective).c_str(), result.objective_value,
                result.run.best_cost, result.run.evaluations);
    std::printf("schedule duration = %ld dt, leakage = %.3e, norm drift = %.3e\n",
                result.duration_dt, result.leakage, result.norm_drift);
    std::printf("wall time %.1f s, results in %s\n", result.wall_seconds,
                cfg.out_dir.string().c_str());
    return 0;
}

int cmd_compare(const std::vector<std::string>& results, long bell, long ghz, long w) {
    std::map<std::string, long> durations;
    for (const auto& path : results) {
        const Json j = load_json_file(path);
        durations[j.at("protocol").get<std::string>()] = j.at("duration_dt").get<long>();
    }
    if (bell > 0) durations["bell"] = bell;
    if (ghz > 0) durations["ghz"] = ghz;
    if (w > 0) durations["w"] = w;
    const DurationComparison cmp = compare_durations(durations);
    std::cout << format_duration_table(cmp);
    return 0;
}

int cmd_validate_lu(const std::string& result_path, std::string target, long seed) {
    const Json j = load_json_file(result_path);
    const StateVector state = state_from_json(j.at("final_state"));
    if (target.empty()) target = j.at("protocol").get<std::string>();
    LuFitConfig cfg;
    if (seed >= 0) cfg.de.rng_seed = static_cast<std::uint64_t>(seed);
    const LuValidation v = validate_lu(state, target, cfg);
    std::printf("bures distance to canonical %s after local-unitary fit: %.3e\n",
                v.target_name.c_str(), v.fit.bures);
    std::printf("fitted zyz angles:");
    for (double a : v.fit.angles) std::printf(" %.6f", a);
    std::printf("\n");
    return 0;
}

int cmd_sweep(const std::string& config_path, int samples, long seed, const std::string& out) {
    Json j = load_json_file(config_path);
    ExperimentConfig cfg =
        experiment_from_json(j, std::filesystem::path(config_path).parent_path());
    Bounds bounds = cfg.bounds;
    if (bounds.ranges.empty()) bounds.ranges = default_parameter_ranges(cfg.kind, cfg.options);
    CostContext ctx{cfg.device, cfg.kind, cfg.options, cfg.search_solver, cfg.initial_state};
    const auto points = sweep_correlations(
        ctx, bounds, samples, seed >= 0 ? static_cast<std::uint64_t>(seed) : cfg.de.rng_seed);
    const std::filesystem::path path =
        out.empty() ? default_out_dir(cfg.name) / "sweep.csv" : std::filesystem::path(out);
    std::filesystem::create_directories(path.parent_path());
    write_sweep_csv(path, points);
    std::printf("wrote %zu (w_cost, three_tangle) points to %s\n", points.size(),
                path.string().c_str());
    return 0;
}

int cmd_replay(const std::string& artifact_path) {
    const Json j = load_json_file(artifact_path);
    const ReplayReport report = replay_experiment(j);
    std::printf("recorded cost %.12e, replayed cost %.12e -> %s\n", report.recorded_cost,
                report.replay_cost, report.match ? "MATCH" : "MISMATCH");
    return report.match ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pulse-level entanglement preparation toolkit"};
    app.require_subcommand(1);

    std::string config_path, out, budget, target;
    std::vector<std::string> results;
    long seed = -1, bell = 0, ghz = 0, w = 0;
    int samples = 200;

    auto* run = app.add_subcommand("run", "optimize a configured experiment");
    run->add_option("config", config_path, "experiment config (json)")->required();
    run->add_option("--seed", seed, "override the rng seed");
    run->add_option("--budget", budget, "fast|paper");
    run->add_option("--out", out, "output directory");

    auto* cmp = app.add_subcommand("compare-durations",
                                   "compare pulse durations against the gate baselines");
    cmp->add_option("results", results, "result.json files");
    cmp->add_option("--bell", bell, "bell pulse duration in dt");
    cmp->add_option("--ghz", ghz, "ghz pulse duration in dt");
    cmp->add_option("--w", w, "w pulse duration in dt");

    auto* lu = app.add_subcommand("validate-lu",
                                  "fit local unitaries mapping a result onto a canonical state");
    lu->add_option("result", config_path, "result.json")->required();
    lu->add_option("--target", target, "bell|ghz|w (default: the result's protocol)");
    lu->add_option("--seed", seed, "fit seed");

    auto* sweep = app.add_subcommand("sweep", "sample (w_cost, three_tangle) over a template");
    sweep->add_option("config", config_path, "experiment config (json)")->required();
    sweep->add_option("--samples", samples, "number of random samples");
    sweep->add_option("--seed", seed, "sampling seed");
    sweep->add_option("--out", out, "output csv path");

    auto* replay = app.add_subcommand("replay", "re-run a recorded artifact and verify it");
    replay->add_option("artifact", config_path, "run.json or result.json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, seed, budget, out);
        if (cmp->parsed()) return cmd_compare(results, bell, ghz, w);
        if (lu->parsed()) return cmd_validate_lu(config_path, target, seed);
        if (sweep->parsed()) return cmd_sweep(config_path, samples, seed, out);
        if (replay->parsed()) return cmd_replay(config_path);
    } catch (const pulseopt::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const pulseopt::Error& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 1;
}
