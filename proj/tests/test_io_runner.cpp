#include "pulseopt/runner.hpp"

#include <doctest.h>

#include <cstdlib>

using namespace pulseopt;

namespace {

DeviceModel toy_pair() {
    DeviceModel d;
    d.levels = 2;
    d.transmons = {{1.1, -0.2, 0.8}, {1.4, -0.25, 0.9}};
    d.couplings = {{0, 1, 0.05}};
    return d;
}

Json tiny_bell_experiment() {
    Json j;
    j["schema"] = "pulseopt.experiment/1";
    j["name"] = "tiny_bell";
    j["device"] = device_to_json(toy_pair());
    j["protocol"] = "bell";
    j["family"] = "square";
    j["objective"] = "negativity";
    j["cut"] = {0};
    j["bounds"] = Json::array();
    const double dt = kDefaultDt;
    j["bounds"].push_back({-1.0, 1.0});
    j["bounds"].push_back({2.0 * dt, 12.0 * dt});
    j["bounds"].push_back({-1.0, 1.0});
    j["bounds"].push_back({-1.0, 1.0});
    j["bounds"].push_back({2.0 * dt, 20.0 * dt});
    j["seed"] = 7;
    j["de"] = {{"population_size", 8}, {"max_generations", 6}};
    j["nm"] = {{"max_iterations", 10}};
    j["search_solver"] = {{"rtol", 1e-6}, {"atol", 1e-9}};
    return j;
}

}  // namespace

TEST_CASE("device file round trip") {
    const DeviceModel d = toy_pair();
    const DeviceModel back = device_from_json(device_to_json(d));
    CHECK(back.levels == d.levels);
    REQUIRE(back.transmons.size() == d.transmons.size());
    for (std::size_t i = 0; i < d.transmons.size(); ++i) {
        CHECK(back.transmons[i].omega == d.transmons[i].omega);
        CHECK(back.transmons[i].alpha == d.transmons[i].alpha);
        CHECK(back.transmons[i].drive_strength == d.transmons[i].drive_strength);
    }
    CHECK(back.couplings[0].strength == d.couplings[0].strength);

    Json j = device_to_json(d);
    j["schema"] = "pulseopt.device/9";
    CHECK_THROWS_AS(device_from_json(j), ConfigError);
}

TEST_CASE("schedule export round trip is lossless after snapping") {
    PulseSchedule s;
    s.segments.push_back({Channel::drive(0, 1.1, 0.3), 0.0, Envelope::constant({0.4, -0.1}, 22.2)});
    s.segments.push_back({Channel::cross(0, 1, 1.4, 0.0), 23.0,
                          Envelope::gaussian_square({0.5, 0.0}, 60.0, 4.5, 31.0)});
    s.segments.push_back({Channel::drive(1, 1.4, 0.0), 100.0, Envelope::drag({0.3, 0.0}, 17.0, 2.0, 0.4)});
    const Json j = schedule_to_json(s);
    const PulseSchedule back = schedule_from_json(j);
    const PulseSchedule snapped = snap_to_grid(s);
    REQUIRE(back.segments.size() == snapped.segments.size());
    for (std::size_t i = 0; i < back.segments.size(); ++i) {
        CHECK(back.segments[i].start == snapped.segments[i].start);
        CHECK(back.segments[i].envelope.duration == snapped.segments[i].envelope.duration);
        CHECK(back.segments[i].envelope.amp == snapped.segments[i].envelope.amp);
        CHECK(back.segments[i].envelope.sigma == snapped.segments[i].envelope.sigma);
        CHECK(back.segments[i].channel.carrier_freq == snapped.segments[i].channel.carrier_freq);
    }
    // exporting the re-imported schedule is the identity
    CHECK(schedule_to_json(back) == j);
    CHECK(schedule_duration_dt(back) == schedule_duration_dt(snapped));
}

TEST_CASE("metric report round trip") {
    const MetricReport r = compute_metrics(canonical_ghz());
    const MetricReport back = metric_report_from_json(metric_report_to_json(r));
    CHECK(back.qubits == 3);
    CHECK(back.three_tangle == r.three_tangle);
    CHECK(back.probability == r.probability);
    CHECK(back.concurrence_pairs == r.concurrence_pairs);
}

TEST_CASE("duration comparison against the gate baselines") {
    const DurationComparison cmp =
        compare_durations({{"bell", 1379}, {"ghz", 3750}, {"w", 6132}});
    REQUIRE(cmp.rows.size() == 3);
    for (const auto& row : cmp.rows) {
        CHECK(row.pulse_faster);
        if (row.state == "bell") CHECK(row.gate_dt == 2912);
        if (row.state == "ghz") CHECK(row.gate_dt == 5315);
        if (row.state == "w") CHECK(row.gate_dt == 8224);
    }
    const std::string table = format_duration_table(cmp);
    CHECK(table.find("bell") != std::string::npos);
    CHECK(table.find("5312") != std::string::npos);  // variant note

    const DurationComparison slow = compare_durations({{"ghz", 6000}});
    CHECK_FALSE(slow.rows[0].pulse_faster);
    CHECK_THROWS_AS(compare_durations({}), ConfigError);
    CHECK_THROWS_AS(compare_durations({{"bogus", 3}}), ConfigError);
}

TEST_CASE("experiment config parsing and validation") {
    const Json good = tiny_bell_experiment();
    const ExperimentConfig cfg = experiment_from_json(good, ".");
    CHECK(cfg.de.population_size == 8);
    CHECK(cfg.de.rng_seed == 7);
    CHECK(cfg.bounds.size() == 5);

    Json wrong_obj = good;
    wrong_obj["objective"] = "three_tangle";  // needs 3 qubits
    CHECK_THROWS_AS(experiment_from_json(wrong_obj, "."), ConfigError);

    Json wrong_bounds = good;
    wrong_bounds["bounds"].push_back({0.0, 1.0});
    CHECK_THROWS_AS(experiment_from_json(wrong_bounds, "."), ConfigError);

    Json bad_budget = good;
    bad_budget["budget"] = "leisurely";
    CHECK_THROWS_AS(experiment_from_json(bad_budget, "."), ConfigError);
}

TEST_CASE("tiny experiment runs, writes a bundle, and replays bit-exactly") {
    const Json j = tiny_bell_experiment();
    ExperimentConfig cfg = experiment_from_json(j, ".");
    const auto out_dir =
        std::filesystem::temp_directory_path() / "pulseopt_test_run";
    std::filesystem::remove_all(out_dir);
    cfg.out_dir = out_dir;

    const ExperimentResult result = run_experiment(cfg);
    CHECK(result.duration_dt >= 2);
    CHECK(result.duration_dt <= 32);
    CHECK(std::filesystem::exists(out_dir / "schedule.json"));
    CHECK(std::filesystem::exists(out_dir / "run.json"));
    CHECK(std::filesystem::exists(out_dir / "metrics.json"));
    CHECK(std::filesystem::exists(out_dir / "result.json"));
    CHECK(std::filesystem::exists(out_dir / "amplitudes.txt"));
    CHECK(std::filesystem::exists(out_dir / "probabilities.txt"));

    // duration self-consistency between the bundle and the schedule file
    const Json bundle = load_json_file(out_dir / "result.json");
    const PulseSchedule exported = schedule_from_json(load_json_file(out_dir / "schedule.json"));
    CHECK(bundle.at("duration_dt").get<long>() == schedule_duration_dt(exported));

    const ReplayReport replay = replay_experiment(load_json_file(out_dir / "run.json"));
    CHECK(replay.match);

    // rerunning the full experiment reproduces the bundle exactly
    const ExperimentResult again = run_experiment(cfg);
    CHECK(again.run.best_params == result.run.best_params);
    CHECK(again.run.best_cost == result.run.best_cost);
    CHECK(again.metrics.probability == result.metrics.probability);
    std::filesystem::remove_all(out_dir);
}

TEST_CASE("sweep produces the product-state corner for zero amplitudes") {
    DeviceModel dev = toy_pair();
    dev.transmons.push_back({1.7, -0.3, 1.0});
    dev.couplings.push_back({1, 2, 0.04});

    CostContext ctx;
    ctx.device = dev;
    ctx.kind = ProtocolKind::Ghz;
    ctx.solver.rtol = 1e-6;
    ctx.solver.atol = 1e-9;

    Bounds bounds;
    bounds.ranges = default_parameter_ranges(ProtocolKind::Ghz, ctx.options);
    std::vector<double> zero_amp(bounds.size(), 0.0);
    const auto names = protocol_param_names(ProtocolKind::Ghz, ctx.options);
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i].rfind("dur_", 0) == 0) zero_amp[i] = 4.0 * kDefaultDt;

    const auto points = sweep_correlations(ctx, bounds, 0, 1, {zero_amp});
    REQUIRE(points.size() == 1);
    CHECK(std::abs(points[0].w_cost - std::sqrt(3.0) * 2.0 / 3.0) < 1e-6);
    CHECK(points[0].three_tangle < 1e-9);

    const auto csv_path = std::filesystem::temp_directory_path() / "pulseopt_sweep.csv";
    write_sweep_csv(csv_path, points);
    CHECK(std::filesystem::exists(csv_path));
    std::filesystem::remove(csv_path);

    CostContext bell_ctx;
    bell_ctx.device = toy_pair();
    bell_ctx.kind = ProtocolKind::Bell;
    CHECK_THROWS_AS(sweep_correlations(bell_ctx, bounds, 1, 1), ConfigError);
}

TEST_CASE("cost evaluation pipeline") {
    CostContext ctx;
    ctx.device = toy_pair();
    ctx.kind = ProtocolKind::Bell;
    ctx.solver.rtol = 1e-6;
    ctx.solver.atol = 1e-9;
    CostSpec spec;
    spec.objective = CostSpec::Objective::MaximizeNegativity;
    spec.cut = {0};

    SUBCASE("zero amplitudes generate no entanglement") {
        const std::vector<double> params{0.0, 20 * kDefaultDt, 0.0, 0.0, 30 * kDefaultDt};
        CHECK(std::abs(evaluate_cost(spec, ctx, params)) < 1e-9);
    }
    SUBCASE("signed costs vanish on their target states") {
        CostSpec wspec;
        wspec.objective = CostSpec::Objective::MinimizeWCost;
        CHECK(signed_cost(wspec, canonical_w()) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(signed_cost(spec, canonical_bell()) == doctest::Approx(-0.5));
        CostSpec bspec;
        bspec.objective = CostSpec::Objective::MinimizeBures;
        bspec.target = canonical_ghz().amplitudes;
        CHECK(signed_cost(bspec, canonical_ghz()) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("objective/system mismatch is rejected") {
        CostSpec tangle;
        tangle.objective = CostSpec::Objective::MaximizeThreeTangle;
        CHECK_THROWS_AS(tangle.validate(2), ConfigError);
        CHECK_NOTHROW(tangle.validate(3));
    }
}

TEST_CASE("validate_lu recovers a bit-flipped ghz") {
    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    const std::array<Eigen::Matrix2cd, 3> flips{x, x, x};
    const StateVector rotated = apply_local_unitaries(canonical_ghz(), flips);
    const LuValidation v = validate_lu(rotated, "ghz");
    CHECK(v.fit.bures < 1e-6);
    // never worse than leaving the state unrotated
    CHECK(v.fit.bures <= bures_distance(rotated, canonical_ghz()) + 1e-12);
}

TEST_CASE("canonical targets by name") {
    CHECK(canonical_target("bell").dim() == 4);
    CHECK(canonical_target("ghz").dim() == 8);
    CHECK(canonical_target("w").dim() == 8);
    CHECK_THROWS_AS(canonical_target("cluster"), ConfigError);
}
