#include "pulseopt/io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace pulseopt {

namespace {

void require_schema(const Json& j, const std::string& expected) {
    if (!j.contains("schema") || j.at("schema").get<std::string>() != expected)
        throw ConfigError("expected schema tag '" + expected + "'");
}

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

Json device_to_json(const DeviceModel& device) {
    Json j;
    j["schema"] = "pulseopt.device/1";
    j["levels"] = device.levels;
    j["transmons"] = Json::array();
    for (const auto& t : device.transmons)
        j["transmons"].push_back({{"omega", t.omega},
                                  {"alpha", t.alpha},
                                  {"drive_strength", t.drive_strength}});
    j["couplings"] = Json::array();
    for (const auto& c : device.couplings)
        j["couplings"].push_back(
            {{"site_a", c.site_a}, {"site_b", c.site_b}, {"strength", c.strength}});
    return j;
}

DeviceModel device_from_json(const Json& j) {
    require_schema(j, "pulseopt.device/1");
    DeviceModel device;
    device.levels = j.at("levels").get<int>();
    for (const auto& t : j.at("transmons"))
        device.transmons.push_back({t.at("omega").get<double>(), t.at("alpha").get<double>(),
                                    t.at("drive_strength").get<double>()});
    if (j.contains("couplings"))
        for (const auto& c : j.at("couplings"))
            device.couplings.push_back({c.at("site_a").get<int>(), c.at("site_b").get<int>(),
                                        c.at("strength").get<double>()});
    device.validate();
    return device;
}

Json schedule_to_json(const PulseSchedule& schedule) {
    const PulseSchedule snapped = snap_to_grid(schedule);
    Json j;
    j["schema"] = "pulseopt.schedule/1";
    j["dt"] = snapped.dt;
    j["segments"] = Json::array();
    for (const auto& seg : snapped.segments) {
        Json ch;
        ch["kind"] = seg.channel.kind == Channel::Kind::Drive ? "drive" : "cross";
        ch["drive_site"] = seg.channel.drive_site;
        if (seg.channel.kind == Channel::Kind::Cross) ch["target_site"] = seg.channel.target_site;
        ch["carrier_freq"] = seg.channel.carrier_freq;
        ch["phase"] = seg.channel.phase;

        Json env;
        env["amp"] = complex_to_json(seg.envelope.amp);
        env["duration_dt"] =
            static_cast<long>(std::llround(seg.envelope.duration / snapped.dt));
        switch (seg.envelope.shape) {
            case Envelope::Shape::Constant:
                env["shape"] = "constant";
                break;
            case Envelope::Shape::GaussianSquare:
                env["shape"] = "gaussian_square";
                env["sigma"] = seg.envelope.sigma;
                env["width"] = seg.envelope.width;
                break;
            case Envelope::Shape::Drag:
                env["shape"] = "drag";
                env["sigma"] = seg.envelope.sigma;
                env["beta"] = seg.envelope.beta;
                break;
        }
        j["segments"].push_back({{"channel", ch},
                                 {"start_dt", static_cast<long>(std::llround(seg.start / snapped.dt))},
                                 {"envelope", env}});
    }
    return j;
}

PulseSchedule schedule_from_json(const Json& j) {
    require_schema(j, "pulseopt.schedule/1");
    PulseSchedule schedule;
    schedule.dt = j.at("dt").get<double>();
    for (const auto& s : j.at("segments")) {
        const auto& ch = s.at("channel");
        Channel channel;
        const std::string kind = ch.at("kind").get<std::string>();
        if (kind == "drive") {
            channel = Channel::drive(ch.at("drive_site").get<int>(),
                                     ch.at("carrier_freq").get<double>(),
                                     ch.at("phase").get<double>());
        } else if (kind == "cross") {
            channel = Channel::cross(ch.at("drive_site").get<int>(),
                                     ch.at("target_site").get<int>(),
                                     ch.at("carrier_freq").get<double>(),
                                     ch.at("phase").get<double>());
        } else {
            throw ConfigError("unknown channel kind '" + kind + "'");
        }

        const auto& env = s.at("envelope");
        const Complex amp = complex_from_json(env.at("amp"));
        const double duration = env.at("duration_dt").get<double>() * schedule.dt;
        const std::string shape = env.at("shape").get<std::string>();
        Envelope envelope;
        if (shape == "constant") {
            envelope = Envelope::constant(amp, duration);
        } else if (shape == "gaussian_square") {
            envelope = Envelope::gaussian_square(amp, duration, env.at("sigma").get<double>(),
                                                 env.at("width").get<double>());
        } else if (shape == "drag") {
            envelope = Envelope::drag(amp, duration, env.at("sigma").get<double>(),
                                      env.at("beta").get<double>());
        } else {
            throw ConfigError("unknown envelope shape '" + shape + "'");
        }
        schedule.segments.push_back(
            {channel, s.at("start_dt").get<double>() * schedule.dt, envelope});
    }
    schedule.validate();
    return schedule;
}

Json metric_report_to_json(const MetricReport& report) {
    Json j;
    j["schema"] = "pulseopt.metrics/1";
    j["qubits"] = report.qubits;
    j["negativity"] = Json::object();
    for (std::size_t i = 0; i < report.negativities.size(); ++i)
        j["negativity"][report.negativity_cuts[i]] = report.negativities[i];
    j["concurrence"] = Json::object();
    j["squared_concurrence"] = Json::object();
    for (std::size_t i = 0; i < report.concurrences.size(); ++i) {
        j["concurrence"][report.concurrence_pairs[i]] = report.concurrences[i];
        j["squared_concurrence"][report.concurrence_pairs[i]] = report.squared_concurrences[i];
    }
    if (report.qubits == 3) {
        j["three_tangle"] = report.three_tangle;
        j["w_cost"] = report.w_cost;
    }
    j["probability"] = Json::object();
    for (std::size_t i = 0; i < report.probability.size(); ++i)
        j["probability"][report.labels[i]] = report.probability[i];
    return j;
}

MetricReport metric_report_from_json(const Json& j) {
    require_schema(j, "pulseopt.metrics/1");
    MetricReport report;
    report.qubits = j.at("qubits").get<int>();
    for (const auto& [cut, value] : j.at("negativity").items()) {
        report.negativity_cuts.push_back(cut);
        report.negativities.push_back(value.get<double>());
    }
    for (const auto& [pair, value] : j.at("concurrence").items()) {
        report.concurrence_pairs.push_back(pair);
        report.concurrences.push_back(value.get<double>());
        report.squared_concurrences.push_back(
            j.at("squared_concurrence").at(pair).get<double>());
    }
    if (report.qubits == 3) {
        report.three_tangle = j.at("three_tangle").get<double>();
        report.w_cost = j.at("w_cost").get<double>();
    }
    for (const auto& [label, value] : j.at("probability").items()) {
        report.labels.push_back(label);
        report.probability.push_back(value.get<double>());
    }
    return report;
}

Json optimization_run_to_json(const OptimizationRun& run) {
    Json j;
    j["schema"] = "pulseopt.run/1";
    j["best_params"] = run.best_params;
    j["best_cost"] = run.best_cost;
    j["cost_trace"] = run.cost_trace;
    j["evaluations"] = run.evaluations;
    j["seed"] = run.seed;
    j["generations"] = run.generations;
    j["converged"] = run.converged;
    return j;
}

OptimizationRun optimization_run_from_json(const Json& j) {
    require_schema(j, "pulseopt.run/1");
    OptimizationRun run;
    run.best_params = j.at("best_params").get<std::vector<double>>();
    run.best_cost = j.at("best_cost").get<double>();
    run.cost_trace = j.at("cost_trace").get<std::vector<double>>();
    run.evaluations = j.at("evaluations").get<long>();
    run.seed = j.at("seed").get<std::uint64_t>();
    run.generations = j.at("generations").get<int>();
    run.converged = j.at("converged").get<bool>();
    return run;
}

Json state_to_json(const StateVector& psi) {
    Json amps = Json::array();
    for (Eigen::Index i = 0; i < psi.dim(); ++i)
        amps.push_back(complex_to_json(psi.amplitudes[i]));
    return amps;
}

StateVector state_from_json(const Json& j) {
    ComplexVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j.at(i));
    return {std::move(v)};
}

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    Json j;
    in >> j;
    return j;
}

void save_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << j.dump(2) << "\n";
}

}  // namespace pulseopt
