// Python bindings for the core operations.
#include "pulseopt/lu_fit.hpp"
#include "pulseopt/runner.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace pulseopt;

namespace {

StateVector as_state(const ComplexVector& v) { return StateVector{v}; }

py::dict report_to_dict(const MetricReport& r) {
    py::dict d;
    d["qubits"] = r.qubits;
    py::dict neg;
    for (std::size_t i = 0; i < r.negativities.size(); ++i)
        neg[py::str(r.negativity_cuts[i])] = r.negativities[i];
    d["negativity"] = neg;
    py::dict conc, conc2;
    for (std::size_t i = 0; i < r.concurrences.size(); ++i) {
        conc[py::str(r.concurrence_pairs[i])] = r.concurrences[i];
        conc2[py::str(r.concurrence_pairs[i])] = r.squared_concurrences[i];
    }
    d["concurrence"] = conc;
    d["squared_concurrence"] = conc2;
    if (r.qubits == 3) {
        d["three_tangle"] = r.three_tangle;
        d["w_cost"] = r.w_cost;
    }
    py::dict prob;
    for (std::size_t i = 0; i < r.probability.size(); ++i)
        prob[py::str(r.labels[i])] = r.probability[i];
    d["probability"] = prob;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "pulse-level entanglement preparation toolkit (C++ core)";

    py::register_exception<Error>(m, "PulseoptError");

    // ----------------------------------------------------------- device
    py::class_<TransmonParams>(m, "TransmonParams")
        .def(py::init<double, double, double>(), py::arg("omega"), py::arg("alpha"),
             py::arg("drive_strength"))
        .def_readwrite("omega", &TransmonParams::omega)
        .def_readwrite("alpha", &TransmonParams::alpha)
        .def_readwrite("drive_strength", &TransmonParams::drive_strength);

    py::class_<Coupling>(m, "Coupling")
        .def(py::init<int, int, double>(), py::arg("site_a"), py::arg("site_b"),
             py::arg("strength"))
        .def_readwrite("site_a", &Coupling::site_a)
        .def_readwrite("site_b", &Coupling::site_b)
        .def_readwrite("strength", &Coupling::strength);

    py::class_<DeviceModel>(m, "DeviceModel")
        .def(py::init<>())
        .def_readwrite("transmons", &DeviceModel::transmons)
        .def_readwrite("couplings", &DeviceModel::couplings)
        .def_readwrite("levels", &DeviceModel::levels)
        .def_property_readonly("dim", &DeviceModel::dim)
        .def("validate", &DeviceModel::validate);

    py::class_<RwaParams>(m, "RwaParams")
        .def(py::init<double, double>(), py::arg("detuning"), py::arg("drive_strength"))
        .def_readwrite("detuning", &RwaParams::detuning)
        .def_readwrite("drive_strength", &RwaParams::drive_strength);

    m.def("ladder_op", &ladder_op, py::arg("levels"));
    m.def("number_op", &number_op, py::arg("levels"));
    m.def("build_drift", &build_drift, py::arg("device"));
    m.def("build_control_op", &build_control_op, py::arg("device"), py::arg("site"));
    m.def("rwa_hamiltonian", &rwa_hamiltonian, py::arg("params"), py::arg("mu_re"),
          py::arg("mu_im"));
    m.def("load_device", [](const std::filesystem::path& p) {
        return device_from_json(load_json_file(p));
    });

    // --------------------------------------------------------- schedule
    py::class_<Channel> channel(m, "Channel");
    channel.def_static("drive", &Channel::drive, py::arg("site"), py::arg("carrier"),
                       py::arg("phase") = 0.0)
        .def_static("cross", &Channel::cross, py::arg("drive_site"), py::arg("target_site"),
                    py::arg("carrier"), py::arg("phase") = 0.0)
        .def_readwrite("carrier_freq", &Channel::carrier_freq)
        .def_readwrite("phase", &Channel::phase)
        .def_readonly("drive_site", &Channel::drive_site)
        .def_readonly("target_site", &Channel::target_site)
        .def("name", &Channel::name);

    py::class_<Envelope>(m, "Envelope")
        .def_static("constant", &Envelope::constant, py::arg("amp"), py::arg("duration"))
        .def_static("gaussian_square", &Envelope::gaussian_square, py::arg("amp"),
                    py::arg("duration"), py::arg("sigma"), py::arg("width"))
        .def_static("drag", &Envelope::drag, py::arg("amp"), py::arg("duration"),
                    py::arg("sigma"), py::arg("beta"))
        .def_readonly("amp", &Envelope::amp)
        .def_readonly("duration", &Envelope::duration)
        .def_readonly("sigma", &Envelope::sigma)
        .def_readonly("width", &Envelope::width);

    py::class_<Segment>(m, "Segment")
        .def(py::init([](const Channel& c, double start, const Envelope& e) {
                 return Segment{c, start, e};
             }),
             py::arg("channel"), py::arg("start"), py::arg("envelope"))
        .def_readwrite("channel", &Segment::channel)
        .def_readwrite("start", &Segment::start)
        .def_readwrite("envelope", &Segment::envelope);

    py::class_<PulseSchedule>(m, "PulseSchedule")
        .def(py::init<>())
        .def_readwrite("segments", &PulseSchedule::segments)
        .def_readwrite("dt", &PulseSchedule::dt)
        .def("total_duration", &PulseSchedule::total_duration)
        .def("validate", &PulseSchedule::validate);

    m.def("envelope_value", &envelope_value, py::arg("envelope"), py::arg("t"));
    m.def("drive_signal", &drive_signal, py::arg("segment"), py::arg("t"));
    m.def("schedule_duration_dt", &schedule_duration_dt);
    m.def("snap_to_grid", &snap_to_grid);
    m.def("default_dt", [] { return kDefaultDt; });

    py::enum_<ProtocolKind>(m, "ProtocolKind")
        .value("BELL", ProtocolKind::Bell)
        .value("GHZ", ProtocolKind::Ghz)
        .value("W", ProtocolKind::W);
    py::enum_<EnvelopeFamily>(m, "EnvelopeFamily")
        .value("SQUARE", EnvelopeFamily::Square)
        .value("GAUSSIAN_SQUARE", EnvelopeFamily::GaussianSquare);

    py::class_<ProtocolOptions>(m, "ProtocolOptions")
        .def(py::init<>())
        .def_readwrite("family", &ProtocolOptions::family)
        .def_readwrite("widths_dt", &ProtocolOptions::widths_dt)
        .def_readwrite("risefall_sigmas", &ProtocolOptions::risefall_sigmas)
        .def_readwrite("final_cross_on_u1", &ProtocolOptions::final_cross_on_u1)
        .def_readwrite("include_phases", &ProtocolOptions::include_phases);

    m.def("protocol_param_count", &protocol_param_count, py::arg("kind"),
          py::arg("options") = ProtocolOptions{});
    m.def("protocol_param_names", &protocol_param_names, py::arg("kind"),
          py::arg("options") = ProtocolOptions{});
    m.def(
        "build_protocol",
        [](ProtocolKind kind, const DeviceModel& dev, const std::vector<double>& params,
           const ProtocolOptions& options) { return build_protocol(kind, dev, params, options); },
        py::arg("kind"), py::arg("device"), py::arg("params"),
        py::arg("options") = ProtocolOptions{});
    m.def("default_parameter_ranges", &default_parameter_ranges, py::arg("kind"),
          py::arg("options") = ProtocolOptions{}, py::arg("dt") = kDefaultDt);

    // --------------------------------------------------------- dynamics
    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("rtol", &SolverConfig::rtol)
        .def_readwrite("atol", &SolverConfig::atol)
        .def_readwrite("max_step", &SolverConfig::max_step)
        .def_readwrite("frame_freq", &SolverConfig::frame_freq);

    py::class_<RwaPiece>(m, "RwaPiece")
        .def(py::init([](double start, double duration, Complex mu) {
                 return RwaPiece{start, duration, mu};
             }),
             py::arg("start"), py::arg("duration"), py::arg("mu"))
        .def_readwrite("start", &RwaPiece::start)
        .def_readwrite("duration", &RwaPiece::duration)
        .def_readwrite("mu", &RwaPiece::mu);

    m.def("hamiltonian_at", &hamiltonian_at, py::arg("device"), py::arg("schedule"),
          py::arg("t"));
    m.def(
        "evolve",
        [](const DeviceModel& dev, const PulseSchedule& s, const ComplexVector& psi0,
           const SolverConfig& cfg) {
            py::gil_scoped_release release;
            EvolveResult r = evolve(dev, s, as_state(psi0), cfg);
            return py::gil_scoped_acquire(),
                   py::make_tuple(r.state.amplitudes, r.norm_drift, r.steps);
        },
        py::arg("device"), py::arg("schedule"), py::arg("psi0"),
        py::arg("config") = SolverConfig{},
        "returns (amplitudes, norm_drift, steps); the state is in the lab frame");
    m.def(
        "evolve_rwa",
        [](const RwaParams& p, const std::vector<RwaPiece>& mu, double t_final,
           const ComplexVector& psi0, const SolverConfig& cfg) {
            EvolveResult r = evolve_rwa(p, mu, t_final, as_state(psi0), cfg);
            return py::make_tuple(r.state.amplitudes, r.norm_drift, r.steps);
        },
        py::arg("params"), py::arg("mu"), py::arg("t_final"), py::arg("psi0"),
        py::arg("config") = SolverConfig{});
    m.def(
        "project_to_qubits",
        [](const ComplexVector& psi, int levels, int sites) {
            ProjectionResult r = project_to_qubits(as_state(psi), levels, sites);
            return py::make_tuple(r.state.amplitudes, r.leakage);
        },
        py::arg("psi"), py::arg("levels"), py::arg("sites"),
        "returns (qubit amplitudes, leakage weight)");

    // ---------------------------------------------------------- metrics
    m.def(
        "partial_trace",
        [](const ComplexVector& psi, const std::vector<int>& keep, const std::vector<int>& dims) {
            return partial_trace(as_state(psi), keep, dims).entries;
        },
        py::arg("psi"), py::arg("keep"), py::arg("dims"));
    m.def(
        "negativity",
        [](const OperatorMatrix& rho, const std::vector<int>& cut) {
            return negativity(DensityMatrix{rho}, cut);
        },
        py::arg("rho"), py::arg("transposed_sites"));
    m.def(
        "concurrence", [](const OperatorMatrix& rho) { return concurrence(DensityMatrix{rho}); },
        py::arg("rho"));
    m.def(
        "three_tangle", [](const ComplexVector& psi) { return three_tangle(as_state(psi)); },
        py::arg("psi"));
    m.def(
        "w_cost", [](const ComplexVector& psi) { return w_cost(as_state(psi)); }, py::arg("psi"));
    m.def(
        "bures_distance",
        [](const ComplexVector& a, const ComplexVector& b) {
            return bures_distance(as_state(a), as_state(b));
        },
        py::arg("psi"), py::arg("phi"));
    m.def(
        "probabilities", [](const ComplexVector& psi) { return probabilities(as_state(psi)); },
        py::arg("psi"));
    m.def("basis_labels", &basis_labels, py::arg("sites"), py::arg("levels"));
    m.def("canonical_bell", [] { return canonical_bell().amplitudes; });
    m.def("canonical_ghz", [] { return canonical_ghz().amplitudes; });
    m.def("canonical_w", [] { return canonical_w().amplitudes; });
    m.def(
        "compute_metrics",
        [](const ComplexVector& psi) { return report_to_dict(compute_metrics(as_state(psi))); },
        py::arg("qubit_state"));

    // ------------------------------------------------------- optimizers
    py::class_<Bounds>(m, "Bounds")
        .def(py::init([](const std::vector<std::array<double, 2>>& r) {
                 Bounds b;
                 b.ranges = r;
                 b.validate();
                 return b;
             }),
             py::arg("ranges"))
        .def_readwrite("ranges", &Bounds::ranges);

    py::class_<DeConfig>(m, "DeConfig")
        .def(py::init<>())
        .def_readwrite("population_size", &DeConfig::population_size)
        .def_readwrite("crossover_rate", &DeConfig::crossover_rate)
        .def_readwrite("f_min", &DeConfig::f_min)
        .def_readwrite("f_max", &DeConfig::f_max)
        .def_readwrite("max_generations", &DeConfig::max_generations)
        .def_readwrite("rng_seed", &DeConfig::rng_seed)
        .def_readwrite("tol", &DeConfig::tol)
        .def_readwrite("n_threads", &DeConfig::n_threads);

    py::class_<NmConfig>(m, "NmConfig")
        .def(py::init<>())
        .def_readwrite("simplex_scale", &NmConfig::simplex_scale)
        .def_readwrite("max_iterations", &NmConfig::max_iterations)
        .def_readwrite("f_tol", &NmConfig::f_tol);

    py::class_<OptimizationRun>(m, "OptimizationRun")
        .def_readonly("best_params", &OptimizationRun::best_params)
        .def_readonly("best_cost", &OptimizationRun::best_cost)
        .def_readonly("cost_trace", &OptimizationRun::cost_trace)
        .def_readonly("evaluations", &OptimizationRun::evaluations)
        .def_readonly("seed", &OptimizationRun::seed)
        .def_readonly("generations", &OptimizationRun::generations)
        .def_readonly("converged", &OptimizationRun::converged);

    m.def(
        "differential_evolution",
        [](const py::function& f, const Bounds& bounds, DeConfig cfg) {
            cfg.n_threads = 1;  // python objectives hold the interpreter lock
            const CostFn cost = [&f](std::span<const double> x) {
                return f(std::vector<double>(x.begin(), x.end())).cast<double>();
            };
            return differential_evolution(cost, bounds, cfg);
        },
        py::arg("cost"), py::arg("bounds"), py::arg("config") = DeConfig{});
    m.def(
        "nelder_mead",
        [](const py::function& f, const std::vector<double>& x0, const NmConfig& cfg) {
            const CostFn cost = [&f](std::span<const double> x) {
                return f(std::vector<double>(x.begin(), x.end())).cast<double>();
            };
            return nelder_mead(cost, x0, cfg);
        },
        py::arg("cost"), py::arg("x0"), py::arg("config") = NmConfig{});

    m.def("su2_zyz", &su2_zyz, py::arg("a"), py::arg("b"), py::arg("c"));
    m.def(
        "fit_local_unitaries",
        [](const ComplexVector& psi, const ComplexVector& target) {
            py::gil_scoped_release release;
            LuFitResult r = fit_local_unitaries(as_state(psi), as_state(target));
            return py::gil_scoped_acquire(), py::make_tuple(r.angles, r.bures);
        },
        py::arg("psi"), py::arg("target"), "returns (zyz angles, bures distance)");

    // ------------------------------------------------------------ runner
    m.def(
        "run_experiment",
        [](const std::filesystem::path& config_path, long seed, const std::string& budget,
           const std::filesystem::path& out_dir) {
            Json j = load_json_file(config_path);
            if (seed >= 0) j["seed"] = static_cast<std::uint64_t>(seed);
            if (!budget.empty()) j["budget"] = budget;
            ExperimentConfig cfg = experiment_from_json(j, config_path.parent_path());
            cfg.out_dir = out_dir;
            py::gil_scoped_release release;
            ExperimentResult r = run_experiment(cfg);
            py::gil_scoped_acquire acquire;
            py::dict d;
            d["objective_value"] = r.objective_value;
            d["best_cost"] = r.run.best_cost;
            d["duration_dt"] = r.duration_dt;
            d["leakage"] = r.leakage;
            d["norm_drift"] = r.norm_drift;
            d["final_state"] = r.final_state.amplitudes;
            d["metrics"] = report_to_dict(r.metrics);
            d["wall_seconds"] = r.wall_seconds;
            return d;
        },
        py::arg("config_path"), py::arg("seed") = -1, py::arg("budget") = std::string{},
        py::arg("out_dir") = std::filesystem::path{});
    m.def("gate_baseline_dt", [] {
        py::dict d;
        d["bell"] = BaselineTable::kBellGateDt;
        d["ghz"] = BaselineTable::kGhzGateDt;
        d["w"] = BaselineTable::kWGateDt;
        return d;
    });
}
