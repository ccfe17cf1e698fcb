#include "pulseopt/dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace pulseopt {

namespace {

// ---------------------------------------------------------------- integrator

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;

struct StepStats {
    long steps{0};
    long rhs_evaluations{0};
};

// Integrates y' = f(t, y) over [t0, t1] (f smooth inside the interval).
// PI step-size control after Hairer/Norsett/Wanner. The FSAL stage is reused
// across accepted steps.
template <typename Rhs>
void dopri5_piece(const Rhs& rhs, ComplexVector& y, double t0, double t1,
                  const SolverConfig& cfg, double max_step, double& h, StepStats& stats) {
    const Eigen::Index n = y.size();
    ComplexVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), yerr(n);

    const double span = t1 - t0;
    if (span <= 0.0) return;
    double t = t0;
    h = std::min({h, max_step, span});
    if (h <= 0.0) h = std::min(max_step, span);

    rhs(t, y, k1);
    ++stats.rhs_evaluations;

    constexpr double kSafety = 0.9;
    constexpr double kBeta = 0.04;
    constexpr double kExpo1 = 0.2 - kBeta * 0.75;
    double facold = 1e-4;

    while (t < t1 - 1e-14 * std::max(1.0, std::abs(t1))) {
        h = std::min(h, t1 - t);
        if (h < 1e-13 * std::max(1.0, std::abs(t)))
            throw StiffnessError("step size underflow at t = " + std::to_string(t), t);
        if (stats.steps >= cfg.max_steps)
            throw StiffnessError("step budget exhausted at t = " + std::to_string(t), t);

        ytmp = y + h * (kA21 * k1);
        rhs(t + kC2 * h, ytmp, k2);
        ytmp = y + h * (kA31 * k1 + kA32 * k2);
        rhs(t + kC3 * h, ytmp, k3);
        ytmp = y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3);
        rhs(t + kC4 * h, ytmp, k4);
        ytmp = y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4);
        rhs(t + kC5 * h, ytmp, k5);
        ytmp = y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5);
        rhs(t + h, ytmp, k6);
        ynew = y + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
        rhs(t + h, ynew, k7);
        stats.rhs_evaluations += 6;

        yerr = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
        double err_sq = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc =
                cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double e = std::abs(yerr[i]) / sc;
            err_sq += e * e;
        }
        const double err = std::sqrt(err_sq / static_cast<double>(n));
        ++stats.steps;

        if (err <= 1.0) {
            t += h;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            const double fac11 = std::pow(std::max(err, 1e-16), kExpo1);
            double fac = fac11 / std::pow(facold, kBeta) / kSafety;
            fac = std::clamp(fac, 0.1, 5.0);
            facold = std::max(err, 1e-4);
            h = std::min(h / fac, max_step);
        } else {
            const double fac11 = std::pow(err, kExpo1);
            h = h / std::min(5.0, fac11 / kSafety);
        }
    }
}

// ------------------------------------------------- compiled schedule + RHS

struct LadderPair {
    Eigen::Index lo;  // index with occupation d at the site
    Eigen::Index hi;  // same index with occupation d+1
    double factor;    // sqrt(d+1)
};

struct ChannelTerm {
    int site;
    double omega_d;
    double carrier;
    double phase;
    double start;
    Envelope envelope;
};

struct CompiledSystem {
    Eigen::Index dim{0};
    Eigen::VectorXd diag_rot;  // E_k - frame * N_k
    Eigen::VectorXd total_excitation;
    double frame{0.0};
    struct JEntry {
        Eigen::Index row, col;
        Complex value;
    };
    std::vector<JEntry> j_entries;               // both triangles
    std::vector<std::vector<LadderPair>> site_pairs;
    std::vector<ChannelTerm> terms;
    std::vector<double> breakpoints;  // sorted, spanning [0, T]
};

std::vector<LadderPair> make_ladder_pairs(int site, int sites, int levels) {
    Eigen::Index dim = 1;
    for (int s = 0; s < sites; ++s) dim *= levels;
    Eigen::Index stride = 1;
    for (int s = 0; s < site; ++s) stride *= levels;
    std::vector<LadderPair> pairs;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const int digit = static_cast<int>((i / stride) % levels);
        if (digit + 1 < levels)
            pairs.push_back({i, i + stride, std::sqrt(static_cast<double>(digit + 1))});
    }
    return pairs;
}

CompiledSystem compile(const DeviceModel& device, const PulseSchedule& schedule,
                       const SolverConfig& cfg) {
    device.validate();
    schedule.validate();
    CompiledSystem sys;
    sys.dim = device.dim();
    const int n = device.sites();
    const int L = device.levels;

    double frame = cfg.frame_freq;
    if (frame < 0.0) {
        frame = 0.0;
        for (const auto& t : device.transmons) frame += t.omega;
        frame /= static_cast<double>(n);
    }
    sys.frame = frame;

    const OperatorMatrix drift = build_drift(device);
    sys.diag_rot.resize(sys.dim);
    sys.total_excitation.resize(sys.dim);
    for (Eigen::Index i = 0; i < sys.dim; ++i) {
        Eigen::Index rest = i;
        double exc = 0.0;
        for (int s = 0; s < n; ++s) {
            exc += static_cast<double>(rest % L);
            rest /= L;
        }
        sys.total_excitation[i] = exc;
        sys.diag_rot[i] = drift(i, i).real() - frame * exc;
    }
    // off-diagonal drift entries are exactly the exchange couplings, which
    // conserve total excitation and are therefore frame-invariant
    for (Eigen::Index r = 0; r < sys.dim; ++r)
        for (Eigen::Index c = 0; c < sys.dim; ++c)
            if (r != c && std::abs(drift(r, c)) > 0.0)
                sys.j_entries.push_back({r, c, drift(r, c)});

    sys.site_pairs.resize(n);
    for (int s = 0; s < n; ++s) sys.site_pairs[s] = make_ladder_pairs(s, n, L);

    std::vector<double> cuts{0.0};
    for (const auto& seg : schedule.segments) {
        const int site = seg.channel.drive_site;
        if (site < 0 || site >= n) throw DimensionError("segment drive site out of range");
        sys.terms.push_back({site, device.transmons[site].drive_strength,
                             seg.channel.carrier_freq, seg.channel.phase, seg.start,
                             seg.envelope});
        cuts.push_back(seg.start);
        cuts.push_back(seg.end());
        if (seg.envelope.shape == Envelope::Shape::GaussianSquare) {
            const double r = 0.5 * (seg.envelope.duration - seg.envelope.width);
            cuts.push_back(seg.start + r);
            cuts.push_back(seg.start + r + seg.envelope.width);
        }
    }
    const double total = schedule.total_duration();
    cuts.push_back(total);
    std::sort(cuts.begin(), cuts.end());
    for (double c : cuts) {
        if (c < -1e-12 || c > total + 1e-12) continue;
        if (sys.breakpoints.empty() || c - sys.breakpoints.back() > 1e-9)
            sys.breakpoints.push_back(c);
    }
    if (sys.breakpoints.size() < 2) sys.breakpoints = {0.0, total};
    return sys;
}

// dy = -i H_rot(t) y
struct RotatingFrameRhs {
    const CompiledSystem& sys;
    std::vector<const ChannelTerm*> active;

    void operator()(double t, const ComplexVector& y, ComplexVector& dy) const {
        const Eigen::Index n = y.size();
        const Complex* yp = y.data();
        Complex* dp = dy.data();
        for (Eigen::Index i = 0; i < n; ++i) dp[i] = sys.diag_rot[i] * yp[i];
        for (const auto& e : sys.j_entries) dp[e.row] += e.value * yp[e.col];
        Complex frame_phasor{1.0, 0.0};
        if (sys.frame != 0.0) {
            const double a = sys.frame * t;
            frame_phasor = {std::cos(a), std::sin(a)};
        }
        for (const ChannelTerm* term : active) {
            const Complex env = envelope_value(term->envelope, t - term->start);
            if (env.real() == 0.0 && env.imag() == 0.0) continue;
            const double arg = term->carrier * t + term->phase;
            const double signal = env.real() * std::cos(arg) + env.imag() * std::sin(arg);
            const Complex zc = term->omega_d * signal * frame_phasor;  // on b^+
            const Complex zc_conj = std::conj(zc);                     // on b
            for (const auto& p : sys.site_pairs[term->site]) {
                dp[p.hi] += zc * (p.factor * yp[p.lo]);
                dp[p.lo] += zc_conj * (p.factor * yp[p.hi]);
            }
        }
        for (Eigen::Index i = 0; i < n; ++i) dp[i] *= Complex{0.0, -1.0};
    }
};

}  // namespace

// ------------------------------------------------------------------- types

StateVector StateVector::ground(Eigen::Index dim) {
    ComplexVector v = ComplexVector::Zero(dim);
    v[0] = 1.0;
    return {std::move(v)};
}

StateVector StateVector::normalized(ComplexVector v) {
    const double nrm = v.norm();
    if (nrm < 1e-12) throw NormalizationError("cannot normalize a zero state vector");
    v /= nrm;
    return {std::move(v)};
}

StateVector StateVector::checked(ComplexVector v) {
    const double nrm = v.norm();
    if (std::abs(nrm - 1.0) > 1e-9)
        throw NormalizationError("state vector norm is " + std::to_string(nrm));
    return {std::move(v)};
}

// ------------------------------------------------------------------ evolve

OperatorMatrix hamiltonian_at(const DeviceModel& device, const PulseSchedule& schedule,
                              double t) {
    device.validate();
    OperatorMatrix h = build_drift(device);
    for (const auto& seg : schedule.segments) {
        const double signal = drive_signal(seg, t);
        if (signal == 0.0) continue;
        const int site = seg.channel.drive_site;
        h += device.transmons[site].drive_strength * signal * build_control_op(device, site);
    }
    return h;
}

EvolveResult evolve(const DeviceModel& device, const PulseSchedule& schedule,
                    const StateVector& psi0, const SolverConfig& cfg) {
    const auto t_begin = std::chrono::steady_clock::now();
    const CompiledSystem sys = compile(device, schedule, cfg);
    if (psi0.dim() != sys.dim)
        throw DimensionError("initial state dimension does not match the device");

    const double max_step = cfg.max_step > 0.0 ? cfg.max_step : schedule.dt / 4.0;
    ComplexVector y = psi0.amplitudes;
    const double norm0 = y.norm();

    RotatingFrameRhs rhs{sys, {}};
    StepStats stats;
    double h = max_step;
    for (std::size_t p = 0; p + 1 < sys.breakpoints.size(); ++p) {
        const double ta = sys.breakpoints[p];
        const double tb = sys.breakpoints[p + 1];
        rhs.active.clear();
        for (const auto& term : sys.terms)
            if (term.start < tb - 1e-12 && term.start + term.envelope.duration > ta + 1e-12)
                rhs.active.push_back(&term);
        dopri5_piece(rhs, y, ta, tb, cfg, max_step, h, stats);
    }

    // back to the lab frame: psi_lab = exp(-i * frame * N * T) psi_rot
    const double t_final = sys.breakpoints.back();
    if (sys.frame != 0.0) {
        for (Eigen::Index i = 0; i < sys.dim; ++i) {
            const double a = -sys.frame * sys.total_excitation[i] * t_final;
            y[i] *= Complex{std::cos(a), std::sin(a)};
        }
    }

    EvolveResult out;
    out.norm_drift = std::abs(y.norm() - norm0);
    out.state = StateVector{std::move(y)};
    out.steps = stats.steps;
    out.rhs_evaluations = stats.rhs_evaluations;
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return out;
}

EvolveResult evolve_rwa(const RwaParams& p, std::span<const RwaPiece> mu, double t_final,
                        const StateVector& psi0, const SolverConfig& cfg) {
    const auto t_begin = std::chrono::steady_clock::now();
    if (psi0.dim() != 2) throw DimensionError("evolve_rwa expects a 2-dimensional state");
    if (!(t_final >= 0.0)) throw ConfigError("t_final must be non-negative");

    std::vector<double> cuts{0.0, t_final};
    for (const auto& piece : mu) {
        cuts.push_back(piece.start);
        cuts.push_back(piece.start + piece.duration);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> breaks;
    for (double c : cuts) {
        if (c < -1e-12 || c > t_final + 1e-12) continue;
        if (breaks.empty() || c - breaks.back() > 1e-12) breaks.push_back(c);
    }
    if (breaks.size() < 2) breaks = {0.0, t_final};

    ComplexVector y = psi0.amplitudes;
    const double norm0 = y.norm();
    const double max_step = cfg.max_step > 0.0 ? cfg.max_step : kDefaultDt / 4.0;
    StepStats stats;
    double h = max_step;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double ta = breaks[i];
        const double tb = breaks[i + 1];
        Complex mu_val{0.0, 0.0};
        for (const auto& piece : mu)
            if (piece.start <= ta + 1e-12 && piece.start + piece.duration >= tb - 1e-12)
                mu_val += piece.mu;
        const OperatorMatrix hmat = rwa_hamiltonian(p, mu_val.real(), mu_val.imag());
        auto rhs = [&hmat](double, const ComplexVector& y_in, ComplexVector& dy) {
            dy = Complex{0.0, -1.0} * (hmat * y_in);
        };
        dopri5_piece(rhs, y, ta, tb, cfg, max_step, h, stats);
    }

    EvolveResult out;
    out.norm_drift = std::abs(y.norm() - norm0);
    out.state = StateVector{std::move(y)};
    out.steps = stats.steps;
    out.rhs_evaluations = stats.rhs_evaluations;
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return out;
}

ProjectionResult project_to_qubits(const StateVector& psi, int levels, int sites) {
    Eigen::Index expected = 1;
    for (int s = 0; s < sites; ++s) expected *= levels;
    if (psi.dim() != expected)
        throw DimensionError("project_to_qubits: state dimension does not match levels^sites");

    const Eigen::Index qdim = Eigen::Index(1) << sites;
    ComplexVector kept = ComplexVector::Zero(qdim);
    double kept_weight = 0.0;
    const double total_weight = psi.amplitudes.squaredNorm();
    for (Eigen::Index i = 0; i < psi.dim(); ++i) {
        Eigen::Index rest = i;
        Eigen::Index qindex = 0;
        bool in_subspace = true;
        for (int s = 0; s < sites; ++s) {
            const Eigen::Index digit = rest % levels;
            rest /= levels;
            if (digit > 1) {
                in_subspace = false;
                break;
            }
            qindex |= digit << s;
        }
        if (!in_subspace) continue;
        kept[qindex] = psi.amplitudes[i];
        kept_weight += std::norm(psi.amplitudes[i]);
    }
    if (total_weight <= 0.0 || kept_weight / total_weight < 1e-6)
        throw DegenerateProjectionError("projection would discard (almost) all weight");
    ProjectionResult out;
    out.leakage = 1.0 - kept_weight / total_weight;
    kept /= std::sqrt(kept_weight);
    out.state = StateVector{std::move(kept)};
    return out;
}

}  // namespace pulseopt
