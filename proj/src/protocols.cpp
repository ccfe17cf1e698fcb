#include "pulseopt/protocols.hpp"

#include <algorithm>
#include <cmath>

namespace pulseopt {

namespace {

// One planned pulse: local drive on `site`, or cross drive on `site` at the
// carrier of `target`. Pulses within a stage start simultaneously; stages run
// back to back.
struct PlannedPulse {
    int stage;
    int site;
    int target;  // -1 for local
};

std::vector<PlannedPulse> template_pulses(ProtocolKind kind, const ProtocolOptions& options) {
    switch (kind) {
        case ProtocolKind::Bell:
            return {{0, 0, -1}, {0, 1, -1}, {1, 0, 1}};
        case ProtocolKind::Ghz:
            return {{0, 0, -1}, {0, 1, -1}, {1, 0, 1}, {2, 2, -1}, {3, 1, 2}};
        case ProtocolKind::W: {
            std::vector<PlannedPulse> p;
            const std::array<PlannedPulse, 3> cross = {
                PlannedPulse{1, 0, 1}, PlannedPulse{3, 1, 2},
                options.final_cross_on_u1 ? PlannedPulse{5, 1, 2} : PlannedPulse{5, 0, 1}};
            for (int block = 0; block < 3; ++block) {
                for (int s = 0; s < 3; ++s) p.push_back({2 * block, s, -1});
                p.push_back(cross[block]);
            }
            return p;
        }
    }
    throw ConfigError("unknown protocol kind");
}

int stage_count(ProtocolKind kind) { return kind == ProtocolKind::Bell ? 2 : (kind == ProtocolKind::Ghz ? 4 : 6); }

// Square templates share one duration parameter across each simultaneous
// stage; Gaussian-square templates carry {amp, sigma} per pulse with widths
// fixed by the options.
}  // namespace

int protocol_segment_count(ProtocolKind kind) {
    ProtocolOptions opt;
    return static_cast<int>(template_pulses(kind, opt).size());
}

int protocol_param_count(ProtocolKind kind, const ProtocolOptions& options) {
    const auto pulses = template_pulses(kind, options);
    int count = 0;
    if (options.family == EnvelopeFamily::Square) {
        count = static_cast<int>(pulses.size()) + stage_count(kind);
    } else {
        count = 2 * static_cast<int>(pulses.size());
    }
    if (options.include_phases) count += static_cast<int>(pulses.size());
    return count;
}

std::vector<std::string> protocol_param_names(ProtocolKind kind, const ProtocolOptions& options) {
    const auto pulses = template_pulses(kind, options);
    std::vector<std::string> names;
    auto pulse_tag = [&](const PlannedPulse& p) {
        std::string tag = (p.target < 0 ? "d" + std::to_string(p.site)
                                        : "u" + std::to_string(p.site) + std::to_string(p.target));
        return tag + "_s" + std::to_string(p.stage);
    };
    if (options.family == EnvelopeFamily::Square) {
        int stage = -1;
        for (const auto& p : pulses) {
            names.push_back("amp_" + pulse_tag(p));
            if (p.stage != stage) {
                stage = p.stage;
                names.push_back("dur_stage" + std::to_string(p.stage));
            }
        }
    } else {
        for (const auto& p : pulses) {
            names.push_back("amp_" + pulse_tag(p));
            names.push_back("sigma_" + pulse_tag(p));
        }
    }
    if (options.include_phases)
        for (const auto& p : pulses) names.push_back("phase_" + pulse_tag(p));
    return names;
}

PulseSchedule build_protocol(ProtocolKind kind, const DeviceModel& device,
                             std::span<const double> params, const ProtocolOptions& options) {
    device.validate();
    const auto pulses = template_pulses(kind, options);
    const int expected = protocol_param_count(kind, options);
    if (static_cast<int>(params.size()) != expected)
        throw ArityError("protocol expects " + std::to_string(expected) + " parameters, got " +
                         std::to_string(params.size()));
    const int required_sites = kind == ProtocolKind::Bell ? 2 : 3;
    if (device.sites() < required_sites)
        throw ConfigError("protocol requires a device with " + std::to_string(required_sites) +
                          " transmons");
    if (options.family == EnvelopeFamily::GaussianSquare &&
        options.widths_dt.size() != pulses.size())
        throw ArityError("gaussian-square template needs one width per segment");

    // decode parameters
    struct Decoded {
        double amp;
        double sigma;     // gaussian-square only
        double duration;  // ns
        double phase;
    };
    std::vector<Decoded> decoded(pulses.size());
    std::size_t k = 0;
    if (options.family == EnvelopeFamily::Square) {
        std::vector<double> stage_duration(stage_count(kind), 0.0);
        int stage = -1;
        for (std::size_t i = 0; i < pulses.size(); ++i) {
            decoded[i].amp = params[k++];
            if (pulses[i].stage != stage) {
                stage = pulses[i].stage;
                stage_duration[stage] = params[k++];
            }
        }
        for (std::size_t i = 0; i < pulses.size(); ++i)
            decoded[i].duration = stage_duration[pulses[i].stage];
    } else {
        for (std::size_t i = 0; i < pulses.size(); ++i) {
            decoded[i].amp = params[k++];
            decoded[i].sigma = params[k++];
            decoded[i].duration = options.widths_dt[i] * kDefaultDt +
                                  2.0 * options.risefall_sigmas * decoded[i].sigma;
        }
    }
    for (std::size_t i = 0; i < pulses.size(); ++i)
        decoded[i].phase = options.include_phases ? params[k++] : 0.0;

    // lay out stages back to back
    PulseSchedule schedule;
    schedule.dt = kDefaultDt;
    double cursor = 0.0;
    int stage = 0;
    double stage_end = 0.0;
    for (std::size_t i = 0; i < pulses.size(); ++i) {
        if (pulses[i].stage != stage) {
            cursor = stage_end;
            stage = pulses[i].stage;
        }
        const auto& p = pulses[i];
        const auto& d = decoded[i];
        Channel ch = p.target < 0
                         ? Channel::drive(p.site, device.transmons[p.site].omega, d.phase)
                         : Channel::cross(p.site, p.target, device.transmons[p.target].omega,
                                          d.phase);
        Envelope env;
        if (options.family == EnvelopeFamily::Square) {
            env = Envelope::constant(d.amp, d.duration);
        } else {
            const double width = options.widths_dt[i] * schedule.dt;
            env = Envelope::gaussian_square(d.amp, d.duration, d.sigma, width);
        }
        schedule.segments.push_back({ch, cursor, env});
        stage_end = std::max(stage_end, cursor + d.duration);
    }
    schedule.validate();
    return schedule;
}

std::vector<std::array<double, 2>> default_parameter_ranges(ProtocolKind kind,
                                                            const ProtocolOptions& options,
                                                            double dt) {
    const auto names = protocol_param_names(kind, options);
    std::vector<std::array<double, 2>> ranges;
    ranges.reserve(names.size());
    for (const auto& n : names) {
        if (n.rfind("amp_", 0) == 0)
            ranges.push_back({-1.0, 1.0});
        else if (n.rfind("dur_", 0) == 0)
            ranges.push_back({2.0 * dt, 800.0 * dt});
        else if (n.rfind("sigma_", 0) == 0)
            ranges.push_back({1.0 * dt, 40.0 * dt});
        else
            ranges.push_back({0.0, 2.0 * M_PI});
    }
    return ranges;
}

ProtocolKind protocol_from_string(const std::string& name) {
    if (name == "bell") return ProtocolKind::Bell;
    if (name == "ghz") return ProtocolKind::Ghz;
    if (name == "w") return ProtocolKind::W;
    throw ConfigError("unknown protocol '" + name + "' (expected bell|ghz|w)");
}

std::string to_string(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::Bell: return "bell";
        case ProtocolKind::Ghz: return "ghz";
        case ProtocolKind::W: return "w";
    }
    return "?";
}

EnvelopeFamily family_from_string(const std::string& name) {
    if (name == "square") return EnvelopeFamily::Square;
    if (name == "gaussian_square") return EnvelopeFamily::GaussianSquare;
    throw ConfigError("unknown envelope family '" + name + "'");
}

std::string to_string(EnvelopeFamily family) {
    return family == EnvelopeFamily::Square ? "square" : "gaussian_square";
}

}  // namespace pulseopt
