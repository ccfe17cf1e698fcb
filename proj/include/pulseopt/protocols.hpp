// protocols.hpp — fixed pulse-sequence topologies for Bell, GHZ, and W preparation
#pragma once

#include "pulseopt/device_model.hpp"
#include "pulseopt/pulse_schedule.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace pulseopt {

enum class ProtocolKind { Bell, Ghz, W };

enum class EnvelopeFamily { Square, GaussianSquare };

struct ProtocolOptions {
    EnvelopeFamily family{EnvelopeFamily::Square};
    // GaussianSquare only: fixed flat-top widths per segment (dt units), in
    // template segment order, taken from a square-pulse optimum.
    std::vector<double> widths_dt;
    double risefall_sigmas{2.0};  // rise/fall length in sigmas on each side
    // W only: route the final cross pulse on U1 instead of the default U0.
    bool final_cross_on_u1{false};
    // append one carrier-phase parameter per segment
    bool include_phases{false};
};

// Number of segments in the template (Bell 3, GHZ 5, W 12).
int protocol_segment_count(ProtocolKind kind);

// Expected parameter-vector length for build_protocol.
int protocol_param_count(ProtocolKind kind, const ProtocolOptions& options);

// Human-readable parameter names in vector order (for run artifacts).
std::vector<std::string> protocol_param_names(ProtocolKind kind, const ProtocolOptions& options);

// Instantiate the template with concrete amplitudes/durations/sigmas.
// Durations and sigmas are passed in ns; see protocol_param_names for the
// layout. Throws ArityError on a wrong-sized parameter vector.
PulseSchedule build_protocol(ProtocolKind kind, const DeviceModel& device,
                             std::span<const double> params,
                             const ProtocolOptions& options = {});

struct Bounds;  // optimize.hpp

// Spec-default optimizer bounds for the template: amplitudes [-1, 1],
// durations [2 dt, 800 dt], sigmas [1 dt, 40 dt], phases [0, 2 pi).
std::vector<std::array<double, 2>> default_parameter_ranges(ProtocolKind kind,
                                                            const ProtocolOptions& options,
                                                            double dt = kDefaultDt);

ProtocolKind protocol_from_string(const std::string& name);
std::string to_string(ProtocolKind kind);
EnvelopeFamily family_from_string(const std::string& name);
std::string to_string(EnvelopeFamily family);

}  // namespace pulseopt
