// pulse_schedule.hpp — envelope segments on drive/cross channels over the dt grid
#pragma once

#include "pulseopt/common.hpp"

#include <string>
#include <vector>

namespace pulseopt {

// A named control line. Drive channels (D_i) address one site at its own
// transition frequency; cross channels (U_k) drive one site at the target
// site's frequency. Carriers are stored explicitly so either default can be
// overridden.
struct Channel {
    enum class Kind { Drive, Cross };

    Kind kind{Kind::Drive};
    int drive_site{0};
    int target_site{-1};       // Cross only
    double carrier_freq{0.0};  // rad/ns
    double phase{0.0};         // radians

    static Channel drive(int site, double carrier, double phase = 0.0) {
        return {Kind::Drive, site, -1, carrier, phase};
    }
    static Channel cross(int drive_site, int target_site, double carrier, double phase = 0.0) {
        return {Kind::Cross, drive_site, target_site, carrier, phase};
    }

    std::string name() const;

    // channel identity for the no-overlap rule (carrier/phase excluded)
    bool same_line(const Channel& other) const {
        return kind == other.kind && drive_site == other.drive_site &&
               target_site == other.target_site;
    }
};

struct Envelope {
    enum class Shape { Constant, GaussianSquare, Drag };

    Shape shape{Shape::Constant};
    Complex amp{0.0, 0.0};  // dimensionless, |amp| <= 1
    double duration{0.0};   // ns
    double sigma{0.0};      // ns, Gaussian shapes only
    double width{0.0};      // ns, flat-top length, GaussianSquare only
    double beta{0.0};       // Drag only

    static Envelope constant(Complex amp, double duration);
    static Envelope gaussian_square(Complex amp, double duration, double sigma, double width);
    static Envelope drag(Complex amp, double duration, double sigma, double beta);

    void validate() const;
};

// Envelope value at local time t (0 at segment start). Identically zero
// outside [0, duration]. GaussianSquare keeps the raw truncated Gaussian
// tails (no lifting); the truncation residual at the segment edge is
// exp(-r^2 / (2 sigma^2)) with r = (duration - width) / 2.
Complex envelope_value(const Envelope& e, double t);

struct Segment {
    Channel channel;
    double start{0.0};  // ns
    Envelope envelope;

    double end() const { return start + envelope.duration; }
};

// Re[envelope(t - start) * exp(-i (carrier * t + phase))]; the scalar that
// multiplies (b^+ + b) before the Omega_d prefactor.
double drive_signal(const Segment& seg, double t);

struct PulseSchedule {
    std::vector<Segment> segments;
    double dt{kDefaultDt};

    double total_duration() const;  // ns, max over segments of start + duration
    void validate() const;          // throws on overlap within a channel or bad segments
};

// ceil(total duration / dt); throws ZeroDurationError on an empty schedule.
long schedule_duration_dt(const PulseSchedule& s);

// Export form: starts and durations rounded to integer multiples of dt
// (at most dt/2 of movement per edge). Widths and sigmas are preserved.
PulseSchedule snap_to_grid(const PulseSchedule& s);

}  // namespace pulseopt
