#include "pulseopt/pulse_schedule.hpp"

#include <algorithm>
#include <cmath>

namespace pulseopt {

std::string Channel::name() const {
    if (kind == Kind::Drive) return "D" + std::to_string(drive_site);
    return "U" + std::to_string(drive_site) + std::to_string(target_site);
}

Envelope Envelope::constant(Complex amp, double duration) {
    Envelope e;
    e.shape = Shape::Constant;
    e.amp = amp;
    e.duration = duration;
    e.validate();
    return e;
}

Envelope Envelope::gaussian_square(Complex amp, double duration, double sigma, double width) {
    Envelope e;
    e.shape = Shape::GaussianSquare;
    e.amp = amp;
    e.duration = duration;
    e.sigma = sigma;
    e.width = width;
    e.validate();
    return e;
}

Envelope Envelope::drag(Complex amp, double duration, double sigma, double beta) {
    Envelope e;
    e.shape = Shape::Drag;
    e.amp = amp;
    e.duration = duration;
    e.sigma = sigma;
    e.beta = beta;
    e.validate();
    return e;
}

void Envelope::validate() const {
    if (std::abs(amp) > 1.0 + 1e-12) throw ConfigError("envelope |amp| must be <= 1");
    if (!(duration > 0.0)) throw ConfigError("envelope duration must be positive");
    if (shape != Shape::Constant) {
        if (!(sigma > 0.0)) throw ConfigError("envelope sigma must be positive");
    }
    if (shape == Shape::GaussianSquare) {
        if (width < 0.0 || width > duration + 1e-12)
            throw ConfigError("gaussian-square width must lie in [0, duration]");
    }
}

Complex envelope_value(const Envelope& e, double t) {
    if (t < 0.0 || t > e.duration) return {0.0, 0.0};
    switch (e.shape) {
        case Envelope::Shape::Constant:
            return e.amp;
        case Envelope::Shape::GaussianSquare: {
            const double r = 0.5 * (e.duration - e.width);
            double g = 1.0;
            if (t < r) {
                const double u = (t - r) / e.sigma;
                g = std::exp(-0.5 * u * u);
            } else if (t > r + e.width) {
                const double u = (t - r - e.width) / e.sigma;
                g = std::exp(-0.5 * u * u);
            }
            return e.amp * g;
        }
        case Envelope::Shape::Drag: {
            const double c = 0.5 * e.duration;
            const double u = (t - c) / e.sigma;
            const double g = std::exp(-0.5 * u * u);           // peak-normalized Gaussian
            const double dg = -(t - c) / (e.sigma * e.sigma) * g;
            return e.amp * Complex{g, e.beta * dg};
        }
    }
    return {0.0, 0.0};
}

double drive_signal(const Segment& seg, double t) {
    const Complex env = envelope_value(seg.envelope, t - seg.start);
    if (env == Complex{0.0, 0.0}) return 0.0;
    const double arg = seg.channel.carrier_freq * t + seg.channel.phase;
    return (env * std::exp(Complex{0.0, -arg})).real();
}

double PulseSchedule::total_duration() const {
    double total = 0.0;
    for (const auto& seg : segments) total = std::max(total, seg.end());
    return total;
}

void PulseSchedule::validate() const {
    if (!(dt > 0.0)) throw ConfigError("schedule dt must be positive");
    for (const auto& seg : segments) {
        if (seg.start < 0.0) throw ConfigError("segment start must be >= 0");
        seg.envelope.validate();
    }
    for (std::size_t i = 0; i < segments.size(); ++i) {
        for (std::size_t j = i + 1; j < segments.size(); ++j) {
            const auto& a = segments[i];
            const auto& b = segments[j];
            if (!a.channel.same_line(b.channel)) continue;
            const double overlap =
                std::min(a.end(), b.end()) - std::max(a.start, b.start);
            if (overlap > 1e-9)
                throw ConfigError("overlapping segments on channel " + a.channel.name());
        }
    }
}

long schedule_duration_dt(const PulseSchedule& s) {
    if (s.segments.empty()) throw ZeroDurationError("schedule has no segments");
    // tolerance absorbs float fuzz when the total is an exact grid multiple
    return static_cast<long>(std::ceil(s.total_duration() / s.dt - 1e-9));
}

PulseSchedule snap_to_grid(const PulseSchedule& s) {
    PulseSchedule out = s;
    for (auto& seg : out.segments) {
        const double start_dt = std::round(seg.start / s.dt);
        double dur_dt = std::round(seg.envelope.duration / s.dt);
        if (dur_dt < 1.0) dur_dt = 1.0;
        seg.start = start_dt * s.dt;
        const double old_duration = seg.envelope.duration;
        seg.envelope.duration = dur_dt * s.dt;
        if (seg.envelope.shape == Envelope::Shape::GaussianSquare) {
            // keep the flat top centered and no wider than the snapped duration
            seg.envelope.width =
                std::min(seg.envelope.width, seg.envelope.duration);
            (void)old_duration;
        }
    }
    out.validate();
    return out;
}

}  // namespace pulseopt
