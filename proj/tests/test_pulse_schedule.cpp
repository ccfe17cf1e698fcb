#include "pulseopt/protocols.hpp"
#include "pulseopt/pulse_schedule.hpp"

#include <doctest.h>

using namespace pulseopt;

namespace {

DeviceModel two_transmons() {
    DeviceModel d;
    d.levels = 2;
    d.transmons = {{29.877, -1.954, 0.396}, {30.235, -1.969, 0.650}};
    d.couplings = {{0, 1, 0.013}};
    return d;
}

DeviceModel three_transmons() {
    DeviceModel d = two_transmons();
    d.transmons.push_back({29.135, -1.839, 4.638});
    d.couplings.push_back({1, 2, 0.014});
    return d;
}

}  // namespace

TEST_CASE("envelope values") {
    SUBCASE("constant") {
        const Envelope e = Envelope::constant({0.5, 0.0}, 10.0);
        CHECK(envelope_value(e, 5.0) == Complex{0.5, 0.0});
        CHECK(envelope_value(e, -0.001) == Complex{0.0, 0.0});
        CHECK(envelope_value(e, 10.001) == Complex{0.0, 0.0});
    }
    SUBCASE("gaussian-square plateau equals amp") {
        const Envelope e = Envelope::gaussian_square({0.8, 0.0}, 40.0, 3.0, 20.0);
        CHECK(envelope_value(e, 20.0).real() == doctest::Approx(0.8));
        // on the flat top everywhere
        CHECK(envelope_value(e, 12.0).real() == doctest::Approx(0.8));
        CHECK(envelope_value(e, 28.0).real() == doctest::Approx(0.8));
    }
    SUBCASE("gaussian-square with width == duration behaves like constant") {
        const Envelope e = Envelope::gaussian_square({0.8, 0.0}, 40.0, 3.0, 40.0);
        for (double t : {0.0, 7.3, 20.0, 39.9})
            CHECK(envelope_value(e, t).real() == doctest::Approx(0.8));
    }
    SUBCASE("gaussian-square is symmetric about its center") {
        const Envelope e = Envelope::gaussian_square({1.0, 0.0}, 50.0, 4.0, 18.0);
        for (double off : {1.0, 5.0, 12.0, 24.0})
            CHECK(envelope_value(e, 25.0 - off).real() ==
                  doctest::Approx(envelope_value(e, 25.0 + off).real()));
    }
    SUBCASE("gaussian-square is continuous at the flat-top joins") {
        const Envelope e = Envelope::gaussian_square({1.0, 0.0}, 50.0, 4.0, 18.0);
        const double r = 0.5 * (50.0 - 18.0);
        CHECK(envelope_value(e, r - 1e-9).real() ==
              doctest::Approx(envelope_value(e, r + 1e-9).real()).epsilon(1e-6));
    }
    SUBCASE("drag quadrature at beta = 0 vanishes") {
        const Envelope e = Envelope::drag({1.0, 0.0}, 30.0, 5.0, 0.0);
        CHECK(envelope_value(e, 15.0).real() == doctest::Approx(1.0));
        CHECK(envelope_value(e, 10.0).imag() == doctest::Approx(0.0));
    }
    SUBCASE("drag derivative component") {
        const Envelope e = Envelope::drag({1.0, 0.0}, 30.0, 5.0, 0.7);
        const double h2 = 1e-5;
        const double g_prime =
            (envelope_value({Envelope::Shape::Drag, {1, 0}, 30.0, 5.0, 0.0, 0.0}, 10.0 + h2).real() -
             envelope_value({Envelope::Shape::Drag, {1, 0}, 30.0, 5.0, 0.0, 0.0}, 10.0 - h2).real()) /
            (2.0 * h2);
        CHECK(envelope_value(e, 10.0).imag() == doctest::Approx(0.7 * g_prime).epsilon(1e-6));
    }
    SUBCASE("amplitude bound enforced") {
        CHECK_THROWS_AS(Envelope::constant({1.2, 0.0}, 10.0), ConfigError);
        CHECK_THROWS_AS(Envelope::gaussian_square({0.9, 0.9}, 10.0, 1.0, 5.0), ConfigError);
    }
}

TEST_CASE("drive signal carrier and support") {
    Segment seg{Channel::drive(0, 2.0, 0.0), 0.0, Envelope::constant({1.0, 0.0}, 10.0)};
    CHECK(drive_signal(seg, 0.0) == doctest::Approx(1.0));
    seg.channel.phase = M_PI / 2.0;
    CHECK(drive_signal(seg, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    seg.channel.phase = 0.0;
    CHECK(drive_signal(seg, 20.0) == 0.0);
    // carrier is referenced to global time, not segment-local time
    seg.start = 5.0;
    CHECK(drive_signal(seg, 7.0) == doctest::Approx(std::cos(2.0 * 7.0)));
}

TEST_CASE("schedule duration in dt units") {
    PulseSchedule s;
    s.segments.push_back({Channel::drive(0, 1.0), 0.0, Envelope::constant({0.1, 0.0}, 2.0 * s.dt)});
    CHECK(schedule_duration_dt(s) == 2);

    PulseSchedule empty;
    CHECK_THROWS_AS(schedule_duration_dt(empty), ZeroDurationError);

    SUBCASE("reordering does not change the duration") {
        PulseSchedule a;
        a.segments.push_back({Channel::drive(0, 1.0), 0.0, Envelope::constant({0.1, 0}, 10.0)});
        a.segments.push_back({Channel::drive(1, 1.1), 4.0, Envelope::constant({0.2, 0}, 30.0)});
        PulseSchedule b = a;
        std::swap(b.segments[0], b.segments[1]);
        CHECK(schedule_duration_dt(a) == schedule_duration_dt(b));
    }
}

TEST_CASE("same-channel overlap is rejected") {
    PulseSchedule s;
    s.segments.push_back({Channel::drive(0, 1.0), 0.0, Envelope::constant({0.1, 0}, 10.0)});
    s.segments.push_back({Channel::drive(0, 1.0), 5.0, Envelope::constant({0.2, 0}, 10.0)});
    CHECK_THROWS_AS(s.validate(), ConfigError);
    // touching segments are fine
    s.segments[1].start = 10.0;
    CHECK_NOTHROW(s.validate());
    // different channels may overlap freely
    s.segments[1] = {Channel::cross(0, 1, 2.0), 0.0, Envelope::constant({0.2, 0}, 10.0)};
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("bell template") {
    const DeviceModel dev = two_transmons();
    // the published square sequence is 989 dt long: a 189 dt local stage and
    // an 800 dt cross stage
    const std::vector<double> params{0.3, 189.0 * kDefaultDt, 0.2, -0.4, 800.0 * kDefaultDt};
    const PulseSchedule s = build_protocol(ProtocolKind::Bell, dev, params);
    CHECK(s.segments.size() == 3);
    CHECK(protocol_param_count(ProtocolKind::Bell, {}) == 5);
    CHECK(schedule_duration_dt(s) == 989);

    // cross channel carries the target qubit's frequency
    const Segment& cross = s.segments[2];
    CHECK(cross.channel.kind == Channel::Kind::Cross);
    CHECK(cross.channel.drive_site == 0);
    CHECK(cross.channel.target_site == 1);
    CHECK(cross.channel.carrier_freq == doctest::Approx(30.235));
    CHECK(cross.start == doctest::Approx(189.0 * kDefaultDt));
    // local drives are resonant
    CHECK(s.segments[0].channel.carrier_freq == doctest::Approx(29.877));
    CHECK(s.segments[1].channel.carrier_freq == doctest::Approx(30.235));

    CHECK_THROWS_AS(build_protocol(ProtocolKind::Bell, dev, std::vector<double>{0.1, 0.2}),
                    ArityError);
}

TEST_CASE("ghz and w templates") {
    const DeviceModel dev = three_transmons();
    SUBCASE("ghz square") {
        CHECK(protocol_param_count(ProtocolKind::Ghz, {}) == 9);
        const std::vector<double> p{0.3, 100 * kDefaultDt, 0.2, -0.4, 300 * kDefaultDt,
                                    0.5, 150 * kDefaultDt, 0.6, 400 * kDefaultDt};
        const PulseSchedule s = build_protocol(ProtocolKind::Ghz, dev, p);
        CHECK(s.segments.size() == 5);
        CHECK(schedule_duration_dt(s) == 950);
        // stage order: {D0, D1}, U0, D2, U1
        CHECK(s.segments[2].channel.kind == Channel::Kind::Cross);
        CHECK(s.segments[2].channel.drive_site == 0);
        CHECK(s.segments[3].channel.kind == Channel::Kind::Drive);
        CHECK(s.segments[3].channel.drive_site == 2);
        CHECK(s.segments[4].channel.drive_site == 1);
        CHECK(s.segments[4].channel.target_site == 2);
        CHECK(s.segments[4].channel.carrier_freq == doctest::Approx(29.135));
    }
    SUBCASE("w square has 12 segments and a configurable final cross") {
        ProtocolOptions opt;
        CHECK(protocol_param_count(ProtocolKind::W, opt) == 18);
        std::vector<double> p(18, 0.1);
        for (int stage_dur : {1, 5, 7, 11, 13, 17}) p[stage_dur] = 50.0 * kDefaultDt;
        const PulseSchedule s = build_protocol(ProtocolKind::W, dev, p, opt);
        CHECK(s.segments.size() == 12);
        CHECK(s.segments.back().channel.drive_site == 0);
        CHECK(s.segments.back().channel.target_site == 1);

        opt.final_cross_on_u1 = true;
        const PulseSchedule s2 = build_protocol(ProtocolKind::W, dev, p, opt);
        CHECK(s2.segments.back().channel.drive_site == 1);
        CHECK(s2.segments.back().channel.target_site == 2);
    }
    SUBCASE("gaussian-square template fixes widths and frees sigma") {
        ProtocolOptions opt;
        opt.family = EnvelopeFamily::GaussianSquare;
        opt.widths_dt = {100, 100, 300, 150, 400};
        CHECK(protocol_param_count(ProtocolKind::Ghz, opt) == 10);
        std::vector<double> p;
        for (int i = 0; i < 5; ++i) {
            p.push_back(0.3);
            p.push_back(10.0 * kDefaultDt);
        }
        const PulseSchedule s = build_protocol(ProtocolKind::Ghz, dev, p, opt);
        CHECK(s.segments.size() == 5);
        for (const auto& seg : s.segments) {
            CHECK(seg.envelope.shape == Envelope::Shape::GaussianSquare);
            CHECK(seg.envelope.duration ==
                  doctest::Approx(seg.envelope.width + 4.0 * 10.0 * kDefaultDt));
        }
    }
}

TEST_CASE("zero-amplitude protocol still lays out a valid schedule") {
    const DeviceModel dev = two_transmons();
    const std::vector<double> params{0.0, 50 * kDefaultDt, 0.0, 0.0, 100 * kDefaultDt};
    const PulseSchedule s = build_protocol(ProtocolKind::Bell, dev, params);
    for (const auto& seg : s.segments)
        for (double t : {0.0, 10.0, 100.0})
            CHECK(drive_signal(seg, t) == 0.0);
}

TEST_CASE("build_protocol is deterministic") {
    const DeviceModel dev = three_transmons();
    std::vector<double> p(18);
    Rng rng(3);
    ProtocolOptions opt;
    const auto ranges = default_parameter_ranges(ProtocolKind::W, opt);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = rng.uniform(ranges[i][0], ranges[i][1]);
    const PulseSchedule a = build_protocol(ProtocolKind::W, dev, p, opt);
    const PulseSchedule b = build_protocol(ProtocolKind::W, dev, p, opt);
    REQUIRE(a.segments.size() == b.segments.size());
    for (std::size_t i = 0; i < a.segments.size(); ++i) {
        CHECK(a.segments[i].start == b.segments[i].start);
        CHECK(a.segments[i].envelope.amp == b.segments[i].envelope.amp);
        CHECK(a.segments[i].envelope.duration == b.segments[i].envelope.duration);
    }
}

TEST_CASE("snap to grid moves edges by at most dt/2") {
    PulseSchedule s;
    s.segments.push_back({Channel::drive(0, 1.0), 3.1, Envelope::constant({0.1, 0}, 9.7)});
    s.segments.push_back(
        {Channel::cross(0, 1, 2.0), 13.0, Envelope::gaussian_square({0.5, 0}, 25.2, 3.0, 11.0)});
    const PulseSchedule snapped = snap_to_grid(s);
    for (std::size_t i = 0; i < s.segments.size(); ++i) {
        CHECK(std::abs(snapped.segments[i].start - s.segments[i].start) <= s.dt / 2 + 1e-12);
        CHECK(std::abs(snapped.segments[i].envelope.duration - s.segments[i].envelope.duration) <=
              s.dt / 2 + 1e-12);
        const double ratio_start = snapped.segments[i].start / s.dt;
        CHECK(std::abs(ratio_start - std::round(ratio_start)) < 1e-9);
    }
}
