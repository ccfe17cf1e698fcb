#include "pulseopt/device_model.hpp"

#include <doctest.h>

using namespace pulseopt;

namespace {

DeviceModel single(double omega, double alpha, double drive, int levels) {
    DeviceModel d;
    d.levels = levels;
    d.transmons.push_back({omega, alpha, drive});
    return d;
}

double hermiticity_defect(const OperatorMatrix& h) {
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("ladder operator entries") {
    const OperatorMatrix b2 = ladder_op(2);
    CHECK(b2(0, 1).real() == doctest::Approx(1.0));
    CHECK(b2(0, 0) == Complex{0.0, 0.0});
    CHECK(b2(1, 0) == Complex{0.0, 0.0});
    CHECK(b2(1, 1) == Complex{0.0, 0.0});

    const OperatorMatrix b3 = ladder_op(3);
    CHECK(b3(0, 1).real() == doctest::Approx(1.0));
    CHECK(b3(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(b3.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)));

    const OperatorMatrix n3 = number_op(3);
    CHECK(n3(0, 0).real() == doctest::Approx(0.0));
    CHECK(n3(1, 1).real() == doctest::Approx(1.0));
    CHECK(n3(2, 2).real() == doctest::Approx(2.0));

    CHECK_THROWS_AS(ladder_op(1), InvalidTruncationError);
}

TEST_CASE("commutator [b, b+] is the identity on the first levels-1 entries") {
    for (int levels : {2, 3, 5}) {
        const OperatorMatrix b = ladder_op(levels);
        const OperatorMatrix comm = b * b.adjoint() - b.adjoint() * b;
        for (int i = 0; i + 1 < levels; ++i) CHECK(comm(i, i).real() == doctest::Approx(1.0));
    }
}

TEST_CASE("single-transmon drift") {
    SUBCASE("two levels: anharmonic term vanishes") {
        const OperatorMatrix h = build_drift(single(5.0, -0.3, 0.1, 2));
        CHECK(h(0, 0).real() == doctest::Approx(0.0));
        CHECK(h(1, 1).real() == doctest::Approx(5.0));
        CHECK(hermiticity_defect(h) < 1e-12);
    }
    SUBCASE("three levels at the reference parameters") {
        const OperatorMatrix h = build_drift(single(29.877, -1.954, 0.396, 3));
        CHECK(h(0, 0).real() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(h(1, 1).real() == doctest::Approx(29.877));
        CHECK(h(2, 2).real() == doctest::Approx(2.0 * 29.877 - 1.954));
    }
    SUBCASE("spectrum at levels=3 is {0, omega, 2 omega + alpha}") {
        const double omega = 7.3, alpha = -0.41;
        const OperatorMatrix h = build_drift(single(omega, alpha, 1.0, 3));
        Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(h);
        Eigen::Vector3d expected(0.0, omega, 2.0 * omega + alpha);
        std::sort(expected.data(), expected.data() + 3);
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(es.eigenvalues()[i] - expected[i]) < 1e-12);
    }
}

TEST_CASE("two-transmon drift decouples at J = 0") {
    DeviceModel d;
    d.levels = 3;
    d.transmons.push_back({29.877, -1.954, 0.396});
    d.transmons.push_back({30.235, -1.969, 0.650});
    const OperatorMatrix h0 = build_drift(d);

    const OperatorMatrix n = number_op(3);
    const OperatorMatrix anh = ladder_op(3).adjoint() * ladder_op(3).adjoint() * ladder_op(3) *
                               ladder_op(3);
    const OperatorMatrix expected =
        embed_site_op(29.877 * n - 0.5 * 1.954 * anh, 0, 2, 3) +
        embed_site_op(30.235 * n - 0.5 * 1.969 * anh, 1, 2, 3);
    CHECK((h0 - expected).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    d.couplings.push_back({0, 1, 0.013});
    const OperatorMatrix h = build_drift(d);
    CHECK(hermiticity_defect(h) < 1e-12);
    // site 0 least significant: |01> = index 1 couples to |10> = index 3
    CHECK(h(1, 3).real() == doctest::Approx(0.013));
}

TEST_CASE("control operator embedding") {
    DeviceModel d1 = single(5.0, -0.3, 0.1, 2);
    const OperatorMatrix x = build_control_op(d1, 0);
    CHECK(x(0, 1).real() == doctest::Approx(1.0));
    CHECK(x(1, 0).real() == doctest::Approx(1.0));

    DeviceModel d2;
    d2.levels = 2;
    d2.transmons = {{5.0, -0.3, 0.1}, {5.5, -0.25, 0.2}};
    const OperatorMatrix x0 = build_control_op(d2, 0);
    // sigma_x on site 0 embeds as I (x) sigma_x
    CHECK(x0(0, 1).real() == doctest::Approx(1.0));
    CHECK(x0(2, 3).real() == doctest::Approx(1.0));
    CHECK(x0(0, 2) == Complex{0.0, 0.0});
    CHECK(hermiticity_defect(x0) < 1e-12);

    DeviceModel d3 = single(5.0, -0.3, 0.1, 3);
    const OperatorMatrix x3 = build_control_op(d3, 0);
    CHECK(x3(0, 1).real() == doctest::Approx(1.0));
    CHECK(x3(1, 2).real() == doctest::Approx(std::sqrt(2.0)));

    CHECK_THROWS_AS(build_control_op(d2, 2), DimensionError);
}

TEST_CASE("rwa hamiltonian") {
    SUBCASE("no drive, no detuning") {
        const OperatorMatrix h = rwa_hamiltonian({0.0, 1.0}, 0.0, 0.0);
        CHECK(h.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    }
    SUBCASE("resonant real drive gives sigma_x / 2") {
        const OperatorMatrix h = rwa_hamiltonian({0.0, 1.0}, 1.0, 0.0);
        CHECK(h(0, 1).real() == doctest::Approx(0.5));
        CHECK(h(1, 0).real() == doctest::Approx(0.5));
        CHECK(h(0, 0) == Complex{0.0, 0.0});
    }
    SUBCASE("pure detuning gives sigma_z") {
        const OperatorMatrix h = rwa_hamiltonian({2.0, 1.0}, 0.0, 0.0);
        CHECK(h(0, 0).real() == doctest::Approx(1.0));
        CHECK(h(1, 1).real() == doctest::Approx(-1.0));
        CHECK(h(0, 1) == Complex{0.0, 0.0});
    }
    SUBCASE("imaginary envelope drives sigma_y") {
        const OperatorMatrix h = rwa_hamiltonian({0.0, 2.0}, 0.0, 1.0);
        CHECK(h(0, 1) == Complex{0.0, -1.0});
        CHECK(h(1, 0) == Complex{0.0, 1.0});
    }
}

TEST_CASE("hermiticity across random devices") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        DeviceModel d;
        d.levels = 2 + static_cast<int>(rng.index(2));
        const int sites = 1 + static_cast<int>(rng.index(3));
        for (int s = 0; s < sites; ++s)
            d.transmons.push_back({rng.uniform(1.0, 40.0), -rng.uniform(0.1, 3.0),
                                   rng.uniform(0.1, 5.0)});
        for (int s = 0; s + 1 < sites; ++s) d.couplings.push_back({s, s + 1, rng.uniform(0.0, 0.1)});
        CHECK(hermiticity_defect(build_drift(d)) < 1e-12);
        for (int s = 0; s < sites; ++s)
            CHECK(hermiticity_defect(build_control_op(d, s)) < 1e-12);
    }
}

TEST_CASE("device validation") {
    DeviceModel d;
    d.levels = 4;
    d.transmons.push_back({5.0, -0.3, 0.1});
    CHECK_THROWS_AS(d.validate(), ConfigError);
    d.levels = 2;
    d.couplings.push_back({0, 0, 0.1});
    CHECK_THROWS_AS(d.validate(), ConfigError);
    d.couplings = {{0, 1, 0.1}};
    CHECK_THROWS_AS(d.validate(), ConfigError);  // site 1 does not exist
}
