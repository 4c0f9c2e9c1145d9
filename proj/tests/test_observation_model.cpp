#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wavefront/observation_model.hpp"

using namespace wavefront;

namespace {

ObservationModel flat_model(double sigma2, double gamma2) {
    ObservationModel m;
    m.family = ObservationModel::Family::flat_gaussian;
    m.gaussian = {sigma2, gamma2};
    return m;
}

ObservationModel attenuating_model(double sigma2, double gamma2, double theta,
                                   double d0, DistanceClamp clamp) {
    ObservationModel m;
    m.family = ObservationModel::Family::attenuating_gaussian;
    m.gaussian = {sigma2, gamma2};
    m.path_loss = {theta, d0, clamp};
    return m;
}

} // namespace

TEST_CASE("alternative variance under the three clamps") {
    CHECK(alt_variance(flat_model(1.0, 1.0), 123.4) == doctest::Approx(2.0));

    const auto unit = attenuating_model(1.0, 2.0, 2.0, 1.0, DistanceClamp::unit_floor);
    CHECK(alt_variance(unit, 0.5) == doctest::Approx(3.0)); // d~ = 1
    CHECK(alt_variance(unit, 2.0) == doctest::Approx(1.5));

    const auto scaled =
        attenuating_model(1.0, 2.0, 2.0, 500.0, DistanceClamp::reference_scaled);
    CHECK(alt_variance(scaled, 1000.0) == doctest::Approx(1.5)); // d~ = 2
    CHECK(alt_variance(scaled, 100.0) == doctest::Approx(3.0));  // inside d0

    const auto literal =
        attenuating_model(1.0, 2.0, 2.0, 500.0, DistanceClamp::reference_literal);
    CHECK(alt_variance(literal, 1000.0) ==
          doctest::Approx(1.0 + 2.0 / (500.0 * 500.0)));
}

TEST_CASE("log-density values and normalization") {
    CHECK(loglik_null(0.0, 1.0) == doctest::Approx(-0.9189385332046727).epsilon(1e-12));
    CHECK(loglik_alt(1.3, 2.0) == loglik_null(1.3, 2.0)); // same density family

    // integral of exp(loglik) over the real line is 1
    for (double v : {0.25, 1.0, 7.5}) {
        auto density = [v](double x) { return std::exp(loglik_alt(x, v)); };
        const double lim = 40.0 * std::sqrt(v);
        const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            density, -lim, lim, 12, 1e-12);
        CHECK(std::abs(mass - 1.0) < 1e-8);
    }

    CHECK_THROWS_AS(loglik_alt(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("zero signal power makes the alternative equal the null") {
    const auto m = attenuating_model(1.7, 0.0, 2.0, 1.0, DistanceClamp::unit_floor);
    for (double d : {0.0, 0.5, 1.0, 10.0, 1e4})
        CHECK(alt_variance(m, d) == doctest::Approx(1.7));
}

TEST_CASE("frames: no event means null-only sampling") {
    const auto model = flat_model(1.0, 50.0);
    SensorSnapshot snap{1, {{1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}}};
    Rng a(11), b(11);
    const auto null_frame = sample_frame({0.0, 0.0}, 0, snap, model, 1.0, a);
    const auto same_noise = sample_frame({0.0, 0.0}, 0, snap, flat_model(1.0, 0.0), 1.0, b);
    REQUIRE(null_frame.readings.size() == 3);
    CHECK(null_frame.readings == same_noise.readings); // radius 0: gamma2 unused
}

TEST_CASE("null readings have the configured variance") {
    const auto model = flat_model(2.5, 1.0);
    SensorSnapshot snap{1, std::vector<Point>(1000, Point{50.0, 50.0})};
    Rng rng(31337);
    double ss = 0.0;
    long n = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto frame = sample_frame({0.0, 0.0}, 0, snap, model, 1.0, rng);
        for (double x : frame.readings) {
            ss += x * x;
            ++n;
        }
    }
    const double est = ss / static_cast<double>(n);
    const double se = 2.5 * std::sqrt(2.0 / static_cast<double>(n));
    CHECK(std::abs(est - 2.5) < 3.0 * se);
}

TEST_CASE("exposed readings are scaled by the distance-dependent variance") {
    const auto model = attenuating_model(1.0, 8.0, 2.0, 1.0, DistanceClamp::unit_floor);
    SensorSnapshot snap{1, {{0.5, 0.0}, {3.0, 0.0}}};
    Rng with_event(5), noise_only(5);
    const auto frame = sample_frame({0.0, 0.0}, 4, snap, model, 1.0, with_event);
    const auto base = sample_frame({0.0, 0.0}, 0, snap, model, 1.0, noise_only);
    // same underlying normals, deterministically rescaled
    CHECK(frame.readings[0] == doctest::Approx(base.readings[0] * 3.0));       // var 9
    CHECK(frame.readings[1] ==
          doctest::Approx(base.readings[1] * std::sqrt(1.0 + 8.0 / 9.0)));
}

TEST_CASE("frame length mismatch is rejected downstream") {
    ObservationFrame frame;
    frame.locations = {{0.0, 0.0}};
    frame.readings = {1.0, 2.0};
    CHECK(frame.locations.size() != frame.readings.size());
}
