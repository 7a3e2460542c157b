#include <catch_amalgamated.hpp>

#include <cmath>

#include "wv/avr.hpp"

using namespace wv;

namespace {

// Tube volume of the 3-d Schwarzschild exterior in profile coordinates:
// (m^3 |S^2| / 48) { 2 sqrt(w) s^3 (15 w^2 - 40 w + 33)/m^3 - 15 log(m/(s (1+sqrt(w))^2)) }.
double schwarzschild_tube_oracle(const WarpedProduct& W, double m, double R) {
    const double s = W.warp.h(R);
    const double w = 1.0 - m / s;
    const double sw = std::sqrt(w);
    const double braces = (2 * sw * s * s * s / (m * m * m)) * (15 * w * w - 40 * w + 33) -
                          15 * std::log((m / s) / ((1 + sw) * (1 + sw)));
    return (m * m * m * unit_sphere_area(2) / 48.0) * braces;
}

}  // namespace

TEST_CASE("sphere and ball constants") {
    auto [s2, b3] = sphere_ball_constants(3);
    CHECK(s2 == Catch::Approx(4 * M_PI).epsilon(1e-14));
    CHECK(b3 == Catch::Approx(4 * M_PI / 3).epsilon(1e-14));
    auto [s1, b2] = sphere_ball_constants(2);
    CHECK(s1 == Catch::Approx(2 * M_PI).epsilon(1e-14));
    CHECK(b2 == Catch::Approx(M_PI).epsilon(1e-14));
    for (int n = 2; n <= 12; ++n) {
        auto [area, ball] = sphere_ball_constants(n);
        CHECK(area == Catch::Approx(n * ball).epsilon(1e-13));
    }
}

TEST_CASE("cone tube volume is the polynomial integral") {
    auto W = cone(1.0, 1.0, FiberManifold::unit_sphere(2));
    CHECK(tube_volume(W, 1.0) == Catch::Approx(4 * M_PI * 7.0 / 3.0).epsilon(1e-10));
    // small-radius expansion: tube(R)/R -> |N| h(0)^2
    const double R = 1e-6;
    CHECK(tube_volume(W, R) / R == Catch::Approx(4 * M_PI).margin(1e-4));
}

TEST_CASE("Schwarzschild tube volume matches the profile-coordinate oracle") {
    const double m = 2.0;
    auto W = schwarzschild(m, 3);
    for (double R : {10.0, 50.0}) {
        const double oracle = schwarzschild_tube_oracle(W, m, R);
        CHECK(tube_volume(W, R) == Catch::Approx(oracle).epsilon(1e-6));
    }
}

TEST_CASE("normalised tube volume of the unit cone") {
    auto W = cone(1.0, 1.0, FiberManifold::unit_sphere(2));
    CHECK(theta_star(W, 3.0) == Catch::Approx(7.0 / 3.0).epsilon(1e-10));
    // flat exterior: ratio tends to 1 from above
    CHECK(theta_star(W, 1e6) == Catch::Approx(1.0).margin(4e-6));
    double prev = theta_star(W, 10.0);
    for (double R : {100.0, 1000.0, 10000.0}) {
        const double v = theta_star(W, R);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("Schwarzschild normalised tube volume climbs towards its limit") {
    // The ratio is *increasing* at these radii: the warp satisfies
    // h(r) ~ r - (m/2) log r, which keeps h/r below 1 on the way out. Each
    // value is pinned against the closed-form oracle.
    const double m = 2.0;
    auto W = schwarzschild(m, 3);
    double prev = 0.0;
    for (double R : {10.0, 100.0, 1000.0}) {
        const double v = theta_star(W, R);
        const double oracle = schwarzschild_tube_oracle(W, m, R) /
                              (unit_ball_volume(3) * R * R * R);
        CHECK(v == Catch::Approx(oracle).epsilon(1e-9));
        CHECK(v > prev);
        CHECK(v < 1.0);
        prev = v;
    }
}

TEST_CASE("tube volumes add across an intermediate slice") {
    auto check_additivity = [](const WarpedProduct& W, double r0, double R) {
        const int p = W.n - 1;
        auto integrand = [&](double t) { return std::pow(W.warp.h(t), p); };
        auto inner = numerics::integrate(integrand, 0.0, r0, 1e-11);
        auto outer = numerics::integrate(integrand, r0, R, 1e-11);
        const double whole = tube_volume(W, R);
        const double sum = W.fiber.area * (inner.value + outer.value);
        CHECK(whole == Catch::Approx(sum).epsilon(1e-10));
    };
    check_additivity(schwarzschild(2.0, 3), 2.0, 30.0);
    check_additivity(cone(0.5, 1.0, FiberManifold::unit_sphere(2)), 1.0, 12.0);
}

TEST_CASE("ratio form of the normalised tube volume") {
    auto W = schwarzschild(2.0, 3);
    for (double R : {5.0, 50.0}) {
        auto num = numerics::integrate([&](double t) { return std::pow(W.warp.h(t), 2); }, 0.0, R,
                                       1e-12 * R * R * R);
        const double ratio_form = (W.fiber.area / unit_sphere_area(2)) * num.value / (R * R * R / 3.0);
        CHECK(theta_star(W, R) == Catch::Approx(ratio_form).epsilon(1e-12));
    }
}

TEST_CASE("normalised tube volumes extrapolate to the volume ratio") {
    auto W = schwarzschild(2.0, 3);
    std::vector<numerics::ExtrapolationSample> samples;
    for (double R : {1e2, 1e3, 1e4}) samples.push_back({R, theta_star(W, R)});
    auto est = numerics::extrapolate_limit(samples);
    CHECK(std::abs(est.limit - 1.0) < 1e-3);
    CHECK(std::abs(est.limit - 1.0) <= est.error_estimate);
}

TEST_CASE("AVR estimates for the builtins") {
    auto s = estimate_avr(schwarzschild(2.0, 3));
    CHECK(std::abs(s.value - 1.0) < 1e-4);
    CHECK(std::abs(s.tube_value - s.slope_value) <= s.tube_error + s.slope_error + 1e-12);
    CHECK_FALSE(s.theta_samples_nonincreasing);  // h/r climbs back to 1 from below

    auto c2 = estimate_avr(cone(0.5, 1.0, FiberManifold::unit_sphere(2)));
    CHECK(std::abs(c2.value - 0.25) < 1e-6);
    CHECK(c2.theta_samples_nonincreasing);

    auto c1 = estimate_avr(cone(1.0, 1.0, FiberManifold::unit_sphere(2)));
    CHECK(std::abs(c1.value - 1.0) < 1e-9);

    auto rn = estimate_avr(reissner_nordstrom(3.0, 1.0, 3));
    CHECK(std::abs(rn.value - 1.0) < 1e-4);
    CHECK(std::abs(rn.tube_value - rn.slope_value) <= rn.tube_error + rn.slope_error + 1e-12);
}

TEST_CASE("AVR scales with the fiber area") {
    FiberManifold fat;
    fat.dim = 2;
    fat.area = 3.0 * 4 * M_PI;
    fat.ricci_lower = 1.0;
    fat.diameter = M_PI;
    auto est = estimate_avr(cone(0.5, 1.0, fat));
    CHECK(est.value == Catch::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("AVR needs a settling volume-ratio slope") {
    auto exp_warp = WarpFunction::closed_form([](double r) { return std::exp(r); },
                                              [](double r) { return std::exp(r); },
                                              [](double r) { return std::exp(r); });
    auto W = WarpedProduct::make(FiberManifold::unit_sphere(2), exp_warp);
    ProbeSettings probes;
    probes.r_probe = 1e2;  // keep exp(r) finite on the probe range
    probes.points_per_decade = 64;
    AvrSettings settings;
    settings.radii_scales = {4.0, 8.0, 16.0};
    CHECK_THROWS_AS(estimate_avr(W, settings, probes), ConditionsFailed);
}

TEST_CASE("weighted ratio monotonicity holds where the slope hypothesis holds") {
    // For cones h(t)/t is nonincreasing everywhere, so the normalised tube
    // volume must be nonincreasing on every sampled range.
    for (double slope : {0.5, 1.0, 2.0}) {
        auto W = cone(slope, 1.0, FiberManifold::unit_sphere(2));
        double prev = std::numeric_limits<double>::infinity();
        double prev_q = std::numeric_limits<double>::infinity();
        for (double R : {5.0, 10.0, 100.0, 1000.0, 10000.0}) {
            const double q = W.warp.h(R) / R;
            CHECK(q <= prev_q * (1 + 1e-12));
            const double v = theta_star(W, R);
            CHECK(v <= prev * (1 + 1e-12));
            prev = v;
            prev_q = q;
        }
    }
}
