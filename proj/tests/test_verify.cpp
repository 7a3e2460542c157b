#include <catch_amalgamated.hpp>

#include <cmath>

#include "wv/numerics/ivp.hpp"
#include "wv/report.hpp"
#include "wv/verify.hpp"

using namespace wv;

namespace {

const double kB0Exact = (1.0 + std::log(4.0)) / 3.0;  // Schwarzschild, any mass

}  // namespace

TEST_CASE("slice data of warped slices") {
    auto W = cone(0.5, 1.0, FiberManifold::unit_sphere(2));
    auto s = slice_data(W, 0.0);
    CHECK(s.area == Catch::Approx(4 * M_PI));
    CHECK(s.mean_curvature == Catch::Approx(1.0));
    CHECK(s.mean_ratio == Catch::Approx(0.5));
    CHECK_THROWS_AS(slice_data(W, -1.0), InvalidParameters);
}

TEST_CASE("left side reduces to the plain mean-curvature integral when constants vanish") {
    auto W = cone(1.0, 1.0, FiberManifold::unit_sphere(2));
    auto s = slice_data(W, 0.0);
    CHECK(willmore_lhs(W, s, DecayConstants::zero()) == Catch::Approx(4 * M_PI).epsilon(1e-13));
    for (double r0 : {0.5, 2.0, 7.0}) {
        auto sd = slice_data(W, r0);
        const double plain = sd.area * std::pow(std::abs(sd.mean_ratio), W.n - 1);
        CHECK(willmore_lhs(W, sd, DecayConstants::zero()) == Catch::Approx(plain).epsilon(1e-13));
    }
}

TEST_CASE("minimal slices use the pure decay constant") {
    auto W = schwarzschild(2.0, 3);
    auto s = slice_data(W, 0.0);
    DecayConstants c{0.7, 0.25, 0, 0};
    CHECK(willmore_lhs(W, s, c) ==
          Catch::Approx(std::exp(2 * 0.7) * s.area * 0.25 * 0.25).epsilon(1e-13));
}

TEST_CASE("verification of the flat cone: equality, first rigidity case") {
    auto rep = verify_inequality(cone(1.0, 1.0, FiberManifold::unit_sphere(2)), 0.0);
    CHECK(std::abs(rep.lhs - 4 * M_PI) <= 1e-8);
    CHECK(std::abs(rep.gap) <= 1e-6);
    CHECK(rep.equality_class == EqualityClass::equality_w1);
    CHECK_FALSE(rep.limit_ratio.has_value());
    CHECK_FALSE(rep.violated);
    CHECK(w1_model_radius(cone(1.0, 1.0, FiberManifold::unit_sphere(2)), rep.slice, rep.avr) ==
          Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("verification of the half-slope cone: equality at pi") {
    auto W = cone(0.5, 1.0, FiberManifold::unit_sphere(2));
    auto rep = verify_inequality(W, 0.0);
    CHECK(std::abs(rep.lhs - M_PI) <= 1e-6);
    CHECK(std::abs(rep.rhs - M_PI) <= 1e-6);
    CHECK(rep.equality_class == EqualityClass::equality_w1);
    CHECK(w1_model_radius(W, rep.slice, rep.avr) == Catch::Approx(2.0).margin(1e-6));
}

TEST_CASE("verification of the Schwarzschild horizon: strict") {
    auto rep = verify_inequality(schwarzschild(2.0, 3), 0.0);
    // oracle from the closed-form constants: e^{2 b0} |Sigma| b1^2
    const double lhs_oracle = std::exp(2 * kB0Exact) * 16 * M_PI / 9.0;
    CHECK(rep.lhs == Catch::Approx(lhs_oracle).epsilon(1e-7));
    CHECK(rep.rhs == Catch::Approx(4 * M_PI).epsilon(1e-4));
    CHECK(rep.gap == Catch::Approx(lhs_oracle - 4 * M_PI).epsilon(1e-4));
    CHECK(rep.equality_class == EqualityClass::strict);
    REQUIRE(rep.limit_ratio.has_value());
    CHECK(std::abs(*rep.limit_ratio - 3.0 / (2.0 * std::exp(kB0Exact))) <= 1e-4);
    CHECK_FALSE(rep.violated);
}

TEST_CASE("verification of the Reissner-Nordstrom horizon") {
    auto W = reissner_nordstrom(3.0, 1.0, 3);
    auto rep = verify_inequality(W, 0.0);
    CHECK(rep.gap > 0.0);
    CHECK(rep.equality_class == EqualityClass::strict);
    // horizon is minimal, so the left side is exactly e^{2 b0} |Sigma| b1^2
    auto s = slice_data(W, 0.0);
    CHECK(std::abs(s.mean_curvature) < 1e-8);
    const double expected =
        std::exp(2 * rep.constants.b0) * s.area * rep.constants.b1 * rep.constants.b1;
    CHECK(rep.lhs == Catch::Approx(expected).epsilon(1e-10));
}

TEST_CASE("rigidity limit for the rescaled Schwarzschild warp family") {
    // The horizon comparison of any mass realises the rescaled-warp
    // construction rho = h/m; its asymptotic ratio is 3/(2 e^{b0}), bounded
    // away from 1, so equality never holds in this family.
    const double target = 3.0 / (2.0 * std::exp(kB0Exact));
    for (double m : {1.0, 2.0}) {
        auto W = schwarzschild(m, 3);
        auto c = decay_constants(envelope_lambda(W), 1e-10);
        const double ratio = equality_limit_ratio(W, 0.0, c, 1e4 * std::max(1.0, m));
        CHECK(std::abs(ratio - target) <= 1e-4);
    }
}

TEST_CASE("rigidity limit reaches one for an exact comparison warp") {
    // Integrate the comparison equation itself for a compactly supported
    // coefficient, then normalise the constants so the majorant slope equals
    // the realised slope. The resulting warp is the model geometry of the
    // second rigidity case, so the limit ratio must be 1.
    const double mean_ratio = 0.3;
    auto lam = [](double t) { return std::max(0.0, 1.0 - t / 2.0); };
    auto traj = std::make_shared<numerics::Trajectory>(
        numerics::solve_ivp(lam, 1.0, mean_ratio, 400.0, 1e-11));
    const double t_end = 400.0;
    const double h_end = traj->value(t_end);
    const double v_end = traj->derivative(t_end);
    auto warp = WarpFunction::closed_form(
        [traj, t_end, h_end, v_end](double r) {
            return r <= t_end ? traj->value(r) : h_end + v_end * (r - t_end);
        },
        [traj, t_end, v_end](double r) { return r <= t_end ? traj->derivative(r) : v_end; },
        [traj, lam](double r) { return lam(r) * (r <= 400.0 ? traj->value(r) : 0.0); });
    auto W = WarpedProduct::make(FiberManifold::unit_sphere(2), warp);

    const double sigma = v_end;  // realised asymptotic slope
    DecayConstants normalised{0.0, sigma - mean_ratio, 0.0, 0.0};
    const double ratio = equality_limit_ratio(W, 0.0, normalised, 1e4);
    CHECK(std::abs(ratio - 1.0) <= 1e-4);
}

TEST_CASE("rigidity limit degenerates correctly for affine warps") {
    auto W = cone(0.5, 1.0, FiberManifold::unit_sphere(2));
    const double ratio = equality_limit_ratio(W, 0.0, DecayConstants::zero(), 1e4);
    CHECK(ratio == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("first rigidity shape check") {
    auto W1 = cone(1.0, 1.0, FiberManifold::unit_sphere(2));
    auto avr1 = estimate_avr(W1);
    CHECK(equality_w1_check(W1, 0.0, avr1));
    auto W2 = cone(0.5, 1.0, FiberManifold::unit_sphere(2));
    auto avr2 = estimate_avr(W2);
    CHECK(equality_w1_check(W2, 0.0, avr2));
    // negative control: a curved exterior treated as if it were flat
    auto Ws = schwarzschild(2.0, 3);
    CHECK_FALSE(equality_w1_check(Ws, 0.0, avr1));
}

TEST_CASE("minimal-area bound for Schwarzschild") {
    auto W = schwarzschild(2.0, 3);
    auto c = decay_constants(envelope_lambda(W), 1e-10);
    auto avr = estimate_avr(W);
    const double bound = minimal_area_bound(W, c, avr);
    const double oracle = 4 * M_PI / std::pow(std::exp(kB0Exact) / 3.0, 2.0);
    CHECK(bound == Catch::Approx(oracle).epsilon(1e-4));
    const double horizon_area = 16 * M_PI;  // 4 pi m^2
    CHECK(horizon_area >= bound);
    // vacuous when the decay constant vanishes
    CHECK(std::isinf(minimal_area_bound(W, DecayConstants::zero(), avr)));
}

TEST_CASE("minimal-area bound scales as the squared mass") {
    auto avr2 = estimate_avr(schwarzschild(2.0, 3));
    auto c2 = decay_constants(envelope_lambda(schwarzschild(2.0, 3)), 1e-10);
    const double base = minimal_area_bound(schwarzschild(2.0, 3), c2, avr2);
    for (double m : {1.0, 5.0}) {
        auto W = schwarzschild(m, 3);
        auto c = decay_constants(envelope_lambda(W), 1e-10);
        auto avr = estimate_avr(W);
        const double bound = minimal_area_bound(W, c, avr);
        CHECK(bound / base == Catch::Approx(m * m / 4.0).epsilon(1e-6));
    }
}

TEST_CASE("area bound is the minimal-slice specialisation of the main gap") {
    // For a minimal slice, lhs - rhs = (area - bound) (e^{b0} b1)^{n-1}.
    for (auto W : {schwarzschild(2.0, 3), reissner_nordstrom(3.0, 1.0, 3)}) {
        auto c = decay_constants(envelope_lambda(W), 1e-10);
        auto avr = estimate_avr(W);
        auto s = slice_data(W, 0.0);
        const double lhs = willmore_lhs(W, s, c);
        const double rhs = avr.value * unit_sphere_area(W.n - 1);
        const double bound = minimal_area_bound(W, c, avr);
        const double factor = std::pow(std::exp(c.b0) * c.b1, W.n - 1);
        CHECK(std::abs((lhs - rhs) - (s.area - bound) * factor) <= 1e-10 * std::max(1.0, lhs));
    }
}

TEST_CASE("slice functional and its derivative") {
    auto W = schwarzschild(2.0, 3);
    auto c = decay_constants(envelope_lambda(W), 1e-10);
    // finite-difference cross-check of the derivative formula
    for (double t : {0.5, 2.0, 5.0}) {
        const double eps = 1e-5 * std::max(1.0, t);
        const double fd =
            (slice_functional(W, c, t + eps) - slice_functional(W, c, t - eps)) / (2 * eps);
        const double an = slice_functional_derivative(W, c, t);
        CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
    }
    // sign change at the stationary radius s = 3m/2
    CHECK(slice_functional_derivative(W, c, 1.0) > 0.0);   // h(1) < 3
    CHECK(slice_functional_derivative(W, c, 10.0) < 0.0);  // h(10) > 3

    auto Wc = cone(1.0, 1.0, FiberManifold::unit_sphere(2));
    for (double t : {0.0, 1.0, 5.0})
        CHECK(slice_functional_derivative(Wc, DecayConstants::zero(), t) < 0.0);
}

TEST_CASE("sweep brackets the stationary slice of the functional") {
    const double m = 2.0;
    auto W = schwarzschild(m, 3);
    auto sweep = run_sweep(W, 0.0, 5.0, 51);
    REQUIRE(sweep.functional_roots.size() == 1);
    CHECK(W.warp.h(sweep.functional_roots[0]) == Catch::Approx(1.5 * m).margin(1e-4));
    for (std::size_t i = 0; i + 1 < sweep.rows.size(); ++i)
        CHECK(sweep.rows[i + 1].r0 > sweep.rows[i].r0);
    for (const auto& row : sweep.rows) {
        CHECK(row.error.empty());
        CHECK(row.cls == EqualityClass::strict);
        CHECK(row.gap > 0.0);
    }
}

TEST_CASE("sweep of a cone is flat and always at equality") {
    auto sweep = run_sweep(cone(1.0, 1.0, FiberManifold::unit_sphere(2)), 0.0, 4.0, 17);
    CHECK(sweep.functional_roots.empty());
    for (const auto& row : sweep.rows) {
        CHECK(row.functional_derivative < 0.0);
        CHECK(std::abs(row.gap) <= 1e-6);
        CHECK(row.cls == EqualityClass::equality_w1);
    }
    auto single = run_sweep(cone(1.0, 1.0, FiberManifold::unit_sphere(2)), 1.0, 1.0, 1);
    REQUIRE(single.rows.size() == 1);
    CHECK(single.rows[0].r0 == 1.0);
}

TEST_CASE("soundness: the gap never dips below the numerical budget") {
    std::vector<WarpedProduct> manifolds;
    manifolds.push_back(schwarzschild(1.0, 3));
    manifolds.push_back(schwarzschild(5.0, 3));
    manifolds.push_back(reissner_nordstrom(3.0, 1.0, 3));
    manifolds.push_back(cone(1.0, 1.0, FiberManifold::unit_sphere(2)));
    manifolds.push_back(cone(0.5, 2.0, FiberManifold::unit_sphere(2)));
    for (const auto& W : manifolds) {
        for (double r0 : {0.0, 0.5, 2.0}) {
            auto rep = verify_inequality(W, r0);
            CHECK(rep.gap >= -1e-6 * rep.rhs);
            CHECK_FALSE(rep.violated);
        }
    }
}

TEST_CASE("gap scales linearly with the fiber area") {
    auto base = verify_inequality(cone(0.5, 1.0, FiberManifold::unit_sphere(2)), 1.0);
    FiberManifold fat;
    fat.dim = 2;
    fat.area = 3.0 * 4 * M_PI;
    fat.ricci_lower = 1.0;
    fat.diameter = M_PI;
    auto scaled = verify_inequality(cone(0.5, 1.0, fat), 1.0);
    CHECK(scaled.lhs == Catch::Approx(3.0 * base.lhs).epsilon(1e-9));
    CHECK(scaled.rhs == Catch::Approx(3.0 * base.rhs).epsilon(1e-9));
    CHECK(scaled.gap == Catch::Approx(3.0 * base.gap).margin(1e-9));
}

TEST_CASE("report numbers carry 17 significant digits") {
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(std::nan("")) == "null");
    auto rep = verify_inequality(cone(1.0, 1.0, FiberManifold::unit_sphere(2)), 0.0);
    const std::string json = to_json(rep);
    CHECK(json.find("\"equality_class\":\"equality-W1\"") != std::string::npos);
    CHECK(json.find("\"limit_ratio\":null") != std::string::npos);
    CHECK(json.find("\"lhs\":12.566370614359174") != std::string::npos);
}

TEST_CASE("rigidity criteria on flat and non-flat cones") {
    // unit cone = Euclidean space: every criterion fires
    {
        auto W = cone(1.0, 1.0, FiberManifold::unit_sphere(2));
        auto avr = estimate_avr(W);
        auto rep = rigidity_criteria(W, 0.0, avr, true);
        CHECK(rep.constant_ordering_ok);
        CHECK(rep.sharp_constant == Catch::Approx(4 * M_PI).epsilon(1e-9));
        CHECK(rep.weaker_constant == Catch::Approx(M_PI).epsilon(1e-9));
        CHECK(rep.euclidean_by_area.value());
        CHECK(rep.euclidean_by_diameter.value());
        CHECK(rep.li_bound.value() == Catch::Approx(1.0));
        CHECK(rep.inradius_model.value() == Catch::Approx(1.0));
        CHECK(rep.li_equality_euclidean.value());
    }
    // half-slope cone: area criterion must not fire, nor the distance one
    {
        auto W = cone(0.5, 1.0, FiberManifold::unit_sphere(2));
        auto avr = estimate_avr(W);
        auto rep = rigidity_criteria(W, 0.0, avr, true);
        CHECK(rep.constant_ordering_ok);
        CHECK(rep.w1_radius == Catch::Approx(2.0).epsilon(1e-8));
        CHECK_FALSE(rep.euclidean_by_area.value());      // 4 pi < r*^2 4 pi
        CHECK_FALSE(rep.euclidean_by_diameter.value());  // pi < 2 pi
        CHECK_FALSE(rep.li_equality_euclidean.value());  // AVR = 1/4 != 1
    }
    // fiber without a diameter cannot run the diameter criterion
    {
        FiberManifold f;
        f.dim = 2;
        f.area = 4 * M_PI;
        f.ricci_lower = 1.0;
        auto W = cone(1.0, 1.0, f);
        auto avr = estimate_avr(W);
        CHECK_THROWS_AS(rigidity_criteria(W, 0.0, avr, true), MissingFiberDiameter);
    }
}
