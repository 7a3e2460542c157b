#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "wv/errors.hpp"
#include "wv/manifold.hpp"
#include "wv/numerics/extrapolation.hpp"
#include "wv/numerics/quadrature.hpp"
#include "wv/spheres.hpp"

namespace wv {

/// (|S^{n-1}|, omega_n) for the ambient dimension n.
inline std::pair<double, double> sphere_ball_constants(int n) {
    return {unit_sphere_area(n - 1), unit_ball_volume(n)};
}

/// Volume of the one-sided geodesic tube of radius R around the zero slice:
/// |N| * integral of h^{n-1} over [0, R].
inline double tube_volume(const WarpedProduct& W, double R, double rel_tol = 1e-11) {
    if (!(R > 0)) throw InvalidParameters("tube_volume: radius must be positive");
    const int p = W.n - 1;
    const double scale =
        std::max(1.0, R * std::pow(std::max(W.warp.h(0.0), W.warp.h(R)), p));
    auto integrand = [&W, p](double t) { return std::pow(W.warp.h(t), p); };
    auto res = numerics::integrate(integrand, 0.0, R, rel_tol * scale);
    return W.fiber.area * res.value;
}

/// Tube volume normalised by the Euclidean ball volume omega_n R^n.
inline double theta_star(const WarpedProduct& W, double R) {
    return tube_volume(W, R) / (unit_ball_volume(W.n) * std::pow(R, W.n));
}

struct AvrSettings {
    std::vector<double> radii_scales = {1e2, 1e3, 1e4};  // multiplied by max(1, h(0))
    double quad_rel_tol = 1e-11;
};

/// Asymptotic volume ratio with two independent estimators.
struct AvrEstimate {
    enum class Method { tube_extrapolation, warp_slope_limit };

    double value = 0.0;
    Method method = Method::warp_slope_limit;
    double error_estimate = 0.0;
    std::vector<numerics::ExtrapolationSample> samples;  // (R, theta_star(R))

    double tube_value = 0.0, tube_error = 0.0;
    double slope_value = 0.0, slope_error = 0.0;
    bool theta_samples_nonincreasing = false;
};

inline const char* to_string(AvrEstimate::Method m) {
    return m == AvrEstimate::Method::tube_extrapolation ? "tube-extrapolation" : "warp-slope-limit";
}

/// Cross-checked AVR estimate.
///
/// Method 1 extrapolates theta_star at geometrically spaced radii. Method 2
/// extrapolates the warp slope h'(R) (same limit as h(R)/R but free of the
/// logarithmic 1/R correction that pollutes the ratio for Schwarzschild-like
/// warps) and converts through (|N|/|S^{n-1}|) slope^{n-1}.
inline AvrEstimate estimate_avr(const WarpedProduct& W, const AvrSettings& settings = {},
                                const ProbeSettings& probes = {}) {
    // The volume-ratio limit only exists when h(r)/r settles.
    {
        const auto flags = check_conditions(W, probes);
        if (!flags.h_over_r_eventually_nonincreasing)
            throw ConditionsFailed("estimate_avr: h(r)/r does not settle to a finite limit");
    }

    const double scale = std::max(1.0, W.warp.h(0.0));
    AvrEstimate est;

    std::vector<numerics::ExtrapolationSample> slope_samples;
    for (double rs : settings.radii_scales) {
        const double R = rs * scale;
        est.samples.push_back({R, theta_star(W, R)});
        slope_samples.push_back({R, W.warp.hp(R)});
    }

    est.theta_samples_nonincreasing = true;
    for (std::size_t i = 0; i + 1 < est.samples.size(); ++i)
        if (est.samples[i + 1].value > est.samples[i].value * (1 + 1e-12))
            est.theta_samples_nonincreasing = false;

    const auto tube = numerics::extrapolate_limit(est.samples);
    est.tube_value = tube.limit;
    est.tube_error = tube.error_estimate;

    numerics::LimitEstimate slope;
    try {
        slope = numerics::extrapolate_limit(slope_samples);
    } catch (const NonMonotoneTail&) {
        // Oscillating derivative: fall back to the ratio samples h(R)/R.
        std::vector<numerics::ExtrapolationSample> ratio_samples;
        for (double rs : settings.radii_scales) {
            const double R = rs * scale;
            ratio_samples.push_back({R, W.warp.h(R) / R});
        }
        slope = numerics::extrapolate_limit(ratio_samples);
    }
    const double fiber_ratio = W.fiber.area / unit_sphere_area(W.n - 1);
    est.slope_value = fiber_ratio * std::pow(slope.limit, W.n - 1);
    est.slope_error = fiber_ratio * (W.n - 1) *
                      std::pow(std::abs(slope.limit), W.n - 2) * slope.error_estimate;

    const double disagreement = std::abs(est.tube_value - est.slope_value);
    if (disagreement > est.tube_error + est.slope_error + 1e-12 * std::max(1.0, est.tube_value))
        throw MethodDisagreement("AVR estimators disagree: tube " + std::to_string(est.tube_value) +
                                 " vs slope " + std::to_string(est.slope_value));

    if (est.slope_error <= est.tube_error) {
        est.value = est.slope_value;
        est.error_estimate = est.slope_error;
        est.method = AvrEstimate::Method::warp_slope_limit;
    } else {
        est.value = est.tube_value;
        est.error_estimate = est.tube_error;
        est.method = AvrEstimate::Method::tube_extrapolation;
    }
    return est;
}

}  // namespace wv
