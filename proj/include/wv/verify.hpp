#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "wv/avr.hpp"
#include "wv/comparison.hpp"
#include "wv/errors.hpp"
#include "wv/manifold.hpp"
#include "wv/spheres.hpp"

namespace wv {

/// Geometric data of the slice {r0} x N.
struct SliceData {
    double r0 = 0.0;
    double area = 0.0;            // |N| h(r0)^{n-1}
    double mean_curvature = 0.0;  // (n-1) h'(r0)/h(r0)
    double mean_ratio = 0.0;      // mean_curvature / (n-1)
};

inline SliceData slice_data(const WarpedProduct& W, double r0) {
    if (r0 < 0) throw InvalidParameters("slice radius must be nonnegative");
    SliceData s;
    s.r0 = r0;
    const double h = W.warp.h(r0);
    s.area = W.fiber.area * std::pow(h, W.n - 1);
    s.mean_ratio = W.warp.hp(r0) / h;
    s.mean_curvature = (W.n - 1) * s.mean_ratio;
    return s;
}

/// Left side of the verified inequality. The integrand is constant on a
/// slice, so the integral is area times the constant.
inline double willmore_lhs(const WarpedProduct& W, const SliceData& slice,
                           const DecayConstants& c) {
    const double f = std::abs(slice.mean_ratio) * (1.0 + c.b0) + c.b1;
    return std::exp((W.n - 1) * c.b0) * slice.area * std::pow(f, W.n - 1);
}

enum class EqualityClass { equality_w1, equality_w2, strict, indeterminate };

inline const char* to_string(EqualityClass c) {
    switch (c) {
        case EqualityClass::equality_w1: return "equality-W1";
        case EqualityClass::equality_w2: return "equality-W2";
        case EqualityClass::strict: return "strict";
        case EqualityClass::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

struct VerificationOptions {
    double equality_threshold = 1e-4;   // relative gap below which equality is considered
    double violation_budget = 1e-6;     // relative negative gap tolerated as numerical noise
    double ratio_horizon_scale = 1e4;   // horizon of the rigidity limit, times max(1, h(r0))
    double ode_rel_tol = 1e-10;
    double quad_abs_tol = 1e-10;
    AvrSettings avr;
    ProbeSettings probes;
};

struct VerificationReport {
    SliceData slice;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    double relative_slack = 0.0;
    DecayConstants constants;
    AvrEstimate avr;
    ConditionFlags flags;
    EqualityClass equality_class = EqualityClass::indeterminate;
    std::optional<double> limit_ratio;  // absent in the lambda = 0 regime
    bool violated = false;              // gap below the negative tolerance budget
};

/// Rigidity limit for the lambda != 0 regime: the asymptotic ratio of
/// rho(r0 + t) = h(r0 + t)/h(r0) against e^{b0} f t, extrapolated from the
/// warp slope at geometric radii up to the horizon.
inline double equality_limit_ratio(const WarpedProduct& W, double r0, const DecayConstants& c,
                                   double horizon) {
    const SliceData s = slice_data(W, r0);
    const double f = std::abs(s.mean_ratio) * (1.0 + c.b0) + c.b1;
    const double target = std::exp(c.b0) * f;
    if (!(target > 0))
        throw InvalidParameters("equality_limit_ratio: degenerate normalisation (f = 0)");
    std::vector<numerics::ExtrapolationSample> samples;
    for (double rs : {1e-2, 1e-1, 1.0})
        samples.push_back({rs * horizon, W.warp.hp(r0 + rs * horizon)});
    const auto slope = numerics::extrapolate_limit(samples);
    return slope.limit / (W.warp.h(r0) * target);
}

/// First rigidity case (lambda = 0): the exterior must be the truncated
/// cone of aperture radius r* = (|Sigma|/(AVR |S^{n-1}|))^{1/(n-1)}.
inline double w1_model_radius(const WarpedProduct& W, const SliceData& slice,
                              const AvrEstimate& avr) {
    return std::pow(slice.area / (avr.value * unit_sphere_area(W.n - 1)), 1.0 / (W.n - 1));
}

inline bool equality_w1_check(const WarpedProduct& W, double r0, const AvrEstimate& avr,
                              double rel_tol = 1e-6) {
    const SliceData s = slice_data(W, r0);
    const double rstar = w1_model_radius(W, s, avr);
    const double h0 = W.warp.h(r0);
    const double scale = std::max(1.0, h0);
    for (double t : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
        const double expected = h0 * (1.0 + t * scale / rstar);
        const double actual = W.warp.h(r0 + t * scale);
        if (std::abs(actual - expected) > rel_tol * std::max(1.0, std::abs(expected))) return false;
    }
    return true;
}

/// Area lower bound for closed minimal hypersurfaces; +infinity when b1 = 0
/// (the bound is vacuous as the space degenerates to nonnegative curvature).
inline double minimal_area_bound(const WarpedProduct& W, const DecayConstants& c,
                                 const AvrEstimate& avr) {
    if (c.b1 == 0.0) return std::numeric_limits<double>::infinity();
    const double denom = std::pow(std::exp(c.b0) * c.b1, W.n - 1);
    return avr.value * unit_sphere_area(W.n - 1) / denom;
}

/// Functional whose global minima are the slices realising equality, and
/// its derivative (valid where h' >= 0).
inline double slice_functional(const WarpedProduct& W, const DecayConstants& c, double t) {
    const double ratio = std::abs(W.warp.hp(t) / W.warp.h(t));
    return W.fiber.area * std::pow(ratio * (1.0 + c.b0) + c.b1, W.n - 1);
}

inline double slice_functional_derivative(const WarpedProduct& W, const DecayConstants& c,
                                          double t) {
    const double h = W.warp.h(t), hp = W.warp.hp(t), hpp = W.warp.hpp(t);
    const double ratio = hp / h;
    return (W.n - 1) * W.fiber.area * (1.0 + c.b0) *
           std::pow(ratio * (1.0 + c.b0) + c.b1, W.n - 2) * (hpp / h - ratio * ratio);
}

namespace detail {

inline EqualityClass classify(const WarpedProduct& W, double r0, double gap, double rhs,
                              bool zero_regime, const AvrEstimate& avr,
                              const std::optional<double>& limit_ratio,
                              const VerificationOptions& opt) {
    if (gap > opt.equality_threshold * rhs) return EqualityClass::strict;
    if (std::abs(gap) <= opt.equality_threshold * rhs) {
        if (zero_regime)
            return equality_w1_check(W, r0, avr) ? EqualityClass::equality_w1
                                                 : EqualityClass::indeterminate;
        if (limit_ratio) {
            if (std::abs(*limit_ratio - 1.0) <= 1e-4) return EqualityClass::equality_w2;
            if (std::abs(*limit_ratio - 1.0) > 1e-3) return EqualityClass::strict;
        }
    }
    return EqualityClass::indeterminate;
}

}  // namespace detail

/// Full verification of the inequality for the slice {r0} x N.
inline VerificationReport verify_inequality(const WarpedProduct& W, double r0,
                                            const VerificationOptions& opt = {}) {
    VerificationReport rep;
    rep.slice = slice_data(W, r0);
    rep.flags = check_conditions(W, opt.probes);
    if (!rep.flags.envelope_admissible)
        throw ConditionsFailed("verify_inequality: no admissible envelope for this manifold");

    AssociatedFunction lambda = AssociatedFunction::zero();
    const bool zero_regime = !rep.flags.lambda1_positive_somewhere;
    if (!zero_regime) {
        lambda = envelope_lambda(W, opt.probes);
        rep.constants = decay_constants(lambda, opt.quad_abs_tol);
    }

    rep.lhs = willmore_lhs(W, rep.slice, rep.constants);
    rep.avr = estimate_avr(W, opt.avr, opt.probes);
    rep.rhs = rep.avr.value * unit_sphere_area(W.n - 1);
    rep.gap = rep.lhs - rep.rhs;
    rep.relative_slack = rep.gap / rep.rhs;
    rep.violated = rep.gap < -opt.violation_budget * rep.rhs;

    if (!zero_regime && !lambda.is_zero()) {
        const double horizon = opt.ratio_horizon_scale * std::max(1.0, W.warp.h(r0));
        rep.limit_ratio = equality_limit_ratio(W, r0, rep.constants, horizon);
    }
    rep.equality_class =
        detail::classify(W, r0, rep.gap, rep.rhs, zero_regime, rep.avr, rep.limit_ratio, opt);
    return rep;
}

/// Auxiliary rigidity criteria evaluated on one slice.
struct RigidityReport {
    double sharp_constant = 0.0;       // AVR |S^{n-1}|
    double weaker_constant = 0.0;      // AVR |S^{n-2}|/(n-1)
    bool constant_ordering_ok = false;

    double w1_radius = 0.0;
    std::optional<bool> euclidean_by_area;      // |Sigma| >= r*^{n-1} |S^{n-1}|
    std::optional<bool> euclidean_by_diameter;  // diam >= pi r*
    std::optional<double> li_bound;             // 1/k for constant-mean-curvature slices, k > 0
    std::optional<double> inradius_model;       // apex distance of the affine model
    std::optional<bool> li_equality_euclidean;
};

/// The constant comparison is always evaluated; the cone-model criteria
/// need the lambda = 0 regime, and the inradius bound a mean-convex slice.
inline RigidityReport rigidity_criteria(const WarpedProduct& W, double r0, const AvrEstimate& avr,
                                        bool zero_regime) {
    RigidityReport rep;
    const SliceData s = slice_data(W, r0);
    rep.sharp_constant = avr.value * unit_sphere_area(W.n - 1);
    rep.weaker_constant = avr.value * unit_sphere_area(W.n - 2) / (W.n - 1);
    rep.constant_ordering_ok = rep.sharp_constant > rep.weaker_constant;
    rep.w1_radius = w1_model_radius(W, s, avr);

    if (zero_regime) {
        rep.euclidean_by_area =
            s.area >= std::pow(rep.w1_radius, W.n - 1) * unit_sphere_area(W.n - 1) * (1 - 1e-9);
        if (!W.fiber.diameter)
            throw MissingFiberDiameter("rigidity_criteria: fiber diameter required");
        const double diam = W.warp.h(r0) * (*W.fiber.diameter);
        rep.euclidean_by_diameter = diam >= M_PI * rep.w1_radius * (1 - 1e-9);

        if (s.mean_ratio > 0) {
            rep.li_bound = 1.0 / s.mean_ratio;
            rep.inradius_model = r0 + W.warp.h(r0) / W.warp.hp(r0);
            rep.li_equality_euclidean = std::abs(*rep.inradius_model * s.mean_ratio - 1.0) <= 1e-6 &&
                                        std::abs(avr.value - 1.0) <= 1e-4;
        }
    }
    return rep;
}

/// One row of a slice sweep.
struct SweepRow {
    double r0 = 0.0;
    double area = 0.0;
    double mean_curvature = 0.0;
    double functional = 0.0;
    double functional_derivative = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    EqualityClass cls = EqualityClass::indeterminate;
    std::string error;  // nonempty when this row failed
};

struct SweepResult {
    std::vector<SweepRow> rows;
    DecayConstants constants;
    AvrEstimate avr;
    std::vector<double> functional_roots;  // r0 of sign changes of the derivative
};

/// Sweeps slices over [r0_min, r0_max]; rows are independent and evaluated
/// in parallel, output stays ordered by r0. Sign changes of the functional
/// derivative are bracketed by the grid and polished by bisection.
inline SweepResult run_sweep(const WarpedProduct& W, double r0_min, double r0_max, int steps,
                             const VerificationOptions& opt = {}) {
    if (steps < 1) throw InvalidParameters("run_sweep: need at least one step");
    if (!(r0_max >= r0_min) || r0_min < 0)
        throw InvalidParameters("run_sweep: invalid slice range");

    SweepResult out;
    const auto flags = check_conditions(W, opt.probes);
    if (!flags.envelope_admissible)
        throw ConditionsFailed("run_sweep: no admissible envelope for this manifold");
    const bool zero_regime = !flags.lambda1_positive_somewhere;
    AssociatedFunction lambda = AssociatedFunction::zero();
    if (!zero_regime) {
        lambda = envelope_lambda(W, opt.probes);
        out.constants = decay_constants(lambda, opt.quad_abs_tol);
    }
    out.avr = estimate_avr(W, opt.avr, opt.probes);
    const double rhs = out.avr.value * unit_sphere_area(W.n - 1);

    out.rows.resize(steps);
    auto fill_row = [&](int i) {
        SweepRow& row = out.rows[i];
        row.r0 = steps == 1 ? r0_min
                            : r0_min + (r0_max - r0_min) * double(i) / (steps - 1);
        try {
            const SliceData s = slice_data(W, row.r0);
            row.area = s.area;
            row.mean_curvature = s.mean_curvature;
            row.functional = slice_functional(W, out.constants, row.r0);
            row.functional_derivative = slice_functional_derivative(W, out.constants, row.r0);
            row.lhs = willmore_lhs(W, s, out.constants);
            row.rhs = rhs;
            row.gap = row.lhs - rhs;
            std::optional<double> ratio;
            if (!zero_regime) {
                const double horizon = opt.ratio_horizon_scale * std::max(1.0, W.warp.h(row.r0));
                ratio = equality_limit_ratio(W, row.r0, out.constants, horizon);
            }
            row.cls = detail::classify(W, row.r0, row.gap, rhs, zero_regime, out.avr, ratio, opt);
        } catch (const Error& e) {
            row.error = e.what();
        }
    };

    const int workers = std::max(1, std::min<int>(std::thread::hardware_concurrency(), 8));
    if (steps > 8 && workers > 1) {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < steps; i = next.fetch_add(1)) fill_row(i);
            });
        for (auto& th : pool) th.join();
    } else {
        for (int i = 0; i < steps; ++i) fill_row(i);
    }

    for (int i = 0; i + 1 < steps; ++i) {
        const SweepRow &a = out.rows[i], &b = out.rows[i + 1];
        if (!a.error.empty() || !b.error.empty()) continue;
        if (a.functional_derivative == 0.0 || a.functional_derivative * b.functional_derivative >= 0)
            continue;
        double lo = a.r0, hi = b.r0;
        double flo = a.functional_derivative;
        for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = slice_functional_derivative(W, out.constants, mid);
            if (fm == 0.0) { lo = hi = mid; break; }
            if ((fm > 0) == (flo > 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        out.functional_roots.push_back(0.5 * (lo + hi));
    }
    return out;
}

}  // namespace wv
