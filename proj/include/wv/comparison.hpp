#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wv/associated.hpp"
#include "wv/errors.hpp"
#include "wv/manifold.hpp"
#include "wv/numerics/ivp.hpp"
#include "wv/numerics/quadrature.hpp"

namespace wv {

/// Decay integrals of the associated function: b0 against t dt, b1 plain.
struct DecayConstants {
    double b0 = 0.0;
    double b1 = 0.0;
    double b0_error = 0.0;
    double b1_error = 0.0;

    static DecayConstants zero() { return {}; }
};

inline DecayConstants decay_constants(const AssociatedFunction& lambda, double abs_tol = 1e-10) {
    if (lambda.is_zero()) return DecayConstants::zero();
    const double inf = std::numeric_limits<double>::infinity();
    auto r1 = numerics::integrate([&lambda](double t) { return lambda(t); }, 0.0, inf, abs_tol,
                                  lambda.tail_hint(0));
    auto r0 = numerics::integrate([&lambda](double t) { return t * lambda(t); }, 0.0, inf, abs_tol,
                                  lambda.tail_hint(1));
    DecayConstants c{r0.value, r1.value, r0.abs_error_estimate, r1.abs_error_estimate};
    if (c.b1 == 0.0) c.b0 = 0.0;  // both vanish exactly when lambda does
    return c;
}

/// Inputs of one comparison run: the signed mean-curvature ratio of the
/// slice, the decay constants, and the coefficient seen along the ray.
struct ComparisonInput {
    double mean_ratio = 0.0;      // H/(n-1), signed
    double abs_mean_ratio = 0.0;
    double f = 0.0;               // |mean_ratio| (1 + b0) + b1
    DecayConstants constants;
    AssociatedFunction lambda;
    int n = 3;

    static ComparisonInput make(double mean_ratio, DecayConstants constants,
                                AssociatedFunction lambda, int n) {
        ComparisonInput in;
        in.mean_ratio = mean_ratio;
        in.abs_mean_ratio = std::abs(mean_ratio);
        in.constants = constants;
        in.f = in.abs_mean_ratio * (1.0 + constants.b0) + constants.b1;
        in.lambda = std::move(lambda);
        in.n = n;
        return in;
    }
};

/// Comparison input for the slice {r0} x N: the coefficient along the
/// outward ray is the base envelope shifted by r0 (distances to the zero
/// slice are exact in warped products); the decay constants stay unshifted.
inline ComparisonInput slice_comparison_input(const WarpedProduct& W, double r0,
                                              const AssociatedFunction& lambda_base,
                                              const DecayConstants& constants) {
    const double mean_ratio = W.warp.hp(r0) / W.warp.h(r0);
    return ComparisonInput::make(mean_ratio, constants, lambda_base.shift(r0), W.n);
}

/// Jacobi comparison trajectory with its affine minorant j(t) = 1 + |h| t
/// and linear majorant e^{b0} f t + 1.
struct ComparisonSolution {
    numerics::Trajectory y;
    double majorant_slope = 0.0;   // e^{b0} f
    double abs_mean_ratio = 0.0;
    int n = 3;

    double majorant(double t) const { return majorant_slope * t + 1.0; }
    double minorant(double t) const { return 1.0 + abs_mean_ratio * t; }

    // theta^{1/(n-1)} in the tube-volume comparison.
    double ratio_root(double t) const { return y.value(t) / majorant(t); }
    double ratio(double t) const { return std::pow(ratio_root(t), n - 1); }

    double ratio_root_derivative(double t) const {
        const double step = 1e-4 * std::max(1.0, t);
        const double lo = std::max(0.0, t - step);
        const double hi = std::min(y.t_back(), t + step);
        return (ratio_root(hi) - ratio_root(lo)) / (hi - lo);
    }
};

inline ComparisonSolution solve_comparison(const ComparisonInput& in, double t_max,
                                           double rel_tol = 1e-10) {
    ComparisonSolution sol;
    sol.y = numerics::solve_ivp([&in](double t) { return in.lambda(t); }, 1.0, in.abs_mean_ratio,
                                t_max, rel_tol);
    sol.majorant_slope = std::exp(in.constants.b0) * in.f;
    sol.abs_mean_ratio = in.abs_mean_ratio;
    sol.n = in.n;
    return sol;
}

/// Slope of t -> y/majorant at t = 0+: |h| - e^{b0} f, nonpositive, and
/// strictly negative whenever the decay constants are nonzero.
inline double theta_initial_slope(const ComparisonInput& in) {
    return in.abs_mean_ratio - std::exp(in.constants.b0) * in.f;
}

/// Margins of the elementary comparisons, normalised by the local scale.
struct MarginReport {
    double min_minorant = 0.0;   // min (y - j)/max(1, y)
    double min_majorant = 0.0;   // min (X - y)/max(1, X)
    double min_slope_cap = 0.0;  // min (e^{b0} f - y')/max(1, e^{b0} f)
    double worst_t = 0.0;
};

inline MarginReport check_elementary_inequalities(const ComparisonSolution& sol,
                                                  const std::vector<double>& grid,
                                                  double tol = 1e-9) {
    MarginReport rep;
    rep.min_minorant = rep.min_majorant = rep.min_slope_cap = std::numeric_limits<double>::infinity();
    for (double t : grid) {
        const double y = sol.y.value(t);
        const double X = sol.majorant(t);
        const double m1 = (y - sol.minorant(t)) / std::max(1.0, y);
        const double m2 = (X - y) / std::max(1.0, X);
        const double m3 =
            (sol.majorant_slope - sol.y.derivative(t)) / std::max(1.0, sol.majorant_slope);
        const double worst = std::min({m1, m2, m3});
        if (worst < std::min({rep.min_minorant, rep.min_majorant, rep.min_slope_cap}))
            rep.worst_t = t;
        rep.min_minorant = std::min(rep.min_minorant, m1);
        rep.min_majorant = std::min(rep.min_majorant, m2);
        rep.min_slope_cap = std::min(rep.min_slope_cap, m3);
    }
    if (std::min({rep.min_minorant, rep.min_majorant, rep.min_slope_cap}) < -tol)
        throw InequalityViolated("elementary comparison violated near t = " +
                                 std::to_string(rep.worst_t));
    return rep;
}

/// Per-direction Jacobian of the normal exponential map off the slice
/// {r0} x N: slices are umbilic, so it is h(r0 + t)/h(r0).
inline double slice_jacobian(const WarpedProduct& W, double r0, double t) {
    if (t < 0) throw InvalidParameters("slice_jacobian: t must be nonnegative");
    return W.warp.h(r0 + t) / W.warp.h(r0);
}

struct RatioMonotonicityReport {
    double min_ratio_decrement = 0.0;  // min over grid pairs of (J/y)(t_i) - (J/y)(t_{i+1}), normalised
    double max_sup_violation = 0.0;    // worst violation of sup theta-hat <= (J/y)^{n-1}
};

/// Verifies that t -> J(t)/y(t) never increases along the ray and that the
/// tail supremum of (J/majorant)^{n-1} stays under (J/y)^{n-1}.
inline RatioMonotonicityReport monotone_ratio_check(const WarpedProduct& W, double r0,
                                                    const ComparisonSolution& sol,
                                                    const std::vector<double>& grid,
                                                    double tol = 1e-9) {
    std::vector<double> ratio(grid.size()), theta_hat(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double J = slice_jacobian(W, r0, grid[i]);
        ratio[i] = J / sol.y.value(grid[i]);
        theta_hat[i] = std::pow(J / sol.majorant(grid[i]), sol.n - 1);
    }
    RatioMonotonicityReport rep;
    rep.min_ratio_decrement = std::numeric_limits<double>::infinity();
    double worst_t = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double dec = (ratio[i] - ratio[i + 1]) / std::max(1.0, std::abs(ratio[i]));
        if (dec < rep.min_ratio_decrement) {
            rep.min_ratio_decrement = dec;
            worst_t = grid[i + 1];
        }
    }
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t i = grid.size(); i-- > 0;) {
        sup = std::max(sup, theta_hat[i]);
        const double cap = std::pow(ratio[i], sol.n - 1);
        rep.max_sup_violation = std::max(rep.max_sup_violation, sup - cap);
    }
    if (rep.min_ratio_decrement < -tol || rep.max_sup_violation > tol)
        throw MonotonicityViolated("J/y ratio increases near t = " + std::to_string(worst_t));
    return rep;
}

struct RiccatiReport {
    double max_residual = 0.0;            // |u' + u^2 - h''/h| with u = h'/h along the ray
    double max_envelope_violation = 0.0;  // u' + u^2 - envelope, clamped at 0
};

/// The radial Riccati identity for warped products, with u' from a
/// fourth-order difference so all three warp evaluators are exercised
/// against each other. The step is kept well above the cancellation floor
/// of h'/h near a horizon.
inline RiccatiReport riccati_residual(const WarpedProduct& W, double r0,
                                      const std::vector<double>& grid,
                                      const AssociatedFunction* envelope = nullptr) {
    RiccatiReport rep;
    auto u = [&](double t) {
        const double r = r0 + t;
        return W.warp.hp(r) / W.warp.h(r);
    };
    for (double t : grid) {
        double eps = 5e-4 * std::max(1.0, t);
        double up;
        if (r0 + t - 2 * eps >= 0.0) {
            up = (u(t - 2 * eps) - 8 * u(t - eps) + 8 * u(t + eps) - u(t + 2 * eps)) / (12 * eps);
        } else {
            // One-sided at the inner boundary: wider step, h'/h loses digits
            // to cancellation right at a horizon.
            eps = 2e-3 * std::max(1.0, t);
            up = (-25 * u(t) + 48 * u(t + eps) - 36 * u(t + 2 * eps) + 16 * u(t + 3 * eps) -
                  3 * u(t + 4 * eps)) /
                 (12 * eps);
        }
        const double ut = u(t);
        const double curv = W.warp.hpp(r0 + t) / W.warp.h(r0 + t);
        rep.max_residual = std::max(rep.max_residual, std::abs(up + ut * ut - curv));
        if (envelope) {
            const double viol = up + ut * ut - (*envelope)(r0 + t);
            rep.max_envelope_violation = std::max(rep.max_envelope_violation, std::max(viol, 0.0));
        }
    }
    return rep;
}

enum class DecayClass {
    compact_support_tail,   // ratio derivative numerically vanishes beyond some tau
    slope_to_zero,          // eventually positive with slope decaying to zero
    decreasing_everywhere,  // negative on the whole sampled horizon
    indeterminate,
};

struct DecayClassification {
    DecayClass cls = DecayClass::indeterminate;
    double tau = 0.0;  // onset of the detected tail pattern
};

inline const char* to_string(DecayClass c) {
    switch (c) {
        case DecayClass::compact_support_tail: return "compact-support-tail";
        case DecayClass::slope_to_zero: return "slope-to-zero";
        case DecayClass::decreasing_everywhere: return "decreasing-everywhere";
        case DecayClass::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

/// Classifies the sampled sign pattern of d/dt [y/majorant] on (0, horizon].
///
/// Zero means |derivative| < zero_tol. A tail of zeros covering at least a
/// quarter of the samples is the compact-support pattern; an all-positive
/// tail whose magnitude has decayed to half its peak is the slope-to-zero
/// pattern; all-negative samples mean the ratio is still falling at the
/// horizon. Everything else is indeterminate.
inline DecayClassification decay_classification(const ComparisonSolution& sol, double horizon,
                                                double zero_tol = 1e-8) {
    if (!(horizon > 0) || horizon > sol.y.t_back() * (1 + 1e-12))
        throw InvalidParameters("decay_classification: horizon outside the solved range");
    constexpr int N = 512;
    std::vector<double> t(N), d(N);
    for (int i = 0; i < N; ++i) {
        t[i] = horizon * double(i + 1) / N;
        d[i] = sol.ratio_root_derivative(t[i]);
    }

    auto is_zero = [&](int i) { return std::abs(d[i]) < zero_tol; };

    int first_tail_zero = N;
    for (int i = N; i-- > 0;) {
        if (!is_zero(i)) break;
        first_tail_zero = i;
    }
    if (first_tail_zero == 0) return {DecayClass::compact_support_tail, 0.0};
    if (N - first_tail_zero >= N / 4)
        return {DecayClass::compact_support_tail, t[first_tail_zero]};

    int first_tail_nonneg = N;
    for (int i = N; i-- > 0;) {
        if (d[i] < -zero_tol) break;
        first_tail_nonneg = i;
    }
    bool has_positive_tail = false;
    double peak = 0.0;
    for (int i = first_tail_nonneg; i < N; ++i) {
        if (d[i] > zero_tol) has_positive_tail = true;
        peak = std::max(peak, d[i]);
    }
    if (has_positive_tail && N - first_tail_nonneg >= N / 10) {
        if (std::abs(d[N - 1]) <= 0.5 * peak)
            return {DecayClass::slope_to_zero, t[first_tail_nonneg]};
        return {DecayClass::indeterminate, t[first_tail_nonneg]};
    }

    bool any_positive = false;
    for (int i = 0; i < N; ++i)
        if (d[i] > zero_tol) any_positive = true;
    if (!any_positive) return {DecayClass::decreasing_everywhere, 0.0};
    return {DecayClass::indeterminate, 0.0};
}

}  // namespace wv
