#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "wv/errors.hpp"

namespace wv::numerics {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::optional<double> truncation_point;  // set when a semi-infinite tail was cut
};

/// Hint describing the integrand tail on [T, infinity).
struct TailHint {
    enum class Kind { compact_support, power_law };
    Kind kind;
    double param;  // support radius, or decay exponent p of |f| ~ C t^-p

    static TailHint compact(double radius) { return {Kind::compact_support, radius}; }
    static TailHint power(double exponent) { return {Kind::power_law, exponent}; }
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
inline constexpr double kGk15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kGaussW[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto eval = [&](double x) {
        const double v = f(x);
        if (!std::isfinite(v))
            throw NonFiniteIntegrand("integrand not finite at x = " + std::to_string(x));
        return v;
    };
    const double f0 = eval(mid);
    double kron = kKronrodW[7] * f0;
    double gauss = kGaussW[3] * f0;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGk15Nodes[i];
        const double s = eval(mid + dx) + eval(mid - dx);
        kron += kKronrodW[i] * s;
        if (i % 2 == 1) gauss += kGaussW[i / 2] * s;
    }
    kron *= half;
    gauss *= half;
    const double diff = std::abs(kron - gauss);
    double err = diff;
    if (diff > 0) err = std::min(diff, std::pow(200.0 * diff, 1.5));
    err = std::max(err, std::abs(kron) * 1e-16);
    return {a, b, kron, err};
}

template <class F>
QuadratureResult adaptive_finite(F&& f, double a, double b, double abs_tol) {
    if (a == b) return {0.0, 0.0, std::nullopt};
    std::priority_queue<Panel> heap;
    Panel whole = gk15(f, a, b);
    double total = whole.value, total_err = whole.error;
    heap.push(whole);
    std::size_t panels = 1;
    constexpr std::size_t max_panels = 200000;
    while (total_err > abs_tol && !heap.empty()) {
        if (panels >= max_panels)
            throw ToleranceNotReached("quadrature tolerance not reached after max subdivisions");
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) continue;  // interval at rounding floor
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    return {total, total_err, std::nullopt};
}

}  // namespace detail

/// Adaptive quadrature of f over [a, b], b possibly +infinity.
///
/// For finite intervals a Gauss-Kronrod 7/15 rule is subdivided until the
/// accumulated error estimate drops below abs_tol. For semi-infinite
/// intervals the truncation point is doubled geometrically; once the tail
/// behaves like a power law, the fitted tail contribution is added to the
/// value and its model uncertainty to the error estimate.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol,
                           std::optional<TailHint> tail_hint = std::nullopt) {
    if (!(abs_tol > 0)) throw InvalidParameters("integrate: abs_tol must be positive");
    if (!std::isinf(b)) {
        if (!(b >= a)) throw InvalidParameters("integrate: requires b >= a");
        return detail::adaptive_finite(f, a, b, abs_tol);
    }

    const double piece_tol = abs_tol / 64.0;
    double value = 0.0, gk_err = 0.0;

    if (tail_hint && tail_hint->kind == TailHint::Kind::compact_support) {
        const double radius = tail_hint->param;
        if (radius > a) {
            auto head = detail::adaptive_finite(f, a, radius, abs_tol * 0.5);
            value = head.value;
            gk_err = head.abs_error_estimate;
        }
        // Trust but verify: the integrand must actually vanish past the support.
        bool vanished = true;
        for (double x : {radius * 1.0625 + 1e-9, radius * 2 + 1, radius * 8 + 1})
            if (std::abs(f(x)) > 0) vanished = false;
        if (vanished) return {value, gk_err, std::max(radius, a)};
        // fall through to geometric doubling starting past the claimed support
    }

    double t0 = std::max(1.0, 10.0 * std::max(std::abs(a), 0.1));
    if (tail_hint && tail_hint->kind == TailHint::Kind::compact_support)
        t0 = std::max(t0, tail_hint->param);
    else {
        auto head = detail::adaptive_finite(f, a, t0, piece_tol);
        value = head.value;
        gk_err = head.abs_error_estimate;
    }

    double t = t0;
    std::optional<double> tail_prev;
    std::vector<double> phat_hist;
    double f_prev = f(t);
    int zero_streak = 0, no_decay = 0;
    constexpr int max_doublings = 60;

    for (int k = 0; k < max_doublings; ++k) {
        const double t_next = 2 * t;
        auto piece = detail::adaptive_finite(f, t, t_next, piece_tol);
        value += piece.value;
        gk_err += piece.abs_error_estimate;
        const double f_next = f(t_next);

        if (f_prev == 0.0 && f_next == 0.0 && std::abs(piece.value) <= piece_tol) {
            if (++zero_streak >= 2) return {value, gk_err, t_next};
        } else {
            zero_streak = 0;
        }

        std::optional<double> tail, tail_unc;
        if (f_prev != 0.0 && f_next != 0.0 && (f_prev > 0) == (f_next > 0)) {
            const double phat = std::log(std::abs(f_prev) / std::abs(f_next)) / std::log(2.0);
            if (phat > 1.05) {
                tail = f_next * t_next / (phat - 1.0);
                // Consecutive tail estimates share any systematic model bias,
                // so the exponent uncertainty uses the drift over the last
                // two doublings, inflated against slowly varying exponents.
                double unc = 0.0;
                const std::size_t nh = phat_hist.size();
                if (nh >= 1)
                    unc += 3.0 * std::abs(*tail) * std::abs(phat - phat_hist[nh - 1]) / (phat - 1.0);
                if (nh >= 2)
                    unc += 3.0 * std::abs(*tail) * std::abs(phat - phat_hist[nh - 2]) / (phat - 1.0);
                if (tail_prev) unc += std::abs(*tail_prev - (piece.value + *tail));
                if (nh < 2 || !tail_prev) unc += std::abs(*tail);  // not enough evidence yet
                tail_unc = unc;
            } else {
                ++no_decay;
            }
            phat_hist.push_back(phat);
        } else if (f_next != 0.0) {
            ++no_decay;
        }
        if (no_decay > 12)
            throw TailNotConvergent("semi-infinite integrand shows no power-law decay");

        if (tail && tail_unc && *tail_unc + gk_err <= abs_tol)
            return {value + *tail, gk_err + *tail_unc, t_next};
        // No usable tail model, but the remainder is already negligible.
        if (std::abs(piece.value) < abs_tol / 4 && std::abs(f_next) * t_next < abs_tol / 4 && k >= 2)
            return {value, gk_err + std::abs(piece.value) + std::abs(f_next) * t_next, t_next};

        tail_prev = tail;
        f_prev = f_next;
        t = t_next;
    }
    throw TailNotConvergent("truncation-point doubling exhausted without meeting abs_tol");
}

}  // namespace wv::numerics
