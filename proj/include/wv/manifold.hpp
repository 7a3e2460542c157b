#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wv/associated.hpp"
#include "wv/errors.hpp"
#include "wv/numerics/ivp.hpp"
#include "wv/spheres.hpp"

namespace wv {

/// Compact fiber (N, g_N) entering the warped product. Only the dimension,
/// total volume, lower Ricci constant and (optionally) the diameter matter.
struct FiberManifold {
    int dim = 2;                     // n - 1
    double area = 0.0;               // |N|
    double ricci_lower = 0.0;        // rho with Ric_N >= (n-2) rho g_N
    bool is_round_sphere = false;
    std::optional<double> diameter;  // geodesic diameter, pi for unit spheres

    static FiberManifold unit_sphere(int dim) {
        FiberManifold f;
        f.dim = dim;
        f.area = unit_sphere_area(dim);
        f.ricci_lower = 1.0;
        f.is_round_sphere = true;
        f.diameter = M_PI;
        f.validate();
        return f;
    }

    void validate() const {
        if (dim < 2) throw InvalidParameters("fiber dimension must be at least 2");
        if (!(area > 0)) throw InvalidParameters("fiber area must be positive");
        if (is_round_sphere) {
            if (std::abs(area - unit_sphere_area(dim)) > 1e-9 * area)
                throw InvalidParameters("round-sphere fiber must carry the unit-sphere area");
            if (std::abs(ricci_lower - 1.0) > 1e-12)
                throw InvalidParameters("round-sphere fiber must have ricci_lower = 1");
        }
    }
};

namespace detail {

// Natural cubic spline through strictly increasing abscissae, linear beyond
// the sampled range.
class CubicSpline {
  public:
    CubicSpline(std::vector<double> xs, std::vector<double> ys)
        : x_(std::move(xs)), y_(std::move(ys)) {
        const std::size_t n = x_.size();
        if (n < 3 || y_.size() != n)
            throw InvalidParameters("spline needs at least 3 samples");
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(x_[i + 1] > x_[i]))
                throw InvalidParameters("spline abscissae must be strictly increasing");
        m_.assign(n, 0.0);
        std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
            a[i] = hl / 6;
            b[i] = (hl + hr) / 3;
            c[i] = hr / 6;
            d[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
        }
        for (std::size_t i = 1; i < n; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
        }
        m_[n - 1] = d[n - 1] / b[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
    }

    double value(double x) const {
        if (x <= x_.front()) return y_.front() + slope_front() * (x - x_.front());
        if (x >= x_.back()) return y_.back() + slope_back() * (x - x_.back());
        const std::size_t i = seg(x);
        const double h = x_[i + 1] - x_[i], u = x_[i + 1] - x, v = x - x_[i];
        return (m_[i] * u * u * u + m_[i + 1] * v * v * v) / (6 * h) +
               (y_[i] / h - m_[i] * h / 6) * u + (y_[i + 1] / h - m_[i + 1] * h / 6) * v;
    }

    double derivative(double x) const {
        if (x <= x_.front()) return slope_front();
        if (x >= x_.back()) return slope_back();
        const std::size_t i = seg(x);
        const double h = x_[i + 1] - x_[i], u = x_[i + 1] - x, v = x - x_[i];
        return (-m_[i] * u * u + m_[i + 1] * v * v) / (2 * h) +
               (y_[i + 1] - y_[i]) / h - (m_[i + 1] - m_[i]) * h / 6;
    }

    double second_derivative(double x) const {
        if (x <= x_.front() || x >= x_.back()) return 0.0;
        const std::size_t i = seg(x);
        const double h = x_[i + 1] - x_[i];
        return (m_[i] * (x_[i + 1] - x) + m_[i + 1] * (x - x_[i])) / h;
    }

  private:
    std::size_t seg(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - x_.begin());
        return std::min(std::max<std::size_t>(i, 1) - 1, x_.size() - 2);
    }
    double slope_front() const { return derivative_at_node(0); }
    double slope_back() const { return derivative_at_node(x_.size() - 2, true); }
    double derivative_at_node(std::size_t i, bool right = false) const {
        const double h = x_[i + 1] - x_[i];
        const double base = (y_[i + 1] - y_[i]) / h;
        if (!right) return base - h * (2 * m_[i] + m_[i + 1]) / 6;
        return base + h * (m_[i] + 2 * m_[i + 1]) / 6;
    }
    std::vector<double> x_, y_, m_;
};

}  // namespace detail

/// Warping function h on [0, infinity): h > 0 with accessible first and
/// second derivatives. Immutable after construction and safe to share.
class WarpFunction {
  public:
    enum class Representation { closed_form, profile_derived, tabulated_spline };

    double h(double r) const { return h_(r); }
    double hp(double r) const { return hp_(r); }
    double hpp(double r) const { return hpp_(r); }
    Representation representation() const { return rep_; }
    double domain_end() const { return domain_end_; }

    static WarpFunction closed_form(std::function<double(double)> h, std::function<double(double)> hp,
                                    std::function<double(double)> hpp) {
        WarpFunction w;
        w.h_ = std::move(h);
        w.hp_ = std::move(hp);
        w.hpp_ = std::move(hpp);
        w.rep_ = Representation::closed_form;
        w.domain_end_ = std::numeric_limits<double>::infinity();
        return w;
    }

    // Integrates h' = v, v' = omega'(h)/2 from (s_floor, sqrt(omega(s_floor))).
    // The substitution v = sqrt(omega(h)) holds as an exact invariant of this
    // system, so the square-root degeneracy at a horizon never enters.
    static WarpFunction from_profile(std::function<double(double)> omega,
                                     std::function<double(double)> omega_prime, double s_floor,
                                     double horizon, double rel_tol = 1e-12) {
        const double w0 = omega(s_floor);
        if (w0 < -1e-12 * std::max(1.0, std::abs(s_floor)))
            throw ProfileNegative("profile is negative at its left endpoint");
        auto accel = [omega_prime](double /*r*/, double hval) { return 0.5 * omega_prime(hval); };
        auto traj = std::make_shared<numerics::Trajectory>(numerics::solve_second_order(
            accel, s_floor, std::sqrt(std::max(w0, 0.0)), horizon, rel_tol,
            rel_tol * std::max(1.0, s_floor)));
        WarpFunction w;
        w.rep_ = Representation::profile_derived;
        w.domain_end_ = horizon;
        const double h_end = traj->values.back();
        const double v_end = traj->derivatives.back();
        w.h_ = [traj, horizon, h_end, v_end](double r) {
            if (r <= horizon) return traj->value(r);
            return h_end + v_end * (r - horizon);  // linear continuation past the cache
        };
        w.hp_ = [traj, horizon, v_end](double r) {
            return r <= horizon ? traj->derivative(r) : v_end;
        };
        auto hfun = w.h_;
        w.hpp_ = [omega_prime, hfun](double r) { return 0.5 * omega_prime(hfun(r)); };
        return w;
    }

    static WarpFunction tabulated(std::vector<double> r, std::vector<double> h) {
        auto spline = std::make_shared<detail::CubicSpline>(std::move(r), std::move(h));
        WarpFunction w;
        w.rep_ = Representation::tabulated_spline;
        w.domain_end_ = std::numeric_limits<double>::infinity();
        w.h_ = [spline](double x) { return spline->value(x); };
        w.hp_ = [spline](double x) { return spline->derivative(x); };
        w.hpp_ = [spline](double x) { return spline->second_derivative(x); };
        return w;
    }

    /// Worst relative mismatch between h' and a centered difference of h on a
    /// log grid; the type invariant requires this to stay below the tolerance.
    double derivative_consistency(double r_lo = 1e-2, double r_hi = 1e3, int points = 40) const {
        double worst = 0.0;
        for (int i = 0; i <= points; ++i) {
            const double r = r_lo * std::pow(r_hi / r_lo, double(i) / points);
            const double eps = 1e-6 * std::max(1.0, r);
            if (r - eps < 0) continue;
            const double fd = (h_(r + eps) - h_(r - eps)) / (2 * eps);
            const double dev = std::abs(fd - hp_(r)) / std::max(1.0, std::abs(hp_(r)));
            worst = std::max(worst, dev);
        }
        return worst;
    }

    void validate_positive(double r_hi = 1e6) const {
        for (int i = 0; i <= 60; ++i) {
            const double r = r_hi * std::pow(10.0, -9.0 * (1.0 - double(i) / 60));
            if (!(h_(r) > 0))
                throw InvalidParameters("warp function must be positive, fails at r = " +
                                        std::to_string(r));
        }
        if (!(h_(0.0) > 0)) throw InvalidParameters("warp function must be positive at r = 0");
    }

  private:
    std::function<double(double)> h_, hp_, hpp_;
    Representation rep_ = Representation::closed_form;
    double domain_end_ = std::numeric_limits<double>::infinity();
};

/// Ambient M = [0, infinity) x N with metric dr (x) dr + h(r)^2 g_N.
struct WarpedProduct {
    FiberManifold fiber;
    WarpFunction warp;
    int n = 3;  // ambient dimension, fiber.dim + 1

    static WarpedProduct make(FiberManifold fiber, WarpFunction warp) {
        fiber.validate();
        WarpedProduct w{std::move(fiber), std::move(warp), 0};
        w.n = w.fiber.dim + 1;
        if (w.n < 3) throw InvalidParameters("ambient dimension must be at least 3");
        return w;
    }
};

/// Radial Ricci curvature Ric(d_r, d_r) = -(n-1) h''/h.
inline double radial_ricci(const WarpedProduct& W, double r) {
    return -(W.n - 1) * W.warp.hpp(r) / W.warp.h(r);
}

/// Curvature-bound pair: lambda_1 = h''/h controls the radial direction,
/// lambda_2 the spatial ones.
inline std::pair<double, double> lambda_bounds(const WarpedProduct& W, double r) {
    const double h = W.warp.h(r), hp = W.warp.hp(r), hpp = W.warp.hpp(r);
    const double l1 = hpp / h;
    const double l2 =
        l1 / (W.n - 1) - (double(W.n - 2) / (W.n - 1)) * (W.fiber.ricci_lower - hp * hp) / (h * h);
    return {l1, l2};
}

struct ProbeSettings {
    double r_probe = 1e6;          // far end of all monotonicity probes
    int points_per_decade = 512;   // envelope grid density
    double grid_start = 1e-3;      // first positive envelope abscissa
    int trend_window = 8;          // geometric points used for trend tests
};

struct Witness {
    double r = 0.0;
    double value = 0.0;
};

/// Flags for the admissibility conditions, with probe evidence.
///
/// h_over_r_eventually_nonincreasing is probed as "h(r)/r settles to a
/// finite limit": that is the property the condition exists to guarantee
/// (a finite asymptotic volume ratio) and, unlike the literal monotone
/// formulation, it holds for the Schwarzschild family, whose h(r)/r dips
/// and then climbs back towards 1. The literal trend is recorded in the
/// probe log.
struct ConditionFlags {
    bool lambda1_positive_somewhere = false;
    bool envelope_admissible = false;
    bool h_over_r_eventually_nonincreasing = false;
    bool h_eventually_nondecreasing_and_unbounded = false;
    std::optional<double> tau0;
    std::optional<Witness> lambda_positive_witness;
    double h_over_r_limit = std::numeric_limits<double>::quiet_NaN();
    std::string probe_log;
};

namespace detail {

struct EnvelopeGrid {
    std::vector<double> r;       // 0, then log-spaced
    std::vector<double> raw;     // max(lambda_1, lambda_2) - sign probe for condition 1
    std::vector<double> clamped; // max(raw, 0)
};

inline EnvelopeGrid envelope_grid(const WarpedProduct& W, const ProbeSettings& s) {
    EnvelopeGrid g;
    const double r_end = s.r_probe;
    const int decades = std::max(1, (int)std::ceil(std::log10(r_end / s.grid_start)));
    const int count = decades * s.points_per_decade;
    g.r.reserve(count + 2);
    g.r.push_back(0.0);
    for (int i = 0; i <= count; ++i)
        g.r.push_back(s.grid_start * std::pow(r_end / s.grid_start, double(i) / count));
    g.raw.reserve(g.r.size());
    g.clamped.reserve(g.r.size());
    for (double r : g.r) {
        const auto [l1, l2] = lambda_bounds(W, r);
        const double raw = std::max(l1, l2);
        if (!std::isfinite(raw))
            throw NumericalError("curvature bound not finite at r = " + std::to_string(r));
        g.raw.push_back(raw);
        g.clamped.push_back(std::max(raw, 0.0));
    }
    return g;
}

// Fitted decay exponent of the grid tail; nullopt when the tail is
// identically zero (compact support).
inline std::optional<double> tail_exponent(const EnvelopeGrid& g) {
    const std::size_t n = g.r.size();
    if (g.clamped[n - 1] == 0.0) return std::nullopt;
    double r_hi = g.r[n - 1], v_hi = g.clamped[n - 1];
    const double r_lo_target = r_hi / 10.0;
    std::size_t i = n - 1;
    while (i > 1 && g.r[i] > r_lo_target) --i;
    const double r_lo = g.r[i], v_lo = g.clamped[i];
    if (v_lo <= 0.0) return std::nullopt;
    return std::log(v_lo / v_hi) / std::log(r_hi / r_lo);
}

}  // namespace detail

/// Monotone nonincreasing majorant of max(lambda_1, lambda_2, 0).
///
/// When the clamped bound is already nonincreasing on the probe grid (true
/// for the Schwarzschild and Reissner-Nordstrom families, where lambda_2 <
/// lambda_1 pointwise), the bound itself is returned as a smooth evaluator;
/// the right-continuous step majorant built from grid suffix maxima is the
/// fallback for non-monotone bounds. Past the probe horizon the fitted
/// power tail continues the evaluator.
inline AssociatedFunction envelope_lambda(const WarpedProduct& W, const ProbeSettings& s = {}) {
    auto g = detail::envelope_grid(W, s);
    const std::size_t n = g.r.size();
    double gmax = 0.0;
    for (double v : g.clamped) gmax = std::max(gmax, v);
    if (gmax == 0.0) return AssociatedFunction::zero();

    const auto p = detail::tail_exponent(g);
    double support_radius = 0.0;
    if (!p) {
        for (std::size_t i = n; i-- > 0;)
            if (g.clamped[i] > 0.0) { support_radius = g.r[std::min(i + 1, n - 1)]; break; }
    } else if (*p <= 2.05) {
        std::ostringstream msg;
        msg << "envelope tail decays like r^-" << *p << "; integral of t*lambda does not converge";
        throw EnvelopeNotIntegrable(msg.str());
    }

    bool monotone = true;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (g.clamped[i + 1] > g.clamped[i] + 1e-12 * gmax) { monotone = false; break; }

    const double r_end = g.r.back();
    const double p_tail = p.value_or(0.0);
    TailDescriptor tail = p ? TailDescriptor::power(*p) : TailDescriptor::compact(support_radius);

    if (monotone) {
        // The bound is its own envelope; evaluate it directly at every radius
        // (profile warps continue smoothly through their cache horizon).
        struct Eval {
            WarpFunction warp;
            int n;
            double rho;
            double operator()(double r) const {
                const double h = warp.h(r), hp = warp.hp(r), hpp = warp.hpp(r);
                const double l1 = hpp / h;
                const double l2 = l1 / (n - 1) - (double(n - 2) / (n - 1)) * (rho - hp * hp) / (h * h);
                return std::max({l1, l2, 0.0});
            }
        };
        Eval eval{W.warp, W.n, W.fiber.ricci_lower};
        return AssociatedFunction(eval, tail, AssociatedFunction::Provenance::envelope_derived);
    }

    // Step majorant from suffix maxima; right-continuous so each cell carries
    // its supremum and the majorant property survives interpolation.
    auto radii = std::make_shared<std::vector<double>>(g.r);
    auto steps = std::make_shared<std::vector<double>>(g.clamped);
    for (std::size_t i = n - 1; i-- > 0;) (*steps)[i] = std::max((*steps)[i], (*steps)[i + 1]);
    const double step_end = steps->back();
    auto eval = [radii, steps, r_end, step_end, p_tail, has_tail = p.has_value()](double r) {
        if (r > r_end) return has_tail ? step_end * std::pow(r / r_end, -p_tail) : 0.0;
        auto it = std::upper_bound(radii->begin(), radii->end(), r);
        const std::size_t i = std::max<std::size_t>(1, it - radii->begin()) - 1;
        return (*steps)[i];
    };
    return AssociatedFunction(eval, tail, AssociatedFunction::Provenance::envelope_derived);
}

/// Probes the admissibility conditions and reports flags with witnesses.
inline ConditionFlags check_conditions(const WarpedProduct& W, const ProbeSettings& s = {}) {
    ConditionFlags flags;
    std::ostringstream log;

    auto g = detail::envelope_grid(W, s);
    double raw_scale = 1.0;
    for (double v : g.raw) raw_scale = std::max(raw_scale, std::abs(v));
    for (std::size_t i = 0; i < g.r.size(); ++i) {
        if (g.raw[i] > 1e-14 * raw_scale) {
            flags.lambda1_positive_somewhere = true;
            flags.lambda_positive_witness = Witness{g.r[i], g.raw[i]};
            break;
        }
    }
    log << "curvature bound positive somewhere: " << (flags.lambda1_positive_somewhere ? "yes" : "no");
    if (flags.lambda_positive_witness)
        log << " (r = " << flags.lambda_positive_witness->r
            << ", value = " << flags.lambda_positive_witness->value << ")";
    log << "\n";

    try {
        envelope_lambda(W, s);
        flags.envelope_admissible = true;
        log << "envelope admissible: yes\n";
    } catch (const Error& e) {  // indeterminate probes report as false
        flags.envelope_admissible = false;
        log << "envelope admissible: no (" << e.what() << ")\n";
    }

    // h(r)/r settling probe on a doubling grid.
    {
        std::vector<double> q;
        for (double r = 1.0; r <= s.r_probe * 1.0000001; r *= 2) q.push_back(W.warp.h(r) / r);
        bool settles = q.size() >= std::size_t(s.trend_window);
        bool literal_nonincreasing = true;
        if (settles) {
            const std::size_t w = s.trend_window;
            double prev_inc = std::abs(q[q.size() - w + 1] - q[q.size() - w]);
            for (std::size_t i = q.size() - w + 1; i + 1 < q.size(); ++i) {
                const double inc = std::abs(q[i + 1] - q[i]);
                if (inc > 0.85 * prev_inc + 1e-13 * std::abs(q[i]))
                    settles = false;
                prev_inc = inc;
            }
            for (std::size_t i = q.size() - w; i + 1 < q.size(); ++i)
                if (q[i + 1] > q[i] + 1e-13 * std::abs(q[i])) literal_nonincreasing = false;
        }
        flags.h_over_r_eventually_nonincreasing = settles;
        if (settles) flags.h_over_r_limit = q.back();
        log << "h(r)/r settles to a finite limit: " << (settles ? "yes" : "no");
        if (settles) log << " (~" << q.back() << ")";
        log << "; literal nonincreasing trend on the last window: "
            << (literal_nonincreasing ? "yes" : "no") << "\n";
    }

    // Eventual monotonicity of h and unboundedness.
    {
        std::vector<double> rs = {0.0, 0.125, 0.25, 0.5};
        for (double r = 1.0; r <= s.r_probe * 1.0000001; r *= 2) rs.push_back(r);
        std::optional<double> tau;
        for (std::size_t i = 0; i < rs.size(); ++i) {
            bool ok = true;
            for (std::size_t j = i; j < rs.size(); ++j) {
                const double hp = W.warp.hp(rs[j]);
                if (hp < -1e-12 * std::max(1.0, std::abs(hp))) { ok = false; break; }
            }
            if (ok) { tau = rs[i]; break; }
        }
        const double h_far = W.warp.h(rs.back());
        const double h_mid = W.warp.h(rs.back() / 2);
        const bool unbounded = h_far >= 5.0 * std::max(W.warp.h(0.0), 1.0) && h_far > h_mid * 1.02;
        flags.tau0 = tau;
        flags.h_eventually_nondecreasing_and_unbounded = tau.has_value() && unbounded;
        log << "h eventually nondecreasing: " << (tau ? "yes" : "no");
        if (tau) log << " (tau0 = " << *tau << ")";
        log << "; unbounded growth: " << (unbounded ? "yes" : "no") << " (h(" << rs.back()
            << ") = " << h_far << ")\n";
    }

    flags.probe_log = log.str();
    return flags;
}

/// Converts profile form 1/omega(s) ds^2 + s^2 g_N into warp form; the
/// resulting warp satisfies h'(r) = sqrt(omega(h(r))) and h'' = omega'(h)/2.
inline WarpedProduct from_profile(std::function<double(double)> omega,
                                  std::function<double(double)> omega_prime, double s_floor,
                                  FiberManifold fiber,
                                  double horizon = 0.0, double rel_tol = 1e-12) {
    if (!(s_floor > 0)) throw InvalidParameters("profile floor must be positive");
    for (int i = 1; i <= 64; ++i) {
        const double span = std::pow(10.0, 7.0 * (double(i) / 64) - 3.0);
        const double sv = s_floor + span;
        if (omega(sv) < 0)
            throw ProfileNegative("profile negative at s = " + std::to_string(sv));
    }
    if (horizon <= 0.0) horizon = std::max(1.3e6, 2e4 * std::max(1.0, s_floor));
    auto warp = WarpFunction::from_profile(std::move(omega), std::move(omega_prime), s_floor,
                                           horizon, rel_tol);
    return WarpedProduct::make(std::move(fiber), std::move(warp));
}

namespace detail {

// Inverse of F(s) = integral of omega^{-1/2} for the 3-d Schwarzschild
// profile, where F has the closed form s*sqrt(w) + (m/2) log((1+sqrt(w))/(1-sqrt(w))).
inline double schwarzschild3_radius(double m, double r) {
    if (r <= 0.0) return m;
    auto F = [m](double sv) {
        const double w = std::sqrt(1.0 - m / sv);
        return sv * w + 0.5 * m * (std::log1p(w) - std::log1p(-w));
    };
    double lo = m, hi = m + r;           // F(s) >= s - m brackets the root
    double sv = std::max(m * (1 + 1e-8), std::min(hi, r));
    if (r < 0.1 * m) sv = m + r * r / (4 * m);  // horizon series start
    for (int it = 0; it < 80; ++it) {
        const double res = F(sv) - r;
        if (std::abs(res) <= 1e-14 * std::max(1.0, r)) break;
        (res > 0 ? hi : lo) = sv;
        const double fp = 1.0 / std::sqrt(1.0 - m / sv);  // F'(s)
        double next = sv - res / fp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        sv = next;
    }
    return sv;
}

}  // namespace detail

/// Schwarzschild exterior of mass m in ambient dimension n, written as a
/// warped product over the horizon slice; h(0) = m^{1/(n-2)}, h'(0) = 0.
inline WarpedProduct schwarzschild(double m, int n, double horizon = 0.0) {
    if (!(m > 0)) throw InvalidParameters("schwarzschild: mass must be positive");
    if (n < 3) throw InvalidParameters("schwarzschild: dimension must be at least 3");
    FiberManifold fiber = FiberManifold::unit_sphere(n - 1);
    if (n == 3) {
        auto h = [m](double r) { return detail::schwarzschild3_radius(m, r); };
        auto hp = [m, h](double r) { return std::sqrt(1.0 - m / h(r)); };
        auto hpp = [m, h](double r) { const double sv = h(r); return 0.5 * m / (sv * sv); };
        return WarpedProduct::make(fiber, WarpFunction::closed_form(h, hp, hpp));
    }
    const double s_floor = std::pow(m, 1.0 / (n - 2));
    auto omega = [m, n](double sv) { return 1.0 - m * std::pow(sv, 2.0 - n); };
    auto omega_prime = [m, n](double sv) { return m * (n - 2) * std::pow(sv, 1.0 - n); };
    return from_profile(omega, omega_prime, s_floor, fiber, horizon);
}

/// Reissner-Nordstrom exterior with m > 2q > 0, started at the outer root
/// of the profile.
inline WarpedProduct reissner_nordstrom(double m, double q, int n, double horizon = 0.0) {
    if (!(q > 0) || !(m > 2 * q))
        throw InvalidParameters("reissner_nordstrom: requires m > 2q > 0");
    if (n < 3) throw InvalidParameters("reissner_nordstrom: dimension must be at least 3");
    const double disc = std::sqrt(m * m - 4 * q * q);
    const double s_floor = std::pow(0.5 * (m + disc), 1.0 / (n - 2));
    auto omega = [m, q, n](double sv) {
        return 1.0 - m * std::pow(sv, 2.0 - n) + q * q * std::pow(sv, 4.0 - 2.0 * n);
    };
    auto omega_prime = [m, q, n](double sv) {
        return m * (n - 2) * std::pow(sv, 1.0 - n) - q * q * (2.0 * n - 4) * std::pow(sv, 3.0 - 2.0 * n);
    };
    return from_profile(omega, omega_prime, s_floor, FiberManifold::unit_sphere(n - 1), horizon);
}

/// Affine warp h(r) = slope * r + offset over the given fiber.
inline WarpedProduct cone(double slope, double offset, FiberManifold fiber) {
    if (!(offset > 0)) throw InvalidParameters("cone: offset must be positive");
    if (slope < 0) throw InvalidParameters("cone: slope must be nonnegative");
    auto h = [slope, offset](double r) { return slope * r + offset; };
    auto hp = [slope](double) { return slope; };
    auto hpp = [](double) { return 0.0; };
    return WarpedProduct::make(std::move(fiber), WarpFunction::closed_form(h, hp, hpp));
}

}  // namespace wv
