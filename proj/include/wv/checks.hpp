#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wv/avr.hpp"
#include "wv/comparison.hpp"
#include "wv/manifold.hpp"
#include "wv/numerics/quadrature.hpp"
#include "wv/verify.hpp"

namespace wv::checks {

/// Randomisable curvature-decay bound with closed-form partial moments,
/// used as the independent oracle of the property suite.
struct LambdaFamily {
    AssociatedFunction fn;
    double b0_exact = 0.0;  // integral of t lambda
    double b1_exact = 0.0;  // integral of lambda
    std::function<double(double)> moment0;  // integral of lambda over [0, s]
    std::function<double(double)> moment1;  // integral of t lambda over [0, s]
    std::string desc;
};

/// lambda(t) = c (1+t)^-p with p >= 3, so both decay integrals converge.
inline LambdaFamily power_law_family(double c, double p) {
    LambdaFamily fam;
    fam.fn = AssociatedFunction([c, p](double t) { return c * std::pow(1.0 + t, -p); },
                                TailDescriptor::power(p), AssociatedFunction::Provenance::user_supplied);
    fam.b1_exact = c / (p - 1);
    fam.b0_exact = c / ((p - 1) * (p - 2));
    fam.moment0 = [c, p](double s) { return c * (1.0 - std::pow(1.0 + s, 1.0 - p)) / (p - 1); };
    fam.moment1 = [c, p](double s) {
        return c * ((1.0 - std::pow(1.0 + s, 2.0 - p)) / (p - 2) -
                    (1.0 - std::pow(1.0 + s, 1.0 - p)) / (p - 1));
    };
    std::ostringstream d;
    d << "power-law c=" << c << " p=" << p;
    fam.desc = d.str();
    return fam;
}

/// Triangular bump lambda(t) = c max(0, 1 - t/a).
inline LambdaFamily triangular_family(double c, double a) {
    LambdaFamily fam;
    fam.fn = AssociatedFunction([c, a](double t) { return c * std::max(0.0, 1.0 - t / a); },
                                TailDescriptor::compact(a), AssociatedFunction::Provenance::user_supplied);
    fam.b1_exact = c * a / 2;
    fam.b0_exact = c * a * a / 6;
    fam.moment0 = [c, a](double s) {
        if (s >= a) return c * a / 2;
        return c * (s - s * s / (2 * a));
    };
    fam.moment1 = [c, a](double s) {
        if (s >= a) return c * a * a / 6;
        return c * (s * s / 2 - s * s * s / (3 * a));
    };
    std::ostringstream d;
    d << "triangular c=" << c << " a=" << a;
    fam.desc = d.str();
    return fam;
}

struct PropertyOutcome {
    std::string name;
    bool pass = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::string detail;  // parameters of the worst case, for reproduction

    explicit PropertyOutcome(std::string n = {}) : name(std::move(n)) {}
};

namespace detail {

inline void record(PropertyOutcome& out, double margin, double tol, const std::string& detail) {
    if (margin < out.worst_margin) {
        out.worst_margin = margin;
        out.detail = detail;
    }
    if (margin < -tol) out.pass = false;
}

}  // namespace detail

struct SuiteSettings {
    double t_max = 50.0;
    double ode_rel_tol = 1e-10;
    double margin_tol = 1e-9;
};

/// Runs the comparison-module invariant suite on `cases` seeded random
/// admissible pairs (lambda, mean ratio) plus the builtin slices. Margins
/// are normalised by the local scale of each inequality.
inline std::vector<PropertyOutcome> run_property_suite(std::uint64_t seed, int cases,
                                                       const SuiteSettings& settings = {}) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    PropertyOutcome sandwich{"sandwich j <= y <= majorant"};
    PropertyOutcome slope_cap{"slope cap y' <= e^b0 f"};
    PropertyOutcome initial_slope{"initial ratio slope <= 0"};
    PropertyOutcome numerator{"numerator monotonicity"};
    PropertyOutcome log_ineq{"log inequality"};
    PropertyOutcome decay_oracle{"decay constants vs closed form"};
    PropertyOutcome gradient{"solver derivative vs finite differences"};
    PropertyOutcome jac_ratio{"slice jacobian ratio nonincreasing"};

    const double tol = settings.margin_tol;

    for (int case_idx = 0; case_idx < cases; ++case_idx) {
        LambdaFamily fam;
        if (unit(rng) < 0.5) {
            const double c = 0.05 + 4.95 * unit(rng);
            const double p = 3.0 + 3.0 * unit(rng);
            fam = power_law_family(c, p);
        } else {
            const double c = 0.05 + 4.95 * unit(rng);
            const double a = 0.5 + 9.5 * unit(rng);
            fam = triangular_family(c, a);
        }
        double mean_ratio = 0.0;
        if (unit(rng) > 0.15) {
            mean_ratio = 0.05 + 2.95 * unit(rng);
            if (unit(rng) < 0.5) mean_ratio = -mean_ratio;
        }
        std::ostringstream idbuf;
        idbuf << "case " << case_idx << ": " << fam.desc << " h=" << mean_ratio;
        const std::string id = idbuf.str();

        DecayConstants exact{fam.b0_exact, fam.b1_exact, 0.0, 0.0};
        auto input = ComparisonInput::make(mean_ratio, exact, fam.fn, 3);
        auto sol = solve_comparison(input, settings.t_max, settings.ode_rel_tol);

        // Decay integrals through the quadrature kernel vs closed form.
        auto c_quad = decay_constants(fam.fn, 1e-10);
        detail::record(decay_oracle, 1e-8 - std::abs(c_quad.b0 - fam.b0_exact), tol, id);
        detail::record(decay_oracle, 1e-8 - std::abs(c_quad.b1 - fam.b1_exact), tol, id);

        // Sandwich and slope cap on the solver's own nodes.
        for (std::size_t i = 0; i < sol.y.grid.size(); ++i) {
            const double t = sol.y.grid[i];
            const double y = sol.y.values[i];
            const double X = sol.majorant(t);
            detail::record(sandwich, (y - sol.minorant(t)) / std::max(1.0, y), tol, id);
            detail::record(sandwich, (X - y) / std::max(1.0, X), tol, id);
            detail::record(slope_cap,
                           (sol.majorant_slope - sol.y.derivatives[i]) /
                               std::max(1.0, sol.majorant_slope),
                           tol, id);
        }

        detail::record(initial_slope, -theta_initial_slope(input), tol, id);

        // y' X - X' y is nondecreasing; adjacent nodes share their error
        // history, so differences resolve at the local-error level.
        double prev_num = sol.y.derivatives[0] * sol.majorant(0.0) -
                          sol.majorant_slope * sol.y.values[0];
        for (std::size_t i = 1; i < sol.y.grid.size(); ++i) {
            const double num = sol.y.derivatives[i] * sol.majorant(sol.y.grid[i]) -
                               sol.majorant_slope * sol.y.values[i];
            detail::record(numerator,
                           (num - prev_num) / std::max({1.0, std::abs(num), std::abs(prev_num)}),
                           tol, id);
            prev_num = num;
        }

        // Integrated form of the first comparison estimate (mean ratio != 0).
        if (std::abs(mean_ratio) > 0) {
            const double habs = std::abs(mean_ratio);
            for (double t : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
                const double lhs = std::log(sol.y.derivative(t));
                auto inner = [&fam, habs](double s) {
                    return fam.fn(s) / (habs + habs * fam.moment1(s) + fam.moment0(s));
                };
                const double mid = numerics::integrate(inner, 0.0, t, 1e-11).value;
                const double rhs = fam.moment1(t) + mid + std::log(habs);
                detail::record(log_ineq, (rhs - lhs) / std::max(1.0, std::abs(rhs)), tol, id);
            }
        }

        for (double t : {1.0, 5.0, 10.0, 25.0, 40.0}) {
            const double eps = 1e-4 * std::max(1.0, t);
            const double fd = (sol.y.value(t + eps) - sol.y.value(t - eps)) / (2 * eps);
            const double dev = std::abs(fd - sol.y.derivative(t)) /
                               std::max(1.0, std::abs(sol.y.derivative(t)));
            detail::record(gradient, 1e-6 - dev, tol, id);
        }
    }

    // Builtin slices: J/y stays nonincreasing along the outward ray.
    struct SliceCase {
        WarpedProduct W;
        double r0;
        std::string desc;
    };
    std::vector<SliceCase> slices;
    slices.push_back({schwarzschild(2.0, 3), 0.0, "schwarzschild m=2 r0=0"});
    slices.push_back({schwarzschild(2.0, 3), 1.0, "schwarzschild m=2 r0=1"});
    slices.push_back({cone(1.0, 1.0, FiberManifold::unit_sphere(2)), 0.0, "cone slope=1 r0=0"});
    slices.push_back({reissner_nordstrom(3.0, 1.0, 3), 0.0, "reissner-nordstrom r0=0"});
    for (const auto& sc : slices) {
        auto lambda = envelope_lambda(sc.W);
        auto c = decay_constants(lambda, 1e-10);
        auto input = slice_comparison_input(sc.W, sc.r0, lambda, c);
        auto sol = solve_comparison(input, settings.t_max, settings.ode_rel_tol);
        std::vector<double> grid;
        for (double t = 0.0; t <= settings.t_max; t += 0.5) grid.push_back(t);
        try {
            auto rep = monotone_ratio_check(sc.W, sc.r0, sol, grid, tol);
            detail::record(jac_ratio, rep.min_ratio_decrement, tol, sc.desc);
            detail::record(jac_ratio, -rep.max_sup_violation, tol, sc.desc);
        } catch (const MonotonicityViolated&) {
            detail::record(jac_ratio, -1.0, tol, sc.desc);
        }
    }

    return {sandwich, slope_cap, initial_slope, numerator, log_ineq, decay_oracle, gradient,
            jac_ratio};
}

}  // namespace wv::checks
