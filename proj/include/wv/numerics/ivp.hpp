#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "wv/errors.hpp"

namespace wv::numerics {

/// Dense trajectory of a scalar second-order IVP y'' = f(t, y).
///
/// Stores the accepted integration nodes together with y, y' and y'' and
/// evaluates between nodes with cubic Hermite interpolation, so values at
/// the nodes themselves are reproduced exactly.
class Trajectory {
  public:
    std::vector<double> grid;          // accepted abscissae, grid[0] is the IVP origin
    std::vector<double> values;        // y at the nodes
    std::vector<double> derivatives;   // y' at the nodes
    std::vector<double> second;        // y'' at the nodes (right-hand side values)
    std::vector<double> local_errors;  // scaled local error per accepted step, <= tolerance_used
    double tolerance_used = 0.0;
    double global_error_estimate = 0.0;

    double t_front() const { return grid.front(); }
    double t_back() const { return grid.back(); }

    // Quintic two-point Taylor interpolation of y; exact at the nodes and
    // one order beyond the fifth-order steps between them.
    double value(double t) const {
        if (grid.size() == 1) return values.front();
        const std::size_t i = segment(t);
        const double h = grid[i + 1] - grid[i];
        const double s = (t - grid[i]) / h;
        const double A = values[i + 1] - values[i] - derivatives[i] * h - 0.5 * second[i] * h * h;
        const double B = (derivatives[i + 1] - derivatives[i]) * h - second[i] * h * h;
        const double C = (second[i + 1] - second[i]) * h * h;
        const double s3 = s * s * s;
        return values[i] + derivatives[i] * h * s + 0.5 * second[i] * h * h * s * s +
               s3 * ((10 * A - 4 * B + 0.5 * C) +
                     s * ((-15 * A + 7 * B - C) + s * (6 * A - 3 * B + 0.5 * C)));
    }

    double derivative(double t) const { return hermite(t, derivatives, second); }

  private:
    // Cubic Hermite on the segment containing t, using ys and their slopes.
    double hermite(double t, const std::vector<double>& ys, const std::vector<double>& slopes) const {
        if (grid.size() == 1) return ys.front();
        std::size_t i = segment(t);
        const double h = grid[i + 1] - grid[i];
        const double s = (t - grid[i]) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        return h00 * ys[i] + h10 * h * slopes[i] + h01 * ys[i + 1] + h11 * h * slopes[i + 1];
    }

    std::size_t segment(double t) const {
        if (t <= grid.front()) return 0;
        if (t >= grid.back()) return grid.size() - 2;
        auto it = std::upper_bound(grid.begin(), grid.end(), t);
        return static_cast<std::size_t>(it - grid.begin()) - 1;
    }
};

namespace detail {

// Dormand-Prince 5(4) pair with FSAL, applied to the first-order system
// u = (y, v), u' = (v, f(t, y)).
template <class Accel>
Trajectory dormand_prince(Accel&& accel, double t0, double y0, double v0, double t_end,
                          double rel_tol, double abs_tol) {
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                     e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                     e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

    auto rhs_y = [](double /*t*/, double /*y*/, double v) { return v; };
    auto rhs_v = [&accel](double t, double y, double /*v*/) {
        const double a = accel(t, y);
        if (!std::isfinite(a))
            throw NonFiniteCoefficient("ODE right-hand side is not finite at t = " + std::to_string(t));
        return a;
    };

    Trajectory out;
    out.tolerance_used = rel_tol;

    double t = t0, y = y0, v = v0;
    double k1y = rhs_y(t, y, v), k1v = rhs_v(t, y, v);
    out.grid.push_back(t);
    out.values.push_back(y);
    out.derivatives.push_back(v);
    out.second.push_back(k1v);

    const double span = t_end - t0;
    double h = std::min(span, 0.01 * std::max(1e-6, std::abs(span)) /
                                  (1.0 + std::max(std::abs(k1y), std::abs(k1v))));
    h = std::max(h, span * 1e-12);

    const double eps = std::numeric_limits<double>::epsilon();
    std::size_t steps = 0;
    constexpr std::size_t max_steps = 40'000'000;

    while (t < t_end) {
        if (++steps > max_steps)
            throw ToleranceNotReached("ODE step budget exhausted before reaching t_end");
        if (h < 16 * eps * std::max(1.0, std::abs(t)))
            throw StepUnderflow("ODE step size collapsed at t = " + std::to_string(t));
        if (t + h > t_end) h = t_end - t;

        const double y2 = y + h * a21 * k1y, v2 = v + h * a21 * k1v;
        const double k2y = rhs_y(t + c2 * h, y2, v2), k2v = rhs_v(t + c2 * h, y2, v2);
        const double y3 = y + h * (a31 * k1y + a32 * k2y), v3 = v + h * (a31 * k1v + a32 * k2v);
        const double k3y = rhs_y(t + c3 * h, y3, v3), k3v = rhs_v(t + c3 * h, y3, v3);
        const double y4 = y + h * (a41 * k1y + a42 * k2y + a43 * k3y),
                     v4 = v + h * (a41 * k1v + a42 * k2v + a43 * k3v);
        const double k4y = rhs_y(t + c4 * h, y4, v4), k4v = rhs_v(t + c4 * h, y4, v4);
        const double y5 = y + h * (a51 * k1y + a52 * k2y + a53 * k3y + a54 * k4y),
                     v5 = v + h * (a51 * k1v + a52 * k2v + a53 * k3v + a54 * k4v);
        const double k5y = rhs_y(t + c5 * h, y5, v5), k5v = rhs_v(t + c5 * h, y5, v5);
        const double y6 = y + h * (a61 * k1y + a62 * k2y + a63 * k3y + a64 * k4y + a65 * k5y),
                     v6 = v + h * (a61 * k1v + a62 * k2v + a63 * k3v + a64 * k4v + a65 * k5v);
        const double k6y = rhs_y(t + h, y6, v6), k6v = rhs_v(t + h, y6, v6);

        const double ynew = y + h * (b1 * k1y + b3 * k3y + b4 * k4y + b5 * k5y + b6 * k6y);
        const double vnew = v + h * (b1 * k1v + b3 * k3v + b4 * k4v + b5 * k5v + b6 * k6v);
        const double k7y = rhs_y(t + h, ynew, vnew), k7v = rhs_v(t + h, ynew, vnew);

        const double ey = h * (e1 * k1y + e3 * k3y + e4 * k4y + e5 * k5y + e6 * k6y + e7 * k7y);
        const double ev = h * (e1 * k1v + e3 * k3v + e4 * k4v + e5 * k5v + e6 * k6v + e7 * k7v);
        const double scy = abs_tol + rel_tol * std::max(std::abs(y), std::abs(ynew));
        const double scv = abs_tol + rel_tol * std::max(std::abs(v), std::abs(vnew));
        const double err = std::sqrt(0.5 * ((ey / scy) * (ey / scy) + (ev / scv) * (ev / scv)));

        if (err <= 1.0) {
            t += h;
            y = ynew;
            v = vnew;
            k1y = k7y;
            k1v = k7v;
            out.grid.push_back(t);
            out.values.push_back(y);
            out.derivatives.push_back(v);
            out.second.push_back(k1v);
            out.local_errors.push_back(err * rel_tol);
            out.global_error_estimate += std::abs(ey);
        }
        const double factor = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        h *= factor;
    }
    return out;
}

}  // namespace detail

/// Solves y''(t) = lambda(t) * y(t), y(0) = y0, y'(0) = y0p on [0, t_max].
///
/// The coefficient must evaluate finite on [0, t_max]; rel_tol must lie in
/// (0, 1e-3]. Local error per accepted step is kept at or below rel_tol in
/// the mixed relative/absolute norm used by the controller.
template <class Lambda>
Trajectory solve_ivp(Lambda&& lambda, double y0, double y0p, double t_max, double rel_tol) {
    if (!(t_max > 0)) throw InvalidParameters("solve_ivp: t_max must be positive");
    if (!(rel_tol > 0) || rel_tol > 1e-3)
        throw InvalidParameters("solve_ivp: rel_tol must lie in (0, 1e-3]");
    auto accel = [&lambda](double t, double y) { return lambda(t) * y; };
    return detail::dormand_prince(accel, 0.0, y0, y0p, t_max, rel_tol, rel_tol * 1e-2);
}

/// Integrates the general second-order IVP y'' = accel(t, y); used for warp
/// profiles where the acceleration depends on the value rather than on t.
template <class Accel>
Trajectory solve_second_order(Accel&& accel, double y0, double y0p, double t_max, double rel_tol,
                              double abs_tol) {
    if (!(t_max > 0)) throw InvalidParameters("solve_second_order: t_max must be positive");
    return detail::dormand_prince(accel, 0.0, y0, y0p, t_max, rel_tol, abs_tol);
}

}  // namespace wv::numerics
