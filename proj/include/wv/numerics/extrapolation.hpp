#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "wv/errors.hpp"

namespace wv::numerics {

struct ExtrapolationSample {
    double radius;
    double value;
};

struct LimitEstimate {
    double limit = 0.0;
    double error_estimate = 0.0;
};

/// Richardson limit of samples v(R) = L + a/R + b/R^2 + ... taken at
/// geometrically increasing radii (fixed ratio >= 2).
///
/// Polynomial extrapolation in x = 1/R to x = 0 (Neville); the reported
/// error is the last elimination increment, zero for exactly resolved
/// models such as constant sequences.
inline LimitEstimate extrapolate_limit(const std::vector<ExtrapolationSample>& samples) {
    const std::size_t n = samples.size();
    if (n < 3) throw InsufficientSamples("extrapolate_limit: need at least 3 samples");
    double ratio0 = samples[1].radius / samples[0].radius;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double ratio = samples[i + 1].radius / samples[i].radius;
        if (!(samples[i + 1].radius > samples[i].radius) || ratio < 2.0)
            throw InvalidParameters("extrapolate_limit: radii must increase by a fixed ratio >= 2");
        if (std::abs(ratio / ratio0 - 1.0) > 0.05)
            throw InvalidParameters("extrapolate_limit: radii ratio is not fixed");
    }

    std::vector<double> x(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = 1.0 / samples[i].radius;
        p[i] = samples[i].value;
    }

    std::vector<double> column_limits;  // accepted value after eliminating k orders
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = 0; i + k < n; ++i)
            p[i] = (x[i + k] * p[i] - x[i] * p[i + 1]) / (x[i + k] - x[i]);
        column_limits.push_back(p[0]);
    }

    // Successive eliminations must not diverge.
    for (std::size_t k = 2; k < column_limits.size(); ++k) {
        const double prev = std::abs(column_limits[k - 1] - column_limits[k - 2]);
        const double inc = std::abs(column_limits[k] - column_limits[k - 1]);
        const double scale = std::abs(column_limits[k]) + 1e-300;
        if (inc > 4.0 * prev + 1e-14 * scale)
            throw NonMonotoneTail("extrapolate_limit: elimination increments diverge");
    }

    LimitEstimate out;
    out.limit = column_limits.back();
    out.error_estimate =
        column_limits.size() >= 2
            ? std::abs(column_limits.back() - column_limits[column_limits.size() - 2])
            : std::abs(column_limits.back() - samples.back().value);
    return out;
}

}  // namespace wv::numerics
