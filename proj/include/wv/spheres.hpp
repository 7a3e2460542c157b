#pragma once

#include <cmath>

#include "wv/errors.hpp"

namespace wv {

/// Area of the unit sphere S^d embedded in R^{d+1}, via log-Gamma so large
/// dimensions cannot overflow.
inline double unit_sphere_area(int sphere_dim) {
    if (sphere_dim < 0) throw InvalidParameters("unit_sphere_area: dimension must be >= 0");
    const double k = 0.5 * (sphere_dim + 1);
    return 2.0 * std::exp(k * std::log(M_PI) - std::lgamma(k));
}

/// Volume of the unit ball B^n.
inline double unit_ball_volume(int n) {
    if (n < 1) throw InvalidParameters("unit_ball_volume: dimension must be >= 1");
    return unit_sphere_area(n - 1) / n;
}

}  // namespace wv
