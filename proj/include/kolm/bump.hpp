#pragma once

#include <cmath>

#include "kolm/errors.hpp"

namespace kolm {

/// m-th derivative of the standard bump exp(-1/(1-s^2)) on |s| < 1,
/// extended by zero. Orders 0..3 in closed form.
inline double bump(double s, int m = 0) {
    const double w = 1.0 - s * s;
    if (w <= 0.0)
        return 0.0;
    const double b = std::exp(-1.0 / w);
    if (m == 0)
        return b;
    const double g1 = -2.0 * s / (w * w);
    if (m == 1)
        return b * g1;
    const double g2 = -2.0 / (w * w) - 8.0 * s * s / (w * w * w);
    if (m == 2)
        return b * (g2 + g1 * g1);
    const double g3 = -24.0 * s / (w * w * w) - 48.0 * s * s * s / (w * w * w * w);
    if (m == 3)
        return b * (g3 + 3.0 * g1 * g2 + g1 * g1 * g1);
    throw IndexOutOfRangeError("bump: derivative order " + std::to_string(m) + " not supported");
}

} // namespace kolm
