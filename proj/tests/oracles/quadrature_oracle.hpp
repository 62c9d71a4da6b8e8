// SPDX-License-Identifier: Apache-2.0
//
// Adaptive Simpson integration and the uniform-hexagon mean distance, both
// independent of the library's Gauss-Legendre code.

#pragma once

#include <cmath>
#include <numbers>

namespace oracle {

template <class F> double simpson_step(F &f, double a, double b, double fa, double fm, double fb, double whole,
                                       double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

template <class F> double adaptive_simpson(F f, double a, double b, double tol = 1e-10, int depth = 50) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

/// Mean distance from the center of a regular hexagon with inscribed radius
/// `apothem` to a uniform point in it, excluding a disc of radius r0:
/// integral of sec^3 over one of twelve right triangles, minus the disc.
inline double hexagon_mean_distance(double apothem, double r0 = 0.0) {
    const double sec = 2.0 / std::sqrt(3.0);
    const double tan = 1.0 / std::sqrt(3.0);
    const double int_sec3 = 0.5 * (sec * tan + std::log(sec + tan));
    const double area = 2.0 * std::sqrt(3.0) * apothem * apothem;
    const double moment = 12.0 * apothem * apothem * apothem / 3.0 * int_sec3; // int r dA
    const double disc_area = std::numbers::pi * r0 * r0;
    const double disc_moment = 2.0 * std::numbers::pi * r0 * r0 * r0 / 3.0;
    return (moment - disc_moment) / (area - disc_area);
}

} // namespace oracle
