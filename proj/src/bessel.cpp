// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#include "agingsim/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace agingsim {
namespace {

double j0_series(double x) {
    // sum_k (-1)^k (x^2/4)^k / (k!)^2; terms peak near k = x/2 so the long
    // double accumulator absorbs the cancellation for x < 12.
    const long double q = static_cast<long double>(x) * x / 4.0L;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (static_cast<long double>(k) * k);
        sum += term;
        if (std::fabs(term) < 1e-22L * std::fabs(sum) && std::fabs(term) < 1e-24L)
            break;
    }
    return static_cast<double>(sum);
}

double j0_hankel(double x) {
    // J0(x) = sqrt(2/(pi x)) (P cos(chi) - Q sin(chi)), chi = x - pi/4, with
    // a_k = a_{k-1} * (-(2k-1)^2) / (8k) and
    //   P = sum_m (-1)^m a_{2m} / x^{2m},  Q = sum_m (-1)^m a_{2m+1} / x^{2m+1}.
    // Truncated at the smallest term.
    double p = 1.0;
    double q = 0.0;
    double a = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    double xk = 1.0;
    for (int k = 1; k < 120; ++k) {
        const double odd = 2.0 * k - 1.0;
        a *= -(odd * odd) / (8.0 * k);
        xk *= x;
        const double t = a / xk;
        if (std::fabs(t) >= prev)
            break;
        prev = std::fabs(t);
        // k even -> P term with sign (-1)^{k/2}; k odd -> Q term (-1)^{(k-1)/2}.
        const int m = k / 2;
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0)
            p += sign * t;
        else
            q += sign * t;
        if (prev < 1e-17)
            break;
    }
    const double s = std::sin(x);
    const double c = std::cos(x);
    const double cos_chi = (c + s) / std::numbers::sqrt2;
    const double sin_chi = (s - c) / std::numbers::sqrt2;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

} // namespace

double bessel_j0(double x) {
    if (std::isnan(x))
        return x;
    x = std::fabs(x);
    if (std::isinf(x))
        return 0.0;
    return x < kBesselSeriesLimit ? j0_series(x) : j0_hankel(x);
}

} // namespace agingsim
