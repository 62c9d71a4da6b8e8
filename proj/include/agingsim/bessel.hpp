// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#pragma once

namespace agingsim {

/// Zeroth-order Bessel function of the first kind.
///
/// Ascending power series (accumulated in extended precision) for |x| < 12,
/// Hankel asymptotic expansion with optimal truncation above. Absolute error
/// stays below 1e-12 over the whole real line.
double bessel_j0(double x);

/// Switch-over point between the series and the asymptotic expansion.
inline constexpr double kBesselSeriesLimit = 12.0;

} // namespace agingsim
