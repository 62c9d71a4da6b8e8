// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#pragma once

#include <vector>

namespace agingsim {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi]. Rules on [-1, 1] are cached.
QuadratureRule gauss_legendre(int n, double lo, double hi);

} // namespace agingsim
