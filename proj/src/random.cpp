// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#include "agingsim/random.hpp"

#include <numbers>

namespace agingsim {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ (index * 0xd1342543de82ef95ULL + 1));
}

cplx Rng::complex_normal() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re * kInvSqrt2, im * kInvSqrt2};
}

CVector Rng::complex_normal(Eigen::Index n) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = complex_normal();
    return v;
}

} // namespace agingsim
