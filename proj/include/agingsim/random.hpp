// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <random>

#include "agingsim/types.hpp"

namespace agingsim {

/// Seed for work item `index` under `master`. Independent of scheduling, so a
/// parallel run reproduces a serial one bit for bit.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Single-owner random source (64-bit Mersenne twister).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return uniform_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_(engine_); }
    double normal() { return normal_(engine_); }

    /// Circularly-symmetric CN(0, 1) sample.
    cplx complex_normal();
    /// Vector of i.i.d. CN(0, 1) entries.
    CVector complex_normal(Eigen::Index n);

    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace agingsim
