// SPDX-License-Identifier: Apache-2.0
//
// Random valid multi-cell inputs for property tests: Hermitian positive
// definite covariances with random gains and random power / noise levels.

#pragma once

#include "agingsim/covariance.hpp"
#include "agingsim/montecarlo.hpp"
#include "agingsim/random.hpp"

namespace support {

struct RandomNetwork {
    agingsim::CovarianceSet covs;
    agingsim::SystemParams params;
};

inline agingsim::CMatrix random_covariance(int nt, double gain, agingsim::Rng &rng) {
    agingsim::CMatrix a(nt, nt);
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < nt; ++j)
            a(i, j) = rng.complex_normal();
    agingsim::CMatrix r = a * a.adjoint();
    r.diagonal().array() += 0.05 * nt;
    r *= gain * nt / r.trace().real();
    return 0.5 * (r + r.adjoint());
}

inline RandomNetwork random_network(agingsim::Rng &rng, int max_cells = 3, int max_users = 3, int max_nt = 8) {
    const int cells = 1 + static_cast<int>(rng.uniform() * max_cells);
    const int users = 1 + static_cast<int>(rng.uniform() * max_users);
    const int nt = 2 + static_cast<int>(rng.uniform() * (max_nt - 1));
    RandomNetwork n{agingsim::CovarianceSet(cells, users, nt), {}};
    for (int b = 0; b < cells; ++b)
        for (int c = 0; c < cells; ++c)
            for (int u = 0; u < users; ++u) {
                // Strong own-cell links, weaker cross links.
                const double gain = (b == c ? 1.0 : 0.05) * std::pow(10.0, rng.uniform(-1.0, 1.0));
                n.covs.set(b, c, u, random_covariance(nt, gain, rng));
            }
    n.params.pilot = agingsim::PilotConfig{users, users + static_cast<int>(rng.uniform() * 3),
                                           std::pow(10.0, rng.uniform(-1.0, 1.0)), std::pow(10.0, rng.uniform(-1.0, 0.5))};
    n.params.ul_power = std::pow(10.0, rng.uniform(-0.5, 1.5));
    n.params.dl_power = std::pow(10.0, rng.uniform(-0.5, 1.5));
    n.params.ue_noise = std::pow(10.0, rng.uniform(-1.0, 0.5));
    return n;
}

} // namespace support
