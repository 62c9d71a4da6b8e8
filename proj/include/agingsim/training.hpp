// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#pragma once

#include <vector>

#include "agingsim/covariance.hpp"
#include "agingsim/random.hpp"
#include "agingsim/types.hpp"

namespace agingsim {

struct PilotConfig {
    int num_users = 1;
    int pilot_length = 1;       ///< tau >= U
    double pilot_power = 1.0;   ///< p_p
    double noise_variance = 1.0; ///< sigma_b^2 at the base station

    /// sigma_b^2 / (p_p tau), the effective noise on the despread observation.
    double noise_to_pilot() const;
    void validate() const;
};

/// Despread pilot observation at base b for pilot index u:
/// y = sum_c h_bcu + z / sqrt(p_p tau), z ~ CN(0, sigma_b^2 I).
/// `channels[c]` is h_bcu.
CVector pilot_observe(const std::vector<CVector> &channels, const PilotConfig &config, Rng &rng);

struct EstimationContext {
    int base = 0;
    int user = 0;
    CMatrix Rbar;              ///< sum_c R_bcu
    CMatrix Q;                 ///< (s I + Rbar)^-1
    CMatrix estimator;         ///< R_bbu Q, maps observation to estimate
    std::vector<CMatrix> Phi;  ///< Phi_bcu = R_bbu Q R_bcu, indexed by c

    const CMatrix &phi_own() const { return Phi.at(static_cast<std::size_t>(base)); }
};

EstimationContext mmse_context(const CovarianceSet &covs, const PilotConfig &config, int b, int u);

/// h_hat = R_bbu Q y.
CVector mmse_estimate(const CVector &observation, const EstimationContext &ctx);

} // namespace agingsim
