// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#include "agingsim/training.hpp"

#include <cmath>

#include "agingsim/linalg.hpp"

namespace agingsim {

double PilotConfig::noise_to_pilot() const {
    return noise_variance / (pilot_power * static_cast<double>(pilot_length));
}

void PilotConfig::validate() const {
    if (num_users < 1)
        throw InvalidArgument("PilotConfig: need at least one user");
    if (pilot_length < num_users)
        throw InvalidArgument("PilotConfig: pilot length must be at least the number of users");
    if (!(pilot_power > 0.0))
        throw InvalidArgument("PilotConfig: pilot power must be positive");
    if (!(noise_variance >= 0.0))
        throw InvalidArgument("PilotConfig: noise variance must be nonnegative");
}

CVector pilot_observe(const std::vector<CVector> &channels, const PilotConfig &config, Rng &rng) {
    if (channels.empty())
        throw InvalidArgument("pilot_observe: no channels");
    const Eigen::Index nt = channels.front().size();
    CVector y = CVector::Zero(nt);
    for (const auto &h : channels) {
        if (h.size() != nt)
            throw DimensionMismatch("pilot_observe: channel lengths differ");
        y += h;
    }
    const double s = config.noise_to_pilot();
    if (s > 0.0)
        y += std::sqrt(s) * rng.complex_normal(nt);
    return y;
}

EstimationContext mmse_context(const CovarianceSet &covs, const PilotConfig &config, int b, int u) {
    config.validate();
    EstimationContext ctx;
    ctx.base = b;
    ctx.user = u;
    ctx.Rbar = covs.rbar(b, u);
    CMatrix k = ctx.Rbar;
    k.diagonal().array() += config.noise_to_pilot();
    ctx.Q = hpd_inverse(k, "mmse_context");
    ctx.estimator = covs.matrix(b, b, u) * ctx.Q;
    ctx.Phi.reserve(static_cast<std::size_t>(covs.num_cells()));
    for (int c = 0; c < covs.num_cells(); ++c)
        ctx.Phi.push_back(ctx.estimator * covs.matrix(b, c, u));
    ctx.Phi[static_cast<std::size_t>(b)] = hermitian_part(ctx.Phi[static_cast<std::size_t>(b)]);
    return ctx;
}

CVector mmse_estimate(const CVector &observation, const EstimationContext &ctx) {
    if (observation.size() != ctx.estimator.cols())
        throw DimensionMismatch("mmse_estimate: observation length mismatch");
    return ctx.estimator * observation;
}

} // namespace agingsim
