// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#include "agingsim/detequiv.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "agingsim/linalg.hpp"

namespace agingsim {

namespace {

// tr(R X) with R = gain * shape (shape null meaning identity).
double trace_cov_times(const CovarianceSet &covs, int b, int c, int k, const CMatrix &x) {
    const CMatrix *shape = covs.shape(b, c, k);
    const double g = covs.gain(b, c, k);
    if (!shape)
        return g * x.trace().real();
    return g * trace_product(*shape, x).real();
}

void check_alpha(double alpha) {
    if (!(std::fabs(alpha) <= 1.0))
        throw InvalidArgument("detequiv: |alpha| must not exceed 1");
}

void check_target(const CsiStatisticsTable &t, const CovarianceSet &covs, UserIndex target) {
    if (t.num_cells() != covs.num_cells() || t.num_users() != covs.num_users())
        throw DimensionMismatch("detequiv: statistics table and covariance set disagree in shape");
    if (target.cell < 0 || target.cell >= covs.num_cells() || target.user < 0 || target.user >= covs.num_users())
        throw InvalidArgument("detequiv: target user out of range");
}

SinrBreakdown ul_terms(double alpha, double e_weight, const CsiStatisticsTable &stats, const CovarianceSet &covs,
                       const UplinkParams &params, UserIndex target) {
    check_alpha(alpha);
    check_target(stats, covs, target);
    if (!(params.ul_power > 0.0))
        throw InvalidArgument("detequiv: uplink power must be positive");
    const int b = target.cell;
    const int u = target.user;
    const CsiStatistics &s = stats.at(b, u);
    const CMatrix &x = s.own;
    const double a2 = alpha * alpha;
    const double tr_x = x.trace().real();
    const CMatrix rbb = covs.matrix(b, b, u);

    SinrBreakdown out;
    out.direction = Direction::uplink;
    out.alpha = alpha;
    out.A = tr_x * tr_x;
    out.B = trace_product(rbb - a2 * x, x).real();
    out.C = params.noise_variance / params.ul_power * tr_x;
    for (int c = 0; c < covs.num_cells(); ++c)
        for (int k = 0; k < covs.num_users(); ++k)
            if (c != b || k != u)
                out.D += trace_cov_times(covs, b, c, k, x);
    for (int c = 0; c < covs.num_cells(); ++c)
        if (c != b)
            out.E += std::norm(s.cross_trace[static_cast<std::size_t>(c)]);
    out.E *= e_weight;
    const double den = out.B + out.C + out.D + a2 * out.E;
    out.eta = a2 * out.A == 0.0 ? 0.0 : a2 * out.A / den;
    out.rate = rate(out.eta);
    return out;
}

SinrBreakdown dl_terms(double alpha, double e_weight, const CsiStatisticsTable &stats, const CovarianceSet &covs,
                       const DownlinkParams &params, UserIndex target) {
    check_alpha(alpha);
    check_target(stats, covs, target);
    if (!(params.dl_power > 0.0))
        throw InvalidArgument("detequiv: downlink power must be positive");
    const int b = target.cell;
    const int u = target.user;
    const int cells = covs.num_cells();
    const int users = covs.num_users();
    const double a2 = alpha * alpha;

    // lambda_bar_c = (alpha^2 sum_k tr X_cck)^-1; carry the alpha-free part so
    // alpha = 0 stays finite.
    std::vector<double> lam0(static_cast<std::size_t>(cells));
    for (int c = 0; c < cells; ++c) {
        double t = 0.0;
        for (int k = 0; k < users; ++k)
            t += stats.at(c, k).own.trace().real();
        if (!(t > 0.0))
            throw SingularModel("detequiv: zero CSI energy in cell " + std::to_string(c));
        lam0[static_cast<std::size_t>(c)] = 1.0 / t;
    }

    const CsiStatistics &s = stats.at(b, u);
    const CMatrix &x = s.own;
    const double tr_x = x.trace().real();
    const CMatrix rbb = covs.matrix(b, b, u);

    // Terms without the lambda_bar alpha^-2 factor.
    const double a0 = lam0[static_cast<std::size_t>(b)] * tr_x * tr_x;
    const double b0 = lam0[static_cast<std::size_t>(b)] * trace_product(rbb - a2 * x, x).real();
    double d0 = 0.0;
    for (int c = 0; c < cells; ++c)
        for (int k = 0; k < users; ++k)
            if (c != b || k != u)
                d0 += lam0[static_cast<std::size_t>(c)] * trace_cov_times(covs, c, b, u, stats.at(c, k).own);
    double e0 = 0.0;
    for (int c = 0; c < cells; ++c)
        if (c != b)
            e0 += lam0[static_cast<std::size_t>(c)] * std::norm(stats.at(c, u).cross_trace[static_cast<std::size_t>(b)]);
    e0 *= e_weight;

    SinrBreakdown out;
    out.direction = Direction::downlink;
    out.alpha = alpha;
    out.C = params.noise_variance / params.dl_power;
    if (a2 == 0.0) {
        const double inf = std::numeric_limits<double>::infinity();
        out.lambda_bar = inf;
        out.A = a0 > 0.0 ? inf : 0.0;
        out.B = b0 > 0.0 ? inf : 0.0;
        out.D = d0 > 0.0 ? inf : 0.0;
        out.E = e0 > 0.0 ? inf : 0.0;
        out.eta = 0.0;
        out.rate = 0.0;
        return out;
    }
    out.lambda_bar = lam0[static_cast<std::size_t>(b)] / a2;
    out.A = a0 / a2;
    out.B = b0 / a2;
    out.D = d0 / a2;
    out.E = e0 / a2;
    // alpha^4 A / (alpha^2 B + C + alpha^2 D + alpha^4 E), with the alpha^-2 of
    // lambda_bar folded in.
    out.eta = a2 * a0 / (b0 + out.C + d0 + a2 * e0);
    out.rate = rate(out.eta);
    return out;
}

double e_weight_for(int order, double alpha, EtermForm form) {
    if (form == EtermForm::consistent)
        return 1.0;
    return std::pow(alpha * alpha, order);
}

} // namespace

CsiStatistics csi_statistics(const EstimationContext &ctx) {
    CsiStatistics s;
    s.base = ctx.base;
    s.user = ctx.user;
    s.own = ctx.phi_own();
    for (const auto &phi : ctx.Phi)
        s.cross_trace.push_back(phi.trace());
    return s;
}

CsiStatistics csi_statistics(const PredictorContext &ctx) {
    CsiStatistics s;
    s.base = ctx.base;
    s.user = ctx.user;
    s.own = ctx.theta_own();
    for (const auto &theta : ctx.Theta)
        s.cross_trace.push_back(theta.trace());
    return s;
}

CsiStatisticsTable::CsiStatisticsTable(int num_cells, int num_users)
    : cells_(num_cells), users_(num_users),
      stats_(static_cast<std::size_t>(num_cells * num_users)),
      present_(static_cast<std::size_t>(num_cells * num_users), false) {}

void CsiStatisticsTable::set(CsiStatistics stats) {
    if (stats.base < 0 || stats.base >= cells_ || stats.user < 0 || stats.user >= users_)
        throw InvalidArgument("CsiStatisticsTable: user out of range");
    if (stats.cross_trace.size() != static_cast<std::size_t>(cells_))
        throw DimensionMismatch("CsiStatisticsTable: cross-trace count must equal the cell count");
    const std::size_t i = static_cast<std::size_t>(stats.base * users_ + stats.user);
    stats_[i] = std::move(stats);
    present_[i] = true;
}

const CsiStatistics &CsiStatisticsTable::at(int b, int u) const {
    if (b < 0 || b >= cells_ || u < 0 || u >= users_)
        throw InvalidArgument("CsiStatisticsTable: user out of range");
    const std::size_t i = static_cast<std::size_t>(b * users_ + u);
    if (!present_[i])
        throw InvalidArgument("CsiStatisticsTable: missing statistics for user (" + std::to_string(b) + "," +
                              std::to_string(u) + ")");
    return stats_[i];
}

CsiStatisticsTable estimation_table(const CovarianceSet &covs, const PilotConfig &pilot) {
    CsiStatisticsTable t(covs.num_cells(), covs.num_users());
    for (int b = 0; b < covs.num_cells(); ++b)
        for (int u = 0; u < covs.num_users(); ++u)
            t.set(csi_statistics(mmse_context(covs, pilot, b, u)));
    return t;
}

CsiStatisticsTable prediction_table(const CovarianceSet &covs, const PilotConfig &pilot, int order, double alpha,
                                    PredictorSolver solver) {
    CsiStatisticsTable t(covs.num_cells(), covs.num_users());
    PredictorOptions opts;
    opts.solver = solver;
    opts.with_taps = false;
    for (int b = 0; b < covs.num_cells(); ++b)
        for (int u = 0; u < covs.num_users(); ++u)
            t.set(csi_statistics(build_predictor(covs, pilot, b, u, order, alpha, opts)));
    return t;
}

SinrBreakdown ul_sinr_aged(double alpha, const CsiStatisticsTable &est, const CovarianceSet &covs,
                           const UplinkParams &params, UserIndex target) {
    SinrBreakdown out = ul_terms(alpha, 1.0, est, covs, params, target);
    out.scenario = CsiKind::aged;
    return out;
}

SinrBreakdown ul_sinr_current(const CsiStatisticsTable &est, const CovarianceSet &covs, const UplinkParams &params,
                              UserIndex target) {
    SinrBreakdown out = ul_terms(1.0, 1.0, est, covs, params, target);
    out.scenario = CsiKind::current;
    return out;
}

SinrBreakdown ul_sinr_predicted(int order, double alpha, const CsiStatisticsTable &pred, const CovarianceSet &covs,
                                const UplinkParams &params, UserIndex target, EtermForm form) {
    if (order < 0)
        throw InvalidArgument("ul_sinr_predicted: order must be nonnegative");
    SinrBreakdown out = ul_terms(alpha, e_weight_for(order, alpha, form), pred, covs, params, target);
    out.scenario = CsiKind::predicted;
    out.order = order;
    return out;
}

SinrBreakdown dl_sinr_aged(double alpha, const CsiStatisticsTable &est, const CovarianceSet &covs,
                           const DownlinkParams &params, UserIndex target) {
    SinrBreakdown out = dl_terms(alpha, 1.0, est, covs, params, target);
    out.scenario = CsiKind::aged;
    return out;
}

SinrBreakdown dl_sinr_current(const CsiStatisticsTable &est, const CovarianceSet &covs,
                              const DownlinkParams &params, UserIndex target) {
    SinrBreakdown out = dl_terms(1.0, 1.0, est, covs, params, target);
    out.scenario = CsiKind::current;
    return out;
}

SinrBreakdown dl_sinr_predicted(int order, double alpha, const CsiStatisticsTable &pred, const CovarianceSet &covs,
                                const DownlinkParams &params, UserIndex target, EtermForm form) {
    if (order < 0)
        throw InvalidArgument("dl_sinr_predicted: order must be nonnegative");
    SinrBreakdown out = dl_terms(alpha, e_weight_for(order, alpha, form), pred, covs, params, target);
    out.scenario = CsiKind::predicted;
    out.order = order;
    return out;
}

double rate(double eta) {
    if (!(eta >= 0.0))
        throw InvalidArgument("rate: SINR must be nonnegative");
    return std::log2(1.0 + eta);
}

} // namespace agingsim
