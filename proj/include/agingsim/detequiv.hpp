// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#pragma once

#include <vector>

#include "agingsim/covariance.hpp"
#include "agingsim/prediction.hpp"
#include "agingsim/training.hpp"
#include "agingsim/types.hpp"

namespace agingsim {

// Second-order CSI statistics of one user (b, u): X_bbu is Phi_bbu for
// estimated CSI or Theta_bbu(p, alpha) for predicted CSI, plus the traces of
// the cross terms X_bcu for every cell c.
struct CsiStatistics {
    int base = 0;
    int user = 0;
    CMatrix own;
    std::vector<cplx> cross_trace;
};

CsiStatistics csi_statistics(const EstimationContext &ctx);
CsiStatistics csi_statistics(const PredictorContext &ctx);

// Statistics for every user of every cell, as needed by the downlink terms.
class CsiStatisticsTable {
public:
    CsiStatisticsTable() = default;
    CsiStatisticsTable(int num_cells, int num_users);

    int num_cells() const { return cells_; }
    int num_users() const { return users_; }
    void set(CsiStatistics stats);
    const CsiStatistics &at(int b, int u) const;

private:
    int cells_ = 0;
    int users_ = 0;
    std::vector<CsiStatistics> stats_;
    std::vector<bool> present_;
};

CsiStatisticsTable estimation_table(const CovarianceSet &covs, const PilotConfig &pilot);
CsiStatisticsTable prediction_table(const CovarianceSet &covs, const PilotConfig &pilot, int order, double alpha,
                                    PredictorSolver solver = PredictorSolver::kAuto);

/// How the predicted-CSI pilot contamination term is weighted. `consistent`
/// uses the same E as the aged expressions (Theta in place of Phi). `printed`
/// multiplies E by alpha^(2p); kept for comparison only, it disagrees with
/// simulation for p >= 1.
enum class EtermForm { consistent, printed };

struct SinrBreakdown {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double D = 0.0;
    double E = 0.0;
    double lambda_bar = 0.0; ///< downlink only; +inf at alpha = 0
    double eta = 0.0;
    double rate = 0.0;
    CsiKind scenario = CsiKind::aged;
    Direction direction = Direction::uplink;
    int order = 0;
    double alpha = 1.0;
};

struct UplinkParams {
    double ul_power = 1.0;       ///< p_r
    double noise_variance = 1.0; ///< sigma_b^2
};

struct DownlinkParams {
    double dl_power = 1.0;       ///< p_f
    double noise_variance = 1.0; ///< sigma_bu^2
};

SinrBreakdown ul_sinr_aged(double alpha, const CsiStatisticsTable &est, const CovarianceSet &covs,
                           const UplinkParams &params, UserIndex target);
SinrBreakdown ul_sinr_current(const CsiStatisticsTable &est, const CovarianceSet &covs, const UplinkParams &params,
                              UserIndex target);
/// `pred` must have been built with the same order and alpha.
SinrBreakdown ul_sinr_predicted(int order, double alpha, const CsiStatisticsTable &pred, const CovarianceSet &covs,
                                const UplinkParams &params, UserIndex target,
                                EtermForm form = EtermForm::consistent);

SinrBreakdown dl_sinr_aged(double alpha, const CsiStatisticsTable &est, const CovarianceSet &covs,
                           const DownlinkParams &params, UserIndex target);
SinrBreakdown dl_sinr_current(const CsiStatisticsTable &est, const CovarianceSet &covs,
                              const DownlinkParams &params, UserIndex target);
SinrBreakdown dl_sinr_predicted(int order, double alpha, const CsiStatisticsTable &pred, const CovarianceSet &covs,
                                const DownlinkParams &params, UserIndex target,
                                EtermForm form = EtermForm::consistent);

/// log2(1 + eta); negative or NaN eta rejected.
double rate(double eta);

} // namespace agingsim
