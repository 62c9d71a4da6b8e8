// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agingsim/covariance.hpp"
#include "agingsim/detequiv.hpp"
#include "agingsim/prediction.hpp"
#include "agingsim/temporal.hpp"
#include "agingsim/training.hpp"
#include "agingsim/types.hpp"

namespace agingsim {

struct SystemParams {
    PilotConfig pilot;     ///< also carries sigma_b^2
    double ul_power = 1.0; ///< p_r
    double dl_power = 1.0; ///< p_f
    double ue_noise = 1.0; ///< sigma_bu^2

    UplinkParams uplink() const { return {ul_power, pilot.noise_variance}; }
    DownlinkParams downlink() const { return {dl_power, ue_noise}; }
};

struct CsiScenario {
    CsiKind kind = CsiKind::aged;
    int order = 0; ///< predictor order, predicted CSI only

    void validate() const;
    std::string label() const;
};

// ---- realized SINRs ------------------------------------------------------

struct UplinkSinr {
    double signal = 0.0;       ///< |g^H g|^2
    double interference = 0.0; ///< estimation error + noise + other users
    double sinr = 0.0;         ///< +inf when interference < kInfiniteSinrFloor
};

inline constexpr double kInfiniteSinrFloor = 1e-30;

/// MRC with w = g. `interferers` holds h_bck[n+1] for every (c,k) != (b,u).
/// Throws DegenerateDraw for a zero-norm combiner.
UplinkSinr ul_realized_sinr(const CVector &g, const CVector &h_own, std::span<const CVector *const> interferers,
                            double noise_over_power);

/// lambda = 1 / mean_t tr(F_t F_t^H), from the per-sample traces.
double mf_normalization(std::span<const double> traces);
double mf_normalization(std::span<const CMatrix> precoders);

/// Running moments of h_bbu^H f_bu and of the other users' leakage
/// sum_k |h_cbu^H f_ck|^2 per interfering base station c.
class DownlinkAccumulator {
public:
    explicit DownlinkAccumulator(int num_cells = 1);

    void add(cplx useful, std::span<const double> leakage_per_cell);
    std::size_t count() const { return n_; }
    cplx mean_useful() const { return mean_; }
    double var_useful() const { return n_ ? m2_ / static_cast<double>(n_) : 0.0; }
    double mean_leakage(int c) const;
    int num_cells() const { return static_cast<int>(leakage_.size()); }

private:
    std::size_t n_ = 0;
    cplx mean_{0.0, 0.0};
    double m2_ = 0.0;
    std::vector<double> leakage_;
};

inline constexpr std::size_t kMinInnerSamples = 100;

/// Worst-case-noise downlink SINR from estimated expectations:
/// lambda_b |E h^H f|^2 / (lambda_b var(h^H f) + sum_c lambda_c E leak_c + sigma^2/p_f).
double dl_realized_sinr(const DownlinkAccumulator &acc, std::span<const double> lambda, int serving_cell,
                        double noise_over_power);

struct ErgodicRate {
    double mean = 0.0;
    std::size_t n_used = 0;
    std::size_t n_infinite = 0;
};

/// Mean of log2(1 + eta), +inf samples excluded and counted.
ErgodicRate ergodic_rate(std::span<const double> sinr);

// ---- trial engine --------------------------------------------------------

struct TrialEngineConfig {
    std::size_t num_trials = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    double alpha = 1.0; ///< Gauss-Markov correlation between consecutive samples
    /// When set, channels follow this AR(L) model instead of Gauss-Markov with alpha.
    std::optional<TemporalModel> trace_model;
    /// 0: downlink expectations pooled over all trials. Otherwise trials are
    /// split into blocks of this size, one downlink SINR per block.
    std::size_t inner_size = 0;
    /// Users whose SINRs are collected; empty means every user of cell 0.
    std::vector<UserIndex> targets;
    bool uplink = true;
    bool downlink = true;
    PredictorSolver solver = PredictorSolver::kAuto;
};

struct UplinkSamples {
    std::vector<double> sinr;
    double mean_signal = 0.0;
    double mean_interference = 0.0;
    std::size_t n_degenerate = 0;

    /// mean(S) / mean(I)
    double power_averaged_sinr() const { return mean_signal / mean_interference; }
};

struct DownlinkEstimate {
    double pooled_sinr = 0.0;
    std::vector<double> block_sinr; ///< nested mode only
    double lambda = 0.0;            ///< serving cell's pooled normalization
};

struct ScenarioResult {
    CsiScenario scenario;
    std::vector<UplinkSamples> uplink;     ///< per target
    std::vector<DownlinkEstimate> downlink; ///< per target
    std::vector<double> lambda;            ///< pooled per cell
};

struct McResult {
    std::vector<UserIndex> targets;
    std::vector<ScenarioResult> scenarios;
    std::size_t num_trials = 0;
};

McResult run_trials(const CovarianceSet &covs, const SystemParams &params, const std::vector<CsiScenario> &scenarios,
                    const TrialEngineConfig &config);

// ---- validation ----------------------------------------------------------

/// Scalar-covariance network R_bcu = beta(b, c) I.
struct ScalarNetwork {
    RMatrix beta;
    int num_users = 1;
    SystemParams params;

    /// Two cells, beta_bb = 1, beta_bc = 0.3, sigma^2/(p_p tau) = 0.1,
    /// sigma^2/p_r = 0.05, sigma_bu^2/p_f = 0.05.
    static ScalarNetwork two_cell(int num_users = 1);
    CovarianceSet covariances(Eigen::Index num_antennas) const;
};

struct ValidationRow {
    Eigen::Index num_antennas = 0;
    Direction direction = Direction::uplink;
    CsiScenario scenario;
    double alpha = 1.0;
    double eta = 0.0;        ///< deterministic equivalent
    double mc_sinr = 0.0;    ///< uplink: mean of per-trial SINR; downlink: pooled (or block mean)
    double mc_power_sinr = 0.0; ///< uplink: mean(S)/mean(I); downlink: pooled
    double rel_error = 0.0;  ///< |mc_sinr - eta| / eta
    double rel_error_power = 0.0;
    std::size_t n_used = 0;
    std::size_t n_infinite = 0;
    std::size_t n_degenerate = 0;
};

struct ValidationConfig {
    std::vector<Eigen::Index> antennas{16, 32, 64, 128};
    CsiScenario scenario;
    Direction direction = Direction::uplink;
    double alpha = 0.9;
    TrialEngineConfig engine;
};

std::vector<ValidationRow> validate_detequiv(const ScalarNetwork &net, const ValidationConfig &config);

/// Deterministic equivalent of one user under a scenario (current ignores alpha).
SinrBreakdown deterministic_sinr(const CovarianceSet &covs, const SystemParams &params, const CsiScenario &scenario,
                                 Direction direction, double alpha, UserIndex target);

} // namespace agingsim
