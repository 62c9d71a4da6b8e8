// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#pragma once

#include <vector>

#include "agingsim/covariance.hpp"
#include "agingsim/training.hpp"
#include "agingsim/types.hpp"

namespace agingsim {

enum class PredictorSolver {
    kAuto,           ///< dense below kDenseLimit, spectral above
    kDenseKronecker, ///< Cholesky of the assembled Delta (x) Rbar + s I
    kSpectral,       ///< eigen-decomposition of Rbar, (p+1)x(p+1) solves per eigenvalue
};

/// Largest Nt (p + 1) handled by the dense path under kAuto.
inline constexpr Eigen::Index kDenseLimit = 1024;

struct PredictorOptions {
    PredictorSolver solver = PredictorSolver::kAuto;
    bool with_taps = true; ///< compute V (not needed for deterministic equivalents)
    bool keep_T = false;   ///< store T (dense path only)
};

struct PredictorContext {
    int base = 0;
    int user = 0;
    int order = 0;
    double alpha = 1.0;
    RVector delta;              ///< [1, alpha, ..., alpha^p]
    RMatrix Delta;              ///< alpha^|i-j|
    CMatrix T;                  ///< [Delta (x) Rbar + s I]^-1, empty unless requested
    std::vector<CMatrix> Theta; ///< Theta_bcu(p, alpha), indexed by c
    CMatrix V;                  ///< Nt x Nt(p+1) taps, empty when not requested
    CMatrix Rbb;                ///< R_bbu
    PredictorSolver solver_used = PredictorSolver::kDenseKronecker;

    const CMatrix &theta_own() const { return Theta.at(static_cast<std::size_t>(base)); }
    Eigen::Index num_antennas() const { return Rbb.rows(); }
};

/// Stacked observations [y[n]; y[n-1]; ...; y[n-p]].
struct ObservationStack {
    CVector stacked;
    int blocks = 0;

    /// `newest_first[0]` is y[n].
    static ObservationStack from(const std::vector<CVector> &newest_first);
    static ObservationStack from(const std::vector<const CVector *> &newest_first);
};

RVector delta_row(int order, double alpha);
RMatrix delta_toeplitz(int order, double alpha);

PredictorContext build_predictor(const CovarianceSet &covs, const PilotConfig &pilot, int b, int u, int order,
                                 double alpha, const PredictorOptions &options = {});

/// h_bar[n+1] = V y_bar.
CVector predict(const PredictorContext &ctx, const ObservationStack &stack);

/// tr(R_bbu - alpha^2 Theta_bbu).
double predictor_mmse(const PredictorContext &ctx);

} // namespace agingsim
