// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "agingsim/linalg.hpp"
#include "agingsim/random.hpp"
#include "agingsim/types.hpp"

namespace agingsim {

inline constexpr double kSpeedOfLight = 3.0e8; // m/s

/// Maximum Doppler shift v * fc / c in Hz.
double max_doppler(double velocity_mps, double carrier_hz);

/// Normalized (unit variance) Jakes autocorrelation J0(2 pi fD Ts |k|).
double jakes_acf(double doppler_hz, double sample_period_s, long lag);

/// Same as jakes_acf with the product fD * Ts given directly.
double jakes_acf_normalized(double normalized_doppler, long lag);

/// Jakes autocorrelation at lags 0..max_lag.
std::vector<double> jakes_acf_sequence(double normalized_doppler, std::size_t max_lag);

/// Reflection coefficients at or beyond this magnitude abort the recursion.
inline constexpr double kReflectionGuard = 1.0 - 1e-12;

struct ArFit {
    std::vector<double> coeffs;     ///< a_1..a_L
    std::vector<double> reflection; ///< per-stage reflection coefficients
    double innovation_variance = 0.0;
};

/// Levinson-Durbin solution of the Yule-Walker equations for an AR(order)
/// process with autocorrelation acf[0..order]. Throws SingularModel when the
/// Toeplitz matrix is not (numerically) positive definite.
ArFit fit_ar(std::span<const double> acf, std::size_t order);

/// Channel time variation: Doppler parameters, the lag-one correlation alpha
/// and an AR(L) fit to the Jakes autocorrelation. Immutable.
class TemporalModel {
public:
    static TemporalModel from_mobility(double velocity_mps, double carrier_hz, double sample_period_s,
                                       std::size_t ar_order = 1);
    static TemporalModel from_normalized_doppler(double normalized_doppler, std::size_t ar_order = 1);

    std::optional<double> velocity() const { return velocity_; }
    std::optional<double> carrier() const { return carrier_; }
    std::optional<double> sample_period() const { return sample_period_; }
    std::optional<double> doppler() const { return doppler_; }
    double normalized_doppler() const { return normalized_doppler_; }
    double alpha() const { return alpha_; }
    std::size_t ar_order() const { return fit_.coeffs.size(); }
    const std::vector<double> &ar_coeffs() const { return fit_.coeffs; }
    double innovation_variance() const { return fit_.innovation_variance; }

private:
    TemporalModel(double normalized_doppler, std::size_t ar_order);

    std::optional<double> velocity_;
    std::optional<double> carrier_;
    std::optional<double> sample_period_;
    std::optional<double> doppler_;
    double normalized_doppler_ = 0.0;
    double alpha_ = 1.0;
    ArFit fit_;
};

/// State of one fading link. history[0] is the current vector, history[l] the
/// vector l steps back.
struct FadingState {
    std::vector<CVector> history;

    const CVector &current() const { return history.front(); }
    std::size_t depth() const { return history.size(); }
};

/// Burn-in length used by stationary_state for an AR(L) model.
inline std::size_t burn_in_steps(std::size_t ar_order) { return 10 * ar_order; }

/// Starts a link from CN(0, R) draws and runs burn_in_steps(L) AR updates.
/// For L = 1 the CN(0, R) draw is already stationary and no burn-in is run.
FadingState stationary_state(const TemporalModel &model, const GaussianSampler &link, Rng &rng);

/// h[n] = alpha h[n-1] + e[n], e ~ CN(0, (1 - alpha^2) R).
FadingState gauss_markov_step(const FadingState &prev, double alpha, const GaussianSampler &link, Rng &rng);

/// h[n] = sum_l a_l h[n-l] + w[n], w ~ CN(0, sigma_w^2 R).
FadingState ar_step(const FadingState &prev, const TemporalModel &model, const GaussianSampler &link, Rng &rng);

} // namespace agingsim
