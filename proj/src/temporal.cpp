// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#include "agingsim/temporal.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "agingsim/bessel.hpp"

namespace agingsim {

double max_doppler(double velocity_mps, double carrier_hz) {
    if (!(velocity_mps >= 0.0))
        throw InvalidArgument("max_doppler: velocity must be nonnegative");
    if (!(carrier_hz > 0.0))
        throw InvalidArgument("max_doppler: carrier frequency must be positive");
    return velocity_mps * carrier_hz / kSpeedOfLight;
}

double jakes_acf_normalized(double normalized_doppler, long lag) {
    if (!(normalized_doppler >= 0.0))
        throw InvalidArgument("jakes_acf: normalized Doppler must be nonnegative");
    if (lag == 0)
        return 1.0;
    const double k = static_cast<double>(lag < 0 ? -lag : lag);
    return bessel_j0(2.0 * std::numbers::pi * normalized_doppler * k);
}

double jakes_acf(double doppler_hz, double sample_period_s, long lag) {
    if (!(doppler_hz >= 0.0))
        throw InvalidArgument("jakes_acf: Doppler must be nonnegative");
    if (!(sample_period_s > 0.0))
        throw InvalidArgument("jakes_acf: sample period must be positive");
    return jakes_acf_normalized(doppler_hz * sample_period_s, lag);
}

std::vector<double> jakes_acf_sequence(double normalized_doppler, std::size_t max_lag) {
    std::vector<double> r(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k)
        r[k] = jakes_acf_normalized(normalized_doppler, static_cast<long>(k));
    return r;
}

ArFit fit_ar(std::span<const double> acf, std::size_t order) {
    if (order == 0)
        throw InvalidArgument("fit_ar: order must be positive");
    if (acf.size() < order + 1)
        throw InvalidArgument("fit_ar: need autocorrelation lags 0..order");
    if (!(acf[0] > 0.0))
        throw SingularModel("fit_ar: zero-lag autocorrelation must be positive");

    ArFit fit;
    std::vector<double> a;
    a.reserve(order);
    double err = acf[0];
    for (std::size_t m = 1; m <= order; ++m) {
        double acc = acf[m];
        for (std::size_t j = 1; j < m; ++j)
            acc -= a[j - 1] * acf[m - j];
        const double k = acc / err;
        if (!(std::fabs(k) < kReflectionGuard))
            throw SingularModel("fit_ar: reflection coefficient " + std::to_string(k) + " at stage " +
                                std::to_string(m) + " (Toeplitz matrix not positive definite)");
        std::vector<double> next(m);
        for (std::size_t j = 1; j < m; ++j)
            next[j - 1] = a[j - 1] - k * a[m - j - 1];
        next[m - 1] = k;
        a = std::move(next);
        err *= (1.0 - k * k);
        fit.reflection.push_back(k);
    }
    fit.coeffs = std::move(a);
    fit.innovation_variance = err;
    return fit;
}

TemporalModel::TemporalModel(double normalized_doppler, std::size_t ar_order)
    : normalized_doppler_(normalized_doppler) {
    if (ar_order == 0)
        throw InvalidArgument("TemporalModel: AR order must be positive");
    alpha_ = jakes_acf_normalized(normalized_doppler, 1);
    if (ar_order == 1) {
        // Scalar Yule-Walker: well defined even for the static channel |alpha| = 1,
        // where the Levinson guard would reject the recursion.
        fit_.coeffs = {alpha_};
        fit_.reflection = {alpha_};
        fit_.innovation_variance = 1.0 - alpha_ * alpha_;
        return;
    }
    const auto acf = jakes_acf_sequence(normalized_doppler, ar_order);
    fit_ = fit_ar(acf, ar_order);
}

TemporalModel TemporalModel::from_mobility(double velocity_mps, double carrier_hz, double sample_period_s,
                                           std::size_t ar_order) {
    const double fd = max_doppler(velocity_mps, carrier_hz);
    if (!(sample_period_s > 0.0))
        throw InvalidArgument("TemporalModel: sample period must be positive");
    TemporalModel m(fd * sample_period_s, ar_order);
    m.velocity_ = velocity_mps;
    m.carrier_ = carrier_hz;
    m.sample_period_ = sample_period_s;
    m.doppler_ = fd;
    return m;
}

TemporalModel TemporalModel::from_normalized_doppler(double normalized_doppler, std::size_t ar_order) {
    return TemporalModel(normalized_doppler, ar_order);
}

FadingState stationary_state(const TemporalModel &model, const GaussianSampler &link, Rng &rng) {
    const std::size_t order = model.ar_order();
    FadingState s;
    s.history.reserve(order);
    for (std::size_t l = 0; l < order; ++l)
        s.history.push_back(link.sample(rng));
    if (order > 1) {
        for (std::size_t i = 0; i < burn_in_steps(order); ++i)
            s = ar_step(s, model, link, rng);
    }
    return s;
}

FadingState gauss_markov_step(const FadingState &prev, double alpha, const GaussianSampler &link, Rng &rng) {
    if (prev.history.empty())
        throw InvalidArgument("gauss_markov_step: empty state");
    if (!(std::fabs(alpha) <= 1.0))
        throw InvalidArgument("gauss_markov_step: |alpha| must not exceed 1");
    if (prev.current().size() != link.dimension())
        throw DimensionMismatch("gauss_markov_step: state and covariance dimensions differ");
    const double innovation = std::sqrt(1.0 - alpha * alpha);
    FadingState next;
    next.history.reserve(prev.history.size());
    next.history.push_back(alpha * prev.current() + innovation * link.sample(rng));
    for (std::size_t l = 0; l + 1 < prev.history.size(); ++l)
        next.history.push_back(prev.history[l]);
    return next;
}

FadingState ar_step(const FadingState &prev, const TemporalModel &model, const GaussianSampler &link, Rng &rng) {
    const auto &a = model.ar_coeffs();
    if (a.empty())
        throw InvalidArgument("ar_step: model has no AR fit");
    if (prev.history.size() != a.size())
        throw InvalidArgument("ar_step: state history length must equal the AR order");
    for (const auto &h : prev.history)
        if (h.size() != link.dimension())
            throw DimensionMismatch("ar_step: state and covariance dimensions differ");
    CVector acc = a[0] * prev.history[0];
    for (std::size_t l = 1; l < a.size(); ++l)
        acc += a[l] * prev.history[l];
    acc += std::sqrt(model.innovation_variance()) * link.sample(rng);
    FadingState next;
    next.history.reserve(a.size());
    next.history.push_back(std::move(acc));
    for (std::size_t l = 0; l + 1 < prev.history.size(); ++l)
        next.history.push_back(prev.history[l]);
    return next;
}

} // namespace agingsim
