// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#pragma once

#include <string>

#include "agingsim/types.hpp"

namespace agingsim {

/// Lower validity bound of the NLOS pathloss model.
inline constexpr double kMinPathlossDistanceKm = 0.035;

/// 128.1 + 37.6 log10(d) dB for d in km. Throws BelowReferenceDistance for
/// d <= 0.035 km.
double pathloss_db(double distance_km);

/// Truncated Laplacian power azimuth spectrum, normalized over [-pi, pi].
double laplacian_pas(double phi, double angle_spread);

/// Uniform circular array with a single scattering cluster.
struct ArrayGeometry {
    int num_antennas = 1;
    double radius = 0.25;       ///< wavelengths
    double mean_angle = 0.0;    ///< radians
    double angle_spread = 0.17; ///< radians

    /// Radius giving lambda/2 arc spacing between adjacent elements.
    static double half_wavelength_radius(int num_antennas);
    static ArrayGeometry with_half_wavelength_spacing(int num_antennas, double mean_angle,
                                                      double angle_spread);
    void validate() const;
};

struct QuadratureSettings {
    int initial_nodes = 2048;
    double tolerance = 1e-8;
    int max_nodes = 1 << 16;
};

/// Correlation matrix of the UCA under the truncated Laplacian PAS, computed
/// by Gauss-Legendre quadrature of the array manifold (split at the PAS
/// cusp) and refined until two successive node counts agree to `tolerance`.
/// The result is Hermitian, PSD (negative eigenvalues clipped) and has an
/// exactly unit diagonal.
CMatrix uca_correlation(const ArrayGeometry &geometry, const QuadratureSettings &settings = {});

/// Deterministic covariance of one (base station, cell, user) link.
struct LinkCovariance {
    CMatrix matrix;
    double large_scale_gain = 1.0;
    LinkIndex link;
};

/// Link budget items in dB. `reference` is subtracted from the gain so the
/// covariance can be expressed relative to a noise floor if desired.
struct LinkBudgetDb {
    double pathloss = 0.0;
    double penetration = 0.0;
    double antenna_gain = 0.0;
    double reference = 0.0;

    double gain_db() const { return antenna_gain - pathloss - penetration - reference; }
    double linear_gain() const;
};

LinkCovariance assemble_covariance(const CMatrix &correlation, const LinkBudgetDb &budget, LinkIndex link = {});

/// Checks the Hermitian / PSD / trace invariants. Returns an empty string when
/// all hold, otherwise a description of the first violation.
std::string check_link_covariance(const LinkCovariance &cov);

} // namespace agingsim
