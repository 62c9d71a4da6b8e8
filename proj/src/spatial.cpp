// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#include "agingsim/spatial.hpp"

#include <cmath>
#include <numbers>

#include <spdlog/spdlog.h>

#include "agingsim/linalg.hpp"
#include "agingsim/quadrature.hpp"

namespace agingsim {

using std::numbers::pi;

double pathloss_db(double distance_km) {
    if (!(distance_km > kMinPathlossDistanceKm))
        throw BelowReferenceDistance("pathloss_db: distance " + std::to_string(distance_km) +
                                     " km is not above 0.035 km");
    return 128.1 + 37.6 * std::log10(distance_km);
}

double laplacian_pas(double phi, double angle_spread) {
    if (!(angle_spread > 0.0))
        throw InvalidArgument("laplacian_pas: angle spread must be positive");
    if (phi < -pi || phi > pi)
        return 0.0;
    const double beta = 1.0 / (1.0 - std::exp(-std::numbers::sqrt2 * pi / angle_spread));
    return beta / (std::numbers::sqrt2 * angle_spread) *
           std::exp(-std::fabs(std::numbers::sqrt2 * phi / angle_spread));
}

double ArrayGeometry::half_wavelength_radius(int num_antennas) {
    // Arc length between neighbours is 2 pi r / Nt = 1/2.
    return num_antennas / (4.0 * pi);
}

ArrayGeometry ArrayGeometry::with_half_wavelength_spacing(int num_antennas, double mean_angle,
                                                          double angle_spread) {
    ArrayGeometry g;
    g.num_antennas = num_antennas;
    g.radius = half_wavelength_radius(num_antennas);
    g.mean_angle = mean_angle;
    g.angle_spread = angle_spread;
    return g;
}

void ArrayGeometry::validate() const {
    if (num_antennas < 1)
        throw InvalidArgument("ArrayGeometry: need at least one antenna");
    if (!(radius > 0.0))
        throw InvalidArgument("ArrayGeometry: radius must be positive");
    if (!(angle_spread > 0.0))
        throw InvalidArgument("ArrayGeometry: angle spread must be positive");
}

namespace {

// Quadrature with n nodes split evenly over [-pi, 0] and [0, pi].
CMatrix uca_quadrature(const ArrayGeometry &g, int n) {
    const int half = n / 2;
    const Eigen::Index nt = g.num_antennas;
    CMatrix manifold(nt, 2 * half);
    const auto left = gauss_legendre(half, -pi, 0.0);
    const auto right = gauss_legendre(half, 0.0, pi);
    Eigen::Index col = 0;
    for (const auto *rule : {&left, &right}) {
        for (int i = 0; i < half; ++i, ++col) {
            const double phi = rule->nodes[i];
            const double w = std::sqrt(rule->weights[i] * laplacian_pas(phi, g.angle_spread));
            for (Eigen::Index m = 0; m < nt; ++m) {
                const double theta = 2.0 * pi * static_cast<double>(m) / static_cast<double>(nt);
                const double phase = 2.0 * pi * g.radius * std::cos(phi + g.mean_angle - theta);
                manifold(m, col) = w * cplx(std::cos(phase), std::sin(phase));
            }
        }
    }
    CMatrix r = CMatrix::Zero(nt, nt);
    r.selfadjointView<Eigen::Lower>().rankUpdate(manifold);
    return r.selfadjointView<Eigen::Lower>();
}

} // namespace

CMatrix uca_correlation(const ArrayGeometry &geometry, const QuadratureSettings &settings) {
    geometry.validate();
    const Eigen::Index nt = geometry.num_antennas;
    if (nt == 1)
        return CMatrix::Ones(1, 1);
    if (settings.initial_nodes < 2 || settings.initial_nodes % 2 != 0)
        throw InvalidArgument("uca_correlation: node count must be even");

    int n = settings.initial_nodes;
    CMatrix coarse = uca_quadrature(geometry, n);
    CMatrix fine;
    bool converged = false;
    while (2 * n <= settings.max_nodes) {
        fine = uca_quadrature(geometry, 2 * n);
        const double diff = (fine - coarse).cwiseAbs().maxCoeff();
        n *= 2;
        if (diff < settings.tolerance) {
            converged = true;
            break;
        }
        coarse = std::move(fine);
    }
    if (!converged)
        throw NumericalError("uca_correlation: quadrature did not converge within " +
                             std::to_string(settings.max_nodes) + " nodes");

    auto repaired = clip_to_psd(fine);
    const double trace = fine.trace().real();
    if (repaired.clipped_mass > 1e-6 * trace)
        spdlog::warn("uca_correlation: clipped {:.3e} of trace {:.3e} to restore PSD", repaired.clipped_mass,
                     trace);
    CMatrix r = std::move(repaired.matrix);
    RVector d = r.diagonal().real().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    r = d.asDiagonal() * r * d.asDiagonal();
    r = hermitian_part(r);
    for (Eigen::Index i = 0; i < nt; ++i)
        r(i, i) = 1.0;
    return r;
}

double LinkBudgetDb::linear_gain() const { return std::pow(10.0, gain_db() / 10.0); }

LinkCovariance assemble_covariance(const CMatrix &correlation, const LinkBudgetDb &budget, LinkIndex link) {
    if (correlation.rows() != correlation.cols())
        throw DimensionMismatch("assemble_covariance: correlation must be square");
    LinkCovariance out;
    out.large_scale_gain = budget.linear_gain();
    out.matrix = out.large_scale_gain * correlation;
    out.link = link;
    return out;
}

std::string check_link_covariance(const LinkCovariance &cov) {
    const CMatrix &m = cov.matrix;
    if (m.rows() != m.cols())
        return "matrix is not square";
    const double scale = m.cwiseAbs().maxCoeff();
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300))
        return "matrix is not Hermitian";
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo < -1e-10 * std::max(hi, 0.0))
        return "matrix is not positive semidefinite";
    const double expect = static_cast<double>(m.rows()) * cov.large_scale_gain;
    if (std::fabs(m.trace().real() - expect) > 1e-9 * std::max(expect, 1e-300))
        return "trace differs from Nt * large_scale_gain";
    return {};
}

} // namespace agingsim
