// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "agingsim/linalg.hpp"
#include "agingsim/spatial.hpp"
#include "oracles/quadrature_oracle.hpp"

using namespace agingsim;
using Catch::Approx;
using std::numbers::pi;

namespace {
double deg(double d) { return d * pi / 180.0; }

double max_offdiag(const CMatrix &m) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j)
                v = std::max(v, std::abs(m(i, j)));
    return v;
}
} // namespace

TEST_CASE("pathloss_db") {
    CHECK(pathloss_db(1.0) == Approx(128.1).epsilon(1e-14));
    CHECK(pathloss_db(0.1) == Approx(90.5).epsilon(1e-14));
    CHECK(pathloss_db(2.0) == Approx(128.1 + 37.6 * std::log10(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(pathloss_db(0.035), BelowReferenceDistance);
    CHECK_THROWS_AS(pathloss_db(0.01), BelowReferenceDistance);
    CHECK_NOTHROW(pathloss_db(0.0351));
}

TEST_CASE("laplacian_pas") {
    const double s = deg(10.0);
    CHECK(laplacian_pas(1.1 * pi, s) == 0.0);
    CHECK(laplacian_pas(-1.1 * pi, s) == 0.0);
    for (double phi : {0.01, 0.3, 1.0, 2.5})
        CHECK(laplacian_pas(phi, s) == laplacian_pas(-phi, s));
    for (double spread : {5.0, 10.0, 30.0, 60.0}) {
        const double sr = deg(spread);
        auto f = [&](double phi) { return laplacian_pas(phi, sr); };
        // Split at the kink.
        const double integral = oracle::adaptive_simpson(f, -pi, 0.0, 1e-12) + oracle::adaptive_simpson(f, 0.0, pi, 1e-12);
        INFO("spread " << spread);
        CHECK(std::fabs(integral - 1.0) < 1e-6);
    }
}

TEST_CASE("ArrayGeometry") {
    CHECK(ArrayGeometry::half_wavelength_radius(24) == Approx(24.0 / (4 * pi)));
    const auto g = ArrayGeometry::with_half_wavelength_spacing(24, 0.5, deg(10));
    CHECK(g.num_antennas == 24);
    // Arc between adjacent elements is half a wavelength.
    CHECK(2 * pi * g.radius / g.num_antennas == Approx(0.5));
    ArrayGeometry bad = g;
    bad.num_antennas = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = g;
    bad.angle_spread = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("uca_correlation single antenna") {
    const CMatrix r = uca_correlation(ArrayGeometry{1, 0.1, 0.0, deg(10)});
    REQUIRE(r.rows() == 1);
    CHECK(r(0, 0) == cplx(1.0, 0.0));
}

TEST_CASE("uca_correlation entries against adaptive quadrature") {
    const ArrayGeometry g = ArrayGeometry::with_half_wavelength_spacing(8, 0.7, deg(10));
    const CMatrix r = uca_correlation(g);
    for (int m = 0; m < 8; ++m)
        for (int n = m + 1; n < 8; n += 3) {
            const double tm = 2 * pi * m / 8, tn = 2 * pi * n / 8;
            auto phase = [&](double phi) {
                return 2 * pi * g.radius * (std::cos(phi + g.mean_angle - tm) - std::cos(phi + g.mean_angle - tn));
            };
            auto re = [&](double phi) { return laplacian_pas(phi, g.angle_spread) * std::cos(phase(phi)); };
            auto im = [&](double phi) { return laplacian_pas(phi, g.angle_spread) * std::sin(phase(phi)); };
            const cplx ref(oracle::adaptive_simpson(re, -pi, 0, 1e-11) + oracle::adaptive_simpson(re, 0, pi, 1e-11),
                           oracle::adaptive_simpson(im, -pi, 0, 1e-11) + oracle::adaptive_simpson(im, 0, pi, 1e-11));
            INFO("entry " << m << "," << n);
            CHECK(std::abs(r(m, n) - ref) < 1e-6);
        }
}

TEST_CASE("uca_correlation structure") {
    for (int nt : {4, 16, 24, 64}) {
        for (double spread : {5.0, 10.0, 60.0}) {
            const auto g = ArrayGeometry::with_half_wavelength_spacing(nt, 1.3, deg(spread));
            const CMatrix r = uca_correlation(g);
            INFO("nt " << nt << " spread " << spread);
            CHECK(is_hermitian(r, 1e-12));
            for (int i = 0; i < nt; ++i)
                CHECK(r(i, i) == cplx(1.0, 0.0));
            const Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
            CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());
        }
    }
}

TEST_CASE("wider angle spread decorrelates") {
    for (int nt : {8, 24}) {
        const auto narrow = uca_correlation(ArrayGeometry::with_half_wavelength_spacing(nt, 0.4, 0.1));
        const auto wide = uca_correlation(ArrayGeometry::with_half_wavelength_spacing(nt, 0.4, 100.0));
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < nt; ++j)
                if (i != j)
                    CHECK(std::abs(wide(i, j)) <= std::abs(narrow(i, j)) + 1e-9);
        CHECK(max_offdiag(wide) < max_offdiag(narrow));
    }
}

TEST_CASE("assemble_covariance") {
    const CMatrix corr = uca_correlation(ArrayGeometry::with_half_wavelength_spacing(6, 0.2, deg(10)));
    const auto unit = assemble_covariance(corr, LinkBudgetDb{});
    CHECK(unit.large_scale_gain == 1.0);
    CHECK((unit.matrix - corr).norm() == 0.0);

    const LinkBudgetDb budget{90.5, 20.0, 10.0, 0.0};
    CHECK(budget.linear_gain() == Approx(std::pow(10.0, -10.05)).epsilon(1e-13));
    const auto link = assemble_covariance(corr, budget, LinkIndex{0, 1, 2});
    CHECK(link.link.cell == 1);
    CHECK(link.matrix.trace().real() == Approx(6 * budget.linear_gain()).epsilon(1e-12));
    CHECK(check_link_covariance(link).empty());

    const LinkBudgetDb km{pathloss_db(1.0), 20.0, 10.0, 0.0};
    CHECK(km.gain_db() == Approx(10 - 128.1 - 20).epsilon(1e-14));
}

TEST_CASE("check_link_covariance flags broken matrices") {
    LinkCovariance c;
    c.matrix = CMatrix::Identity(3, 3);
    c.large_scale_gain = 1.0;
    CHECK(check_link_covariance(c).empty());
    c.matrix(0, 1) = cplx(0.5, 0.0);
    CHECK_FALSE(check_link_covariance(c).empty()); // not Hermitian
    c.matrix = CMatrix::Identity(3, 3);
    c.matrix(2, 2) = -1.0;
    CHECK_FALSE(check_link_covariance(c).empty()); // indefinite and wrong trace
    c.matrix = 2.0 * CMatrix::Identity(3, 3);
    CHECK_FALSE(check_link_covariance(c).empty()); // trace != Nt * gain
}
