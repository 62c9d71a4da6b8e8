// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>

#include "agingsim/linalg.hpp"
#include "agingsim/prediction.hpp"
#include "agingsim/spatial.hpp"
#include "oracles/linear_oracle.hpp"
#include "oracles/scalar_oracle.hpp"
#include "support/process_sim.hpp"

using namespace agingsim;
using Catch::Approx;

namespace {
CovarianceSet correlated_two_cell(int nt) {
    CovarianceSet covs(2, 1, nt);
    const double gains[2][2] = {{1.0, 0.3}, {0.25, 0.8}};
    const double angles[2][2] = {{0.4, 2.1}, {1.2, 5.0}};
    for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
            covs.set(b, c, 0, gains[b][c] * uca_correlation(ArrayGeometry::with_half_wavelength_spacing(nt, angles[b][c], 0.3)));
    return covs;
}

CovarianceSet scalar_two_cell(int nt) {
    RMatrix beta(2, 2);
    beta << 1.0, 0.3, 0.3, 1.0;
    return CovarianceSet::scalar(beta, 1, nt);
}

const PilotConfig kPilot{1, 1, 1.0, 0.1};
} // namespace

TEST_CASE("delta helpers") {
    const RVector d = delta_row(3, 0.5);
    CHECK(d.size() == 4);
    CHECK(d[3] == 0.125);
    const RMatrix m = delta_toeplitz(2, 0.5);
    CHECK(m(0, 2) == 0.25);
    CHECK(m(2, 0) == 0.25);
    CHECK(m(1, 1) == 1.0);
    CHECK_THROWS_AS(delta_row(-1, 0.5), InvalidArgument);
}

TEST_CASE("ObservationStack") {
    const CVector a = CVector::Constant(2, cplx(1, 0)), b = CVector::Constant(2, cplx(2, 0));
    const auto s = ObservationStack::from(std::vector<CVector>{a, b});
    CHECK(s.blocks == 2);
    CHECK(s.stacked[0] == cplx(1, 0));
    CHECK(s.stacked[3] == cplx(2, 0));
    CHECK_THROWS_AS(ObservationStack::from(std::vector<CVector>{}), InvalidArgument);
    CHECK_THROWS_AS(ObservationStack::from(std::vector<CVector>{a, CVector::Zero(3)}), DimensionMismatch);
}

TEST_CASE("order zero predictor is the scaled estimate") {
    const auto covs = correlated_two_cell(5);
    const double alpha = 0.83;
    const auto ctx = build_predictor(covs, kPilot, 0, 0, 0, alpha);
    const auto est = mmse_context(covs, kPilot, 0, 0);
    CHECK((ctx.V - alpha * est.estimator).norm() < 1e-12);
    CHECK((ctx.theta_own() - est.phi_own()).norm() < 1e-12);
    Rng rng(4);
    const CVector y = rng.complex_normal(5);
    const CVector pred = predict(ctx, ObservationStack::from(std::vector<CVector>{y}));
    CHECK((pred - alpha * mmse_estimate(y, est)).norm() < 1e-12);
}

TEST_CASE("zero alpha and zero observations") {
    const auto covs = correlated_two_cell(4);
    const auto ctx = build_predictor(covs, kPilot, 0, 0, 3, 0.0);
    CHECK(ctx.V.norm() == 0.0);
    CHECK(predictor_mmse(ctx) == Approx(covs.matrix(0, 0, 0).trace().real()).epsilon(1e-14));
    const auto live = build_predictor(covs, kPilot, 0, 0, 2, 0.9);
    const auto stack = ObservationStack::from(std::vector<CVector>(3, CVector::Zero(4)));
    CHECK(predict(live, stack).norm() == 0.0);
    CHECK_THROWS_AS(predict(live, ObservationStack::from(std::vector<CVector>(2, CVector::Zero(4)))),
                    DimensionMismatch);
}

TEST_CASE("build_predictor argument checks") {
    const auto covs = scalar_two_cell(4);
    CHECK_THROWS_AS(build_predictor(covs, kPilot, 0, 0, -1, 0.5), InvalidArgument);
    CHECK_THROWS_AS(build_predictor(covs, kPilot, 0, 0, 1, 1.5), InvalidArgument);
    CHECK_THROWS_AS(build_predictor(covs, kPilot, 0, 0, 1, 0.5, {PredictorSolver::kSpectral, true, true}),
                    InvalidArgument);
    const auto no_taps = build_predictor(covs, kPilot, 0, 0, 1, 0.5, {PredictorSolver::kAuto, false, false});
    CHECK_THROWS_AS(predict(no_taps, ObservationStack::from(std::vector<CVector>(2, CVector::Zero(4)))),
                    InvalidArgument);
}

TEST_CASE("dense and spectral solvers agree") {
    for (const bool scalar : {false, true}) {
        const auto covs = scalar ? scalar_two_cell(6) : correlated_two_cell(6);
        for (int order : {0, 1, 3}) {
            const auto dense = build_predictor(covs, kPilot, 0, 0, order, 0.9, {PredictorSolver::kDenseKronecker, true, true});
            const auto spectral = build_predictor(covs, kPilot, 0, 0, order, 0.9, {PredictorSolver::kSpectral, true, false});
            INFO("scalar " << scalar << " order " << order);
            CHECK(spectral.solver_used == PredictorSolver::kSpectral);
            CHECK((dense.V - spectral.V).norm() < 1e-10 * dense.V.norm());
            for (int c = 0; c < 2; ++c)
                CHECK((dense.Theta[c] - spectral.Theta[c]).norm() < 1e-10 * dense.Theta[c].norm());
            // T is the inverse of Delta (x) Rbar + s I.
            CMatrix k = kron(dense.Delta, covs.rbar(0, 0));
            k.diagonal().array() += kPilot.noise_to_pilot();
            CHECK((dense.T * k - CMatrix::Identity(k.rows(), k.cols())).norm() < 1e-10);
        }
    }
}

TEST_CASE("auto solver switches at the dense limit") {
    const auto covs = scalar_two_cell(256);
    CHECK(build_predictor(covs, kPilot, 0, 0, 3, 0.9, {PredictorSolver::kAuto, false, false}).solver_used ==
          PredictorSolver::kDenseKronecker);
    CHECK(build_predictor(covs, kPilot, 0, 0, 4, 0.9, {PredictorSolver::kAuto, false, false}).solver_used ==
          PredictorSolver::kSpectral);
}

TEST_CASE("scalar order-one Theta matches the 2x2 oracle") {
    oracle::ScalarNet net{{{1.0, 0.3}, {0.3, 1.0}}, 1, 8, 0.1, 0.05, 0.05};
    const auto covs = scalar_two_cell(8);
    for (double alpha : {0.0, 0.5, 0.9, 1.0}) {
        const auto ctx = build_predictor(covs, kPilot, 0, 0, 1, alpha);
        CHECK(ctx.theta_own()(0, 0).real() == Approx(oracle::scalar_x(net, 0, 0, 1, alpha)).epsilon(1e-12));
        CHECK(ctx.Theta[1](0, 0).real() == Approx(oracle::scalar_x(net, 0, 1, 1, alpha)).epsilon(1e-12));
    }
}

TEST_CASE("prediction error is non-increasing in order") {
    const auto covs = correlated_two_cell(6);
    for (double alpha : {0.3, 0.9, 0.99}) {
        double prev = INFINITY;
        for (int order = 0; order <= 6; ++order) {
            const double e = predictor_mmse(build_predictor(covs, kPilot, 0, 0, order, alpha));
            CHECK(e >= 0.0);
            CHECK(e <= prev + 1e-12);
            prev = e;
        }
    }
}

TEST_CASE("empirical prediction error and orthogonality") {
    const int nt = 3;
    const auto covs = correlated_two_cell(nt);
    const double alpha = 0.9;
    const int order = 2;
    const auto ctx = build_predictor(covs, kPilot, 0, 0, order, alpha);
    const auto est = mmse_context(covs, kPilot, 0, 0);
    const support::ProcessSimulator sim(covs, kPilot, 0, 0);
    Rng rng(8080);
    std::vector<oracle::CrossMoment> cross(order + 1, oracle::CrossMoment(nt, nt));
    double mse = 0.0, naive = 0.0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        const auto obs = sim.draw(order + 1, alpha, rng);
        const CVector pred = predict(ctx, ObservationStack::from(obs.y));
        const CVector e = obs.h_next - pred;
        mse += e.squaredNorm();
        naive += (obs.h_next - alpha * mmse_estimate(obs.y[0], est)).squaredNorm();
        for (int j = 0; j <= order; ++j)
            cross[j].add(e, obs.y[j]);
    }
    mse /= trials;
    naive /= trials;
    CHECK(std::fabs(mse - predictor_mmse(ctx)) <= 0.03 * predictor_mmse(ctx));
    CHECK(mse <= naive);
    for (int j = 0; j <= order; ++j) {
        INFO("block " << j);
        CHECK(cross[j].max_z() < 3.0);
    }
}
