// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#include "agingsim/prediction.hpp"

#include <cmath>

#include "agingsim/linalg.hpp"

namespace agingsim {

RVector delta_row(int order, double alpha) {
    if (order < 0)
        throw InvalidArgument("delta_row: order must be nonnegative");
    RVector d(order + 1);
    d[0] = 1.0;
    for (int i = 1; i <= order; ++i)
        d[i] = d[i - 1] * alpha;
    return d;
}

RMatrix delta_toeplitz(int order, double alpha) {
    const RVector d = delta_row(order, alpha);
    RMatrix m(order + 1, order + 1);
    for (int i = 0; i <= order; ++i)
        for (int j = 0; j <= order; ++j)
            m(i, j) = d[std::abs(i - j)];
    return m;
}

ObservationStack ObservationStack::from(const std::vector<CVector> &newest_first) {
    std::vector<const CVector *> ptrs;
    ptrs.reserve(newest_first.size());
    for (const auto &y : newest_first)
        ptrs.push_back(&y);
    return from(ptrs);
}

ObservationStack ObservationStack::from(const std::vector<const CVector *> &newest_first) {
    if (newest_first.empty())
        throw InvalidArgument("ObservationStack: need at least one observation");
    const Eigen::Index nt = newest_first.front()->size();
    ObservationStack s;
    s.blocks = static_cast<int>(newest_first.size());
    s.stacked.resize(nt * s.blocks);
    for (int j = 0; j < s.blocks; ++j) {
        if (newest_first[j]->size() != nt)
            throw DimensionMismatch("ObservationStack: observation lengths differ");
        s.stacked.segment(j * nt, nt) = *newest_first[j];
    }
    return s;
}

namespace {

void build_dense(PredictorContext &ctx, const CovarianceSet &covs, const CMatrix &rbar, double s,
                 const PredictorOptions &options) {
    const Eigen::Index nt = rbar.rows();
    const int blocks = ctx.order + 1;
    CMatrix k = kron(ctx.Delta, rbar);
    k.diagonal().array() += s;
    Eigen::LLT<CMatrix> llt(hermitian_part(k));
    if (llt.info() != Eigen::Success)
        throw SingularModel("build_predictor: Delta (x) Rbar + s I is not positive definite");

    // [delta (x) R_bbu]^H = delta^T (x) R_bbu, so G = [delta (x) R_bbu] T = (T rhs)^H.
    CMatrix rhs(nt * blocks, nt);
    for (int j = 0; j < blocks; ++j)
        rhs.middleRows(j * nt, nt) = ctx.delta[j] * ctx.Rbb;
    const CMatrix g = llt.solve(rhs).adjoint();
    if (!g.allFinite())
        throw SingularModel("build_predictor: predictor solve is not finite");

    CMatrix gsum = CMatrix::Zero(nt, nt); // sum_j delta_j G_j
    for (int j = 0; j < blocks; ++j)
        gsum += ctx.delta[j] * g.middleCols(j * nt, nt);
    for (int c = 0; c < covs.num_cells(); ++c)
        ctx.Theta.push_back(gsum * covs.matrix(ctx.base, c, ctx.user));
    if (options.with_taps)
        ctx.V = ctx.alpha * g;
    if (options.keep_T)
        ctx.T = hermitian_part(llt.solve(CMatrix::Identity(nt * blocks, nt * blocks)));
}

void build_spectral(PredictorContext &ctx, const CovarianceSet &covs, const CMatrix &rbar, double s,
                    const PredictorOptions &options) {
    const Eigen::Index nt = rbar.rows();
    const int blocks = ctx.order + 1;
    const int b = ctx.base;
    const int u = ctx.user;

    bool scalar = true;
    for (int c = 0; c < covs.num_cells(); ++c)
        scalar = scalar && covs.shape(b, c, u) == nullptr;

    // Eigenvalues of Rbar and the per-eigenvalue tap weights w_m = delta (lambda_m Delta + s I)^-1.
    RVector lambda;
    CMatrix basis;
    if (scalar) {
        lambda = RVector::Constant(1, rbar(0, 0).real());
    } else {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(rbar));
        lambda = es.eigenvalues();
        basis = es.eigenvectors();
    }
    const Eigen::Index modes = lambda.size();
    RMatrix w(modes, blocks);
    RVector gamma(modes);
    for (Eigen::Index m = 0; m < modes; ++m) {
        RMatrix k = std::max(lambda[m], 0.0) * ctx.Delta;
        k.diagonal().array() += s;
        Eigen::LLT<RMatrix> llt(k);
        if (llt.info() != Eigen::Success)
            throw SingularModel("build_predictor: lambda Delta + s I is not positive definite");
        const RVector wm = llt.solve(ctx.delta);
        if (!wm.allFinite())
            throw SingularModel("build_predictor: predictor solve is not finite");
        w.row(m) = wm.transpose();
        gamma[m] = wm.dot(ctx.delta);
    }

    if (scalar) {
        const double gbb = covs.gain(b, b, u);
        for (int c = 0; c < covs.num_cells(); ++c)
            ctx.Theta.push_back(CMatrix::Identity(nt, nt) * (gbb * gamma[0] * covs.gain(b, c, u)));
        if (options.with_taps) {
            ctx.V = CMatrix::Zero(nt, nt * blocks);
            for (int j = 0; j < blocks; ++j)
                ctx.V.middleCols(j * nt, nt).diagonal().setConstant(ctx.alpha * gbb * w(0, j));
        }
        return;
    }

    const CMatrix ru = ctx.Rbb * basis;
    const CMatrix p = ru * gamma.cast<cplx>().asDiagonal() * basis.adjoint();
    for (int c = 0; c < covs.num_cells(); ++c)
        ctx.Theta.push_back(p * covs.matrix(b, c, u));
    if (options.with_taps) {
        ctx.V.resize(nt, nt * blocks);
        for (int j = 0; j < blocks; ++j)
            ctx.V.middleCols(j * nt, nt) =
                ctx.alpha * (ru * w.col(j).cast<cplx>().asDiagonal() * basis.adjoint());
    }
}

} // namespace

PredictorContext build_predictor(const CovarianceSet &covs, const PilotConfig &pilot, int b, int u, int order,
                                 double alpha, const PredictorOptions &options) {
    pilot.validate();
    if (order < 0)
        throw InvalidArgument("build_predictor: order must be nonnegative");
    if (!(std::fabs(alpha) <= 1.0))
        throw InvalidArgument("build_predictor: |alpha| must not exceed 1");

    PredictorContext ctx;
    ctx.base = b;
    ctx.user = u;
    ctx.order = order;
    ctx.alpha = alpha;
    ctx.delta = delta_row(order, alpha);
    ctx.Delta = delta_toeplitz(order, alpha);
    ctx.Rbb = covs.matrix(b, b, u);
    const CMatrix rbar = covs.rbar(b, u);
    const double s = pilot.noise_to_pilot();
    const Eigen::Index dim = covs.num_antennas() * (order + 1);

    PredictorSolver solver = options.solver;
    if (solver == PredictorSolver::kAuto)
        solver = dim <= kDenseLimit ? PredictorSolver::kDenseKronecker : PredictorSolver::kSpectral;
    if (options.keep_T && solver != PredictorSolver::kDenseKronecker)
        throw InvalidArgument("build_predictor: T is only materialized by the dense solver");
    ctx.solver_used = solver;
    ctx.Theta.reserve(static_cast<std::size_t>(covs.num_cells()));
    if (solver == PredictorSolver::kDenseKronecker)
        build_dense(ctx, covs, rbar, s, options);
    else
        build_spectral(ctx, covs, rbar, s, options);
    ctx.Theta[static_cast<std::size_t>(b)] = hermitian_part(ctx.Theta[static_cast<std::size_t>(b)]);
    return ctx;
}

CVector predict(const PredictorContext &ctx, const ObservationStack &stack) {
    if (ctx.V.size() == 0)
        throw InvalidArgument("predict: context was built without taps");
    if (stack.blocks != ctx.order + 1 || stack.stacked.size() != ctx.V.cols())
        throw DimensionMismatch("predict: observation stack depth does not match predictor order");
    return ctx.V * stack.stacked;
}

double predictor_mmse(const PredictorContext &ctx) {
    const CMatrix &theta = ctx.theta_own();
    return (ctx.Rbb.trace() - ctx.alpha * ctx.alpha * theta.trace()).real();
}

} // namespace agingsim
