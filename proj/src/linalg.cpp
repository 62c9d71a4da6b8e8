// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#include "agingsim/linalg.hpp"

#include <cmath>
#include <string>

namespace agingsim {

bool is_hermitian(const CMatrix &m, double tol) {
    if (m.rows() != m.cols())
        return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

CMatrix hermitian_part(const CMatrix &m) { return 0.5 * (m + m.adjoint()); }

double min_eigenvalue(const CMatrix &m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

PsdRepair clip_to_psd(const CMatrix &m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
    RVector ev = es.eigenvalues();
    PsdRepair out;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] < 0.0) {
            out.clipped_mass += -ev[i];
            ev[i] = 0.0;
        }
    }
    const CMatrix &u = es.eigenvectors();
    out.matrix = hermitian_part(u * ev.asDiagonal() * u.adjoint());
    return out;
}

cplx trace_product(const CMatrix &a, const CMatrix &b) {
    if (a.cols() != b.rows() || a.rows() != b.cols())
        throw DimensionMismatch("trace_product: incompatible shapes");
    // tr(AB) = sum_ij A_ij B_ji
    return (a.array() * b.transpose().array()).sum();
}

CMatrix kron(const RMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

CMatrix hpd_inverse(const CMatrix &m, const char *what) {
    Eigen::LLT<CMatrix> llt(hermitian_part(m));
    if (llt.info() != Eigen::Success)
        throw SingularModel(std::string(what) + ": matrix is not positive definite");
    CMatrix inv = llt.solve(CMatrix::Identity(m.rows(), m.cols()));
    if (!inv.allFinite())
        throw SingularModel(std::string(what) + ": inverse is not finite");
    return hermitian_part(inv);
}

bool is_scaled_identity(const CMatrix &m, double *scale, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0)
        return false;
    const double s = m(0, 0).real();
    const double ref = std::max(std::abs(s), 1e-300);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const cplx expect = (i == j) ? cplx(s, 0.0) : cplx(0.0, 0.0);
            if (std::abs(m(i, j) - expect) > tol * ref)
                return false;
        }
    if (scale)
        *scale = s;
    return true;
}

GaussianSampler::GaussianSampler(const CMatrix &covariance) : dim_(covariance.rows()) {
    if (covariance.rows() != covariance.cols())
        throw DimensionMismatch("GaussianSampler: covariance must be square");
    const bool diag = covariance.isDiagonal(0.0);
    if (diag) {
        diagonal_ = true;
        diag_sqrt_.resize(dim_);
        for (Eigen::Index i = 0; i < dim_; ++i) {
            const double v = covariance(i, i).real();
            if (v < 0.0)
                throw InvalidArgument("GaussianSampler: negative variance");
            diag_sqrt_[i] = std::sqrt(v);
        }
        return;
    }
    const CMatrix h = hermitian_part(covariance);
    Eigen::LLT<CMatrix> llt(h);
    if (llt.info() == Eigen::Success) {
        factor_ = llt.matrixL();
        return;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    RVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    factor_ = es.eigenvectors() * ev.asDiagonal();
}

CVector GaussianSampler::color(const CVector &white) const {
    if (white.size() != dim_)
        throw DimensionMismatch("GaussianSampler: noise dimension mismatch");
    if (diagonal_)
        return diag_sqrt_.cast<cplx>().cwiseProduct(white);
    return factor_ * white;
}

CVector GaussianSampler::sample(Rng &rng) const { return color(rng.complex_normal(dim_)); }

} // namespace agingsim
