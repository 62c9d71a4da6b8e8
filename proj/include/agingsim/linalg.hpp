// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#pragma once

#include "agingsim/random.hpp"
#include "agingsim/types.hpp"

namespace agingsim {

bool is_hermitian(const CMatrix &m, double tol = 1e-12);

/// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const CMatrix &m);

/// (m + m^H) / 2
CMatrix hermitian_part(const CMatrix &m);

struct PsdRepair {
    CMatrix matrix;
    double clipped_mass = 0.0; ///< sum of |negative eigenvalues| removed
};

/// Clip negative eigenvalues at zero and re-symmetrize.
PsdRepair clip_to_psd(const CMatrix &m);

/// tr(A B) without forming the product.
cplx trace_product(const CMatrix &a, const CMatrix &b);

/// Kronecker product of a real matrix with a complex one.
CMatrix kron(const RMatrix &a, const CMatrix &b);

/// Inverse of a Hermitian positive definite matrix via Cholesky.
/// Throws SingularModel if the factorization fails.
CMatrix hpd_inverse(const CMatrix &m, const char *what);

/// True when m equals s * I for some real s (within tol relative to |s|).
bool is_scaled_identity(const CMatrix &m, double *scale = nullptr, double tol = 1e-14);

/// Sampler for CN(0, R). Uses a Cholesky factor when R is positive definite,
/// an eigenvalue square root when R is only semidefinite, and a plain scale
/// when R is diagonal.
class GaussianSampler {
public:
    GaussianSampler() = default;
    explicit GaussianSampler(const CMatrix &covariance);

    Eigen::Index dimension() const { return dim_; }
    CVector sample(Rng &rng) const;
    /// Maps white CN(0, I) noise to CN(0, R).
    CVector color(const CVector &white) const;

private:
    Eigen::Index dim_ = 0;
    bool diagonal_ = false;
    RVector diag_sqrt_;
    CMatrix factor_;
};

} // namespace agingsim
