// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#include "agingsim/covariance.hpp"

#include <string>

namespace agingsim {

CovarianceSet::CovarianceSet(int num_cells, int num_users, Eigen::Index num_antennas)
    : cells_(num_cells), users_(num_users), nt_(num_antennas) {
    if (num_cells < 1 || num_users < 1 || num_antennas < 1)
        throw InvalidArgument("CovarianceSet: cells, users and antennas must be positive");
    entries_.resize(static_cast<std::size_t>(cells_) * cells_ * users_);
}

CovarianceSet CovarianceSet::scalar(const RMatrix &beta, int num_users, Eigen::Index num_antennas) {
    if (beta.rows() != beta.cols())
        throw DimensionMismatch("CovarianceSet::scalar: beta must be square");
    CovarianceSet set(static_cast<int>(beta.rows()), num_users, num_antennas);
    for (int b = 0; b < set.cells_; ++b)
        for (int c = 0; c < set.cells_; ++c)
            for (int u = 0; u < num_users; ++u)
                set.set(b, c, u, beta(b, c), nullptr);
    return set;
}

std::size_t CovarianceSet::index(int b, int c, int u) const {
    if (b < 0 || b >= cells_ || c < 0 || c >= cells_ || u < 0 || u >= users_)
        throw InvalidArgument("CovarianceSet: link (" + std::to_string(b) + "," + std::to_string(c) + "," +
                              std::to_string(u) + ") out of range");
    return (static_cast<std::size_t>(b) * cells_ + c) * users_ + u;
}

const CovarianceSet::Entry &CovarianceSet::entry(int b, int c, int u) const {
    const Entry &e = entries_[index(b, c, u)];
    if (!e.present)
        throw InvalidArgument("CovarianceSet: missing covariance for link (" + std::to_string(b) + "," +
                              std::to_string(c) + "," + std::to_string(u) + ")");
    return e;
}

void CovarianceSet::set(int b, int c, int u, const CMatrix &matrix) {
    if (matrix.rows() != nt_ || matrix.cols() != nt_)
        throw DimensionMismatch("CovarianceSet: covariance must be Nt x Nt");
    set(b, c, u, 1.0, std::make_shared<const CMatrix>(matrix));
}

void CovarianceSet::set(int b, int c, int u, double gain, std::shared_ptr<const CMatrix> shape) {
    if (!(gain >= 0.0))
        throw InvalidArgument("CovarianceSet: gain must be nonnegative");
    if (shape && (shape->rows() != nt_ || shape->cols() != nt_))
        throw DimensionMismatch("CovarianceSet: shape must be Nt x Nt");
    Entry &e = entries_[index(b, c, u)];
    e.present = true;
    e.gain = gain;
    e.shape = std::move(shape);
}

void CovarianceSet::set(const LinkCovariance &link) {
    set(link.link.base, link.link.cell, link.link.user, link.matrix);
}

bool CovarianceSet::has(int b, int c, int u) const { return entries_[index(b, c, u)].present; }

double CovarianceSet::gain(int b, int c, int u) const { return entry(b, c, u).gain; }

const CMatrix *CovarianceSet::shape(int b, int c, int u) const { return entry(b, c, u).shape.get(); }

CMatrix CovarianceSet::matrix(int b, int c, int u) const {
    const Entry &e = entry(b, c, u);
    if (!e.shape)
        return CMatrix::Identity(nt_, nt_) * e.gain;
    return e.gain * *e.shape;
}

CMatrix CovarianceSet::rbar(int b, int u) const {
    CMatrix out = CMatrix::Zero(nt_, nt_);
    for (int c = 0; c < cells_; ++c) {
        const Entry &e = entry(b, c, u);
        if (e.shape)
            out += e.gain * *e.shape;
        else
            out.diagonal().array() += e.gain;
    }
    return out;
}

bool CovarianceSet::all_identity() const {
    for (const auto &e : entries_)
        if (e.present && e.shape)
            return false;
    return true;
}

void CovarianceSet::require_complete() const {
    for (int b = 0; b < cells_; ++b)
        for (int c = 0; c < cells_; ++c)
            for (int u = 0; u < users_; ++u)
                (void)entry(b, c, u);
}

} // namespace agingsim
