// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#pragma once

#include <memory>
#include <vector>

#include "agingsim/spatial.hpp"
#include "agingsim/types.hpp"

namespace agingsim {

// Covariances R_bcu of every (base station b, cell c, user u) link in a
// network of C cells with U users each. A link is stored as a scalar gain
// times a shared shape matrix so that users whose links share a spatial
// correlation (the usual case: one correlation per user, one gain per base
// station) do not duplicate Nt x Nt storage. A null shape means identity.
class CovarianceSet {
public:
    CovarianceSet(int num_cells, int num_users, Eigen::Index num_antennas);

    /// R_bcu = beta(b, c) * I for every user u.
    static CovarianceSet scalar(const RMatrix &beta, int num_users, Eigen::Index num_antennas);

    int num_cells() const { return cells_; }
    int num_users() const { return users_; }
    Eigen::Index num_antennas() const { return nt_; }

    void set(int b, int c, int u, const CMatrix &matrix);
    void set(int b, int c, int u, double gain, std::shared_ptr<const CMatrix> shape);
    void set(const LinkCovariance &link);

    bool has(int b, int c, int u) const;
    double gain(int b, int c, int u) const;
    /// Shape matrix, or nullptr for identity.
    const CMatrix *shape(int b, int c, int u) const;
    CMatrix matrix(int b, int c, int u) const;
    /// R_bar_bu = sum_c R_bcu.
    CMatrix rbar(int b, int u) const;
    /// True when every stored link has identity shape.
    bool all_identity() const;
    /// Throws InvalidArgument naming the first missing link, if any.
    void require_complete() const;

private:
    struct Entry {
        bool present = false;
        double gain = 0.0;
        std::shared_ptr<const CMatrix> shape;
    };
    std::size_t index(int b, int c, int u) const;
    const Entry &entry(int b, int c, int u) const;

    int cells_;
    int users_;
    Eigen::Index nt_;
    std::vector<Entry> entries_;
};

} // namespace agingsim
