// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace agingsim {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Error hierarchy. Everything thrown by the library derives from Error so the
// CLI can report a diagnostic and exit nonzero.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Non-positive-definite Toeplitz systems, singular estimator inverses.
class SingularModel : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

// Link distance below the validity range of the pathloss model.
class BelowReferenceDistance : public Error {
public:
    using Error::Error;
};

// A Monte-Carlo draw whose combiner or precoder has zero energy.
class DegenerateDraw : public Error {
public:
    using Error::Error;
};

enum class Direction { uplink, downlink };
enum class CsiKind { current, aged, predicted };

std::string to_string(Direction d);
std::string to_string(CsiKind k);
Direction parse_direction(const std::string &s);
CsiKind parse_csi_kind(const std::string &s);

// Link addressing: base station b, cell c of the user, user index u.
struct LinkIndex {
    int base = 0;
    int cell = 0;
    int user = 0;
};

// A user addressed by its serving cell and index within the cell.
struct UserIndex {
    int cell = 0;
    int user = 0;
};

} // namespace agingsim
