// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#include "agingsim/types.hpp"

namespace agingsim {

std::string to_string(Direction d) {
    return d == Direction::uplink ? "uplink" : "downlink";
}

std::string to_string(CsiKind k) {
    switch (k) {
    case CsiKind::current:
        return "current";
    case CsiKind::aged:
        return "aged";
    case CsiKind::predicted:
        return "predicted";
    }
    return "unknown";
}

Direction parse_direction(const std::string &s) {
    if (s == "uplink" || s == "ul")
        return Direction::uplink;
    if (s == "downlink" || s == "dl")
        return Direction::downlink;
    throw InvalidArgument("unknown direction '" + s + "'");
}

CsiKind parse_csi_kind(const std::string &s) {
    if (s == "current")
        return CsiKind::current;
    if (s == "aged")
        return CsiKind::aged;
    if (s == "predicted")
        return CsiKind::predicted;
    throw InvalidArgument("unknown CSI scenario '" + s + "'");
}

} // namespace agingsim
