// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "agingsim/covariance.hpp"
#include "agingsim/montecarlo.hpp"
#include "agingsim/random.hpp"
#include "agingsim/types.hpp"

namespace agingsim {

enum class SpatialMode { automatic, uca, identity };
enum class EvaluationMode { deteq, mc };

std::string to_string(SpatialMode m);
std::string to_string(EvaluationMode m);

struct SweepSpec {
    std::string name = "normalized_doppler"; ///< normalized_doppler | nt | predictor_order
    double start = 0.0;
    double stop = 0.5;
    double step = 0.05;

    /// Parses "name=start:stop:step".
    static SweepSpec parse(const std::string &text);
    std::vector<double> values() const;
    std::string str() const;
};

struct NetworkConfig {
    int num_cells = 7;
    double inter_site_distance = 500.0; ///< m
    int users_per_cell = 12;
    int num_antennas = 24;
    double bs_power_dbm = 46.0;
    double ue_power_dbm = 23.0;    ///< uplink data power, not in the reference parameter table
    double pilot_power_dbm = 23.0; ///< per-user pilot power
    int pilot_length = 0;          ///< 0: equal to users_per_cell
    double bs_gain_dbi = 10.0;
    double penetration_db = 20.0;
    double bandwidth_hz = 10e6;
    double noise_density_dbm_hz = -174.0;
    double bs_noise_figure_db = 5.0;
    double ue_noise_figure_db = 9.0;
    double carrier_hz = 2e9;
    double velocity_min_kmh = 3.0;
    double velocity_max_kmh = 120.0;
    double csi_delay_min_ms = 1.0;
    double csi_delay_max_ms = 10.0;
    double min_distance = 35.0; ///< m
    double angle_spread_deg = 10.0;
    SpatialMode spatial = SpatialMode::automatic;
    EvaluationMode mode = EvaluationMode::deteq;
    int num_drops = 10;
    std::uint64_t seed = 1;
    std::size_t mc_trials = 2000;
    std::size_t mc_inner_size = 0;
    int predictor_order = 5;
    std::vector<CsiKind> scenarios{CsiKind::current, CsiKind::aged};
    std::vector<Direction> directions{Direction::uplink, Direction::downlink};
    SweepSpec sweep;
    /// Fixed normalized Doppler used when the sweep variable is not normalized_doppler.
    double normalized_doppler = 0.1;
    unsigned threads = 0;

    void validate() const;
    int effective_pilot_length() const { return pilot_length > 0 ? pilot_length : users_per_cell; }
    /// Spatial mode after resolving `automatic`: identity when predicted CSI is requested.
    SpatialMode resolved_spatial() const;
    /// Canonical "key = value" listing, also the input to config_hash.
    std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Applies one "key = value" setting; throws InvalidArgument for unknown keys.
void apply_setting(NetworkConfig &config, const std::string &key, const std::string &value);
/// Parses a "key = value" file with '#' comments.
NetworkConfig parse_config_text(const std::string &text, NetworkConfig base = {});
NetworkConfig load_config(const std::string &path, NetworkConfig base = {});
/// FNV-1a 64 of the canonical listing, hex encoded.
std::string config_hash(const NetworkConfig &config);

std::vector<CsiKind> parse_scenarios(const std::string &list);

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(Point2 a, Point2 b);

struct Topology {
    std::vector<Point2> sites; ///< base station b at the center of cell b
    double apothem = 250.0;    ///< inscribed radius of each hexagonal cell
    double circumradius() const;
    /// True when p lies in the hexagon of cell c.
    bool contains(int c, Point2 p) const;
};

/// 1, 7 or 19 hexagonal cells, center cell 0 at the origin.
Topology build_topology(const NetworkConfig &config);

struct UserDrop {
    std::vector<std::vector<Point2>> positions; ///< [cell][user]
    std::vector<std::vector<double>> mean_angle; ///< [cell][user] AoA in [0, 2 pi)
};

UserDrop drop_users(const Topology &topo, int users_per_cell, double min_distance, Rng &rng);

struct LinkBudget {
    double gain_db = 0.0;
    double gain = 0.0; ///< linear
};

double dbm_to_watts(double dbm);
double bs_noise_watts(const NetworkConfig &config);
double ue_noise_watts(const NetworkConfig &config);
/// Large-scale gain of the link from user position to base station position.
LinkBudget link_budget(Point2 user, Point2 base, const NetworkConfig &config);

/// System parameters derived from the configuration.
SystemParams system_params(const NetworkConfig &config);

/// Covariances R_bcu for a drop at the given antenna count.
CovarianceSet network_covariances(const NetworkConfig &config, const Topology &topo, const UserDrop &drop,
                                  int num_antennas);

struct SweepRecord {
    double sweep_value = 0.0;
    CsiKind scenario = CsiKind::aged;
    Direction direction = Direction::uplink;
    double mean_sum_rate = 0.0;
    double stderr_sum_rate = 0.0;
    std::size_t n_samples = 0;
    std::size_t point = 0;
    /// Per-user center-cell rates over all drops, for CDFs.
    std::vector<double> user_rates;
};

struct ExperimentResult {
    NetworkConfig config;
    std::string sweep_name;
    std::vector<double> sweep_values;
    std::vector<SweepRecord> records;
    std::map<std::size_t, std::string> errors; ///< sweep point -> diagnostic
    SpatialMode spatial_used = SpatialMode::identity;
};

ExperimentResult run_sweep(const NetworkConfig &config);

} // namespace agingsim
