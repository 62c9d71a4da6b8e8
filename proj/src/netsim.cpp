// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#include "agingsim/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "agingsim/detequiv.hpp"
#include "agingsim/parallel.hpp"
#include "agingsim/spatial.hpp"
#include "agingsim/temporal.hpp"

namespace agingsim {

using std::numbers::pi;

std::string to_string(SpatialMode m) {
    switch (m) {
    case SpatialMode::automatic:
        return "auto";
    case SpatialMode::uca:
        return "uca";
    case SpatialMode::identity:
        return "identity";
    }
    return "?";
}

std::string to_string(EvaluationMode m) { return m == EvaluationMode::deteq ? "deteq" : "mc"; }

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string &key, const std::string &value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception &) {
        throw InvalidArgument("config: '" + key + "' expects a number, got '" + value + "'");
    }
    if (pos != value.size())
        throw InvalidArgument("config: '" + key + "' expects a number, got '" + value + "'");
    return v;
}

long long parse_int(const std::string &key, const std::string &value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v) || std::fabs(v) > 9e15)
        throw InvalidArgument("config: '" + key + "' expects an integer, got '" + value + "'");
    return static_cast<long long>(v);
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        out.push_back(trim(item));
    return out;
}

} // namespace

SweepSpec SweepSpec::parse(const std::string &text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw InvalidArgument("sweep: expected name=start:stop:step, got '" + text + "'");
    SweepSpec s;
    s.name = trim(text.substr(0, eq));
    const auto parts = split(text.substr(eq + 1), ':');
    if (parts.size() != 3)
        throw InvalidArgument("sweep: expected name=start:stop:step, got '" + text + "'");
    s.start = parse_double("sweep", parts[0]);
    s.stop = parse_double("sweep", parts[1]);
    s.step = parse_double("sweep", parts[2]);
    (void)s.values();
    return s;
}

std::vector<double> SweepSpec::values() const {
    if (name != "normalized_doppler" && name != "nt" && name != "predictor_order")
        throw InvalidArgument("sweep: unknown variable '" + name + "' (normalized_doppler, nt, predictor_order)");
    if (!std::isfinite(start) || !std::isfinite(stop) || !(step > 0.0))
        throw InvalidArgument("sweep: need finite bounds and a positive step");
    if (stop < start)
        throw InvalidArgument("sweep: stop must not be below start");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (n > 100000)
        throw InvalidArgument("sweep: too many points");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = start + static_cast<double>(i) * step;
    if (name != "normalized_doppler")
        for (double x : v)
            if (x != std::floor(x) || x < (name == "nt" ? 1.0 : 0.0))
                throw InvalidArgument("sweep: '" + name + "' takes integer values");
    return v;
}

std::string SweepSpec::str() const {
    return name + "=" + fmt_double(start) + ":" + fmt_double(stop) + ":" + fmt_double(step);
}

void NetworkConfig::validate() const {
    if (num_cells != 1 && num_cells != 7 && num_cells != 19)
        throw InvalidArgument("config: num_cells must be 1, 7 or 19");
    if (!(inter_site_distance > 0.0))
        throw InvalidArgument("config: inter_site_distance must be positive");
    if (users_per_cell < 1 || num_antennas < 1)
        throw InvalidArgument("config: users_per_cell and num_antennas must be positive");
    if (effective_pilot_length() < users_per_cell)
        throw InvalidArgument("config: pilot_length must be at least users_per_cell");
    if (!(bandwidth_hz > 0.0) || !(carrier_hz > 0.0))
        throw InvalidArgument("config: bandwidth and carrier must be positive");
    if (!(min_distance >= kMinPathlossDistanceKm * 1000.0))
        throw InvalidArgument("config: min_distance must be at least 35 m");
    if (!(min_distance < inter_site_distance / 2.0))
        throw InvalidArgument("config: min_distance must lie inside the cell");
    if (!(angle_spread_deg > 0.0))
        throw InvalidArgument("config: angle_spread_deg must be positive");
    if (velocity_min_kmh < 0.0 || velocity_max_kmh < velocity_min_kmh)
        throw InvalidArgument("config: invalid velocity range");
    if (csi_delay_min_ms <= 0.0 || csi_delay_max_ms < csi_delay_min_ms)
        throw InvalidArgument("config: invalid CSI delay range");
    if (num_drops < 1)
        throw InvalidArgument("config: num_drops must be positive");
    if (predictor_order < 0)
        throw InvalidArgument("config: predictor_order must be nonnegative");
    if (scenarios.empty() || directions.empty())
        throw InvalidArgument("config: need at least one scenario and one direction");
    if (mode == EvaluationMode::mc && mc_trials == 0)
        throw InvalidArgument("config: mc_trials must be positive");
    if (mc_inner_size != 0 && mc_inner_size < kMinInnerSamples)
        throw InvalidArgument("config: mc_inner_size below 100");
    if (!(normalized_doppler >= 0.0))
        throw InvalidArgument("config: normalized_doppler must be nonnegative");
    (void)sweep.values();
}

SpatialMode NetworkConfig::resolved_spatial() const {
    if (spatial != SpatialMode::automatic)
        return spatial;
    return std::find(scenarios.begin(), scenarios.end(), CsiKind::predicted) != scenarios.end()
               ? SpatialMode::identity
               : SpatialMode::uca;
}

std::vector<std::pair<std::string, std::string>> NetworkConfig::entries() const {
    std::string scen;
    for (auto k : scenarios)
        scen += (scen.empty() ? "" : ",") + to_string(k);
    std::string dirs;
    for (auto d : directions)
        dirs += (dirs.empty() ? "" : ",") + to_string(d);
    return {
        {"num_cells", std::to_string(num_cells)},
        {"inter_site_distance", fmt_double(inter_site_distance)},
        {"users_per_cell", std::to_string(users_per_cell)},
        {"num_antennas", std::to_string(num_antennas)},
        {"bs_power_dbm", fmt_double(bs_power_dbm)},
        {"ue_power_dbm", fmt_double(ue_power_dbm)},
        {"pilot_power_dbm", fmt_double(pilot_power_dbm)},
        {"pilot_length", std::to_string(effective_pilot_length())},
        {"bs_gain_dbi", fmt_double(bs_gain_dbi)},
        {"penetration_db", fmt_double(penetration_db)},
        {"bandwidth_hz", fmt_double(bandwidth_hz)},
        {"noise_density_dbm_hz", fmt_double(noise_density_dbm_hz)},
        {"bs_noise_figure_db", fmt_double(bs_noise_figure_db)},
        {"ue_noise_figure_db", fmt_double(ue_noise_figure_db)},
        {"carrier_hz", fmt_double(carrier_hz)},
        {"velocity_min_kmh", fmt_double(velocity_min_kmh)},
        {"velocity_max_kmh", fmt_double(velocity_max_kmh)},
        {"csi_delay_min_ms", fmt_double(csi_delay_min_ms)},
        {"csi_delay_max_ms", fmt_double(csi_delay_max_ms)},
        {"min_distance", fmt_double(min_distance)},
        {"angle_spread_deg", fmt_double(angle_spread_deg)},
        {"spatial", to_string(spatial)},
        {"mode", to_string(mode)},
        {"num_drops", std::to_string(num_drops)},
        {"seed", std::to_string(seed)},
        {"mc_trials", std::to_string(mc_trials)},
        {"mc_inner_size", std::to_string(mc_inner_size)},
        {"predictor_order", std::to_string(predictor_order)},
        {"scenarios", scen},
        {"directions", dirs},
        {"sweep", sweep.str()},
        {"normalized_doppler", fmt_double(normalized_doppler)},
    };
}

std::vector<CsiKind> parse_scenarios(const std::string &list) {
    std::vector<CsiKind> out;
    for (const auto &item : split(list, ',')) {
        if (item.empty())
            continue;
        const CsiKind k = parse_csi_kind(item);
        if (std::find(out.begin(), out.end(), k) == out.end())
            out.push_back(k);
    }
    if (out.empty())
        throw InvalidArgument("scenario list is empty");
    return out;
}

void apply_setting(NetworkConfig &c, const std::string &key, const std::string &value) {
    auto as_int = [&] { return static_cast<int>(parse_int(key, value)); };
    auto as_num = [&] { return parse_double(key, value); };
    auto as_size = [&] {
        const long long v = parse_int(key, value);
        if (v < 0)
            throw InvalidArgument("config: '" + key + "' must be nonnegative");
        return static_cast<std::size_t>(v);
    };
    if (key == "num_cells") c.num_cells = as_int();
    else if (key == "inter_site_distance") c.inter_site_distance = as_num();
    else if (key == "users_per_cell") c.users_per_cell = as_int();
    else if (key == "num_antennas") c.num_antennas = as_int();
    else if (key == "bs_power_dbm") c.bs_power_dbm = as_num();
    else if (key == "ue_power_dbm") c.ue_power_dbm = as_num();
    else if (key == "pilot_power_dbm") c.pilot_power_dbm = as_num();
    else if (key == "pilot_length") c.pilot_length = as_int();
    else if (key == "bs_gain_dbi") c.bs_gain_dbi = as_num();
    else if (key == "penetration_db") c.penetration_db = as_num();
    else if (key == "bandwidth_hz") c.bandwidth_hz = as_num();
    else if (key == "noise_density_dbm_hz") c.noise_density_dbm_hz = as_num();
    else if (key == "bs_noise_figure_db") c.bs_noise_figure_db = as_num();
    else if (key == "ue_noise_figure_db") c.ue_noise_figure_db = as_num();
    else if (key == "carrier_hz") c.carrier_hz = as_num();
    else if (key == "velocity_min_kmh") c.velocity_min_kmh = as_num();
    else if (key == "velocity_max_kmh") c.velocity_max_kmh = as_num();
    else if (key == "csi_delay_min_ms") c.csi_delay_min_ms = as_num();
    else if (key == "csi_delay_max_ms") c.csi_delay_max_ms = as_num();
    else if (key == "min_distance") c.min_distance = as_num();
    else if (key == "angle_spread_deg") c.angle_spread_deg = as_num();
    else if (key == "spatial") {
        if (value == "auto") c.spatial = SpatialMode::automatic;
        else if (value == "uca") c.spatial = SpatialMode::uca;
        else if (value == "identity") c.spatial = SpatialMode::identity;
        else throw InvalidArgument("config: spatial must be auto, uca or identity");
    } else if (key == "mode") {
        if (value == "deteq") c.mode = EvaluationMode::deteq;
        else if (value == "mc") c.mode = EvaluationMode::mc;
        else throw InvalidArgument("config: mode must be deteq or mc");
    } else if (key == "num_drops") c.num_drops = as_int();
    else if (key == "seed") {
        const long long v = parse_int(key, value);
        if (v < 0)
            throw InvalidArgument("config: seed must be nonnegative");
        c.seed = static_cast<std::uint64_t>(v);
    } else if (key == "mc_trials") c.mc_trials = as_size();
    else if (key == "mc_inner_size") c.mc_inner_size = as_size();
    else if (key == "predictor_order") c.predictor_order = as_int();
    else if (key == "scenarios") c.scenarios = parse_scenarios(value);
    else if (key == "directions") {
        c.directions.clear();
        for (const auto &item : split(value, ','))
            if (!item.empty())
                c.directions.push_back(parse_direction(item));
    } else if (key == "sweep") c.sweep = SweepSpec::parse(value);
    else if (key == "normalized_doppler") c.normalized_doppler = as_num();
    else if (key == "threads") c.threads = static_cast<unsigned>(as_size());
    else throw InvalidArgument("config: unknown key '" + key + "'");
}

NetworkConfig parse_config_text(const std::string &text, NetworkConfig base) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
        try {
            apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const Error &e) {
            throw InvalidArgument("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

NetworkConfig load_config(const std::string &path, NetworkConfig base) {
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), std::move(base));
}

std::string config_hash(const NetworkConfig &config) {
    std::uint64_t h = 14695981039346656037ull;
    for (const auto &[k, v] : config.entries()) {
        for (char ch : k + "=" + v + "\n") {
            h ^= static_cast<unsigned char>(ch);
            h *= 1099511628211ull;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double Topology::circumradius() const { return apothem * 2.0 / std::sqrt(3.0); }

bool Topology::contains(int c, Point2 p) const {
    const Point2 o = sites.at(static_cast<std::size_t>(c));
    const double dx = p.x - o.x;
    const double dy = p.y - o.y;
    // Edge normals point at the six neighbours (0, 60, 120 degrees and opposites).
    for (int k = 0; k < 3; ++k) {
        const double t = k * pi / 3.0;
        if (std::fabs(dx * std::cos(t) + dy * std::sin(t)) > apothem)
            return false;
    }
    return true;
}

Topology build_topology(const NetworkConfig &config) {
    Topology topo;
    const double d = config.inter_site_distance;
    topo.apothem = d / 2.0;
    topo.sites.push_back({0.0, 0.0});
    if (config.num_cells >= 7)
        for (int k = 0; k < 6; ++k)
            topo.sites.push_back({d * std::cos(k * pi / 3.0), d * std::sin(k * pi / 3.0)});
    if (config.num_cells >= 19) {
        for (int k = 0; k < 6; ++k) {
            topo.sites.push_back({2 * d * std::cos(k * pi / 3.0), 2 * d * std::sin(k * pi / 3.0)});
            const double t = k * pi / 3.0 + pi / 6.0;
            topo.sites.push_back({std::sqrt(3.0) * d * std::cos(t), std::sqrt(3.0) * d * std::sin(t)});
        }
    }
    if (static_cast<int>(topo.sites.size()) != config.num_cells)
        throw InvalidArgument("build_topology: num_cells must be 1, 7 or 19");
    return topo;
}

UserDrop drop_users(const Topology &topo, int users_per_cell, double min_distance, Rng &rng) {
    if (users_per_cell < 1)
        throw InvalidArgument("drop_users: need at least one user per cell");
    if (!(min_distance < topo.apothem))
        throw InvalidArgument("drop_users: exclusion radius covers the cell");
    const double rx = topo.circumradius();
    const double ry = topo.apothem;
    UserDrop drop;
    drop.positions.resize(topo.sites.size());
    drop.mean_angle.resize(topo.sites.size());
    for (std::size_t c = 0; c < topo.sites.size(); ++c) {
        const Point2 o = topo.sites[c];
        for (int u = 0; u < users_per_cell; ++u) {
            Point2 p;
            for (;;) {
                p = {o.x + rng.uniform(-rx, rx), o.y + rng.uniform(-ry, ry)};
                if (topo.contains(static_cast<int>(c), p) && distance(p, o) > min_distance)
                    break;
            }
            drop.positions[c].push_back(p);
            drop.mean_angle[c].push_back(rng.uniform(0.0, 2.0 * pi));
        }
    }
    return drop;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double bs_noise_watts(const NetworkConfig &config) {
    return dbm_to_watts(config.noise_density_dbm_hz + 10.0 * std::log10(config.bandwidth_hz) +
                        config.bs_noise_figure_db);
}

double ue_noise_watts(const NetworkConfig &config) {
    return dbm_to_watts(config.noise_density_dbm_hz + 10.0 * std::log10(config.bandwidth_hz) +
                        config.ue_noise_figure_db);
}

LinkBudget link_budget(Point2 user, Point2 base, const NetworkConfig &config) {
    LinkBudgetDb db;
    db.pathloss = pathloss_db(distance(user, base) / 1000.0);
    db.penetration = config.penetration_db;
    db.antenna_gain = config.bs_gain_dbi;
    return {db.gain_db(), db.linear_gain()};
}

SystemParams system_params(const NetworkConfig &config) {
    SystemParams p;
    p.pilot.num_users = config.users_per_cell;
    p.pilot.pilot_length = config.effective_pilot_length();
    p.pilot.pilot_power = dbm_to_watts(config.pilot_power_dbm);
    p.pilot.noise_variance = bs_noise_watts(config);
    p.ul_power = dbm_to_watts(config.ue_power_dbm);
    p.dl_power = dbm_to_watts(config.bs_power_dbm);
    p.ue_noise = ue_noise_watts(config);
    return p;
}

CovarianceSet network_covariances(const NetworkConfig &config, const Topology &topo, const UserDrop &drop,
                                  int num_antennas) {
    const int cells = static_cast<int>(topo.sites.size());
    const int users = config.users_per_cell;
    CovarianceSet covs(cells, users, num_antennas);
    const bool uca = config.resolved_spatial() == SpatialMode::uca && num_antennas > 1;
    const double spread = config.angle_spread_deg * pi / 180.0;
    for (int c = 0; c < cells; ++c)
        for (int u = 0; u < users; ++u) {
            std::shared_ptr<const CMatrix> shape;
            if (uca) {
                const auto geom = ArrayGeometry::with_half_wavelength_spacing(
                    num_antennas, drop.mean_angle[static_cast<std::size_t>(c)][static_cast<std::size_t>(u)], spread);
                shape = std::make_shared<const CMatrix>(uca_correlation(geom));
            }
            const Point2 pos = drop.positions[static_cast<std::size_t>(c)][static_cast<std::size_t>(u)];
            for (int b = 0; b < cells; ++b)
                covs.set(b, c, u, link_budget(pos, topo.sites[static_cast<std::size_t>(b)], config).gain, shape);
        }
    return covs;
}

namespace {

struct Combo {
    CsiKind scenario;
    Direction direction;
};

struct PointSetting {
    int num_antennas;
    double alpha;
    int order;
};

PointSetting point_setting(const NetworkConfig &config, double value) {
    PointSetting s{config.num_antennas, jakes_acf_normalized(config.normalized_doppler, 1), config.predictor_order};
    if (config.sweep.name == "normalized_doppler")
        s.alpha = jakes_acf_normalized(value, 1);
    else if (config.sweep.name == "nt")
        s.num_antennas = static_cast<int>(value);
    else
        s.order = static_cast<int>(value);
    return s;
}

// Center-cell per-user rates for every combo at one point of one drop.
std::vector<std::vector<double>> evaluate_point(const NetworkConfig &config, const CovarianceSet &covs,
                                                const CsiStatisticsTable *est, const SystemParams &params,
                                                const PointSetting &ps, const std::vector<Combo> &combos,
                                                std::uint64_t mc_seed) {
    const int users = config.users_per_cell;
    std::vector<std::vector<double>> out(combos.size());
    if (config.mode == EvaluationMode::deteq) {
        CsiStatisticsTable pred;
        const bool need_pred =
            std::any_of(combos.begin(), combos.end(), [](const Combo &c) { return c.scenario == CsiKind::predicted; });
        if (need_pred)
            pred = prediction_table(covs, params.pilot, ps.order, ps.alpha);
        for (std::size_t i = 0; i < combos.size(); ++i) {
            const Combo &cb = combos[i];
            for (int u = 0; u < users; ++u) {
                const UserIndex t{0, u};
                SinrBreakdown r;
                if (cb.direction == Direction::uplink) {
                    if (cb.scenario == CsiKind::current)
                        r = ul_sinr_current(*est, covs, params.uplink(), t);
                    else if (cb.scenario == CsiKind::aged)
                        r = ul_sinr_aged(ps.alpha, *est, covs, params.uplink(), t);
                    else
                        r = ul_sinr_predicted(ps.order, ps.alpha, pred, covs, params.uplink(), t);
                } else {
                    if (cb.scenario == CsiKind::current)
                        r = dl_sinr_current(*est, covs, params.downlink(), t);
                    else if (cb.scenario == CsiKind::aged)
                        r = dl_sinr_aged(ps.alpha, *est, covs, params.downlink(), t);
                    else
                        r = dl_sinr_predicted(ps.order, ps.alpha, pred, covs, params.downlink(), t);
                }
                out[i].push_back(r.rate);
            }
        }
        return out;
    }

    std::vector<CsiScenario> scen;
    for (auto k : config.scenarios)
        scen.push_back({k, k == CsiKind::predicted ? ps.order : 0});
    TrialEngineConfig ec;
    ec.num_trials = config.mc_trials;
    ec.seed = mc_seed;
    ec.threads = 1; // drops already run in parallel
    ec.alpha = ps.alpha;
    ec.inner_size = config.mc_inner_size;
    for (int u = 0; u < users; ++u)
        ec.targets.push_back({0, u});
    ec.uplink = std::find(config.directions.begin(), config.directions.end(), Direction::uplink) !=
                config.directions.end();
    ec.downlink = std::find(config.directions.begin(), config.directions.end(), Direction::downlink) !=
                  config.directions.end();
    const McResult mc = run_trials(covs, params, scen, ec);
    for (std::size_t i = 0; i < combos.size(); ++i) {
        const auto pos = static_cast<std::size_t>(
            std::find(config.scenarios.begin(), config.scenarios.end(), combos[i].scenario) -
            config.scenarios.begin());
        const ScenarioResult &sr = mc.scenarios[pos];
        for (int u = 0; u < users; ++u) {
            const auto ui = static_cast<std::size_t>(u);
            if (combos[i].direction == Direction::uplink) {
                out[i].push_back(ergodic_rate(sr.uplink[ui].sinr).mean);
            } else {
                const auto &dl = sr.downlink[ui];
                if (dl.block_sinr.empty()) {
                    out[i].push_back(rate(dl.pooled_sinr));
                } else {
                    double sum = 0.0;
                    for (double s : dl.block_sinr)
                        sum += rate(s);
                    out[i].push_back(sum / static_cast<double>(dl.block_sinr.size()));
                }
            }
        }
    }
    return out;
}

} // namespace

ExperimentResult run_sweep(const NetworkConfig &config) {
    config.validate();
    ExperimentResult result;
    result.config = config;
    result.sweep_name = config.sweep.name;
    result.sweep_values = config.sweep.values();
    result.spatial_used = config.resolved_spatial();

    const Topology topo = build_topology(config);
    const SystemParams params = system_params(config);
    std::vector<Combo> combos;
    for (auto k : config.scenarios)
        for (auto d : config.directions)
            combos.push_back({k, d});
    const bool need_est = std::any_of(combos.begin(), combos.end(),
                                      [](const Combo &c) { return c.scenario != CsiKind::predicted; }) ||
                          config.mode == EvaluationMode::mc;

    const std::size_t npts = result.sweep_values.size();
    const auto ndrops = static_cast<std::size_t>(config.num_drops);
    // rates[drop][point][combo][user]
    std::vector<std::vector<std::vector<std::vector<double>>>> rates(
        ndrops, std::vector<std::vector<std::vector<double>>>(npts));
    std::vector<std::map<std::size_t, std::string>> errors(ndrops);

    parallel_for(ndrops, config.threads, [&](std::size_t d) {
        Rng rng(derive_seed(config.seed, d));
        const UserDrop drop = drop_users(topo, config.users_per_cell, config.min_distance, rng);
        int cached_nt = -1;
        std::optional<CovarianceSet> covs;
        std::optional<CsiStatisticsTable> est;
        for (std::size_t i = 0; i < npts; ++i) {
            try {
                const PointSetting ps = point_setting(config, result.sweep_values[i]);
                if (ps.num_antennas != cached_nt) {
                    covs.emplace(network_covariances(config, topo, drop, ps.num_antennas));
                    est.reset();
                    if (need_est)
                        est.emplace(estimation_table(*covs, params.pilot));
                    cached_nt = ps.num_antennas;
                }
                const std::uint64_t mc_seed = derive_seed(derive_seed(config.seed, 1000003 + d), i);
                rates[d][i] = evaluate_point(config, *covs, est ? &*est : nullptr, params, ps, combos, mc_seed);
            } catch (const Error &e) {
                errors[d][i] = e.what();
            }
        }
    });

    for (std::size_t d = 0; d < ndrops; ++d)
        for (const auto &[i, msg] : errors[d])
            if (!result.errors.count(i))
                result.errors[i] = "drop " + std::to_string(d) + ": " + msg;

    for (std::size_t i = 0; i < npts; ++i) {
        if (result.errors.count(i))
            continue;
        for (std::size_t k = 0; k < combos.size(); ++k) {
            SweepRecord rec;
            rec.sweep_value = result.sweep_values[i];
            rec.scenario = combos[k].scenario;
            rec.direction = combos[k].direction;
            rec.point = i;
            std::vector<double> sums;
            for (std::size_t d = 0; d < ndrops; ++d) {
                double s = 0.0;
                for (double r : rates[d][i][k]) {
                    s += r;
                    rec.user_rates.push_back(r);
                }
                sums.push_back(s);
            }
            double mean = 0.0;
            for (double s : sums)
                mean += s;
            mean /= static_cast<double>(sums.size());
            double var = 0.0;
            for (double s : sums)
                var += (s - mean) * (s - mean);
            rec.mean_sum_rate = mean;
            rec.stderr_sum_rate =
                sums.size() > 1 ? std::sqrt(var / static_cast<double>(sums.size() - 1) / static_cast<double>(sums.size()))
                                : 0.0;
            rec.n_samples = sums.size();
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

} // namespace agingsim
