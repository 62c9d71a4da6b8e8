// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#include "agingsim/results_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace agingsim {

namespace fs = std::filesystem;

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sweep_csv(std::span<const SweepRecord> records) {
    std::string out = std::string(kSweepHeader) + "\n";
    for (const auto &r : records) {
        out += format_double(r.sweep_value) + "," + to_string(r.scenario) + "," + to_string(r.direction) + "," +
               format_double(r.mean_sum_rate) + "," + format_double(r.stderr_sum_rate) + "," +
               std::to_string(r.n_samples) + "\n";
    }
    return out;
}

std::string cdf_csv(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    std::string out = "rate,empirical_cdf\n";
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        out += format_double(samples[i]) + "," + format_double(static_cast<double>(i + 1) / n) + "\n";
    return out;
}

std::string validation_csv(std::span<const ValidationRow> rows) {
    std::string out = "nt,direction,scenario,order,alpha,eta_deteq,mc_mean_sinr,mc_power_sinr,rel_error,"
                      "rel_error_power,n_used,n_infinite,n_degenerate\n";
    for (const auto &r : rows) {
        out += std::to_string(r.num_antennas) + "," + to_string(r.direction) + "," + to_string(r.scenario.kind) +
               "," + std::to_string(r.scenario.order) + "," + format_double(r.alpha) + "," + format_double(r.eta) +
               "," + format_double(r.mc_sinr) + "," + format_double(r.mc_power_sinr) + "," +
               format_double(r.rel_error) + "," + format_double(r.rel_error_power) + "," +
               std::to_string(r.n_used) + "," + std::to_string(r.n_infinite) + "," +
               std::to_string(r.n_degenerate) + "\n";
    }
    return out;
}

nlohmann::json metadata_json(const ExperimentResult &result) {
    const NetworkConfig &c = result.config;
    nlohmann::json j;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto &[k, v] : c.entries())
        cfg[k] = v;
    j["config"] = cfg;
    j["config_hash"] = config_hash(c);
    j["seed"] = c.seed;
    j["mode"] = to_string(c.mode);
    j["num_drops"] = c.num_drops;
    j["mc_trials"] = c.mode == EvaluationMode::mc ? c.mc_trials : 0;
    j["mc_inner_size"] = c.mc_inner_size;
    j["sweep"] = c.sweep.str();
    j["spatial_mode_used"] = to_string(result.spatial_used);
    j["predictor_order"] = c.predictor_order;
    j["assumed_defaults"] = {
        {"ue_power_dbm", "uplink data power is not part of the reference parameter set; default assumed"},
        {"pilot_power_dbm", "pilot power is not part of the reference parameter set; default assumed"},
        {"pilot_length", "pilot length defaults to the number of users per cell"},
    };
    nlohmann::json errs = nlohmann::json::object();
    for (const auto &[i, msg] : result.errors)
        errs[format_double(result.sweep_values.at(i))] = msg;
    j["errors"] = errs;
    return j;
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    out << content;
    out.close();
    if (!out)
        throw Error("failed writing '" + path + "'");
}

std::vector<std::string> emit_results(const ExperimentResult &result, const std::string &out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw Error("cannot create output directory '" + out_dir + "': " + ec.message());
    std::vector<std::string> paths;
    const fs::path dir(out_dir);

    const std::string sweep = (dir / "sweep.csv").string();
    write_file(sweep, sweep_csv(result.records));
    paths.push_back(sweep);

    nlohmann::json files = nlohmann::json::array();
    for (const auto &r : result.records) {
        char name[128];
        std::snprintf(name, sizeof name, "cdf_%s_%s_%03zu.csv", to_string(r.scenario).c_str(),
                      to_string(r.direction).c_str(), r.point);
        const std::string p = (dir / name).string();
        write_file(p, cdf_csv(r.user_rates));
        paths.push_back(p);
        files.push_back({{"file", name}, {"sweep_value", r.sweep_value}, {"n_samples", r.user_rates.size()}});
    }

    nlohmann::json meta = metadata_json(result);
    meta["cdf_files"] = files;
    const std::string mp = (dir / "metadata.json").string();
    write_file(mp, meta.dump(2) + "\n");
    paths.push_back(mp);
    return paths;
}

} // namespace agingsim
