// SPDX-License-Identifier: Apache-2.0
//
// agingsim command line: closed-form sweeps, Monte-Carlo runs, full network
// experiments and closed-form vs simulation validation tables.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "agingsim/montecarlo.hpp"
#include "agingsim/netsim.hpp"
#include "agingsim/results_io.hpp"

using namespace agingsim;

namespace {

struct CommonArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "results";
    std::string sweep;
    std::string scenario;
    std::optional<int> predictor_order;
    std::optional<std::size_t> trials;
    std::optional<unsigned> threads;
    bool quiet = false;
};

void add_common(CLI::App *cmd, CommonArgs &a) {
    cmd->add_option("--config", a.config, "key = value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", a.seed, "master random seed");
    cmd->add_option("--out-dir", a.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--sweep", a.sweep, "sweep as name=start:stop:step (normalized_doppler, nt, predictor_order)");
    cmd->add_option("--scenario", a.scenario, "comma separated CSI scenarios: current,aged,predicted");
    cmd->add_option("--predictor-order", a.predictor_order, "Wiener predictor order p")->check(CLI::NonNegativeNumber);
    cmd->add_option("--trials", a.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", a.threads, "worker threads (0: all cores)");
    cmd->add_flag("-q,--quiet", a.quiet, "suppress the summary table");
}

NetworkConfig network_config(const CommonArgs &a) {
    NetworkConfig c;
    if (!a.config.empty())
        c = load_config(a.config, c);
    if (a.seed)
        c.seed = *a.seed;
    if (!a.sweep.empty())
        c.sweep = SweepSpec::parse(a.sweep);
    if (!a.scenario.empty())
        c.scenarios = parse_scenarios(a.scenario);
    if (a.predictor_order)
        c.predictor_order = *a.predictor_order;
    if (a.trials)
        c.mc_trials = *a.trials;
    if (a.threads)
        c.threads = *a.threads;
    return c;
}

int run_experiment(const CommonArgs &a, std::optional<EvaluationMode> force) {
    NetworkConfig c = network_config(a);
    if (force)
        c.mode = *force;
    const ExperimentResult r = run_sweep(c);
    const auto paths = emit_results(r, a.out_dir);
    if (!a.quiet) {
        std::cout << kSweepHeader << "\n";
        for (const auto &rec : r.records)
            std::printf("%.6g,%s,%s,%.6g,%.3g,%zu\n", rec.sweep_value, to_string(rec.scenario).c_str(),
                        to_string(rec.direction).c_str(), rec.mean_sum_rate, rec.stderr_sum_rate, rec.n_samples);
        std::cout << "wrote " << paths.size() << " files to " << a.out_dir << "\n";
    }
    if (!r.errors.empty()) {
        for (const auto &[i, msg] : r.errors)
            std::cerr << "error at " << r.sweep_name << "=" << r.sweep_values[i] << ": " << msg << "\n";
        return 1;
    }
    return 0;
}

struct ValidateArgs {
    double alpha = 0.9;
    std::string direction = "uplink,downlink";
    std::size_t inner = 0;
};

int run_validate(const CommonArgs &a, const ValidateArgs &v) {
    if (!a.config.empty())
        throw InvalidArgument("validate uses the built-in two-cell scalar network and takes no --config");
    ValidationConfig base;
    base.alpha = v.alpha;
    base.engine.num_trials = a.trials.value_or(50000);
    base.engine.seed = a.seed.value_or(1);
    base.engine.threads = a.threads.value_or(0);
    base.engine.inner_size = v.inner;
    if (!a.sweep.empty()) {
        const SweepSpec s = SweepSpec::parse(a.sweep);
        if (s.name != "nt")
            throw InvalidArgument("validate only sweeps nt");
        base.antennas.clear();
        for (double x : s.values())
            base.antennas.push_back(static_cast<Eigen::Index>(x));
    }
    const auto kinds = parse_scenarios(a.scenario.empty() ? "aged" : a.scenario);
    std::vector<Direction> dirs;
    std::stringstream list(v.direction);
    for (std::string item; std::getline(list, item, ',');)
        if (!item.empty())
            dirs.push_back(parse_direction(item));
    if (dirs.empty())
        throw InvalidArgument("validate: --direction must name uplink and/or downlink");

    const ScalarNetwork net = ScalarNetwork::two_cell();
    std::vector<ValidationRow> rows;
    for (auto k : kinds)
        for (auto d : dirs) {
            ValidationConfig cfg = base;
            cfg.scenario = {k, k == CsiKind::predicted ? a.predictor_order.value_or(2) : 0};
            cfg.direction = d;
            const auto part = validate_detequiv(net, cfg);
            rows.insert(rows.end(), part.begin(), part.end());
        }

    std::filesystem::create_directories(a.out_dir);
    write_file((std::filesystem::path(a.out_dir) / "validate.csv").string(), validation_csv(rows));
    nlohmann::json meta;
    meta["network"] = "two-cell scalar: beta_bb=1, beta_bc=0.3, sigma2/(p_p tau)=0.1, sigma2/p_r=0.05, "
                      "sigma2/p_f=0.05, U=1";
    meta["alpha"] = v.alpha;
    meta["seed"] = base.engine.seed;
    meta["trials"] = base.engine.num_trials;
    meta["inner_size"] = base.engine.inner_size;
    meta["predictor_order"] = a.predictor_order.value_or(2);
    write_file((std::filesystem::path(a.out_dir) / "metadata.json").string(), meta.dump(2) + "\n");
    if (!a.quiet) {
        std::printf("%5s %-9s %-10s %12s %12s %12s %9s %9s\n", "nt", "direction", "scenario", "eta", "mc_mean",
                    "mc_power", "rel_err", "rel_pow");
        for (const auto &r : rows)
            std::printf("%5ld %-9s %-10s %12.6g %12.6g %12.6g %9.4f %9.4f\n", static_cast<long>(r.num_antennas),
                        to_string(r.direction).c_str(), r.scenario.label().c_str(), r.eta, r.mc_sinr,
                        r.mc_power_sinr, r.rel_error, r.rel_error_power);
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Channel aging and prediction for multi-cell massive MIMO"};
    app.require_subcommand(1);
    std::string log_level = "warn";
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error, off")->capture_default_str();

    CommonArgs deteq_args, mc_args, net_args, val_args;
    ValidateArgs val_extra;
    auto *deteq = app.add_subcommand("deteq", "closed-form sweep over the configured network");
    add_common(deteq, deteq_args);
    auto *mc = app.add_subcommand("mc", "Monte-Carlo sweep over the configured network");
    add_common(mc, mc_args);
    auto *net = app.add_subcommand("netsim", "network experiment, evaluation mode taken from the config");
    add_common(net, net_args);
    auto *val = app.add_subcommand("validate", "closed form vs Monte-Carlo on the two-cell scalar network");
    add_common(val, val_args);
    val->add_option("--alpha", val_extra.alpha, "temporal correlation")->check(CLI::Range(-1.0, 1.0));
    val->add_option("--direction", val_extra.direction, "uplink,downlink")->capture_default_str();
    val->add_option("--inner", val_extra.inner, "downlink inner block size (0: pooled)");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(spdlog::level::from_str(log_level));

    try {
        if (*deteq)
            return run_experiment(deteq_args, EvaluationMode::deteq);
        if (*mc)
            return run_experiment(mc_args, EvaluationMode::mc);
        if (*net)
            return run_experiment(net_args, std::nullopt);
        return run_validate(val_args, val_extra);
    } catch (const std::exception &e) {
        std::cerr << "agingsim: " << e.what() << "\n";
        return 1;
    }
}
