// SPDX-License-Identifier: Apache-2.0
//
// Acceptance battery. Each criterion prints one PASS/FAIL line with the
// measured quantities; the exit status is nonzero if any selected criterion
// fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "agingsim/detequiv.hpp"
#include "agingsim/montecarlo.hpp"
#include "agingsim/netsim.hpp"
#include "agingsim/prediction.hpp"
#include "agingsim/temporal.hpp"
#include "oracles/bessel_oracle.hpp"
#include "oracles/linear_oracle.hpp"
#include "support/process_sim.hpp"
#include "support/random_network.hpp"

using namespace agingsim;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel(double a, double b) {
    if (a == b)
        return 0.0;
    return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}

double sum_rate(const ExperimentResult &r, double value, CsiKind k, Direction d) {
    for (const auto &rec : r.records)
        if (std::fabs(rec.sweep_value - value) < 1e-9 && rec.scenario == k && rec.direction == d)
            return rec.mean_sum_rate;
    throw Error("acceptance: missing sweep record");
}

NetworkConfig table_config(int drops) {
    NetworkConfig c;
    c.num_antennas = 24;
    c.num_drops = drops;
    c.seed = 20261014;
    c.directions = {Direction::downlink};
    c.scenarios = {CsiKind::current, CsiKind::aged};
    return c;
}

// Downlink aged / current sum-rate ratio at fD Ts = 0.2, Nt = 24.
Verdict half_rate() {
    NetworkConfig c = table_config(200);
    c.sweep = SweepSpec::parse("normalized_doppler=0.2:0.2:0.2");
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_sweep(c);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!r.errors.empty())
        return {false, "sweep error: " + r.errors.begin()->second};
    const double cur = sum_rate(r, 0.2, CsiKind::current, Direction::downlink);
    const double aged = sum_rate(r, 0.2, CsiKind::aged, Direction::downlink);
    const double ratio = aged / cur;
    return {ratio >= 0.35 && ratio <= 0.65 && secs < 300.0,
            fmt("ratio %.4f (aged %.4f / current %.4f bit/s/Hz, %d drops, %s) in [0.35, 0.65], %.1f s < 300 s", ratio,
                aged, cur, c.num_drops, to_string(r.spatial_used).c_str(), secs)};
}

// Downlink aged sum-rate at the first J0 zero vs its static-channel value.
Verdict rate_null() {
    NetworkConfig c = table_config(20);
    c.scenarios = {CsiKind::aged};
    c.sweep = SweepSpec{"normalized_doppler", 0.0, 0.38274, 0.38274};
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_sweep(c);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!r.errors.empty())
        return {false, "sweep error: " + r.errors.begin()->second};
    const double still = sum_rate(r, 0.0, CsiKind::aged, Direction::downlink);
    const double null = sum_rate(r, 0.38274, CsiKind::aged, Direction::downlink);
    const double frac = null / still;
    return {frac <= 0.05 && secs < 60.0,
            fmt("sum-rate at 0.38274 is %.3e of the alpha = 1 value (%.4g / %.4g) <= 0.05, %.1f s < 60 s", frac, null,
                still, secs)};
}

// Closed form vs Monte-Carlo, scalar two-cell network, aged CSI alpha = 0.9.
Verdict convergence() {
    const auto net = ScalarNetwork::two_cell(1);
    bool pass = true;
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    for (auto dir : {Direction::uplink, Direction::downlink}) {
        ValidationConfig vc;
        vc.antennas = {16, 128};
        vc.scenario = {CsiKind::aged, 0};
        vc.direction = dir;
        vc.alpha = 0.9;
        vc.engine.num_trials = 50000;
        vc.engine.seed = 7;
        vc.engine.alpha = 0.9;
        vc.engine.uplink = dir == Direction::uplink;
        vc.engine.downlink = dir == Direction::downlink;
        const auto rows = validate_detequiv(net, vc);
        const auto &small = rows[0];
        const auto &large = rows[1];
        const bool ok = large.rel_error <= 0.05 && large.rel_error <= small.rel_error;
        pass = pass && ok;
        detail += fmt("%s: err(128) %.4f <= 0.05, err(16) %.4f [eta %.5g, mc %.5g; power-averaged err(128) %.4f]; ",
                      to_string(dir).c_str(), large.rel_error, small.rel_error, large.eta, large.mc_sinr,
                      large.rel_error_power);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    pass = pass && secs < 600.0;
    detail += fmt("%.1f s < 600 s", secs);
    return {pass, detail};
}

// alpha = 1 and p = 0 reductions on random networks.
Verdict reductions() {
    Rng rng(4242);
    double worst = 0.0;
    auto cmp = [&](const SinrBreakdown &x, const SinrBreakdown &y) {
        for (auto [a, b] : {std::pair{x.A, y.A}, {x.B, y.B}, {x.C, y.C}, {x.D, y.D}, {x.E, y.E}, {x.eta, y.eta}})
            worst = std::max(worst, rel(a, b));
    };
    for (int i = 0; i < 100; ++i) {
        const auto n = support::random_network(rng);
        const double alpha = rng.uniform(0.01, 1.0);
        const UserIndex t{static_cast<int>(rng.uniform() * n.covs.num_cells()),
                          static_cast<int>(rng.uniform() * n.covs.num_users())};
        const auto est = estimation_table(n.covs, n.params.pilot);
        const auto p0 = prediction_table(n.covs, n.params.pilot, 0, alpha);
        const auto up = n.params.uplink();
        const auto dp = n.params.downlink();
        cmp(ul_sinr_aged(1.0, est, n.covs, up, t), ul_sinr_current(est, n.covs, up, t));
        cmp(dl_sinr_aged(1.0, est, n.covs, dp, t), dl_sinr_current(est, n.covs, dp, t));
        cmp(ul_sinr_predicted(0, alpha, p0, n.covs, up, t), ul_sinr_aged(alpha, est, n.covs, up, t));
        cmp(dl_sinr_predicted(0, alpha, p0, n.covs, dp, t), dl_sinr_aged(alpha, est, n.covs, dp, t));
    }
    return {worst <= 1e-12, fmt("worst relative deviation %.3e <= 1e-12 over 100 random inputs", worst)};
}

// Wiener predictor MSE vs the naive alpha * estimate and vs its closed form.
Verdict predictor_optimality() {
    const auto net = ScalarNetwork::two_cell(1);
    const int nt = 4;
    const auto covs = net.covariances(nt);
    const PilotConfig &pilot = net.params.pilot;
    const double alpha = 0.9;
    const auto est = mmse_context(covs, pilot, 0, 0);
    const support::ProcessSimulator sim(covs, pilot, 0, 0);
    bool pass = true;
    std::string detail;
    for (int p : {1, 2, 4, 8}) {
        const auto ctx = build_predictor(covs, pilot, 0, 0, p, alpha);
        Rng rng(derive_seed(555, static_cast<std::uint64_t>(p)));
        double mse = 0.0, naive = 0.0;
        const int trials = 100000;
        for (int t = 0; t < trials; ++t) {
            const auto obs = sim.draw(p + 1, alpha, rng);
            mse += (obs.h_next - predict(ctx, ObservationStack::from(obs.y))).squaredNorm();
            naive += (obs.h_next - alpha * mmse_estimate(obs.y[0], est)).squaredNorm();
        }
        mse /= trials;
        naive /= trials;
        const double eps = predictor_mmse(ctx);
        const double dev = std::fabs(mse - eps) / eps;
        pass = pass && mse <= naive && dev <= 0.03;
        detail += fmt("p=%d mse %.5f <= naive %.5f, |mse-eps|/eps %.4f <= 0.03; ", p, mse, naive, dev);
    }
    return {pass, detail};
}

// Estimation and prediction residuals are uncorrelated with what produced them.
Verdict orthogonality() {
    const int nt = 4;
    Rng gen(17);
    CovarianceSet covs(2, 1, nt);
    for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
            covs.set(b, c, 0, support::random_covariance(nt, b == c ? 1.0 : 0.3, gen));
    const PilotConfig pilot{1, 1, 1.0, 0.2};
    const double alpha = 0.9;
    const int order = 3;
    const auto est = mmse_context(covs, pilot, 0, 0);
    const auto pred = build_predictor(covs, pilot, 0, 0, order, alpha);
    const support::ProcessSimulator sim(covs, pilot, 0, 0);
    oracle::CrossMoment est_cross(nt, nt), est_obs(nt, nt);
    std::vector<oracle::CrossMoment> pred_cross(order + 1, oracle::CrossMoment(nt, nt));
    Rng rng(23);
    for (int t = 0; t < 100000; ++t) {
        const auto obs = sim.draw(order + 1, alpha, rng);
        const CVector hhat = mmse_estimate(obs.y[0], est);
        est_cross.add(obs.h_now - hhat, hhat);
        est_obs.add(obs.h_now - hhat, obs.y[0]);
        const CVector e = obs.h_next - predict(pred, ObservationStack::from(obs.y));
        for (int j = 0; j <= order; ++j)
            pred_cross[j].add(e, obs.y[j]);
    }
    double zp = 0.0;
    for (const auto &m : pred_cross)
        zp = std::max(zp, m.max_z());
    const double ze = std::max(est_cross.max_z(), est_obs.max_z());
    return {ze < 3.0 && zp < 3.0,
            fmt("max |z| estimation residual %.3f, prediction residual %.3f (%d blocks) < 3", ze, zp, order + 1)};
}

// Levinson-Durbin on the Jakes autocorrelation at fD Ts = 0.05.
Verdict levinson() {
    double worst = 0.0;
    for (std::size_t order = 1; order <= 5; ++order) {
        const auto r = jakes_acf_sequence(0.05, order);
        const auto fit = fit_ar(r, order);
        const auto implied = oracle::ar_implied_acf(fit.coeffs, fit.innovation_variance);
        for (std::size_t k = 0; k <= order; ++k)
            worst = std::max(worst, std::fabs(implied[k] - r[k]));
        const auto model = TemporalModel::from_normalized_doppler(0.05, order);
        const auto via_model = oracle::ar_implied_acf(model.ar_coeffs(), model.innovation_variance());
        for (std::size_t k = 0; k <= order; ++k)
            worst = std::max(worst, std::fabs(via_model[k] - r[k]));
    }
    return {worst <= 1e-8, fmt("worst autocorrelation mismatch %.3e <= 1e-8 for L = 1..5", worst)};
}

// eta non-decreasing in alpha, uplink sum-rate non-decreasing in Nt.
Verdict monotonicity() {
    int violations = 0, checks = 0;
    auto sweep_alpha = [&](const CovarianceSet &covs, const SystemParams &params) {
        const auto est = estimation_table(covs, params.pilot);
        for (int u = 0; u < covs.num_users(); ++u) {
            double pu = -1.0, pd = -1.0;
            for (int i = 0; i <= 20; ++i) {
                const double a = 0.05 * i;
                const double ul = ul_sinr_aged(a, est, covs, params.uplink(), {0, u}).eta;
                const double dl = dl_sinr_aged(a, est, covs, params.downlink(), {0, u}).eta;
                violations += (ul < pu) + (dl < pd);
                checks += 2;
                pu = ul;
                pd = dl;
            }
        }
    };
    Rng rng(8);
    for (int i = 0; i < 20; ++i) {
        const auto n = support::random_network(rng);
        sweep_alpha(n.covs, n.params);
    }
    NetworkConfig c = table_config(1);
    const auto topo = build_topology(c);
    Rng drop_rng(derive_seed(c.seed, 0));
    const auto drop = drop_users(topo, c.users_per_cell, c.min_distance, drop_rng);
    sweep_alpha(network_covariances(c, topo, drop, 24), system_params(c));

    NetworkConfig s = table_config(10);
    s.directions = {Direction::uplink};
    s.sweep = SweepSpec::parse("nt=24:72:24");
    const auto r = run_sweep(s);
    if (!r.errors.empty())
        return {false, "sweep error: " + r.errors.begin()->second};
    std::string rates;
    bool nt_ok = true;
    for (auto k : {CsiKind::current, CsiKind::aged}) {
        const double a = sum_rate(r, 24, k, Direction::uplink);
        const double b = sum_rate(r, 48, k, Direction::uplink);
        const double d = sum_rate(r, 72, k, Direction::uplink);
        nt_ok = nt_ok && a <= b && b <= d;
        rates += fmt(" %s %.3f/%.3f/%.3f", to_string(k).c_str(), a, b, d);
    }
    return {violations == 0 && nt_ok,
            fmt("alpha grid: %d violations in %d steps; uplink sum-rate at Nt 24/48/72:", violations, checks) + rates};
}

std::vector<std::pair<std::string, std::string>> read_dir(const fs::path &dir) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto &e : fs::directory_iterator(dir)) {
        std::ifstream in(e.path(), std::ios::binary);
        out.emplace_back(e.path().filename().string(),
                         std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Two CLI runs with the same configuration and seed.
Verdict reproducibility(const std::string &cli) {
    if (cli.empty())
        return {false, "no --cli path given"};
    const fs::path work = fs::temp_directory_path() / ("agingsim_acc9_" + std::to_string(::getpid()));
    fs::remove_all(work);
    fs::create_directories(work);
    {
        std::ofstream cfg(work / "run.cfg");
        cfg << "users_per_cell = 3\nnum_antennas = 8\nnum_drops = 3\nmode = mc\nmc_trials = 400\n"
               "scenarios = current,aged,predicted\npredictor_order = 2\n"
               "sweep = normalized_doppler=0:0.2:0.1\n";
    }
    std::vector<std::vector<std::pair<std::string, std::string>>> runs;
    for (const char *tag : {"a", "b"}) {
        const std::string cmd = "\"" + cli + "\" netsim --config \"" + (work / "run.cfg").string() +
                                "\" --seed 99 -q --out-dir \"" + (work / tag).string() + "\"";
        if (std::system(cmd.c_str()) != 0)
            return {false, "CLI run failed: " + cmd};
        runs.push_back(read_dir(work / tag));
    }
    std::size_t csvs = 0;
    bool same = runs[0].size() == runs[1].size();
    for (std::size_t i = 0; same && i < runs[0].size(); ++i) {
        same = runs[0][i] == runs[1][i];
        csvs += runs[0][i].first.ends_with(".csv");
    }
    fs::remove_all(work);
    return {same && csvs > 0, fmt("%zu CSV files byte-identical across two runs: %s", csvs, same ? "yes" : "no")};
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"acceptance criteria"};
    int criterion = 0;
    std::string cli;
    app.add_option("--criterion", criterion, "criterion number 1-9 (0: all)")->check(CLI::Range(0, 9));
    app.add_option("--cli", cli, "path to the agingsim executable");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> all{
        {"half rate at fD Ts = 0.2", half_rate},
        {"downlink rate null at the first J0 zero", rate_null},
        {"closed form vs Monte-Carlo convergence", convergence},
        {"alpha = 1 and p = 0 reductions", reductions},
        {"Wiener predictor optimality", predictor_optimality},
        {"orthogonality of residuals", orthogonality},
        {"Levinson-Durbin consistency", levinson},
        {"monotonicity in alpha and Nt", monotonicity},
        {"CLI reproducibility", [&] { return reproducibility(cli); }},
    };
    bool ok = true;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (criterion != 0 && static_cast<std::size_t>(criterion) != i + 1)
            continue;
        Verdict v;
        try {
            v = all[i].second();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", i + 1, all[i].first.c_str(),
                    v.detail.c_str());
        std::fflush(stdout);
        ok = ok && v.pass;
    }
    return ok ? 0 : 1;
}
