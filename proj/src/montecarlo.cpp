// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#include "agingsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <spdlog/spdlog.h>

#include "agingsim/linalg.hpp"
#include "agingsim/parallel.hpp"
#include "agingsim/random.hpp"

namespace agingsim {

void CsiScenario::validate() const {
    if (order < 0)
        throw InvalidArgument("CsiScenario: predictor order must be nonnegative");
    if (kind != CsiKind::predicted && order != 0)
        throw InvalidArgument("CsiScenario: predictor order is only meaningful for predicted CSI");
}

std::string CsiScenario::label() const {
    if (kind == CsiKind::predicted)
        return "predicted(p=" + std::to_string(order) + ")";
    return to_string(kind);
}

UplinkSinr ul_realized_sinr(const CVector &g, const CVector &h_own, std::span<const CVector *const> interferers,
                            double noise_over_power) {
    if (g.size() != h_own.size())
        throw DimensionMismatch("ul_realized_sinr: combiner and channel lengths differ");
    const double g2 = g.squaredNorm();
    if (!(g2 > 0.0))
        throw DegenerateDraw("ul_realized_sinr: zero-norm combiner");
    UplinkSinr out;
    out.signal = g2 * g2;
    double i = std::norm(g.dot(h_own - g)) + noise_over_power * g2;
    for (const CVector *h : interferers) {
        if (h->size() != g.size())
            throw DimensionMismatch("ul_realized_sinr: interferer length differs");
        i += std::norm(g.dot(*h));
    }
    out.interference = i;
    out.sinr = i < kInfiniteSinrFloor ? std::numeric_limits<double>::infinity() : out.signal / i;
    return out;
}

double mf_normalization(std::span<const double> traces) {
    if (traces.empty())
        throw InvalidArgument("mf_normalization: no precoder samples");
    double sum = 0.0;
    for (double t : traces)
        sum += t;
    if (!(sum > 0.0))
        throw DegenerateDraw("mf_normalization: precoders carry no energy");
    return static_cast<double>(traces.size()) / sum;
}

double mf_normalization(std::span<const CMatrix> precoders) {
    std::vector<double> traces;
    traces.reserve(precoders.size());
    for (const auto &f : precoders)
        traces.push_back(f.squaredNorm());
    return mf_normalization(traces);
}

DownlinkAccumulator::DownlinkAccumulator(int num_cells) : leakage_(static_cast<std::size_t>(num_cells), 0.0) {
    if (num_cells < 1)
        throw InvalidArgument("DownlinkAccumulator: need at least one cell");
}

void DownlinkAccumulator::add(cplx useful, std::span<const double> leakage_per_cell) {
    if (leakage_per_cell.size() != leakage_.size())
        throw DimensionMismatch("DownlinkAccumulator: leakage count must equal the cell count");
    ++n_;
    const cplx delta = useful - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += (std::conj(delta) * (useful - mean_)).real();
    for (std::size_t c = 0; c < leakage_.size(); ++c)
        leakage_[c] += (leakage_per_cell[c] - leakage_[c]) / static_cast<double>(n_);
}

double DownlinkAccumulator::mean_leakage(int c) const { return leakage_.at(static_cast<std::size_t>(c)); }

double dl_realized_sinr(const DownlinkAccumulator &acc, std::span<const double> lambda, int serving_cell,
                        double noise_over_power) {
    if (acc.count() < kMinInnerSamples)
        throw InvalidArgument("dl_realized_sinr: need at least " + std::to_string(kMinInnerSamples) +
                              " samples to estimate expectations");
    if (lambda.size() != static_cast<std::size_t>(acc.num_cells()))
        throw DimensionMismatch("dl_realized_sinr: one normalization per cell required");
    const double lb = lambda[static_cast<std::size_t>(serving_cell)];
    const double signal = lb * std::norm(acc.mean_useful());
    double interference = lb * std::max(acc.var_useful(), 0.0) + noise_over_power;
    for (int c = 0; c < acc.num_cells(); ++c)
        interference += lambda[static_cast<std::size_t>(c)] * acc.mean_leakage(c);
    if (interference < kInfiniteSinrFloor)
        return std::numeric_limits<double>::infinity();
    return signal / interference;
}

ErgodicRate ergodic_rate(std::span<const double> sinr) {
    if (sinr.empty())
        throw InvalidArgument("ergodic_rate: no samples");
    ErgodicRate r;
    double sum = 0.0;
    for (double s : sinr) {
        if (std::isinf(s)) {
            ++r.n_infinite;
            continue;
        }
        sum += rate(s);
        ++r.n_used;
    }
    r.mean = r.n_used ? sum / static_cast<double>(r.n_used) : std::numeric_limits<double>::infinity();
    return r;
}

// ---- trial engine --------------------------------------------------------

namespace {

struct LinkColor {
    const GaussianSampler *sampler = nullptr; ///< null: identity shape
    double scale = 1.0;                       ///< sqrt(gain)
};

struct ScenarioPlan {
    CsiScenario scenario;
    std::vector<PredictorContext> predictors; ///< per (b,u), predicted only
};

struct TargetRecord {
    double signal = 0.0;
    double interference = 0.0;
    double sinr = 0.0;
    bool degenerate = false;
    cplx useful{0.0, 0.0};
    std::vector<double> leakage;
};

struct TrialRecord {
    std::vector<std::vector<TargetRecord>> targets; ///< [scenario][target]
    std::vector<std::vector<double>> energy;        ///< [scenario][cell]
};

class Engine {
public:
    Engine(const CovarianceSet &covs, const SystemParams &params, const std::vector<CsiScenario> &scenarios,
           const TrialEngineConfig &config)
        : covs_(covs), params_(params), config_(config), cells_(covs.num_cells()), users_(covs.num_users()),
          nt_(covs.num_antennas()) {
        covs.require_complete();
        params.pilot.validate();
        if (params.pilot.num_users != users_)
            throw InvalidArgument("run_trials: pilot configuration disagrees with the user count");
        if (!config.uplink && !config.downlink)
            throw InvalidArgument("run_trials: neither uplink nor downlink requested");
        if (config.num_trials == 0)
            throw InvalidArgument("run_trials: need at least one trial");
        if (config.inner_size != 0 && config.inner_size < kMinInnerSamples)
            throw InvalidArgument("run_trials: inner sample size below " + std::to_string(kMinInnerSamples));
        if (config.downlink && config.inner_size == 0 && config.num_trials < kMinInnerSamples)
            throw InvalidArgument("run_trials: downlink needs at least " + std::to_string(kMinInnerSamples) +
                                  " trials");
        if (!(std::fabs(config.alpha) <= 1.0))
            throw InvalidArgument("run_trials: |alpha| must not exceed 1");

        targets_ = config.targets;
        if (targets_.empty())
            for (int u = 0; u < users_; ++u)
                targets_.push_back({0, u});
        for (const auto &t : targets_)
            if (t.cell < 0 || t.cell >= cells_ || t.user < 0 || t.user >= users_)
                throw InvalidArgument("run_trials: target user out of range");

        alpha_ = config.trace_model ? config.trace_model->alpha() : config.alpha;

        // Users whose CSI is needed: all of them for the downlink, targets otherwise.
        need_.assign(static_cast<std::size_t>(cells_ * users_), false);
        if (config.downlink)
            std::fill(need_.begin(), need_.end(), true);
        for (const auto &t : targets_)
            need_[idx(t.cell, t.user)] = true;

        estimators_.resize(static_cast<std::size_t>(cells_ * users_));
        for (int b = 0; b < cells_; ++b)
            for (int u = 0; u < users_; ++u)
                if (need_[idx(b, u)])
                    estimators_[idx(b, u)] = mmse_context(covs, params.pilot, b, u).estimator;

        max_order_ = 0;
        need_current_ = false;
        for (const auto &s : scenarios) {
            s.validate();
            ScenarioPlan plan;
            plan.scenario = s;
            if (s.kind == CsiKind::predicted) {
                max_order_ = std::max(max_order_, s.order);
                PredictorOptions opts;
                opts.solver = config.solver;
                plan.predictors.resize(static_cast<std::size_t>(cells_ * users_));
                for (int b = 0; b < cells_; ++b)
                    for (int u = 0; u < users_; ++u)
                        if (need_[idx(b, u)])
                            plan.predictors[idx(b, u)] =
                                build_predictor(covs, params.pilot, b, u, s.order, alpha_, opts);
            }
            if (s.kind == CsiKind::current)
                need_current_ = true;
            plans_.push_back(std::move(plan));
        }
        if (plans_.empty())
            throw InvalidArgument("run_trials: no CSI scenario requested");

        // One coloring factor per distinct shape.
        std::map<const CMatrix *, std::size_t> shape_index;
        links_.resize(static_cast<std::size_t>(cells_ * cells_ * users_));
        samplers_.reserve(links_.size());
        for (int b = 0; b < cells_; ++b)
            for (int c = 0; c < cells_; ++c)
                for (int u = 0; u < users_; ++u) {
                    LinkColor lc;
                    lc.scale = std::sqrt(covs.gain(b, c, u));
                    if (const CMatrix *shape = covs.shape(b, c, u)) {
                        auto it = shape_index.find(shape);
                        if (it == shape_index.end()) {
                            samplers_.emplace_back(*shape);
                            it = shape_index.emplace(shape, samplers_.size() - 1).first;
                        }
                        lc.sampler = &samplers_[it->second];
                    }
                    links_[link(b, c, u)] = lc;
                }
        white_ = GaussianSampler(CMatrix::Identity(nt_, nt_));
    }

    const std::vector<UserIndex> &targets() const { return targets_; }
    std::size_t num_scenarios() const { return plans_.size(); }
    const CsiScenario &scenario(std::size_t s) const { return plans_[s].scenario; }

    TrialRecord trial(std::size_t index) const {
        Rng rng(derive_seed(config_.seed, index));
        const int depth = max_order_ + 2; // samples n-P .. n+1
        const int now = max_order_;       // index of n

        // Channels h[b][c][u][t].
        std::vector<std::vector<CVector>> h(links_.size());
        for (std::size_t l = 0; l < links_.size(); ++l) {
            auto &series = h[l];
            series.reserve(static_cast<std::size_t>(depth));
            if (config_.trace_model) {
                FadingState st = stationary_state(*config_.trace_model, white_, rng);
                series.push_back(st.current());
                for (int t = 1; t < depth; ++t) {
                    st = ar_step(st, *config_.trace_model, white_, rng);
                    series.push_back(st.current());
                }
            } else {
                FadingState st;
                st.history.push_back(rng.complex_normal(nt_));
                series.push_back(st.current());
                for (int t = 1; t < depth; ++t) {
                    st = gauss_markov_step(st, alpha_, white_, rng);
                    series.push_back(st.current());
                }
            }
            const LinkColor &lc = links_[l];
            for (auto &x : series)
                x = lc.sampler ? CVector(lc.scale * lc.sampler->color(x)) : CVector(lc.scale * x);
        }

        // Despread pilot observations y[b][u][t] for the users whose CSI is needed.
        const int first_obs = 0;
        const int last_obs = need_current_ ? now + 1 : now;
        const double noise = std::sqrt(params_.pilot.noise_to_pilot());
        std::vector<std::vector<CVector>> y(static_cast<std::size_t>(cells_ * users_));
        for (int b = 0; b < cells_; ++b)
            for (int u = 0; u < users_; ++u) {
                if (!need_[idx(b, u)])
                    continue;
                auto &obs = y[idx(b, u)];
                for (int t = first_obs; t <= last_obs; ++t) {
                    CVector acc = CVector::Zero(nt_);
                    for (int c = 0; c < cells_; ++c)
                        acc += h[link(b, c, u)][static_cast<std::size_t>(t)];
                    if (noise > 0.0)
                        acc += noise * rng.complex_normal(nt_);
                    obs.push_back(std::move(acc));
                }
            }

        TrialRecord rec;
        rec.targets.resize(plans_.size());
        rec.energy.resize(plans_.size());
        const std::size_t next = static_cast<std::size_t>(now + 1);
        std::vector<CVector> g(static_cast<std::size_t>(cells_ * users_));
        for (std::size_t s = 0; s < plans_.size(); ++s) {
            const ScenarioPlan &plan = plans_[s];
            for (int b = 0; b < cells_; ++b)
                for (int u = 0; u < users_; ++u) {
                    const std::size_t i = idx(b, u);
                    if (!need_[i])
                        continue;
                    const auto &obs = y[i];
                    switch (plan.scenario.kind) {
                    case CsiKind::current:
                        g[i] = estimators_[i] * obs[next];
                        break;
                    case CsiKind::aged:
                        g[i] = alpha_ * (estimators_[i] * obs[static_cast<std::size_t>(now)]);
                        break;
                    case CsiKind::predicted: {
                        std::vector<const CVector *> stack;
                        for (int j = 0; j <= plan.scenario.order; ++j)
                            stack.push_back(&obs[static_cast<std::size_t>(now - j)]);
                        g[i] = predict(plan.predictors[i], ObservationStack::from(stack));
                        break;
                    }
                    }
                }

            if (config_.downlink) {
                auto &energy = rec.energy[s];
                energy.assign(static_cast<std::size_t>(cells_), 0.0);
                for (int c = 0; c < cells_; ++c)
                    for (int k = 0; k < users_; ++k)
                        energy[static_cast<std::size_t>(c)] += g[idx(c, k)].squaredNorm();
            }

            auto &out = rec.targets[s];
            out.resize(targets_.size());
            for (std::size_t ti = 0; ti < targets_.size(); ++ti) {
                const int b = targets_[ti].cell;
                const int u = targets_[ti].user;
                TargetRecord &r = out[ti];
                if (config_.uplink) {
                    std::vector<const CVector *> others;
                    others.reserve(static_cast<std::size_t>(cells_ * users_));
                    for (int c = 0; c < cells_; ++c)
                        for (int k = 0; k < users_; ++k)
                            if (c != b || k != u)
                                others.push_back(&h[link(b, c, k)][next]);
                    try {
                        const UplinkSinr ul = ul_realized_sinr(g[idx(b, u)], h[link(b, b, u)][next], others,
                                                               params_.pilot.noise_variance / params_.ul_power);
                        r.signal = ul.signal;
                        r.interference = ul.interference;
                        r.sinr = ul.sinr;
                    } catch (const DegenerateDraw &) {
                        r.degenerate = true;
                    }
                }
                if (config_.downlink) {
                    r.useful = h[link(b, b, u)][next].dot(g[idx(b, u)]);
                    r.leakage.assign(static_cast<std::size_t>(cells_), 0.0);
                    for (int c = 0; c < cells_; ++c) {
                        const CVector &hc = h[link(c, b, u)][next];
                        for (int k = 0; k < users_; ++k)
                            if (c != b || k != u)
                                r.leakage[static_cast<std::size_t>(c)] += std::norm(hc.dot(g[idx(c, k)]));
                    }
                }
            }
        }
        return rec;
    }

private:
    std::size_t idx(int b, int u) const { return static_cast<std::size_t>(b * users_ + u); }
    std::size_t link(int b, int c, int u) const { return static_cast<std::size_t>((b * cells_ + c) * users_ + u); }

    const CovarianceSet &covs_;
    SystemParams params_;
    TrialEngineConfig config_;
    int cells_;
    int users_;
    Eigen::Index nt_;
    double alpha_ = 1.0;
    std::vector<UserIndex> targets_;
    std::vector<bool> need_;
    std::vector<CMatrix> estimators_;
    std::vector<ScenarioPlan> plans_;
    int max_order_ = 0;
    bool need_current_ = false;
    std::vector<LinkColor> links_;
    std::vector<GaussianSampler> samplers_;
    GaussianSampler white_;
};

} // namespace

McResult run_trials(const CovarianceSet &covs, const SystemParams &params, const std::vector<CsiScenario> &scenarios,
                    const TrialEngineConfig &config) {
    const Engine engine(covs, params, scenarios, config);
    const int cells = covs.num_cells();
    const auto &targets = engine.targets();
    const std::size_t ns = engine.num_scenarios();
    const std::size_t nt = targets.size();

    McResult result;
    result.targets = targets;
    result.num_trials = config.num_trials;
    result.scenarios.resize(ns);

    // Running reductions, applied in trial-index order.
    std::vector<std::vector<DownlinkAccumulator>> pooled(ns, std::vector<DownlinkAccumulator>(nt, DownlinkAccumulator(cells)));
    std::vector<std::vector<DownlinkAccumulator>> block(ns, std::vector<DownlinkAccumulator>(nt, DownlinkAccumulator(cells)));
    std::vector<std::vector<double>> energy_sum(ns, std::vector<double>(static_cast<std::size_t>(cells), 0.0));
    std::vector<std::vector<double>> block_energy(ns, std::vector<double>(static_cast<std::size_t>(cells), 0.0));
    std::vector<std::vector<double>> sig_sum(ns, std::vector<double>(nt, 0.0));
    std::vector<std::vector<double>> int_sum(ns, std::vector<double>(nt, 0.0));
    std::vector<std::vector<std::size_t>> ul_count(ns, std::vector<std::size_t>(nt, 0));
    for (std::size_t s = 0; s < ns; ++s) {
        result.scenarios[s].scenario = engine.scenario(s);
        result.scenarios[s].uplink.resize(nt);
        result.scenarios[s].downlink.resize(nt);
    }
    const double dl_noise = params.ue_noise / params.dl_power;

    const std::size_t chunk = 512;
    std::vector<TrialRecord> records;
    std::size_t in_block = 0;
    for (std::size_t start = 0; start < config.num_trials; start += chunk) {
        const std::size_t n = std::min(chunk, config.num_trials - start);
        records.assign(n, {});
        parallel_for(n, config.threads, [&](std::size_t i) { records[i] = engine.trial(start + i); });
        for (std::size_t i = 0; i < n; ++i) {
            const TrialRecord &rec = records[i];
            for (std::size_t s = 0; s < ns; ++s) {
                auto &sr = result.scenarios[s];
                for (std::size_t ti = 0; ti < nt; ++ti) {
                    const TargetRecord &r = rec.targets[s][ti];
                    if (config.uplink) {
                        if (r.degenerate) {
                            ++sr.uplink[ti].n_degenerate;
                        } else {
                            sr.uplink[ti].sinr.push_back(r.sinr);
                            sig_sum[s][ti] += r.signal;
                            int_sum[s][ti] += r.interference;
                            ++ul_count[s][ti];
                        }
                    }
                    if (config.downlink) {
                        pooled[s][ti].add(r.useful, r.leakage);
                        if (config.inner_size)
                            block[s][ti].add(r.useful, r.leakage);
                    }
                }
                if (config.downlink)
                    for (int c = 0; c < cells; ++c) {
                        energy_sum[s][static_cast<std::size_t>(c)] += rec.energy[s][static_cast<std::size_t>(c)];
                        block_energy[s][static_cast<std::size_t>(c)] += rec.energy[s][static_cast<std::size_t>(c)];
                    }
            }
            if (config.downlink && config.inner_size && ++in_block == config.inner_size) {
                for (std::size_t s = 0; s < ns; ++s) {
                    std::vector<double> lam(static_cast<std::size_t>(cells));
                    for (int c = 0; c < cells; ++c)
                        lam[static_cast<std::size_t>(c)] =
                            static_cast<double>(config.inner_size) / block_energy[s][static_cast<std::size_t>(c)];
                    for (std::size_t ti = 0; ti < nt; ++ti) {
                        result.scenarios[s].downlink[ti].block_sinr.push_back(
                            dl_realized_sinr(block[s][ti], lam, targets[ti].cell, dl_noise));
                        block[s][ti] = DownlinkAccumulator(cells);
                    }
                    std::fill(block_energy[s].begin(), block_energy[s].end(), 0.0);
                }
                in_block = 0;
            }
        }
    }

    for (std::size_t s = 0; s < ns; ++s) {
        auto &sr = result.scenarios[s];
        for (std::size_t ti = 0; ti < nt; ++ti) {
            auto &ul = sr.uplink[ti];
            if (ul_count[s][ti]) {
                ul.mean_signal = sig_sum[s][ti] / static_cast<double>(ul_count[s][ti]);
                ul.mean_interference = int_sum[s][ti] / static_cast<double>(ul_count[s][ti]);
            }
            if (ul.n_degenerate)
                spdlog::warn("run_trials: {} degenerate uplink draws discarded ({})", ul.n_degenerate,
                             sr.scenario.label());
        }
        if (!config.downlink)
            continue;
        sr.lambda.resize(static_cast<std::size_t>(cells));
        for (int c = 0; c < cells; ++c) {
            const double e = energy_sum[s][static_cast<std::size_t>(c)];
            if (!(e > 0.0))
                throw DegenerateDraw("run_trials: precoders of cell " + std::to_string(c) + " carry no energy");
            sr.lambda[static_cast<std::size_t>(c)] = static_cast<double>(config.num_trials) / e;
        }
        for (std::size_t ti = 0; ti < nt; ++ti) {
            sr.downlink[ti].lambda = sr.lambda[static_cast<std::size_t>(targets[ti].cell)];
            sr.downlink[ti].pooled_sinr = dl_realized_sinr(pooled[s][ti], sr.lambda, targets[ti].cell, dl_noise);
        }
    }
    return result;
}

// ---- validation ----------------------------------------------------------

ScalarNetwork ScalarNetwork::two_cell(int num_users) {
    ScalarNetwork net;
    net.beta.resize(2, 2);
    net.beta << 1.0, 0.3, 0.3, 1.0;
    net.num_users = num_users;
    net.params.pilot.num_users = num_users;
    net.params.pilot.pilot_length = num_users;
    net.params.pilot.noise_variance = 1.0;
    net.params.pilot.pilot_power = 10.0 / num_users; // sigma^2/(p_p tau) = 0.1
    net.params.ul_power = 20.0;
    net.params.dl_power = 20.0;
    net.params.ue_noise = 1.0;
    return net;
}

CovarianceSet ScalarNetwork::covariances(Eigen::Index num_antennas) const {
    return CovarianceSet::scalar(beta, num_users, num_antennas);
}

SinrBreakdown deterministic_sinr(const CovarianceSet &covs, const SystemParams &params, const CsiScenario &scenario,
                                 Direction direction, double alpha, UserIndex target) {
    scenario.validate();
    CsiStatisticsTable table = scenario.kind == CsiKind::predicted
                                   ? prediction_table(covs, params.pilot, scenario.order, alpha)
                                   : estimation_table(covs, params.pilot);
    if (direction == Direction::uplink) {
        switch (scenario.kind) {
        case CsiKind::current:
            return ul_sinr_current(table, covs, params.uplink(), target);
        case CsiKind::aged:
            return ul_sinr_aged(alpha, table, covs, params.uplink(), target);
        case CsiKind::predicted:
            return ul_sinr_predicted(scenario.order, alpha, table, covs, params.uplink(), target);
        }
    }
    switch (scenario.kind) {
    case CsiKind::current:
        return dl_sinr_current(table, covs, params.downlink(), target);
    case CsiKind::aged:
        return dl_sinr_aged(alpha, table, covs, params.downlink(), target);
    case CsiKind::predicted:
        return dl_sinr_predicted(scenario.order, alpha, table, covs, params.downlink(), target);
    }
    throw InvalidArgument("deterministic_sinr: unknown scenario");
}

std::vector<ValidationRow> validate_detequiv(const ScalarNetwork &net, const ValidationConfig &config) {
    std::vector<ValidationRow> rows;
    for (Eigen::Index nt : config.antennas) {
        const CovarianceSet covs = net.covariances(nt);
        const UserIndex target{0, 0};
        ValidationRow row;
        row.num_antennas = nt;
        row.direction = config.direction;
        row.scenario = config.scenario;
        row.alpha = config.alpha;
        row.eta = deterministic_sinr(covs, net.params, config.scenario, config.direction, config.alpha, target).eta;

        TrialEngineConfig engine = config.engine;
        engine.alpha = config.alpha;
        engine.targets = {target};
        engine.uplink = config.direction == Direction::uplink;
        engine.downlink = config.direction == Direction::downlink;
        const McResult mc = run_trials(covs, net.params, {config.scenario}, engine);
        const ScenarioResult &sr = mc.scenarios.front();
        if (config.direction == Direction::uplink) {
            const UplinkSamples &ul = sr.uplink.front();
            double sum = 0.0;
            for (double s : ul.sinr) {
                if (std::isinf(s)) {
                    ++row.n_infinite;
                    continue;
                }
                sum += s;
                ++row.n_used;
            }
            row.n_degenerate = ul.n_degenerate;
            row.mc_sinr = row.n_used ? sum / static_cast<double>(row.n_used) : 0.0;
            row.mc_power_sinr = ul.power_averaged_sinr();
        } else {
            const DownlinkEstimate &dl = sr.downlink.front();
            row.mc_power_sinr = dl.pooled_sinr;
            if (dl.block_sinr.empty()) {
                row.mc_sinr = dl.pooled_sinr;
                row.n_used = mc.num_trials;
            } else {
                double sum = 0.0;
                for (double s : dl.block_sinr)
                    sum += s;
                row.mc_sinr = sum / static_cast<double>(dl.block_sinr.size());
                row.n_used = dl.block_sinr.size();
            }
        }
        row.rel_error = std::fabs(row.mc_sinr - row.eta) / row.eta;
        row.rel_error_power = std::fabs(row.mc_power_sinr - row.eta) / row.eta;
        rows.push_back(row);
    }
    return rows;
}

} // namespace agingsim
