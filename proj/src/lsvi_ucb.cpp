#include "sublsvi/lsvi_ucb.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace sublsvi::ucb {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::exact: return "exact";
        case Variant::matrix_norm: return "matrix_norm";
        case Variant::sublinear: return "sublinear";
        case Variant::switch_limited: return "switch_limited";
    }
    return "unknown";
}

Variant parse_variant(const std::string& name) {
    if (name == "exact") return Variant::exact;
    if (name == "matrix_norm") return Variant::matrix_norm;
    if (name == "sublinear") return Variant::sublinear;
    if (name == "switch_limited") return Variant::switch_limited;
    throw std::invalid_argument("unknown LSVI-UCB variant: " + name);
}

double UcbConfig::iota(int d, int horizon) const {
    const double t = static_cast<double>(episodes) * horizon;
    return std::log(2.0 * d * t / p);
}

double UcbConfig::approx_c() const {
    if (c > 0.0) return c;
    return 1.0 - 1.0 / std::sqrt(static_cast<double>(episodes));
}

void UcbConfig::validate() const {
    if (episodes < 1) throw std::invalid_argument("UcbConfig: episodes must be >= 1");
    if (!(lambda_reg > 0.0)) throw std::invalid_argument("UcbConfig: lambda_reg must be > 0");
    if (!(c_beta > 0.0)) throw std::invalid_argument("UcbConfig: c_beta must be > 0");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("UcbConfig: p must be in (0, 1)");
    if (c >= 1.0) throw std::invalid_argument("UcbConfig: c must be < 1");
}

double beta_bonus(double c_beta, int d, int horizon, double iota) {
    if (!(c_beta > 0.0) || d < 1 || horizon < 1 || !(iota > 0.0))
        throw std::invalid_argument("beta_bonus: all inputs must be positive");
    return c_beta * d * horizon * std::sqrt(iota);
}

double ucb_q_exact(const Eigen::VectorXd& w, const Eigen::VectorXd& phi, double beta,
                   const Eigen::MatrixXd& lambda_inv, double horizon) {
    if (w.size() != phi.size() || lambda_inv.rows() != phi.size())
        throw std::invalid_argument("ucb_q_exact: dimension mismatch");
    const double bonus = std::sqrt(std::max(0.0, phi.dot(lambda_inv * phi)));
    return std::min(w.dot(phi) + beta * bonus, horizon);
}

double ucb_q_matnorm(const Eigen::VectorXd& phi, const Eigen::MatrixXd& m_query, double horizon) {
    if (m_query.rows() != phi.size())
        throw std::invalid_argument("ucb_q_matnorm: dimension mismatch");
    const double quad = phi.dot(m_query * phi);
    if (quad < -1e-9) throw std::invalid_argument("ucb_q_matnorm: query matrix is not PSD");
    return std::min(std::sqrt(std::max(0.0, quad)), horizon);
}

void lambda_update(Eigen::MatrixXd& lambda, Eigen::MatrixXd& lambda_inv,
                   const Eigen::VectorXd& phi, double* log_det) {
    lambda.selfadjointView<Eigen::Lower>().rankUpdate(phi);
    lambda = lambda.selfadjointView<Eigen::Lower>();
    const Eigen::VectorXd u = lambda_inv * phi;
    const double denom = 1.0 + phi.dot(u);
    if (denom <= 0.0)
        throw std::logic_error("lambda_update: 1 + phi^T Lambda^-1 phi <= 0 on a PSD design");
    lambda_inv.noalias() -= (u * u.transpose()) / denom;
    if (log_det) *log_det += std::log(denom);
}

LambdaTracker::LambdaTracker(int dim, double lambda_reg)
    : lambda_(lambda_reg * Eigen::MatrixXd::Identity(dim, dim)),
      lambda_inv_(Eigen::MatrixXd::Identity(dim, dim) / lambda_reg),
      log_det_(dim * std::log(lambda_reg)) {}

void LambdaTracker::update(const Eigen::VectorXd& phi) {
    lambda_update(lambda_, lambda_inv_, phi, &log_det_);
    if (++updates_since_check_ >= 64) {
        updates_since_check_ = 0;
        const double residual =
            (lambda_ * lambda_inv_ - Eigen::MatrixXd::Identity(lambda_.rows(), lambda_.cols()))
                .norm();
        if (residual > 1e-6) {
            lambda_inv_ = lambda_.inverse();
        }
    }
}

MatNormIndices prepare_matnorm_indices(const mdp::LinearMdp& mdp, const UcbConfig& config) {
    MatNormIndices indices;
    indices.per_state.reserve(mdp.num_states);
    for (int s = 0; s < mdp.num_states; ++s) {
        Eigen::MatrixXd data(mdp.num_actions, mdp.feature_dim);
        for (int a = 0; a < mdp.num_actions; ++a) data.row(a) = mdp.features(s, a).transpose();

        maxip::MaxIpParams inner_params;
        inner_params.c = config.approx_c() * config.approx_c();
        inner_params.tau = config.matnorm_tau * config.matnorm_tau;
        inner_params.d_x = 1.0;
        // The acting policy reads these answers directly, so misses turn
        // into regret; budget a much smaller per-query failure than the
        // value-only indices use.
        auto table = maxip::default_table_config(static_cast<std::size_t>(mdp.num_actions),
                                                 inner_params, mix_seed(config.seed, 0xabc + s),
                                                 config.max_tables, 0.005);
        indices.per_state.push_back(std::make_unique<matnorm::MatNormIndex>(
            std::move(data), config.approx_c(), config.matnorm_tau, table));
    }
    return indices;
}

UcbState::UcbState(const mdp::LinearMdp& mdp, const UcbConfig& config)
    : acting_policy_(mdp::Policy::Zero(mdp.horizon, mdp.num_states)),
      star_(mdp::optimal_values(mdp)) {
    config.validate();
    for (int h = 0; h < mdp.horizon; ++h) {
        design_.emplace_back(mdp.feature_dim, config.lambda_reg);
        buffer_.emplace_back();
        buffer_[h].phis.resize(0, mdp.feature_dim);
        w_.emplace_back(Eigen::VectorXd::Zero(mdp.feature_dim));
        m_query_.emplace_back(Eigen::MatrixXd::Zero(mdp.feature_dim, mdp.feature_dim));
        log_det_at_switch_.push_back(design_[h].log_det());
    }
    min_norm_threshold_.assign(mdp.num_states, -std::numeric_limits<double>::infinity());
    calibration_window_.assign(mdp.num_states, {});
    calibration_next_.assign(mdp.num_states, 0);
}

void UcbState::record_calibration(const UcbConfig& config, int s, double opt_norm) {
    auto& window = calibration_window_[s];
    const std::size_t capacity = std::max(1, config.calibration_queries);
    if (window.size() < capacity) {
        window.push_back(opt_norm);
        if (window.size() < capacity) return;  // still warming up
    } else {
        window[calibration_next_[s]] = opt_norm;
        calibration_next_[s] = (calibration_next_[s] + 1) % static_cast<int>(capacity);
    }
    double lowest = window.front();
    for (double v : window) lowest = std::min(lowest, v);
    min_norm_threshold_[s] = config.approx_c() * 0.9 * lowest;
}

double UcbState::estimate_value(const mdp::LinearMdp& mdp, const UcbConfig& config,
                                const MatNormIndices* indices, int h, int s, double beta,
                                int* best_action, EpisodeRecord& record) {
    const double horizon = static_cast<double>(mdp.horizon);
    const bool lsh_backed = (config.variant == Variant::sublinear ||
                             config.variant == Variant::switch_limited) &&
                            indices != nullptr;

    if (config.variant == Variant::exact) {
        int arg = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < mdp.num_actions; ++a) {
            const double q = ucb_q_exact(w_[h], mdp.features(s, a), beta,
                                         design_[h].inverse(), horizon);
            if (q > best) {
                best = q;
                arg = a;
            }
        }
        record.probes += mdp.num_actions;
        if (best_action) *best_action = arg;
        return best;
    }

    auto scan_matnorm = [&](double* opt_norm) {
        // Ties resolve to the smallest action id, like every other argmax.
        int arg = 0;
        double best_q = -std::numeric_limits<double>::infinity();
        double best_norm = 0.0;
        for (int a = 0; a < mdp.num_actions; ++a) {
            const Eigen::VectorXd phi = mdp.features(s, a);
            const double quad = std::max(0.0, phi.dot(m_query_[h] * phi));
            const double norm = std::sqrt(quad);
            const double q = std::min(norm, horizon);
            if (q > best_q) {
                best_q = q;
                arg = a;
            }
            best_norm = std::max(best_norm, norm);
        }
        record.probes += mdp.num_actions;
        if (opt_norm) *opt_norm = best_norm;
        if (best_action) *best_action = arg;
        return best_q;
    };

    if (!lsh_backed) return scan_matnorm(nullptr);

    // Warmup: shadow scans seed the calibration window before the index
    // answers are trusted.
    if (calibration_window_[s].size() <
        static_cast<std::size_t>(std::max(1, config.calibration_queries))) {
        double opt_norm = 0.0;
        const double value = scan_matnorm(&opt_norm);
        record_calibration(config, s, opt_norm);
        return value;
    }

    matnorm::PsdQuery query;
    query.matrix = m_query_[h];
    query.frobenius_bound = std::max(m_query_[h].norm(), 1e-12);
    // Norms past H clip to the maximal value anyway, so they always pass.
    const double bar = std::min(min_norm_threshold_[s], horizon);
    const matnorm::MatNormResult res = indices->per_state[s]->query_with_threshold(query, bar);
    record.probes += res.probe_stats.candidates_examined;
    if (res.outcome) {
        if (best_action) *best_action = res.outcome->id;
        return std::min(res.outcome->norm, horizon);
    }
    record.fallbacks += 1;
    double opt_norm = 0.0;
    const double value = scan_matnorm(&opt_norm);
    record_calibration(config, s, opt_norm);  // keeps the bar tracking drift
    return value;
}

EpisodeRecord UcbState::run_episode(const mdp::LinearMdp& mdp, const UcbConfig& config,
                                    const MatNormIndices* indices, Rng& traj_rng) {
    const int k = ++episode_;
    const int horizon = mdp.horizon;
    const double iota = config.iota(mdp.feature_dim, horizon);
    const double beta = beta_bonus(config.c_beta, mdp.feature_dim, horizon, iota);

    EpisodeRecord record;
    record.episode = k;

    bool recompute = true;
    if (config.variant == Variant::switch_limited && k > 1) {
        recompute = false;
        for (int h = 0; h < horizon; ++h) {
            if (design_[h].log_det() - log_det_at_switch_[h] >= std::log(2.0)) {
                recompute = true;
                break;
            }
        }
    }

    const auto t0 = std::chrono::steady_clock::now();
    if (recompute) {
        // Backward value iteration over all past episodes.
        std::vector<double> value_next(static_cast<std::size_t>(k - 1), 0.0);
        for (int h = horizon - 1; h >= 0; --h) {
            Eigen::VectorXd target = Eigen::VectorXd::Zero(mdp.feature_dim);
            for (int tau = 0; tau < k - 1; ++tau) {
                target += buffer_[h].phis.row(tau).transpose() *
                          (buffer_[h].rewards[tau] + value_next[tau]);
            }
            w_[h] = design_[h].inverse() * target;
            m_query_[h] = 2.0 * beta * beta * design_[h].inverse() +
                          2.0 * w_[h] * w_[h].transpose();

            const double weight_cap = 2.0 * horizon *
                                      std::sqrt(mdp.feature_dim * static_cast<double>(k) /
                                                config.lambda_reg);
            diag_.max_weight_ratio = std::max(diag_.max_weight_ratio, w_[h].norm() / weight_cap);

            if (h > 0) {
                for (int tau = 0; tau < k - 1; ++tau) {
                    value_next[tau] = estimate_value(mdp, config, indices, h,
                                                     buffer_[h].states[tau], beta, nullptr,
                                                     record);
                }
            }
        }

        for (int h = 0; h < horizon; ++h) {
            for (int s = 0; s < mdp.num_states; ++s) {
                int action = 0;
                estimate_value(mdp, config, indices, h, s, beta, &action, record);
                acting_policy_(h, s) = action;
            }
            log_det_at_switch_[h] = design_[h].log_det();
        }
        switch_count_ += 1;

        if (config.check_optimism) {
            const int last = horizon - 1;
            for (int s = 0; s < mdp.num_states; ++s) {
                for (int a = 0; a < mdp.num_actions; ++a) {
                    const double q =
                        config.variant == Variant::exact
                            ? ucb_q_exact(w_[last], mdp.features(s, a), beta,
                                          design_[last].inverse(), horizon)
                            : ucb_q_matnorm(mdp.features(s, a), m_query_[last], horizon);
                    diag_.optimism_checks += 1;
                    if (q < star_.q[last](s, a) - 1e-9) diag_.optimism_violations += 1;
                }
            }
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    record.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    record.switches = switch_count_;

    // Episode gap against the DP oracle for the policy actually acted on.
    const mdp::ValueTables pi_value = mdp::policy_value(mdp, acting_policy_);
    record.gap = star_.v(0, 0) - pi_value.v(0, 0);

    // Forward rollout from s_1 = 0; design matrices absorb the new data.
    int s = 0;
    for (int h = 0; h < horizon; ++h) {
        const int a = acting_policy_(h, s);
        const double r = mdp.reward(h, s, a);
        const int next = mdp::sample_transition(mdp, s, a, h, traj_rng);
        auto& buf = buffer_[h];
        buf.states.push_back(s);
        buf.actions.push_back(a);
        buf.rewards.push_back(r);
        buf.next_states.push_back(next);
        buf.phis.conservativeResize(buf.phis.rows() + 1, Eigen::NoChange);
        buf.phis.row(buf.phis.rows() - 1) = mdp.features(s, a).transpose();
        design_[h].update(mdp.features(s, a));
        s = next;
    }

    // The summed self-normalized norms never exceed d.
    for (int h = 0; h < horizon; ++h) {
        double trace = 0.0;
        for (int tau = 0; tau < k; ++tau) {
            const Eigen::VectorXd phi = buffer_[h].phis.row(tau).transpose();
            trace += phi.dot(design_[h].inverse() * phi);
        }
        diag_.max_trace = std::max(diag_.max_trace, trace);
    }

    return record;
}

std::vector<RunResult> run_experiment(const mdp::LinearMdp& mdp, const UcbConfig& config,
                                      const std::vector<std::uint64_t>& seeds,
                                      const MatNormIndices* indices) {
    config.validate();
    std::vector<RunResult> results;
    results.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
        UcbConfig run_config = config;
        run_config.seed = seed;
        MatNormIndices local;
        const MatNormIndices* use = indices;
        const bool wants_index = config.variant == Variant::sublinear ||
                                 config.variant == Variant::switch_limited;
        if (wants_index && indices == nullptr) {
            local = prepare_matnorm_indices(mdp, run_config);
            use = &local;
        }

        UcbState state(mdp, run_config);
        Rng traj_rng(mix_seed(seed, 0x7247));
        RunResult run;
        run.seed = seed;
        run.variant = config.variant;
        double cum = 0.0;
        for (int k = 0; k < config.episodes; ++k) {
            EpisodeRecord record = state.run_episode(mdp, run_config, use, traj_rng);
            cum += record.gap;
            record.cum_regret = cum;
            run.total_probes += record.probes;
            run.total_fallbacks += record.fallbacks;
            run.episodes.push_back(record);
        }
        run.cum_regret = cum;
        run.switches = state.switch_count();
        run.max_weight_ratio = state.diagnostics().max_weight_ratio;
        run.max_trace = state.diagnostics().max_trace;
        run.optimism_checks = state.diagnostics().optimism_checks;
        run.optimism_violations = state.diagnostics().optimism_violations;
        results.push_back(std::move(run));
    }
    return results;
}

}  // namespace sublsvi::ucb
