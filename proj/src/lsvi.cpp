#include "sublsvi/lsvi.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace sublsvi::lsvi {

namespace {

Eigen::VectorXd centered(const Eigen::VectorXd& w) {
    return w.array() - w.mean();
}

double exact_state_value(const mdp::LinearMdp& mdp, const mdp::CoreSets& core,
                         const Eigen::VectorXd& w, int s) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a : core.core_actions) best = std::max(best, mdp.features(s, a).dot(w));
    return best;
}

}  // namespace

long long required_sample_count(double epsilon, double span_bound, int horizon, double iota,
                                double c0) {
    if (!(epsilon > 0.0) || !(span_bound > 0.0) || horizon < 1 || !(iota > 0.0) || !(c0 > 0.0))
        throw std::invalid_argument("required_sample_count: all arguments must be positive");
    const double h4 = std::pow(static_cast<double>(horizon), 4);
    return static_cast<long long>(
        std::ceil(c0 * c0 / (epsilon * epsilon) * span_bound * span_bound * h4 * iota));
}

double theorem_c(double c0, double span_bound, double iota, long long n) {
    if (n < 1) throw std::invalid_argument("theorem_c: n must be >= 1");
    const double c = 1.0 - c0 * span_bound * std::sqrt(iota / static_cast<double>(n));
    return std::clamp(c, 1e-3, 1.0 - 1e-9);
}

SampleSet collect_samples(const mdp::LinearMdp& mdp, const mdp::SpanMatrix& span, int n,
                          Rng& rng) {
    if (n < 1) throw std::invalid_argument("collect_samples: n must be >= 1");
    SampleSet samples;
    samples.next_states.resize(mdp.horizon);
    for (int h = 0; h < mdp.horizon; ++h) {
        samples.next_states[h].resize(span.columns.size());
        for (std::size_t j = 0; j < span.columns.size(); ++j) {
            auto& draws = samples.next_states[h][j];
            draws.resize(n);
            const auto [s, a] = span.columns[j];
            for (int l = 0; l < n; ++l) draws[l] = sample_transition(mdp, s, a, h, rng);
        }
    }
    return samples;
}

LambdaPair compute_lambda(const mdp::SpanMatrix& span, int n) {
    const int m = static_cast<int>(span.columns.size());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(span.phi);
    qr.setThreshold(1e-8);
    if (qr.rank() < m)
        throw std::invalid_argument(
            "compute_lambda: span matrix is rank-deficient; the span definition requires "
            "rank(Phi) = M");

    LambdaPair pair;
    pair.lambda = static_cast<double>(n) * span.phi * span.phi.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(pair.lambda);
    const Eigen::VectorXd& evals = eig.eigenvalues();
    const double cutoff = 1e-10 * evals.cwiseAbs().maxCoeff();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(evals.size());
    for (Eigen::Index i = 0; i < evals.size(); ++i)
        if (evals[i] > cutoff) inv[i] = 1.0 / evals[i];
    pair.lambda_inv = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
    return pair;
}

StateIndices prepare_state_indices(const mdp::LinearMdp& mdp, const mdp::CoreSets& core,
                                   const mdp::SpanMatrix& span, const SampleSet& samples,
                                   const LambdaPair& lambda, const LsviConfig& config) {
    // Calibration pre-pass: exact value iteration on the same samples gives
    // per-state optima and the weight-norm bound the transforms need.
    LsviConfig exact_config = config;
    exact_config.mode = Mode::exact;
    const BackwardPassResult calib = backward_pass(mdp, core, span, samples, lambda, exact_config);

    const int num_states = static_cast<int>(core.core_states.size());
    StateIndices indices;
    indices.tau_centered = Eigen::MatrixXd::Zero(num_states, mdp.horizon);

    double max_norm = 0.0;
    for (int h = 0; h < mdp.horizon; ++h)
        max_norm = std::max(max_norm, centered(calib.w_hat.row(h).transpose()).norm());
    indices.d_x = std::max(1.05 * max_norm, 1e-6);

    // Per-(state, step) promise thresholds: the calibration-pass optimum at
    // every step, with the 0.9 slack absorbing weight drift between the
    // calibration weights and the real pass.
    for (int si = 0; si < num_states; ++si) {
        const int s = core.core_states[si];
        for (int h = 0; h < mdp.horizon; ++h) {
            const Eigen::VectorXd w_c = centered(calib.w_hat.row(h).transpose());
            indices.tau_centered(si, h) = 0.9 * exact_state_value(mdp, core, w_c, s);
        }
    }

    const int num_actions = static_cast<int>(core.core_actions.size());
    const int table_budget =
        config.max_tables > 0 ? config.max_tables
                              : std::clamp(num_actions / 4, 64, 4096);

    for (int si = 0; si < num_states; ++si) {
        const int s = core.core_states[si];
        Eigen::MatrixXd data(num_actions, mdp.feature_dim);
        for (int ai = 0; ai < num_actions; ++ai)
            data.row(ai) = mdp.features(s, core.core_actions[ai]).transpose();

        maxip::MaxIpParams params;
        params.c = config.c;
        params.d_x = indices.d_x;
        // Table geometry from the weakest per-step promise; keep the
        // normalized value off the boundaries of (0, 1).
        params.tau =
            std::clamp(indices.tau_centered.row(si).minCoeff() / indices.d_x, 1e-6, 0.8);

        const std::uint64_t state_seed = mix_seed(config.seed, 0x1d5 + si);
        auto table_config = maxip::default_table_config(
            static_cast<std::size_t>(data.rows()), params, state_seed, table_budget, 0.02);

        if (config.mode == Mode::sublinear_adaptive) {
            adaptive::QuantizationSpec spec;
            spec.lambda = config.lambda_quant;
            spec.dim = mdp.feature_dim;
            spec.diameter = indices.d_x;
            spec.delta = config.delta_quant;
            indices.adaptive.push_back(std::make_unique<adaptive::AdaptiveMaxIpIndex>(
                std::move(data), params, spec, state_seed, table_config));
            indices.kappa = indices.adaptive.back()->replica_count();
        } else {
            indices.plain.push_back(
                std::make_unique<maxip::MaxIpIndex>(std::move(data), params, table_config));
        }
    }
    return indices;
}

BackwardPassResult backward_pass(const mdp::LinearMdp& mdp, const mdp::CoreSets& core,
                                 const mdp::SpanMatrix& span, const SampleSet& samples,
                                 const LambdaPair& lambda, const LsviConfig& config,
                                 const StateIndices* indices) {
    const bool sublinear = config.mode != Mode::exact;
    if (sublinear && indices == nullptr)
        throw std::invalid_argument("backward_pass: sublinear mode requires prebuilt indices");

    const auto t0 = std::chrono::steady_clock::now();
    const int num_states = static_cast<int>(core.core_states.size());
    const int m = static_cast<int>(span.columns.size());

    BackwardPassResult result;
    result.w_hat = Eigen::MatrixXd::Zero(mdp.horizon, mdp.feature_dim);
    result.v_hat = Eigen::MatrixXd::Zero(mdp.horizon + 1, num_states);

    for (int h = mdp.horizon - 1; h >= 0; --h) {
        Eigen::VectorXd target = Eigen::VectorXd::Zero(mdp.feature_dim);
        for (int j = 0; j < m; ++j) {
            const auto [s, a] = span.columns[j];
            double value_mean = 0.0;
            for (int next : samples.next_states[h][j]) value_mean += result.v_hat(h + 1, next);
            value_mean /= static_cast<double>(samples.next_states[h][j].size());
            target += span.phi.col(j) * (mdp.reward(h, s, a) + value_mean);
        }
        target *= static_cast<double>(config.n);
        const Eigen::VectorXd w = lambda.lambda_inv * target;
        result.w_hat.row(h) = w.transpose();

        const Eigen::VectorXd w_c = centered(w);
        const double w_mean = w.mean();
        const double d_step = std::max(1.05 * w_c.norm(), 1e-6);

        for (int si = 0; si < num_states; ++si) {
            const int s = core.core_states[si];
            result.stats.value_updates += 1;
            if (!sublinear) {
                result.v_hat(h, si) = exact_state_value(mdp, core, w, s);
                result.stats.probes += core.core_actions.size();
                continue;
            }

            const double threshold = config.c * indices->tau_centered(si, h);
            maxip::MaxIpResult res;
            if (config.mode == Mode::sublinear_adaptive) {
                // The adaptive wrapper owns its quantization and thresholds,
                // but its replicas were built for the calibration-time norm
                // bound; weights that outgrew it go to the exact fallback.
                if (w_c.norm() <= indices->d_x) res = indices->adaptive[si]->query(w_c);
            } else {
                res = indices->plain[si]->query_raw(w_c, d_step, threshold);
            }
            result.stats.probes += res.probe_stats.candidates_examined;
            if (res.outcome) {
                // Candidate values are true inner products of the uncentered
                // weights: add back the shared offset.
                result.v_hat(h, si) = res.outcome->inner_product + w_mean;
            } else {
                result.stats.fallbacks += 1;
                result.stats.probes += core.core_actions.size();
                result.v_hat(h, si) = exact_state_value(mdp, core, w, s);
            }
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    result.stats.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return result;
}

mdp::Policy greedy_policy(const Eigen::MatrixXd& w_hat, const mdp::LinearMdp& mdp,
                          const mdp::CoreSets& core) {
    mdp::Policy policy(mdp.horizon, mdp.num_states);
    for (int h = 0; h < mdp.horizon; ++h) {
        const Eigen::VectorXd w = w_hat.row(h).transpose();
        for (int s = 0; s < mdp.num_states; ++s) {
            int best_action = core.core_actions.front();
            double best = -std::numeric_limits<double>::infinity();
            for (int a : core.core_actions) {
                const double value = mdp.features(s, a).dot(w);
                if (value > best) {
                    best = value;
                    best_action = a;
                }
            }
            policy(h, s) = best_action;
        }
    }
    return policy;
}

double evaluate_suboptimality(const mdp::LinearMdp& mdp, const mdp::Policy& policy,
                              int initial_state) {
    const mdp::ValueTables star = mdp::optimal_values(mdp);
    const mdp::ValueTables pi = mdp::policy_value(mdp, policy);
    return star.v(0, initial_state) - pi.v(0, initial_state);
}

std::pair<double, double> value_difference_bound(const mdp::LinearMdp& mdp,
                                                 const mdp::SpanMatrix& span,
                                                 const SampleSet& samples,
                                                 const LambdaPair& lambda,
                                                 const BackwardPassResult& pass, double c,
                                                 int initial_state) {
    const mdp::ValueTables star = mdp::optimal_values(mdp);
    const int m = static_cast<int>(span.columns.size());

    // Occupancy measure of the optimal policy, rolled forward from s0.
    Eigen::VectorXd occupancy = Eigen::VectorXd::Zero(mdp.num_states);
    occupancy[initial_state] = 1.0;
    double expectation = 0.0;
    for (int h = 0; h < mdp.horizon; ++h) {
        // Empirical transition operator applied to Vhat_{h+1} through the
        // regression representation phi^T Lambda^-1 (n sum_j phi_j vbar_j).
        Eigen::VectorXd empirical = Eigen::VectorXd::Zero(mdp.feature_dim);
        for (int j = 0; j < m; ++j) {
            double value_mean = 0.0;
            for (int next : samples.next_states[h][j]) value_mean += pass.v_hat(h + 1, next);
            value_mean /= static_cast<double>(samples.next_states[h][j].size());
            empirical += span.phi.col(j) * value_mean;
        }
        empirical = lambda.lambda_inv *
                    (static_cast<double>(samples.next_states[h][0].size()) * empirical);
        const Eigen::VectorXd exact = mdp.mu[h].transpose() * pass.v_hat.row(h + 1).transpose();

        Eigen::VectorXd next_occupancy = Eigen::VectorXd::Zero(mdp.num_states);
        for (int s = 0; s < mdp.num_states; ++s) {
            if (occupancy[s] == 0.0) continue;
            int best_action = 0;
            double best = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < mdp.num_actions; ++a) {
                if (star.q[h](s, a) > best) {
                    best = star.q[h](s, a);
                    best_action = a;
                }
            }
            const auto phi = mdp.features(s, best_action);
            expectation += occupancy[s] * (phi.dot(exact) - phi.dot(empirical));
            for (int next = 0; next < mdp.num_states; ++next)
                next_occupancy[next] += occupancy[s] * mdp.transition_prob(h, s, best_action, next);
        }
        occupancy = next_occupancy;
    }

    const double lhs = star.v(0, initial_state) - pass.v_hat(0, initial_state);
    const double rhs = expectation +
                       (1.0 - c) / 2.0 * static_cast<double>(mdp.horizon) *
                           static_cast<double>(mdp.horizon + 1);
    return {lhs, rhs};
}

}  // namespace sublsvi::lsvi
