#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "sublsvi/linear_mdp.hpp"
#include "sublsvi/matnorm.hpp"

namespace sublsvi::ucb {

enum class Variant { exact, matrix_norm, sublinear, switch_limited };

const char* variant_name(Variant v);
Variant parse_variant(const std::string& name);

struct UcbConfig {
    int episodes = 100;     // K
    double lambda_reg = 1.0;
    // Bonus constant. The analysis wants C_beta >= 100, but that clips every
    // Q value at H for any desk-scale K; the bench default keeps the bonus
    // on the reward scale instead.
    double c_beta = 0.1;
    double p = 0.01;        // failure probability inside iota
    double c = 0.0;         // MaxMatNorm approximation; <= 0 picks 1 - 1/sqrt(K)
    Variant variant = Variant::exact;
    std::uint64_t seed = 0;
    int max_tables = 128;           // table budget per matnorm index
    double matnorm_tau = 0.55;      // build-time tau for the lifted indices
    int calibration_queries = 32;   // shadow scans per state before trusting the index
    bool check_optimism = false;    // record Q^k_H >= Q*_H violations

    double iota(int d, int horizon) const;
    double approx_c() const;
    void validate() const;
};

// beta = C_beta * d * H * sqrt(iota).
double beta_bonus(double c_beta, int d, int horizon, double iota);

// min{<w, phi> + beta * |phi|_{Lambda^-1}, H}.
double ucb_q_exact(const Eigen::VectorXd& w, const Eigen::VectorXd& phi, double beta,
                   const Eigen::MatrixXd& lambda_inv, double horizon);

// min{|phi|_M, H} for the PSD query M = 2 beta^2 Lambda^-1 + 2 w w^T.
double ucb_q_matnorm(const Eigen::VectorXd& phi, const Eigen::MatrixXd& m_query, double horizon);

// Sherman-Morrison rank-1 update of (Lambda, Lambda^-1) and the log-det.
// Callers re-verify the residual periodically (see LambdaTracker).
void lambda_update(Eigen::MatrixXd& lambda, Eigen::MatrixXd& lambda_inv,
                   const Eigen::VectorXd& phi, double* log_det = nullptr);

// Design matrix with maintained inverse; every 64 rank-1 updates the
// residual |Lambda Lambda^-1 - I|_F is checked and a full re-inversion is
// performed if it drifted past 1e-6.
class LambdaTracker {
public:
    LambdaTracker(int dim, double lambda_reg);

    void update(const Eigen::VectorXd& phi);
    const Eigen::MatrixXd& lambda() const { return lambda_; }
    const Eigen::MatrixXd& inverse() const { return lambda_inv_; }
    double log_det() const { return log_det_; }

private:
    Eigen::MatrixXd lambda_;
    Eigen::MatrixXd lambda_inv_;
    double log_det_ = 0.0;
    int updates_since_check_ = 0;
};

struct EpisodeRecord {
    int episode = 0;          // k, 1-based
    double gap = 0.0;         // V*_1(s_1) - V^{pi_k}_1(s_1)
    double cum_regret = 0.0;  // running sum of gaps
    std::size_t probes = 0;
    std::size_t fallbacks = 0;
    int switches = 0;         // cumulative policy switches so far
    double wall_ms = 0.0;     // value iteration time for this episode
};

struct RunResult {
    std::uint64_t seed = 0;
    Variant variant = Variant::exact;
    std::vector<EpisodeRecord> episodes;
    double cum_regret = 0.0;
    std::size_t total_probes = 0;
    std::size_t total_fallbacks = 0;
    int switches = 0;
    // Invariant diagnostics, asserted by the test suites.
    double max_weight_ratio = 0.0;  // max |w_h^k| / (2H sqrt(dk/lambda))
    double max_trace = 0.0;         // max_h sum_tau phi^T Lambda^-1 phi
    std::size_t optimism_checks = 0;
    std::size_t optimism_violations = 0;
};

// Per-state lifted indices over the fixed feature table, built once in
// preprocessing (Sublinear LSVI-UCB's preprocessing block).
struct MatNormIndices {
    std::vector<std::unique_ptr<matnorm::MatNormIndex>> per_state;
};

MatNormIndices prepare_matnorm_indices(const mdp::LinearMdp& mdp, const UcbConfig& config);

// Online state across episodes; construct fresh per run.
class UcbState {
public:
    UcbState(const mdp::LinearMdp& mdp, const UcbConfig& config);

    // One complete episode: backward value iteration (variant-specific),
    // greedy policy extraction, forward rollout, design updates.
    EpisodeRecord run_episode(const mdp::LinearMdp& mdp, const UcbConfig& config,
                              const MatNormIndices* indices, Rng& traj_rng);

    const RunResult& diagnostics() const { return diag_; }
    int switch_count() const { return switch_count_; }
    const Eigen::VectorXd& weights(int h) const { return w_[h]; }

private:
    struct StepBuffer {
        std::vector<int> states;
        std::vector<int> actions;
        std::vector<double> rewards;
        std::vector<int> next_states;
        Eigen::MatrixXd phis;  // one row per past episode
    };

    double estimate_value(const mdp::LinearMdp& mdp, const UcbConfig& config,
                          const MatNormIndices* indices, int h, int s, double beta,
                          int* best_action, EpisodeRecord& record);

    std::vector<LambdaTracker> design_;  // per step
    std::vector<StepBuffer> buffer_;     // per step
    std::vector<Eigen::VectorXd> w_;     // per step, last backward pass
    std::vector<Eigen::MatrixXd> m_query_;  // per step, 2b^2 Li + 2ww^T
    int episode_ = 0;

    // Switch-limited bookkeeping.
    int switch_count_ = 0;
    std::vector<double> log_det_at_switch_;
    mdp::Policy acting_policy_;

    // Rolling tau calibration for the lifted indices: the acceptance bar is
    // 0.9 c x the smallest optimum in the most recent window of exact scans
    // (shadow scans during warmup, fallback scans afterwards), so the
    // threshold tracks the slowly shrinking norm scale.
    void record_calibration(const UcbConfig& config, int s, double opt_norm);
    std::vector<std::vector<double>> calibration_window_;  // per state, ring
    std::vector<int> calibration_next_;
    std::vector<double> min_norm_threshold_;  // per state; -inf until warmup ends

    mdp::ValueTables star_;  // DP oracle, computed once
    RunResult diag_;
};

// Fresh state per seed; per-seed RegretRecord rows. Transitions draw from a
// stream keyed by (seed) only, so variants share the sampling RNG.
std::vector<RunResult> run_experiment(const mdp::LinearMdp& mdp, const UcbConfig& config,
                                      const std::vector<std::uint64_t>& seeds,
                                      const MatNormIndices* indices = nullptr);

}  // namespace sublsvi::ucb
