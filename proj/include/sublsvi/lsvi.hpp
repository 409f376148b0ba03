#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "sublsvi/adaptive_query.hpp"
#include "sublsvi/linear_mdp.hpp"
#include "sublsvi/maxip.hpp"

namespace sublsvi::lsvi {

enum class Mode { exact, sublinear, sublinear_adaptive };

struct LsviConfig {
    int n = 100;             // samples per span column
    double c = 0.9;          // Max-IP approximation factor
    double epsilon = 0.5;    // target suboptimality (reporting only)
    double iota = 1.0;       // log(Hd/p)
    double c0 = 1.0;         // theorem constant
    Mode mode = Mode::exact;
    double lambda_quant = 0.05;  // adaptive-wrapper error budget
    double delta_quant = 0.05;   // adaptive-wrapper failure probability
    std::uint64_t seed = 0;
    // Table budget per index; 0 scales with the action count (the structure's
    // space grows as n^(1+rho), so a flat budget would cap the bit depth and
    // freeze the caught-candidate fraction).
    int max_tables = 0;
};

// ceil(C0^2 * eps^-2 * L^2 * H^4 * iota), the theorem sample count.
long long required_sample_count(double epsilon, double span_bound, int horizon, double iota,
                                double c0);

// c = 1 - C0 * L * sqrt(iota / n), clamped into (0, 1).
double theorem_c(double c0, double span_bound, double iota, long long n);

// next_states[h][j] holds the n observed successors of span column j.
struct SampleSet {
    std::vector<std::vector<std::vector<int>>> next_states;
};

SampleSet collect_samples(const mdp::LinearMdp& mdp, const mdp::SpanMatrix& span, int n,
                          Rng& rng);

struct LambdaPair {
    Eigen::MatrixXd lambda;      // n * Phi Phi^T
    Eigen::MatrixXd lambda_inv;  // pseudo-inverse on the span column space
};

// Errors when the span falls below full numerical rank M (a span matrix
// must have rank(Phi) = M). Inversion uses an eigenvalue cutoff of 1e-10
// relative to the largest eigenvalue.
LambdaPair compute_lambda(const mdp::SpanMatrix& span, int n);

// Per-core-state Max-IP indices over that state's action features.
// Queries are centered (w - mean(w) * 1): simplex features all have unit
// l1 mass, so the shift changes no argmax but removes the shared offset
// that otherwise crushes the hyperplane-bit signal. tau thresholds are
// calibrated from an exact pre-pass (0.9 * minimum observed optimum).
struct StateIndices {
    std::vector<std::unique_ptr<maxip::MaxIpIndex>> plain;
    std::vector<std::unique_ptr<adaptive::AdaptiveMaxIpIndex>> adaptive;
    Eigen::MatrixXd tau_centered;  // (state, step) promise in centered raw units
    double d_x = 1.0;              // build-time bound on centered query norms
    int kappa = 0;                 // replica count in adaptive mode
};

StateIndices prepare_state_indices(const mdp::LinearMdp& mdp, const mdp::CoreSets& core,
                                   const mdp::SpanMatrix& span, const SampleSet& samples,
                                   const LambdaPair& lambda, const LsviConfig& config);

struct PassStats {
    std::size_t probes = 0;         // candidates examined, fallback scans included
    std::size_t value_updates = 0;  // one per (h, state) estimate
    std::size_t fallbacks = 0;
    double wall_ms = 0.0;
};

struct BackwardPassResult {
    Eigen::MatrixXd w_hat;  // H x d regression weights
    Eigen::MatrixXd v_hat;  // (H+1) x S value estimates over core states
    PassStats stats;
};

// One full value-iteration sweep h = H..1. Sublinear modes require
// prebuilt indices and fall back to an exact scan (counted) whenever the
// index reports fail.
BackwardPassResult backward_pass(const mdp::LinearMdp& mdp, const mdp::CoreSets& core,
                                 const mdp::SpanMatrix& span, const SampleSet& samples,
                                 const LambdaPair& lambda, const LsviConfig& config,
                                 const StateIndices* indices = nullptr);

// Exact argmax of <w_h, phi(s, a)> over core actions; ties to the smallest
// action id.
mdp::Policy greedy_policy(const Eigen::MatrixXd& w_hat, const mdp::LinearMdp& mdp,
                          const mdp::CoreSets& core);

double evaluate_suboptimality(const mdp::LinearMdp& mdp, const mdp::Policy& policy,
                              int initial_state);

// Measured form of the value-difference bound: returns {V*_1(s0) - Vhat_1(s0),
// E_pi*[sum_h (P - Phat) Vhat] + (1-c)/2 * H(H+1)} computed from the run's
// own quantities; the first element never exceeds the second when every
// accepted candidate met the c-approximation.
std::pair<double, double> value_difference_bound(const mdp::LinearMdp& mdp,
                                                 const mdp::SpanMatrix& span,
                                                 const SampleSet& samples,
                                                 const LambdaPair& lambda,
                                                 const BackwardPassResult& pass, double c,
                                                 int initial_state);

}  // namespace sublsvi::lsvi
