#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sublsvi/rng.hpp"

namespace sublsvi::mdp {

// Row-major so that feature rows are contiguous and map-able.
using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Finite episodic linear MDP: P_h[s'|s,a] = <phi(s,a), mu_h(s')> and
// r_h(s,a) = <phi(s,a), theta_h>, rewards shifted into [0.55, 1].
struct LinearMdp {
    int num_states = 0;
    int num_actions = 0;
    int horizon = 0;
    int feature_dim = 0;
    std::uint64_t seed = 0;

    RowMatrixXd phi;                    // (S*A) x d, row index s*A + a
    std::vector<Eigen::MatrixXd> mu;    // per step: S x d, row s' = mu_h(s')
    Eigen::MatrixXd theta;              // H x d
    double reward_shift = 0.0;          // recorded affine map into [0.55, 1]
    double reward_scale = 1.0;

    static constexpr double kRewardLo = 0.55;
    static constexpr double kRewardHi = 1.0;

    Eigen::Map<const Eigen::VectorXd> features(int s, int a) const {
        return Eigen::Map<const Eigen::VectorXd>(phi.row(s * num_actions + a).data(),
                                                 feature_dim);
    }
    double reward(int h, int s, int a) const { return features(s, a).dot(theta.row(h)); }
    double transition_prob(int h, int s, int a, int next) const {
        return features(s, a).dot(mu[h].row(next));
    }
};

struct CoreSets {
    std::vector<int> core_states;
    std::vector<int> core_actions;
};

struct SpanMatrix {
    std::vector<std::pair<int, int>> columns;  // (s_j, a_j) pairs, M <= d
    Eigen::MatrixXd phi;                       // d x M
    double span_bound = 1.0;                   // measured max |Phi^-1 phi(s,a)|_1
};

struct MdpInstance {
    LinearMdp mdp;
    CoreSets core;
    SpanMatrix span;
};

// V (H+1 rows, final row zero) and one Q table per step.
struct ValueTables {
    Eigen::MatrixXd v;                // (H+1) x S
    std::vector<Eigen::MatrixXd> q;   // per step: S x A
};

using Policy = Eigen::MatrixXi;  // H x S, entries are action ids

// Simplex-feature construction: the d simplex vertices are planted as
// span/core columns, every other feature is drawn from the simplex, each
// mu_h column is a probability distribution and theta entries live in
// [0.55, 1]. Every structural invariant then holds by construction.
MdpInstance generate_linear_mdp(std::uint64_t seed, int num_states, int num_actions,
                                int feature_dim, int horizon);

// Exhaustive invariant check over the finite grid; returns one message per
// violation, empty when valid.
std::vector<std::string> validate(const MdpInstance& instance);

int sample_transition(const LinearMdp& mdp, int s, int a, int h, Rng& rng);

// Exact backward dynamic programming; the ground-truth oracle for all
// regret measurements.
ValueTables optimal_values(const LinearMdp& mdp);

ValueTables policy_value(const LinearMdp& mdp, const Policy& policy);

// Flat binary format: two ASCII header lines, then raw little-endian
// tables. Round-trips bit-exactly.
void save_mdp(const MdpInstance& instance, const std::string& path);
MdpInstance load_mdp(const std::string& path);

}  // namespace sublsvi::mdp
