#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "sublsvi/lsh_index.hpp"

namespace sublsvi::maxip {

// Which theoretical query-exponent curve to report. ar15 is the
// n^(1+rho)-space regime, alrw17 the n^(1+o(1))-space regime.
enum class RhoRegime { ar15, alrw17 };

// f(c, tau) for the chosen regime, o(1) term dropped:
//   ar15:   (1 - tau) / (1 - 2*c*tau + tau)
//   alrw17: 2u^2 - u^4 with u = (1 - tau) / (1 - c*tau)
double rho_theory(double c, double tau, RhoRegime regime);

// Closed-form bounds 1 - gamma/2 (ar15) and 1 - gamma^2/4 (alrw17) with
// gamma = 1 - c, valid for c, tau in [0.5, 1); the O(1/sqrt(log n)) term
// is dropped.
double rho_upper_bound(double c, double tau, RhoRegime regime);

// P(y) = [y, sqrt(1 - |y|^2), 0]: unit-norm lift of a data vector with
// |y| <= 1 into dimension d+2.
Eigen::VectorXd transform_data_point(const Eigen::VectorXd& y);

// Q(x) = [0.8*x/D_x, 0, sqrt(1 - 0.64*|x|^2/D_x^2)], so that
// <Q(x), P(y)> = 0.8*<x, y>/D_x for every admissible y.
Eigen::VectorXd transform_query(const Eigen::VectorXd& x, double d_x);

struct MaxIpParams {
    double c = 0.8;    // approximation factor, in (0, 1)
    double tau = 0.5;  // promise threshold on <x,y>/d_x, in (0, 1)
    double d_x = 1.0;  // bound on query norms

    void validate() const;
};

struct MaxIpCandidate {
    int id = -1;
    double inner_product = 0.0;  // recomputed against the untransformed data
};

struct MaxIpResult {
    std::optional<MaxIpCandidate> outcome;  // nullopt means "fail"
    lsh::ProbeStats probe_stats;
};

// Practical table shape for a Max-IP index: k ~ log2(n) sign bits and
// enough tables for the requested per-query failure probability at the
// promise radius, shrinking k when that would need more than `max_tables`
// tables.
lsh::LshConfig default_table_config(std::size_t n, const MaxIpParams& params,
                                    std::uint64_t seed, int max_tables = 1024,
                                    double failure = 0.05);

// (c, tau)-Max-IP search structure: asymmetric transform plus an AnnIndex
// over the lifted points. Immutable once built; concurrent queries safe.
class MaxIpIndex {
public:
    // Omitting `config` picks default_table_config(n, params, params-seed 0).
    MaxIpIndex(Eigen::MatrixXd data, MaxIpParams params,
               std::optional<lsh::LshConfig> config = std::nullopt);

    // Returns the bucket candidate maximizing the exact inner product when
    // that maximum reaches c*tau*d_x, else fail. Rejects |x| > d_x.
    MaxIpResult query(const Eigen::VectorXd& x) const;

    // Same scan with an explicit query-norm bound and raw acceptance
    // threshold; used by callers whose promise lives in unnormalized units.
    MaxIpResult query_raw(const Eigen::VectorXd& x, double d_x, double accept_threshold) const;

    const MaxIpParams& params() const { return params_; }
    const Eigen::MatrixXd& data() const { return data_; }
    const lsh::AnnIndex& ann() const { return *ann_; }
    double ann_radius() const { return r_; }
    double ann_cbar() const { return cbar_; }

private:
    Eigen::MatrixXd data_;  // original vectors, one per row
    MaxIpParams params_;
    double r_ = 0.0;
    double cbar_ = 0.0;
    std::optional<lsh::AnnIndex> ann_;
};

// Exact linear scan; ties broken toward the smallest id. Errors on empty Y.
std::pair<int, double> brute_force_maxip(const Eigen::VectorXd& x, const Eigen::MatrixXd& Y);

// 0.9 * (minimum brute-force optimum over the calibration queries),
// normalized by d_x: the promise threshold the bench harness uses.
double calibrate_tau(const Eigen::MatrixXd& Y, const std::vector<Eigen::VectorXd>& queries,
                     double d_x);

}  // namespace sublsvi::maxip
