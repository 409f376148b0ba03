#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace sublsvi::lsh {

// Table-shape parameters for one amplified hyperplane-hash family.
struct LshConfig {
    int bits_per_table = 1;    // k: concatenated sign bits per table
    int num_tables = 1;        // L: tables per repetition
    int repetitions = 1;       // independent rounds stacked for recall
    std::uint64_t seed = 0;

    void validate() const;
    int total_tables() const { return num_tables * repetitions; }
};

struct ProbeStats {
    std::size_t candidates_examined = 0;
    std::size_t buckets_probed = 0;

    void merge(const ProbeStats& other) {
        candidates_examined += other.candidates_examined;
        buckets_probed += other.buckets_probed;
    }
};

// theta(x) = 2*asin(x/2): angle between unit vectors at chord distance x.
double chord_angle(double chord);

// Collision probability of one random-hyperplane sign bit, 1 - theta/pi.
double hyperplane_collision_prob(double chord);

// Table parameters from the classic p1/p2 trade: k = ceil(ln n / ln(1/p2)),
// L = ceil(n^rho) with rho = ln(1/p1)/ln(1/p2), repetitions bringing the
// per-query failure probability under 0.1. Rejects cbar*r >= 2 (no such
// pair of unit vectors exists).
LshConfig derive_table_params(std::size_t n, double cbar, double r, std::uint64_t seed = 0);

struct AnnMatch {
    int id = -1;
    double distance = 0.0;
};

// Checks |norm - 1| <= 1e-9, renormalizing inputs within 1e-6 of unit
// norm and rejecting anything farther out. `what` and `index` name the
// offending vector in the error message (index < 0 for queries).
Eigen::VectorXd validated_unit(const Eigen::VectorXd& v, const std::string& what, int index = -1);

// Static hyperplane-LSH index over unit vectors, answering (cbar, r)-ANN
// queries. Immutable once built; safe for concurrent queries.
class AnnIndex {
public:
    AnnIndex(Eigen::MatrixXd points, double cbar, double r, LshConfig config);

    // Near-neighbor reporting semantics: scan matching buckets across tables and
    // return the first deduplicated candidate within cbar*r, else nullopt.
    std::optional<AnnMatch> query(const Eigen::VectorXd& q, ProbeStats* stats = nullptr) const;

    // Deduplicated candidate ids in deterministic (table, insertion) order.
    // Shared machinery for the inner-product indices layered on top.
    void collect_candidates(const Eigen::VectorXd& q, std::vector<int>& out,
                            ProbeStats* stats = nullptr) const;

    int size() const { return static_cast<int>(points_.rows()); }
    int dim() const { return static_cast<int>(points_.cols()); }
    double cbar() const { return cbar_; }
    double radius() const { return r_; }
    const LshConfig& config() const { return config_; }
    const Eigen::MatrixXd& points() const { return points_; }

    std::size_t total_bucket_entries() const;
    // Order-sensitive digest of every (table, key, id) triple; replicas
    // built from different seeds are expected to differ.
    std::uint64_t content_hash() const;

private:
    std::uint64_t hash_point(int table, const Eigen::VectorXd& v) const;

    Eigen::MatrixXd points_;  // one unit vector per row
    double cbar_;
    double r_;
    LshConfig config_;
    std::vector<Eigen::MatrixXd> hyperplanes_;  // per table, k x dim
    std::vector<std::unordered_map<std::uint64_t, std::vector<std::int32_t>>> tables_;
};

}  // namespace sublsvi::lsh
