#include "sublsvi/lsh_index.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sublsvi/rng.hpp"

namespace sublsvi::lsh {

void LshConfig::validate() const {
    if (bits_per_table < 1) throw std::invalid_argument("LshConfig: bits_per_table must be >= 1");
    if (bits_per_table > 63) throw std::invalid_argument("LshConfig: bits_per_table must be <= 63");
    if (num_tables < 1) throw std::invalid_argument("LshConfig: num_tables must be >= 1");
    if (repetitions < 1) throw std::invalid_argument("LshConfig: repetitions must be >= 1");
}

double chord_angle(double chord) {
    return 2.0 * std::asin(std::clamp(chord / 2.0, -1.0, 1.0));
}

double hyperplane_collision_prob(double chord) {
    return 1.0 - chord_angle(chord) / std::numbers::pi;
}

LshConfig derive_table_params(std::size_t n, double cbar, double r, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("derive_table_params: n must be >= 1");
    if (cbar <= 1.0) throw std::invalid_argument("derive_table_params: cbar must be > 1");
    if (r <= 0.0 || r >= 2.0) throw std::invalid_argument("derive_table_params: r must be in (0, 2)");
    if (cbar * r >= 2.0)
        throw std::invalid_argument(
            "derive_table_params: cbar*r >= 2, far distance undefined on the sphere");

    const double p1 = hyperplane_collision_prob(r);
    const double p2 = hyperplane_collision_prob(cbar * r);

    LshConfig config;
    config.seed = seed;
    if (n == 1) return config;  // k = L = 1

    const double log_n = std::log(static_cast<double>(n));
    if (p2 >= p1 - 1e-15) {
        // Degenerate cbar -> 1: no p1/p2 gap left, fall back to a linear scan.
        config.bits_per_table = 1;
        config.num_tables = static_cast<int>(n);
        return config;
    }
    const double inv_log_p2 = 1.0 / std::log(1.0 / p2);
    config.bits_per_table =
        std::clamp(static_cast<int>(std::ceil(log_n * inv_log_p2)), 1, 63);

    const double rho_emp = std::log(1.0 / p1) * inv_log_p2;
    const double tables = std::ceil(std::exp(rho_emp * log_n));
    config.num_tables = static_cast<int>(std::min(tables, static_cast<double>(n)));

    // Failure probability of one repetition: the near point misses all L
    // matching buckets.
    const double hit = std::pow(p1, config.bits_per_table);
    const double log_fail = static_cast<double>(config.num_tables) * std::log1p(-hit);
    if (log_fail > std::log(0.1)) {
        config.repetitions = static_cast<int>(std::ceil(std::log(0.1) / log_fail));
    }
    return config;
}

Eigen::VectorXd validated_unit(const Eigen::VectorXd& v, const std::string& what, int index) {
    const double norm = v.norm();
    const std::string where =
        index >= 0 ? what + " at index " + std::to_string(index) : what;
    if (std::abs(norm - 1.0) <= 1e-9) return v;
    if (std::abs(norm - 1.0) <= 1e-6) return v / norm;
    throw std::invalid_argument(where + ": expected unit norm, got " + std::to_string(norm));
}

AnnIndex::AnnIndex(Eigen::MatrixXd points, double cbar, double r, LshConfig config)
    : points_(std::move(points)), cbar_(cbar), r_(r), config_(config) {
    config_.validate();
    if (points_.rows() < 1) throw std::invalid_argument("AnnIndex: dataset must be non-empty");
    if (cbar_ <= 1.0) throw std::invalid_argument("AnnIndex: cbar must be > 1");
    if (r_ <= 0.0 || r_ >= 2.0) throw std::invalid_argument("AnnIndex: r must be in (0, 2)");

    const int n = static_cast<int>(points_.rows());
    const int dim = static_cast<int>(points_.cols());
    for (int i = 0; i < n; ++i) {
        points_.row(i) = validated_unit(points_.row(i).transpose(), "AnnIndex point", i).transpose();
    }

    const int total = config_.total_tables();
    hyperplanes_.reserve(total);
    tables_.resize(total);
    for (int t = 0; t < total; ++t) {
        Rng rng(mix_seed(config_.seed, static_cast<std::uint64_t>(t) + 1));
        Eigen::MatrixXd planes(config_.bits_per_table, dim);
        for (int b = 0; b < config_.bits_per_table; ++b)
            for (int j = 0; j < dim; ++j) planes(b, j) = rng.normal();
        hyperplanes_.push_back(std::move(planes));

        auto& buckets = tables_[t];
        for (int i = 0; i < n; ++i) {
            buckets[hash_point(t, points_.row(i).transpose())].push_back(i);
        }
    }
}

std::uint64_t AnnIndex::hash_point(int table, const Eigen::VectorXd& v) const {
    const Eigen::VectorXd proj = hyperplanes_[table] * v;
    std::uint64_t key = 0;
    for (int b = 0; b < proj.size(); ++b) {
        key = (key << 1) | static_cast<std::uint64_t>(proj[b] >= 0.0);
    }
    return key;
}

void AnnIndex::collect_candidates(const Eigen::VectorXd& q, std::vector<int>& out,
                                  ProbeStats* stats) const {
    out.clear();
    std::vector<char> seen(static_cast<std::size_t>(points_.rows()), 0);
    for (std::size_t t = 0; t < tables_.size(); ++t) {
        const auto it = tables_[t].find(hash_point(static_cast<int>(t), q));
        if (stats) stats->buckets_probed += 1;
        if (it == tables_[t].end()) continue;
        for (std::int32_t id : it->second) {
            if (seen[static_cast<std::size_t>(id)]) continue;
            seen[static_cast<std::size_t>(id)] = 1;
            out.push_back(id);
            if (stats) stats->candidates_examined += 1;
        }
    }
}

std::optional<AnnMatch> AnnIndex::query(const Eigen::VectorXd& q, ProbeStats* stats) const {
    const Eigen::VectorXd qu = validated_unit(q, "AnnIndex query");
    const double limit = cbar_ * r_ + 1e-12;
    std::optional<AnnMatch> match;
    std::vector<char> seen(static_cast<std::size_t>(points_.rows()), 0);
    for (std::size_t t = 0; t < tables_.size() && !match; ++t) {
        const auto it = tables_[t].find(hash_point(static_cast<int>(t), qu));
        if (stats) stats->buckets_probed += 1;
        if (it == tables_[t].end()) continue;
        for (std::int32_t id : it->second) {
            if (seen[static_cast<std::size_t>(id)]) continue;
            seen[static_cast<std::size_t>(id)] = 1;
            if (stats) stats->candidates_examined += 1;
            const double dist = (points_.row(id).transpose() - qu).norm();
            if (dist <= limit) {
                match = AnnMatch{id, dist};
                break;
            }
        }
    }
    return match;
}

std::size_t AnnIndex::total_bucket_entries() const {
    std::size_t count = 0;
    for (const auto& table : tables_)
        for (const auto& [key, bucket] : table) count += bucket.size();
    return count;
}

std::uint64_t AnnIndex::content_hash() const {
    std::uint64_t h = 0x632b9a1f7c3de581ULL;
    for (const auto& table : tables_) {
        // Order within an unordered_map is not deterministic; fold keys via a
        // commutative mix so the digest only depends on contents.
        std::uint64_t table_digest = 0;
        for (const auto& [key, bucket] : table) {
            std::uint64_t entry = key;
            for (std::int32_t id : bucket) entry = mix_seed(entry, static_cast<std::uint64_t>(id));
            table_digest += entry;
        }
        h = mix_seed(h, table_digest);
    }
    return h;
}

}  // namespace sublsvi::lsh
