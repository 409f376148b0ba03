#include "sublsvi/maxip.hpp"

#include <cmath>
#include <stdexcept>

namespace sublsvi::maxip {

namespace {

void check_c_tau(double c, double tau, double lo) {
    if (!(c >= lo && c < 1.0))
        throw std::invalid_argument("rho: c outside [" + std::to_string(lo) + ", 1)");
    if (!(tau >= lo && tau < 1.0))
        throw std::invalid_argument("rho: tau outside [" + std::to_string(lo) + ", 1)");
}

}  // namespace

double rho_theory(double c, double tau, RhoRegime regime) {
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("rho_theory: c must be in (0, 1)");
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("rho_theory: tau must be in (0, 1)");
    if (regime == RhoRegime::ar15) {
        return (1.0 - tau) / (1.0 - 2.0 * c * tau + tau);
    }
    const double u = (1.0 - tau) / (1.0 - c * tau);
    return 2.0 * u * u - u * u * u * u;
}

double rho_upper_bound(double c, double tau, RhoRegime regime) {
    check_c_tau(c, tau, 0.5);
    const double gamma = 1.0 - c;
    if (regime == RhoRegime::ar15) return 1.0 - gamma / 2.0;
    return 1.0 - gamma * gamma / 4.0;
}

Eigen::VectorXd transform_data_point(const Eigen::VectorXd& y) {
    const double sq = y.squaredNorm();
    if (sq > 1.0 + 2e-9)
        throw std::invalid_argument(
            "transform_data_point: |y| > 1, callers must pre-scale data into the unit ball");
    Eigen::VectorXd out(y.size() + 2);
    out.head(y.size()) = y;
    out[y.size()] = std::sqrt(std::max(0.0, 1.0 - sq));
    out[y.size() + 1] = 0.0;
    return out;
}

Eigen::VectorXd transform_query(const Eigen::VectorXd& x, double d_x) {
    if (d_x <= 0.0) throw std::invalid_argument("transform_query: D_x must be positive");
    const double ratio = x.squaredNorm() / (d_x * d_x);
    if (ratio > 1.0 + 2e-9)
        throw std::invalid_argument("transform_query: |x| > D_x, raise the declared bound D_x");
    Eigen::VectorXd out(x.size() + 2);
    out.head(x.size()) = 0.8 / d_x * x;
    out[x.size()] = 0.0;
    out[x.size() + 1] = std::sqrt(std::max(0.0, 1.0 - 0.64 * ratio));
    return out;
}

void MaxIpParams::validate() const {
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("MaxIpParams: c must be in (0, 1)");
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("MaxIpParams: tau must be in (0, 1)");
    if (!(d_x > 0.0)) throw std::invalid_argument("MaxIpParams: d_x must be positive");
}

lsh::LshConfig default_table_config(std::size_t n, const MaxIpParams& params, std::uint64_t seed,
                                    int max_tables, double failure) {
    params.validate();
    if (!(failure > 0.0 && failure < 1.0))
        throw std::invalid_argument("default_table_config: failure must be in (0, 1)");
    const double tau_t = 0.8 * params.tau;
    const double r = std::sqrt(2.0 - 2.0 * tau_t);
    const double p1 = lsh::hyperplane_collision_prob(r);

    lsh::LshConfig config;
    config.seed = seed;

    int k = std::clamp(static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))), 1, 24);
    const double want = std::log(1.0 / failure);
    auto tables_needed = [&](int bits) {
        return want / std::pow(p1, bits);
    };
    while (k > 1 && tables_needed(k) > static_cast<double>(max_tables)) --k;
    config.bits_per_table = k;
    config.num_tables = static_cast<int>(std::min(
        std::max(1.0, std::ceil(tables_needed(k))), static_cast<double>(max_tables)));
    return config;
}

MaxIpIndex::MaxIpIndex(Eigen::MatrixXd data, MaxIpParams params,
                       std::optional<lsh::LshConfig> config)
    : data_(std::move(data)), params_(params) {
    params_.validate();
    if (data_.rows() < 1) throw std::invalid_argument("MaxIpIndex: dataset must be non-empty");

    const int n = static_cast<int>(data_.rows());
    Eigen::MatrixXd lifted(n, data_.cols() + 2);
    for (int i = 0; i < n; ++i) {
        if (data_.row(i).norm() > 1.0 + 1e-9)
            throw std::invalid_argument("MaxIpIndex: data vector at index " + std::to_string(i) +
                                        " has norm > 1");
        lifted.row(i) = transform_data_point(data_.row(i).transpose()).transpose();
    }

    // Primal-dual reduction on the transformed sphere: tau' = 0.8*tau,
    // r^2 = 2 - 2*tau', cbar^2 = (1 - c*tau') / (1 - tau').
    const double tau_t = 0.8 * params_.tau;
    r_ = std::sqrt(2.0 - 2.0 * tau_t);
    cbar_ = std::sqrt((1.0 - params_.c * tau_t) / (1.0 - tau_t));

    lsh::LshConfig table_config =
        config ? *config : default_table_config(static_cast<std::size_t>(n), params_, 0);
    ann_.emplace(std::move(lifted), cbar_, r_, table_config);
}

MaxIpResult MaxIpIndex::query(const Eigen::VectorXd& x) const {
    return query_raw(x, params_.d_x, params_.c * params_.tau * params_.d_x);
}

MaxIpResult MaxIpIndex::query_raw(const Eigen::VectorXd& x, double d_x,
                                  double accept_threshold) const {
    if (x.size() != data_.cols())
        throw std::invalid_argument("MaxIpIndex: query dimension mismatch");
    const Eigen::VectorXd q = transform_query(x, d_x);

    MaxIpResult result;
    std::vector<int> candidates;
    ann_->collect_candidates(q, candidates, &result.probe_stats);

    int best_id = -1;
    double best_ip = -std::numeric_limits<double>::infinity();
    for (int id : candidates) {
        const double ip = data_.row(id).dot(x.transpose());
        if (ip > best_ip || (ip == best_ip && id < best_id)) {
            best_ip = ip;
            best_id = id;
        }
    }
    if (best_id >= 0 && best_ip >= accept_threshold - 1e-12) {
        result.outcome = MaxIpCandidate{best_id, best_ip};
    }
    return result;
}

std::pair<int, double> brute_force_maxip(const Eigen::VectorXd& x, const Eigen::MatrixXd& Y) {
    if (Y.rows() == 0) throw std::invalid_argument("brute_force_maxip: empty dataset");
    if (x.size() != Y.cols()) throw std::invalid_argument("brute_force_maxip: dimension mismatch");
    int best = 0;
    double best_ip = Y.row(0).dot(x.transpose());
    for (int i = 1; i < Y.rows(); ++i) {
        const double ip = Y.row(i).dot(x.transpose());
        if (ip > best_ip) {
            best_ip = ip;
            best = i;
        }
    }
    return {best, best_ip};
}

double calibrate_tau(const Eigen::MatrixXd& Y, const std::vector<Eigen::VectorXd>& queries,
                     double d_x) {
    if (queries.empty()) throw std::invalid_argument("calibrate_tau: need at least one query");
    double min_opt = std::numeric_limits<double>::infinity();
    for (const auto& q : queries) min_opt = std::min(min_opt, brute_force_maxip(q, Y).second);
    return 0.9 * min_opt / d_x;
}

}  // namespace sublsvi::maxip
