#include "sublsvi/adaptive_query.hpp"

#include <cmath>
#include <stdexcept>

#include "sublsvi/rng.hpp"

namespace sublsvi::adaptive {

int kappa(std::size_t n, int d, double d_diam, double lambda, double delta) {
    if (n < 1 || d < 1) throw std::invalid_argument("kappa: n and d must be positive");
    if (!(d_diam > 0.0) || !(lambda > 0.0))
        throw std::invalid_argument("kappa: D_X and lambda must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("kappa: delta must be in (0, 1)");
    const double ratio =
        static_cast<double>(n) * static_cast<double>(d) * d_diam / (lambda * delta);
    const double value = static_cast<double>(d) * std::log(ratio);
    return std::max(1, static_cast<int>(std::ceil(value)));
}

void QuantizationSpec::validate() const {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("QuantizationSpec: lambda must be in (0, 1)");
    if (dim < 1) throw std::invalid_argument("QuantizationSpec: dim must be positive");
    if (!(diameter > 0.0)) throw std::invalid_argument("QuantizationSpec: diameter must be positive");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("QuantizationSpec: delta must be in (0, 1)");
}

Eigen::VectorXd quantize_query(const Eigen::VectorXd& q, const QuantizationSpec& spec) {
    spec.validate();
    const double cell = spec.cell();
    Eigen::VectorXd out(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        // Round half-down: ties go toward -infinity for determinism.
        out[i] = cell * std::ceil(q[i] / cell - 0.5);
    }
    return out;
}

AdaptiveMaxIpIndex::AdaptiveMaxIpIndex(Eigen::MatrixXd data, maxip::MaxIpParams params,
                                       QuantizationSpec spec, std::uint64_t seed,
                                       std::optional<lsh::LshConfig> table_config)
    : spec_(spec) {
    spec_.validate();
    params.validate();
    if (spec_.dim != data.cols())
        throw std::invalid_argument("AdaptiveMaxIpIndex: spec.dim must match the data dimension");

    const int replica_count = kappa(static_cast<std::size_t>(data.rows()), spec_.dim,
                                    spec_.diameter, spec_.lambda, spec_.delta);
    replicas_.reserve(replica_count);
    for (int i = 0; i < replica_count; ++i) {
        lsh::LshConfig config =
            table_config ? *table_config
                         : maxip::default_table_config(static_cast<std::size_t>(data.rows()),
                                                       params, 0);
        config.seed = mix_seed(seed, static_cast<std::uint64_t>(i) + 1);
        replicas_.push_back(std::make_unique<maxip::MaxIpIndex>(data, params, config));
    }
}

maxip::MaxIpResult AdaptiveMaxIpIndex::query(const Eigen::VectorXd& q) const {
    const Eigen::VectorXd q_hat = quantize_query(q, spec_);
    const maxip::MaxIpParams& params = replicas_.front()->params();
    // Quantization moves the query by at most lambda/2 in l2 and perturbs
    // inner products by at most lambda/2; pad the norm bound and lower the
    // acceptance bar accordingly (the (c, tau, lambda) contract).
    const double d_pad = params.d_x + spec_.lambda;
    const double threshold = params.c * params.tau * params.d_x - 0.5 * spec_.lambda;

    maxip::MaxIpResult result;
    for (const auto& replica : replicas_) {
        maxip::MaxIpResult attempt = replica->query_raw(q_hat, d_pad, threshold);
        result.probe_stats.merge(attempt.probe_stats);
        if (attempt.outcome) {
            // Report the exact inner product of the unquantized query.
            const int id = attempt.outcome->id;
            const double ip = replica->data().row(id).dot(q.transpose());
            result.outcome = maxip::MaxIpCandidate{id, ip};
            return result;
        }
    }
    return result;
}

}  // namespace sublsvi::adaptive
