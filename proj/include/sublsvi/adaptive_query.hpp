#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "sublsvi/maxip.hpp"

namespace sublsvi::adaptive {

// kappa = ceil(d * ln(n * d * D_X / (lambda * delta))), minimum 1: the
// replica count that union-bounds an adaptive query sequence over the
// quantization lattice. Uses the natural log.
int kappa(std::size_t n, int d, double d_diam, double lambda, double delta);

struct QuantizationSpec {
    double lambda = 0.05;  // additive inner-product error budget, in (0, 1)
    int dim = 1;
    double diameter = 1.0;  // D_X: bound on the query hull
    double delta = 0.05;    // total failure probability over the sequence

    double cell() const { return lambda / static_cast<double>(dim); }
    void validate() const;
};

// Round every coordinate to the nearest multiple of lambda/d, ties toward
// -infinity, so |q - q_hat|_inf <= lambda/(2d).
Eigen::VectorXd quantize_query(const Eigen::VectorXd& q, const QuantizationSpec& spec);

// kappa independently-seeded Max-IP replicas behind one quantized query
// path. A query is quantized once, then replicas are probed in index order
// until one reports a candidate.
class AdaptiveMaxIpIndex {
public:
    AdaptiveMaxIpIndex(Eigen::MatrixXd data, maxip::MaxIpParams params, QuantizationSpec spec,
                       std::uint64_t seed,
                       std::optional<lsh::LshConfig> table_config = std::nullopt);

    maxip::MaxIpResult query(const Eigen::VectorXd& q) const;

    int replica_count() const { return static_cast<int>(replicas_.size()); }
    const QuantizationSpec& spec() const { return spec_; }
    const maxip::MaxIpIndex& replica(int i) const { return *replicas_.at(i); }

private:
    QuantizationSpec spec_;
    std::vector<std::unique_ptr<maxip::MaxIpIndex>> replicas_;
};

}  // namespace sublsvi::adaptive
