#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "sublsvi/maxip.hpp"

namespace sublsvi::matnorm {

// Symmetric PSD query matrix plus the declared bound on its Frobenius norm.
struct PsdQuery {
    Eigen::MatrixXd matrix;
    double frobenius_bound = 1.0;

    // Symmetry within 1e-9 and eigenvalues >= -1e-9.
    void validate() const;
};

// |y|_x = sqrt(y^T x y), clamping sub-1e-12 negatives to zero.
double mat_norm(const Eigen::VectorXd& y, const PsdQuery& x);

// Row-major vec(y y^T), so that <lift_data(y), vec(x)> = y^T x y.
Eigen::VectorXd lift_data(const Eigen::VectorXd& y);

struct MatNormCandidate {
    int id = -1;
    double norm = 0.0;  // recomputed exactly against the original y
};

struct MatNormResult {
    std::optional<MatNormCandidate> outcome;
    lsh::ProbeStats probe_stats;
};

// (c, tau)-MaxMatNorm over a fixed dataset, backed by a (c^2, tau^2)-Max-IP
// index on vec(y y^T) lifts. Lifts are scaled by the largest lift norm so
// they fit the unit ball; the factor is recorded and scores are un-scaled
// on output.
class MatNormIndex {
public:
    MatNormIndex(Eigen::MatrixXd data, double c, double tau,
                 std::optional<lsh::LshConfig> config = std::nullopt);

    // Best bucket candidate by exact |y|_x when its normalized lifted inner
    // product reaches c^2 * tau^2, else fail. Rejects non-PSD queries and
    // frobenius_bound < |x|_F.
    MatNormResult query(const PsdQuery& x) const;

    // Same scan with the acceptance bar given directly as a norm; callers
    // that calibrate their own promise threshold use this entry.
    MatNormResult query_with_threshold(const PsdQuery& x, double min_norm) const;

    double c() const { return c_; }
    double tau() const { return tau_; }
    double lift_scale() const { return lift_scale_; }
    const Eigen::MatrixXd& data() const { return data_; }
    const maxip::MaxIpIndex& inner() const { return *inner_; }

private:
    MatNormResult query_impl(const PsdQuery& x, double lifted_threshold) const;

    Eigen::MatrixXd data_;  // original vectors, one per row
    double c_;
    double tau_;
    double lift_scale_ = 1.0;  // max |y|^2 over the dataset
    std::optional<maxip::MaxIpIndex> inner_;
};

// Exact scan of |y|_x; ties to the smallest id, error on empty Y.
std::pair<int, double> brute_force_matnorm(const PsdQuery& x, const Eigen::MatrixXd& Y);

}  // namespace sublsvi::matnorm
