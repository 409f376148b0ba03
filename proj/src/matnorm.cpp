#include "sublsvi/matnorm.hpp"

#include <cmath>
#include <stdexcept>

namespace sublsvi::matnorm {

void PsdQuery::validate() const {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("PsdQuery: matrix must be square");
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("PsdQuery: matrix must be symmetric within 1e-9");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("PsdQuery: matrix must be positive semidefinite");
    if (!(frobenius_bound > 0.0))
        throw std::invalid_argument("PsdQuery: frobenius_bound must be positive");
}

double mat_norm(const Eigen::VectorXd& y, const PsdQuery& x) {
    if (y.size() != x.matrix.rows())
        throw std::invalid_argument("mat_norm: dimension mismatch");
    const double quad = y.dot(x.matrix * y);
    if (quad < -1e-12)
        throw std::invalid_argument("mat_norm: negative quadratic form, query is not PSD");
    return std::sqrt(std::max(0.0, quad));
}

Eigen::VectorXd lift_data(const Eigen::VectorXd& y) {
    const Eigen::Index d = y.size();
    Eigen::VectorXd out(d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) out[i * d + j] = y[i] * y[j];
    return out;
}

MatNormIndex::MatNormIndex(Eigen::MatrixXd data, double c, double tau,
                           std::optional<lsh::LshConfig> config)
    : data_(std::move(data)), c_(c), tau_(tau) {
    if (data_.rows() < 1) throw std::invalid_argument("MatNormIndex: dataset must be non-empty");
    if (!(c_ > 0.0 && c_ < 1.0)) throw std::invalid_argument("MatNormIndex: c must be in (0, 1)");
    if (!(tau_ > 0.0 && tau_ < 1.0))
        throw std::invalid_argument("MatNormIndex: tau must be in (0, 1)");

    const int n = static_cast<int>(data_.rows());
    const Eigen::Index d = data_.cols();
    Eigen::MatrixXd lifts(n, d * d);
    for (int i = 0; i < n; ++i) lifts.row(i) = lift_data(data_.row(i).transpose()).transpose();

    // |vec(y y^T)|_2 = |y|^2; divide by the max so every lift fits the ball.
    lift_scale_ = 0.0;
    for (int i = 0; i < n; ++i) lift_scale_ = std::max(lift_scale_, lifts.row(i).norm());
    if (lift_scale_ <= 0.0) lift_scale_ = 1.0;
    lifts /= lift_scale_;

    maxip::MaxIpParams params;
    params.c = c_ * c_;
    params.tau = tau_ * tau_;
    params.d_x = 1.0;  // queries carry their own Frobenius bound
    inner_.emplace(std::move(lifts), params, std::move(config));
}

MatNormResult MatNormIndex::query_with_threshold(const PsdQuery& x, double min_norm) const {
    MatNormResult result = query_impl(x, -std::numeric_limits<double>::infinity());
    if (result.outcome && result.outcome->norm < min_norm - 1e-12) result.outcome.reset();
    return result;
}

MatNormResult MatNormIndex::query(const PsdQuery& x) const {
    // Accept when the normalized lifted inner product reaches c^2 * tau^2.
    return query_impl(x, c_ * c_ * tau_ * tau_ * x.frobenius_bound);
}

MatNormResult MatNormIndex::query_impl(const PsdQuery& x, double lifted_threshold) const {
    x.validate();
    if (x.matrix.rows() != data_.cols())
        throw std::invalid_argument("MatNormIndex: query dimension mismatch");
    // Row-major vec(x), matching lift_data's layout.
    const Eigen::Index d = x.matrix.rows();
    Eigen::VectorXd q(d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) q[i * d + j] = x.matrix(i, j);
    if (q.norm() > x.frobenius_bound * (1.0 + 1e-9))
        throw std::invalid_argument("MatNormIndex: |x|_F exceeds frobenius_bound, raise the bound");

    maxip::MaxIpResult inner_result = inner_->query_raw(q, x.frobenius_bound, lifted_threshold);

    MatNormResult result;
    result.probe_stats = inner_result.probe_stats;
    if (inner_result.outcome) {
        const int id = inner_result.outcome->id;
        result.outcome = MatNormCandidate{id, mat_norm(data_.row(id).transpose(), x)};
    }
    return result;
}

std::pair<int, double> brute_force_matnorm(const PsdQuery& x, const Eigen::MatrixXd& Y) {
    if (Y.rows() == 0) throw std::invalid_argument("brute_force_matnorm: empty dataset");
    int best = 0;
    double best_norm = mat_norm(Y.row(0).transpose(), x);
    for (int i = 1; i < Y.rows(); ++i) {
        const double norm = mat_norm(Y.row(i).transpose(), x);
        if (norm > best_norm) {
            best_norm = norm;
            best = i;
        }
    }
    return {best, best_norm};
}

}  // namespace sublsvi::matnorm
