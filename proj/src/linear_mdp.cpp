#include "sublsvi/linear_mdp.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace sublsvi::mdp {

namespace {

// Marsaglia-Tsang gamma sampler (shape >= 1), boosted below 1.
double gamma_sample(Rng& rng, double shape) {
    if (shape < 1.0) {
        double u = 0.0;
        while (u == 0.0) u = rng.uniform();
        return gamma_sample(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        const double x = rng.normal();
        const double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        const double v = t * t * t;
        double u = 0.0;
        while (u == 0.0) u = rng.uniform();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

// Dirichlet(alpha) sample; alpha = 1 is uniform on the simplex, smaller
// alpha pushes mass toward the vertices.
Eigen::VectorXd simplex_sample(Rng& rng, int dim, double alpha = 1.0) {
    Eigen::VectorXd v(dim);
    double total = 0.0;
    for (int i = 0; i < dim; ++i) {
        v[i] = std::max(gamma_sample(rng, alpha), 1e-300);
        total += v[i];
    }
    v /= total;
    return v;
}

// Feature sparsity: near-vertex features create the inner-product spread
// the hashing structures feed on, while transitions stay uniform-simplex.
constexpr double kFeatureAlpha = 0.3;

}  // namespace

MdpInstance generate_linear_mdp(std::uint64_t seed, int num_states, int num_actions,
                                int feature_dim, int horizon) {
    if (num_states < 2 || num_actions < 2)
        throw std::invalid_argument("generate_linear_mdp: need S >= 2 and A >= 2");
    if (feature_dim < 2) throw std::invalid_argument("generate_linear_mdp: need d >= 2");
    if (num_actions < feature_dim)
        throw std::invalid_argument("generate_linear_mdp: need A >= d to place span columns");
    if (horizon < 1) throw std::invalid_argument("generate_linear_mdp: need H >= 1");

    MdpInstance out;
    LinearMdp& mdp = out.mdp;
    mdp.num_states = num_states;
    mdp.num_actions = num_actions;
    mdp.feature_dim = feature_dim;
    mdp.horizon = horizon;
    mdp.seed = seed;

    Rng feature_rng(mix_seed(seed, 0xfea7));
    mdp.phi.resize(num_states * num_actions, feature_dim);
    for (int s = 0; s < num_states; ++s)
        for (int a = 0; a < num_actions; ++a)
            mdp.phi.row(s * num_actions + a) =
                simplex_sample(feature_rng, feature_dim, kFeatureAlpha).transpose();

    // Plant the d simplex vertices; their pairs double as the span matrix,
    // so the convex hull of core features covers every feature.
    out.span.columns.reserve(feature_dim);
    out.span.phi = Eigen::MatrixXd::Zero(feature_dim, feature_dim);
    for (int j = 0; j < feature_dim; ++j) {
        const int s = j % num_states;
        const int a = j;
        mdp.phi.row(s * num_actions + a).setZero();
        mdp.phi(s * num_actions + a, j) = 1.0;
        out.span.columns.emplace_back(s, a);
        out.span.phi(j, j) = 1.0;
    }

    Rng measure_rng(mix_seed(seed, 0x3a5d));
    mdp.mu.resize(horizon);
    for (int h = 0; h < horizon; ++h) {
        mdp.mu[h].resize(num_states, feature_dim);
        for (int i = 0; i < feature_dim; ++i) {
            mdp.mu[h].col(i) = simplex_sample(measure_rng, num_states);
        }
    }

    Rng reward_rng(mix_seed(seed, 0x0e4a));
    mdp.theta.resize(horizon, feature_dim);
    for (int h = 0; h < horizon; ++h)
        for (int i = 0; i < feature_dim; ++i)
            mdp.theta(h, i) = reward_rng.uniform(LinearMdp::kRewardLo, LinearMdp::kRewardHi);

    out.core.core_states.resize(num_states);
    out.core.core_actions.resize(num_actions);
    for (int s = 0; s < num_states; ++s) out.core.core_states[s] = s;
    for (int a = 0; a < num_actions; ++a) out.core.core_actions[a] = a;

    // Span bound measured exactly over the grid; simplex features give
    // |Phi^-1 phi|_1 = |phi|_1 = 1.
    double bound = 0.0;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> solver(out.span.phi);
    for (int row = 0; row < mdp.phi.rows(); ++row) {
        bound = std::max(bound,
                         solver.solve(mdp.phi.row(row).transpose()).cwiseAbs().sum());
    }
    out.span.span_bound = bound;
    return out;
}

std::vector<std::string> validate(const MdpInstance& instance) {
    std::vector<std::string> report;
    const LinearMdp& mdp = instance.mdp;
    const double tol = 1e-9;
    const double sqrt_d = std::sqrt(static_cast<double>(mdp.feature_dim));

    for (int s = 0; s < mdp.num_states; ++s) {
        for (int a = 0; a < mdp.num_actions; ++a) {
            if (mdp.features(s, a).norm() > 1.0 + tol)
                report.push_back("feature norm > 1 at (s=" + std::to_string(s) +
                                 ", a=" + std::to_string(a) + ")");
            for (int h = 0; h < mdp.horizon; ++h) {
                double sum = 0.0;
                for (int next = 0; next < mdp.num_states; ++next) {
                    const double p = mdp.transition_prob(h, s, a, next);
                    if (p < -tol || p > 1.0 + tol) {
                        report.push_back("transition prob outside [0,1] at (h=" +
                                         std::to_string(h) + ", s=" + std::to_string(s) +
                                         ", a=" + std::to_string(a) + ")");
                        break;
                    }
                    sum += p;
                }
                if (std::abs(sum - 1.0) > tol)
                    report.push_back("transition row sum != 1 at (h=" + std::to_string(h) +
                                     ", s=" + std::to_string(s) + ", a=" + std::to_string(a) +
                                     "): " + std::to_string(sum));
                const double r = mdp.reward(h, s, a);
                if (r < LinearMdp::kRewardLo - tol || r > LinearMdp::kRewardHi + tol)
                    report.push_back("reward outside [0.55, 1] at (h=" + std::to_string(h) +
                                     ", s=" + std::to_string(s) + ", a=" + std::to_string(a) +
                                     "): " + std::to_string(r));
            }
        }
    }

    for (int h = 0; h < mdp.horizon; ++h) {
        // mu_h(S): column sums of the per-state measure rows.
        const Eigen::VectorXd total = mdp.mu[h].colwise().sum().transpose();
        if (total.norm() > sqrt_d + 1e-6)
            report.push_back("|mu_h(S)| > sqrt(d) at h=" + std::to_string(h));
        if (mdp.theta.row(h).norm() > sqrt_d + tol)
            report.push_back("|theta_h| > sqrt(d) at h=" + std::to_string(h));
    }

    const SpanMatrix& span = instance.span;
    const int m = static_cast<int>(span.columns.size());
    if (span.phi.cols() != m || span.phi.rows() != mdp.feature_dim) {
        report.push_back("span matrix shape mismatch");
    } else {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(span.phi);
        qr.setThreshold(1e-8);
        if (qr.rank() < m) report.push_back("span matrix rank below M");
        for (int j = 0; j < m; ++j) {
            const auto [s, a] = span.columns[j];
            if ((mdp.features(s, a) - span.phi.col(j)).cwiseAbs().maxCoeff() > tol)
                report.push_back("span column " + std::to_string(j) +
                                 " does not match phi(s_j, a_j)");
        }
        if (qr.rank() == m) {
            double bound = 0.0;
            for (int row = 0; row < mdp.phi.rows(); ++row)
                bound = std::max(bound,
                                 qr.solve(mdp.phi.row(row).transpose()).cwiseAbs().sum());
            if (bound > span.span_bound + 1e-6)
                report.push_back("span bound L understated: measured " + std::to_string(bound));
        }
    }

    if (static_cast<int>(instance.core.core_actions.size()) < mdp.feature_dim)
        report.push_back("core action set smaller than d");

    // Hull containment: every feature lies on the simplex and the vertices
    // are present among core pairs, so conv(core) covers phi(S x A).
    for (int row = 0; row < mdp.phi.rows(); ++row) {
        if (mdp.phi.row(row).minCoeff() < -tol ||
            std::abs(mdp.phi.row(row).sum() - 1.0) > 1e-6) {
            report.push_back("feature row " + std::to_string(row) +
                             " leaves the probability simplex; hull property unverified");
            break;
        }
    }
    return report;
}

int sample_transition(const LinearMdp& mdp, int s, int a, int h, Rng& rng) {
    if (s < 0 || s >= mdp.num_states || a < 0 || a >= mdp.num_actions || h < 0 ||
        h >= mdp.horizon)
        throw std::invalid_argument("sample_transition: index out of range");
    const double u = rng.uniform();
    double acc = 0.0;
    for (int next = 0; next < mdp.num_states; ++next) {
        acc += mdp.transition_prob(h, s, a, next);
        if (u < acc) return next;
    }
    return mdp.num_states - 1;  // guard against fp shortfall in the row sum
}

ValueTables optimal_values(const LinearMdp& mdp) {
    ValueTables tables;
    tables.v = Eigen::MatrixXd::Zero(mdp.horizon + 1, mdp.num_states);
    tables.q.resize(mdp.horizon);
    for (int h = mdp.horizon - 1; h >= 0; --h) {
        // [P_h V_{h+1}](s,a) = <phi(s,a), mu_h^T V_{h+1}> by linearity.
        const Eigen::VectorXd m = mdp.mu[h].transpose() * tables.v.row(h + 1).transpose();
        tables.q[h].resize(mdp.num_states, mdp.num_actions);
        for (int s = 0; s < mdp.num_states; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < mdp.num_actions; ++a) {
                const double q = mdp.reward(h, s, a) + mdp.features(s, a).dot(m);
                tables.q[h](s, a) = q;
                best = std::max(best, q);
            }
            tables.v(h, s) = best;
        }
    }
    return tables;
}

ValueTables policy_value(const LinearMdp& mdp, const Policy& policy) {
    if (policy.rows() != mdp.horizon || policy.cols() != mdp.num_states)
        throw std::invalid_argument("policy_value: policy must be H x S");
    ValueTables tables;
    tables.v = Eigen::MatrixXd::Zero(mdp.horizon + 1, mdp.num_states);
    tables.q.resize(mdp.horizon);
    for (int h = mdp.horizon - 1; h >= 0; --h) {
        const Eigen::VectorXd m = mdp.mu[h].transpose() * tables.v.row(h + 1).transpose();
        tables.q[h].resize(mdp.num_states, mdp.num_actions);
        for (int s = 0; s < mdp.num_states; ++s) {
            for (int a = 0; a < mdp.num_actions; ++a)
                tables.q[h](s, a) = mdp.reward(h, s, a) + mdp.features(s, a).dot(m);
            tables.v(h, s) = tables.q[h](s, policy(h, s));
        }
    }
    return tables;
}

namespace {

void write_doubles(std::ostream& out, const double* data, std::size_t count) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 8));
}

void read_doubles(std::istream& in, double* data, std::size_t count) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * 8));
    if (!in) throw std::runtime_error("load_mdp: truncated file");
}

void write_i32(std::ostream& out, std::int32_t v) { out.write(reinterpret_cast<char*>(&v), 4); }

std::int32_t read_i32(std::istream& in) {
    std::int32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    if (!in) throw std::runtime_error("load_mdp: truncated file");
    return v;
}

}  // namespace

void save_mdp(const MdpInstance& instance, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_mdp: cannot open " + path);
    const LinearMdp& mdp = instance.mdp;
    out << "SUBLSVI_MDP 1\n";
    out << mdp.num_states << ',' << mdp.num_actions << ',' << mdp.feature_dim << ','
        << mdp.horizon << ',' << mdp.seed << '\n';

    write_doubles(out, &mdp.reward_shift, 1);
    write_doubles(out, &mdp.reward_scale, 1);
    write_doubles(out, mdp.phi.data(), static_cast<std::size_t>(mdp.phi.size()));
    for (const auto& mu_h : instance.mdp.mu)
        write_doubles(out, mu_h.data(), static_cast<std::size_t>(mu_h.size()));
    write_doubles(out, mdp.theta.data(), static_cast<std::size_t>(mdp.theta.size()));

    write_i32(out, static_cast<std::int32_t>(instance.core.core_states.size()));
    for (int s : instance.core.core_states) write_i32(out, s);
    write_i32(out, static_cast<std::int32_t>(instance.core.core_actions.size()));
    for (int a : instance.core.core_actions) write_i32(out, a);
    write_i32(out, static_cast<std::int32_t>(instance.span.columns.size()));
    for (const auto& [s, a] : instance.span.columns) {
        write_i32(out, s);
        write_i32(out, a);
    }
    write_doubles(out, instance.span.phi.data(),
                  static_cast<std::size_t>(instance.span.phi.size()));
    write_doubles(out, &instance.span.span_bound, 1);
    if (!out) throw std::runtime_error("save_mdp: write failed for " + path);
}

MdpInstance load_mdp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_mdp: cannot open " + path);
    std::string magic;
    std::getline(in, magic);
    if (magic != "SUBLSVI_MDP 1")
        throw std::runtime_error("load_mdp: bad magic in " + path);
    std::string header;
    std::getline(in, header);
    MdpInstance instance;
    LinearMdp& mdp = instance.mdp;
    {
        char comma = 0;
        std::istringstream hs(header);
        hs >> mdp.num_states >> comma >> mdp.num_actions >> comma >> mdp.feature_dim >>
            comma >> mdp.horizon >> comma >> mdp.seed;
        if (!hs) throw std::runtime_error("load_mdp: bad header in " + path);
    }

    read_doubles(in, &mdp.reward_shift, 1);
    read_doubles(in, &mdp.reward_scale, 1);
    mdp.phi.resize(mdp.num_states * mdp.num_actions, mdp.feature_dim);
    read_doubles(in, mdp.phi.data(), static_cast<std::size_t>(mdp.phi.size()));
    mdp.mu.resize(mdp.horizon);
    for (auto& mu_h : mdp.mu) {
        mu_h.resize(mdp.num_states, mdp.feature_dim);
        read_doubles(in, mu_h.data(), static_cast<std::size_t>(mu_h.size()));
    }
    mdp.theta.resize(mdp.horizon, mdp.feature_dim);
    read_doubles(in, mdp.theta.data(), static_cast<std::size_t>(mdp.theta.size()));

    instance.core.core_states.resize(read_i32(in));
    for (int& s : instance.core.core_states) s = read_i32(in);
    instance.core.core_actions.resize(read_i32(in));
    for (int& a : instance.core.core_actions) a = read_i32(in);
    const int m = read_i32(in);
    instance.span.columns.resize(m);
    for (auto& [s, a] : instance.span.columns) {
        s = read_i32(in);
        a = read_i32(in);
    }
    instance.span.phi.resize(mdp.feature_dim, m);
    read_doubles(in, instance.span.phi.data(),
                 static_cast<std::size_t>(instance.span.phi.size()));
    read_doubles(in, &instance.span.span_bound, 1);
    return instance;
}

}  // namespace sublsvi::mdp
