// Python bindings for the core operations: transforms and reference rho
// curves, the Max-IP / MaxMatNorm / adaptive indices, linear-MDP
// generation with its DP oracles, and the LSVI / LSVI-UCB drivers.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sublsvi/adaptive_query.hpp"
#include "sublsvi/bench.hpp"
#include "sublsvi/linear_mdp.hpp"
#include "sublsvi/lsvi.hpp"
#include "sublsvi/lsvi_ucb.hpp"
#include "sublsvi/matnorm.hpp"
#include "sublsvi/maxip.hpp"

namespace py = pybind11;
using namespace sublsvi;

namespace {

maxip::RhoRegime parse_regime(const std::string& name) {
    if (name == "ar15") return maxip::RhoRegime::ar15;
    if (name == "alrw17") return maxip::RhoRegime::alrw17;
    throw std::invalid_argument("regime must be 'ar15' or 'alrw17'");
}

lsvi::Mode parse_mode(const std::string& name) {
    if (name == "exact") return lsvi::Mode::exact;
    if (name == "sublinear") return lsvi::Mode::sublinear;
    if (name == "sublinear_adaptive") return lsvi::Mode::sublinear_adaptive;
    throw std::invalid_argument("mode must be exact, sublinear or sublinear_adaptive");
}

py::dict lsvi_row_to_dict(const bench::LsviRunRow& row) {
    py::dict out;
    out["seed"] = row.seed;
    out["mode"] = row.mode;
    out["n"] = row.n;
    out["c"] = row.c;
    out["eps_target"] = row.eps_target;
    out["suboptimality"] = row.suboptimality;
    out["probes_mean"] = row.probes_mean;
    out["fallback_count"] = row.fallback_count;
    out["wall_ms_value_update"] = row.wall_ms_value_update;
    out["kappa"] = row.kappa;
    return out;
}

}  // namespace

PYBIND11_MODULE(_sublsvi, m) {
    m.doc() = "LSH-backed maximum inner product search and sublinear value iteration";

    // ---- transforms and reference curves ------------------------------
    m.def("transform_data_point", &maxip::transform_data_point, py::arg("y"));
    m.def("transform_query", &maxip::transform_query, py::arg("x"), py::arg("d_x"));
    m.def(
        "rho_theory",
        [](double c, double tau, const std::string& regime) {
            return maxip::rho_theory(c, tau, parse_regime(regime));
        },
        py::arg("c"), py::arg("tau"), py::arg("regime") = "ar15");
    m.def(
        "rho_upper_bound",
        [](double c, double tau, const std::string& regime) {
            return maxip::rho_upper_bound(c, tau, parse_regime(regime));
        },
        py::arg("c"), py::arg("tau"), py::arg("regime") = "ar15");
    m.def("brute_force_maxip", &maxip::brute_force_maxip, py::arg("x"), py::arg("data"));
    m.def("kappa", &adaptive::kappa, py::arg("n"), py::arg("d"), py::arg("diameter"),
          py::arg("lam"), py::arg("delta"));
    m.def(
        "quantize_query",
        [](const Eigen::VectorXd& q, double lam, double diameter, double delta) {
            adaptive::QuantizationSpec spec;
            spec.lambda = lam;
            spec.dim = static_cast<int>(q.size());
            spec.diameter = diameter;
            spec.delta = delta;
            return adaptive::quantize_query(q, spec);
        },
        py::arg("q"), py::arg("lam"), py::arg("diameter") = 1.0, py::arg("delta") = 0.05);
    m.def("lift_data", &matnorm::lift_data, py::arg("y"));
    m.def(
        "mat_norm",
        [](const Eigen::VectorXd& y, const Eigen::MatrixXd& x) {
            matnorm::PsdQuery query;
            query.matrix = x;
            query.frobenius_bound = std::max(x.norm(), 1e-12);
            return matnorm::mat_norm(y, query);
        },
        py::arg("y"), py::arg("x"));
    m.def(
        "brute_force_matnorm",
        [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& data) {
            matnorm::PsdQuery query;
            query.matrix = x;
            query.frobenius_bound = std::max(x.norm(), 1e-12);
            return matnorm::brute_force_matnorm(query, data);
        },
        py::arg("x"), py::arg("data"));

    // ---- search structures --------------------------------------------
    py::class_<maxip::MaxIpIndex>(m, "MaxIpIndex")
        .def(py::init([](const Eigen::MatrixXd& data, double c, double tau, double d_x) {
                 maxip::MaxIpParams params;
                 params.c = c;
                 params.tau = tau;
                 params.d_x = d_x;
                 return maxip::MaxIpIndex(data, params);
             }),
             py::arg("data"), py::arg("c") = 0.8, py::arg("tau") = 0.5, py::arg("d_x") = 1.0)
        .def(
            "query",
            [](const maxip::MaxIpIndex& index, const Eigen::VectorXd& x) {
                const auto result = index.query(x);
                py::dict out;
                out["found"] = result.outcome.has_value();
                out["id"] = result.outcome ? result.outcome->id : -1;
                out["inner_product"] =
                    result.outcome ? result.outcome->inner_product : 0.0;
                out["candidates_examined"] = result.probe_stats.candidates_examined;
                return out;
            },
            py::arg("x"));

    py::class_<matnorm::MatNormIndex>(m, "MatNormIndex")
        .def(py::init([](const Eigen::MatrixXd& data, double c, double tau) {
                 return matnorm::MatNormIndex(data, c, tau);
             }),
             py::arg("data"), py::arg("c") = 0.8, py::arg("tau") = 0.7)
        .def(
            "query",
            [](const matnorm::MatNormIndex& index, const Eigen::MatrixXd& x) {
                matnorm::PsdQuery query;
                query.matrix = x;
                query.frobenius_bound = std::max(x.norm(), 1e-12);
                const auto result = index.query(query);
                py::dict out;
                out["found"] = result.outcome.has_value();
                out["id"] = result.outcome ? result.outcome->id : -1;
                out["norm"] = result.outcome ? result.outcome->norm : 0.0;
                out["candidates_examined"] = result.probe_stats.candidates_examined;
                return out;
            },
            py::arg("x"));

    // ---- linear MDP ----------------------------------------------------
    py::class_<mdp::MdpInstance>(m, "MdpInstance")
        .def_property_readonly("num_states",
                               [](const mdp::MdpInstance& i) { return i.mdp.num_states; })
        .def_property_readonly("num_actions",
                               [](const mdp::MdpInstance& i) { return i.mdp.num_actions; })
        .def_property_readonly("feature_dim",
                               [](const mdp::MdpInstance& i) { return i.mdp.feature_dim; })
        .def_property_readonly("horizon",
                               [](const mdp::MdpInstance& i) { return i.mdp.horizon; })
        .def_property_readonly("span_bound",
                               [](const mdp::MdpInstance& i) { return i.span.span_bound; })
        .def("features",
             [](const mdp::MdpInstance& i, int s, int a) {
                 return Eigen::VectorXd(i.mdp.features(s, a));
             })
        .def("reward", [](const mdp::MdpInstance& i, int h, int s, int a) {
            return i.mdp.reward(h, s, a);
        });

    m.def("generate_linear_mdp", &mdp::generate_linear_mdp, py::arg("seed"),
          py::arg("num_states"), py::arg("num_actions"), py::arg("feature_dim"),
          py::arg("horizon"));
    m.def(
        "validate", [](const mdp::MdpInstance& instance) { return mdp::validate(instance); },
        py::arg("instance"));
    m.def(
        "optimal_values",
        [](const mdp::MdpInstance& instance) {
            const auto tables = mdp::optimal_values(instance.mdp);
            return tables.v;
        },
        py::arg("instance"));
    m.def("save_mdp", &mdp::save_mdp, py::arg("instance"), py::arg("path"));
    m.def("load_mdp", &mdp::load_mdp, py::arg("path"));

    // ---- algorithm drivers ----------------------------------------------
    m.def(
        "run_lsvi",
        [](const mdp::MdpInstance& instance, const std::string& mode, int n, double c,
           double epsilon, std::uint64_t seed) {
            lsvi::LsviConfig config;
            config.mode = parse_mode(mode);
            config.n = n;
            const double iota = std::log(static_cast<double>(instance.mdp.horizon) *
                                         instance.mdp.feature_dim / 0.05);
            config.iota = iota;
            config.epsilon = epsilon;
            config.c = c > 0.0 ? c
                               : lsvi::theorem_c(1.0, instance.span.span_bound, iota, n);
            return lsvi_row_to_dict(bench::run_lsvi_once(instance, config, seed));
        },
        py::arg("instance"), py::arg("mode") = "exact", py::arg("n") = 256,
        py::arg("c") = 0.0, py::arg("epsilon") = 0.5, py::arg("seed") = 1);

    m.def(
        "run_lsvi_ucb",
        [](const mdp::MdpInstance& instance, const std::string& variant, int episodes,
           double c_beta, std::uint64_t seed) {
            ucb::UcbConfig config;
            config.variant = ucb::parse_variant(variant);
            config.episodes = episodes;
            config.c_beta = c_beta;
            const auto runs = ucb::run_experiment(instance.mdp, config, {seed});
            const auto& run = runs.front();
            py::dict out;
            out["seed"] = run.seed;
            out["variant"] = ucb::variant_name(run.variant);
            out["cum_regret"] = run.cum_regret;
            out["total_probes"] = run.total_probes;
            out["total_fallbacks"] = run.total_fallbacks;
            out["switches"] = run.switches;
            std::vector<double> gaps;
            gaps.reserve(run.episodes.size());
            for (const auto& ep : run.episodes) gaps.push_back(ep.gap);
            out["episode_gaps"] = gaps;
            return out;
        },
        py::arg("instance"), py::arg("variant") = "matrix_norm", py::arg("episodes") = 100,
        py::arg("c_beta") = 0.1, py::arg("seed") = 1);
}
