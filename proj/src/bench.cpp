#include "sublsvi/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "sublsvi/maxip.hpp"

namespace fs = std::filesystem;

namespace sublsvi::bench {

const char* kLsviCsvHeader =
    "seed,mode,n,c,eps_target,suboptimality,probes_mean,fallback_count,wall_ms_value_update";
const char* kUcbCsvHeader = "seed,variant,k,episode_gap,cum_regret,probes,fallbacks,switches,wall_ms";
const char* kSweepCsvHeader =
    "A,variant,mean_probes,mean_wall_ms,mean_suboptimality,probes_slope,wall_slope";

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

KvConfig KvConfig::from_string(const std::string& text) {
    KvConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key=value, got '" + line + "'");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        config.values_[key] = value;
    }
    return config;
}

KvConfig KvConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_string(buffer.str());
}

std::string KvConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

long long KvConfig::get_int(const std::string& key, long long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected integer, got '" + it->second + "'");
    }
}

double KvConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected number, got '" + it->second + "'");
    }
}

std::vector<long long> KvConfig::get_int_list(const std::string& key) const {
    const auto it = values_.find(key);
    std::vector<long long> out;
    if (it == values_.end()) return out;
    std::istringstream in(it->second);
    std::string token;
    while (std::getline(in, token, ',')) {
        try {
            out.push_back(std::stoll(token));
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': expected comma-separated integers, got '" +
                              it->second + "'");
        }
    }
    return out;
}

void KvConfig::require_known(const std::vector<std::string>& known) const {
    for (const auto& [key, value] : values_) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown config key '" + key + "'");
    }
}

namespace {

const std::vector<std::string> kKnownKeys = {
    "mdp.S",           "mdp.A",         "mdp.d",          "mdp.H",
    "mdp.seed",        "mdp.file",      "algo.family",    "algo.variant",
    "algo.K",          "algo.n",        "algo.epsilon",   "algo.c",
    "algo.tau",        "algo.c_beta",   "algo.lambda_reg", "algo.lambda_quant",
    "algo.delta",      "algo.p",        "algo.c0",        "algo.max_tables",
    "algo.calibration", "sweep.A_list", "sweep.seeds",    "sweep.S",
    "sweep.d",         "sweep.H",       "sweep.n",        "sweep.c",
    "sweep.max_tables", "output.dir",   "output.format",
};

std::string mdp_file_name(int S, int A, int d, int H, std::uint64_t seed) {
    std::ostringstream name;
    name << "mdp_S" << S << "_A" << A << "_d" << d << "_H" << H << "_seed" << seed << ".mdp";
    return name.str();
}

}  // namespace

int env_thread_cap(int fallback) {
    const char* env = std::getenv("SUBLSVI_THREADS");
    if (env == nullptr) return fallback;
    const int v = std::atoi(env);
    return v >= 1 ? v : fallback;
}

LsviRunRow run_lsvi_once(const mdp::MdpInstance& instance, lsvi::LsviConfig config,
                         std::uint64_t seed) {
    config.seed = seed;
    Rng sample_rng(mix_seed(seed, 0x5a3c));
    const lsvi::SampleSet samples =
        lsvi::collect_samples(instance.mdp, instance.span, config.n, sample_rng);
    const lsvi::LambdaPair lambda = lsvi::compute_lambda(instance.span, config.n);

    lsvi::StateIndices indices;
    const lsvi::StateIndices* indices_ptr = nullptr;
    if (config.mode != lsvi::Mode::exact) {
        indices = lsvi::prepare_state_indices(instance.mdp, instance.core, instance.span, samples,
                                              lambda, config);
        indices_ptr = &indices;
    }
    const lsvi::BackwardPassResult pass = lsvi::backward_pass(
        instance.mdp, instance.core, instance.span, samples, lambda, config, indices_ptr);
    const mdp::Policy policy = lsvi::greedy_policy(pass.w_hat, instance.mdp, instance.core);

    LsviRunRow row;
    row.seed = seed;
    row.mode = config.mode == lsvi::Mode::exact
                   ? "exact"
                   : (config.mode == lsvi::Mode::sublinear ? "sublinear" : "sublinear_adaptive");
    row.n = config.n;
    row.c = config.c;
    row.eps_target = config.epsilon;
    row.suboptimality = lsvi::evaluate_suboptimality(instance.mdp, policy, 0);
    row.probes_mean = pass.stats.value_updates == 0
                          ? 0.0
                          : static_cast<double>(pass.stats.probes) /
                                static_cast<double>(pass.stats.value_updates);
    row.fallback_count = pass.stats.fallbacks;
    row.wall_ms_value_update = pass.stats.value_updates == 0
                                   ? 0.0
                                   : pass.stats.wall_ms /
                                         static_cast<double>(pass.stats.value_updates);
    row.kappa = indices.kappa;
    return row;
}

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need >= 2 paired points");
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double lx = std::log(xs[i]);
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SweepReport run_sweep(const SweepSpec& spec) {
    if (spec.a_list.size() < 3)
        throw ConfigError("sweep needs at least 3 action counts in sweep.A_list");
    if (!std::is_sorted(spec.a_list.begin(), spec.a_list.end()))
        throw ConfigError("sweep.A_list must be ascending");

    struct CellTask {
        int a = 0;
        int seed_index = 0;
    };
    std::vector<CellTask> tasks;
    for (int a : spec.a_list)
        for (int i = 0; i < spec.seeds; ++i) tasks.push_back({a, i});

    // Two cells (exact, sublinear) per task, stored at fixed slots so the
    // output is identical for any thread count.
    std::vector<SweepCell> cells(tasks.size() * 2);
    auto run_task = [&](std::size_t index) {
        const CellTask& task = tasks[index];
        const std::uint64_t cell_seed =
            mix_seed(mix_seed(spec.master_seed, static_cast<std::uint64_t>(task.a)),
                     static_cast<std::uint64_t>(task.seed_index));
        const mdp::MdpInstance instance = mdp::generate_linear_mdp(
            cell_seed, spec.num_states, task.a, spec.feature_dim, spec.horizon);

        lsvi::LsviConfig config;
        config.n = spec.n;
        config.c = spec.c;
        config.iota = std::log(static_cast<double>(spec.horizon) * spec.feature_dim / 0.01);
        config.max_tables = spec.max_tables;

        for (int variant = 0; variant < 2; ++variant) {
            config.mode = variant == 0 ? lsvi::Mode::exact : lsvi::Mode::sublinear;
            const LsviRunRow row = run_lsvi_once(instance, config, cell_seed);
            SweepCell cell;
            cell.num_actions = task.a;
            cell.seed = cell_seed;
            cell.variant = row.mode;
            cell.probes_mean = row.probes_mean;
            cell.wall_ms_mean = row.wall_ms_value_update;
            cell.suboptimality = row.suboptimality;
            cells[index * 2 + variant] = cell;
        }
    };

    const int threads = std::max(1, env_thread_cap(spec.threads));
    std::size_t next = 0;
    while (next < tasks.size()) {
        std::vector<std::thread> batch;
        for (int t = 0; t < threads && next < tasks.size(); ++t, ++next)
            batch.emplace_back(run_task, next);
        for (auto& thread : batch) thread.join();
    }

    SweepReport report;
    report.cells = cells;
    for (const std::string variant : {"exact", "sublinear"}) {
        SweepAggregate agg;
        agg.variant = variant;
        for (int a : spec.a_list) {
            double probes = 0.0, wall = 0.0, subopt = 0.0;
            int count = 0;
            for (const SweepCell& cell : cells) {
                if (cell.num_actions != a || cell.variant != variant) continue;
                probes += cell.probes_mean;
                wall += cell.wall_ms_mean;
                subopt += cell.suboptimality;
                ++count;
            }
            agg.a_values.push_back(a);
            agg.mean_probes.push_back(probes / count);
            agg.mean_wall_ms.push_back(wall / count);
            agg.mean_suboptimality.push_back(subopt / count);
        }
        std::vector<double> a_doubles(agg.a_values.begin(), agg.a_values.end());
        agg.probes_slope = fit_loglog_slope(a_doubles, agg.mean_probes);
        agg.wall_slope = fit_loglog_slope(a_doubles, agg.mean_wall_ms);
        report.aggregates.push_back(std::move(agg));
    }
    return report;
}

namespace {

mdp::MdpInstance load_or_fail(const KvConfig& config) {
    const std::string file = config.get_string("mdp.file", "");
    if (file.empty()) throw std::runtime_error("cmd_run: config must name mdp.file");
    return mdp::load_mdp(file);
}

lsvi::Mode parse_lsvi_mode(const std::string& name) {
    if (name == "exact") return lsvi::Mode::exact;
    if (name == "sublinear") return lsvi::Mode::sublinear;
    if (name == "sublinear_adaptive") return lsvi::Mode::sublinear_adaptive;
    throw ConfigError("unknown LSVI variant '" + name + "'");
}

}  // namespace

int cmd_generate(const CliOptions& options) {
    KvConfig config = KvConfig::from_file(options.config_path);
    config.require_known(kKnownKeys);
    const int S = static_cast<int>(config.get_int("mdp.S", 5));
    const int A = static_cast<int>(config.get_int("mdp.A", 8));
    const int d = static_cast<int>(config.get_int("mdp.d", 4));
    const int H = static_cast<int>(config.get_int("mdp.H", 3));
    const std::uint64_t seed =
        options.seed ? *options.seed
                     : static_cast<std::uint64_t>(config.get_int("mdp.seed", 1));
    const std::string out_dir =
        options.out_dir.empty() ? config.get_string("output.dir", ".") : options.out_dir;

    const mdp::MdpInstance instance = mdp::generate_linear_mdp(seed, S, A, d, H);
    const auto report = mdp::validate(instance);
    if (!report.empty()) {
        for (const auto& line : report) std::cerr << "invariant violation: " << line << "\n";
        return 1;
    }
    fs::create_directories(out_dir);
    const std::string path = (fs::path(out_dir) / mdp_file_name(S, A, d, H, seed)).string();
    mdp::save_mdp(instance, path);
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_run(const CliOptions& options) {
    KvConfig config = KvConfig::from_file(options.config_path);
    config.require_known(kKnownKeys);
    const std::string out_dir =
        options.out_dir.empty() ? config.get_string("output.dir", ".") : options.out_dir;
    fs::create_directories(out_dir);
    const std::uint64_t seed =
        options.seed ? *options.seed
                     : static_cast<std::uint64_t>(config.get_int("mdp.seed", 1));

    const std::string family = config.get_string("algo.family", "lsvi");
    const std::string variant =
        options.variant ? *options.variant : config.get_string("algo.variant", "exact");
    if (family != "lsvi" && family != "lsvi_ucb")
        throw ConfigError("unknown algo.family '" + family + "' (expected lsvi or lsvi_ucb)");

    if (family == "lsvi") {
        lsvi::LsviConfig run;
        run.mode = parse_lsvi_mode(variant);
        const mdp::MdpInstance instance = load_or_fail(config);
        run.epsilon = config.get_double("algo.epsilon", 0.5);
        run.iota = std::log(static_cast<double>(instance.mdp.horizon) *
                            instance.mdp.feature_dim / config.get_double("algo.p", 0.05));
        run.c0 = config.get_double("algo.c0", 1.0);
        const long long theorem_n = lsvi::required_sample_count(
            run.epsilon, instance.span.span_bound, instance.mdp.horizon, run.iota, run.c0);
        run.n = static_cast<int>(config.get_int("algo.n", theorem_n));
        run.c = config.get_double(
            "algo.c", lsvi::theorem_c(run.c0, instance.span.span_bound, run.iota, run.n));
        run.lambda_quant = config.get_double("algo.lambda_quant", 0.0);
        run.delta_quant = config.get_double("algo.delta", 0.05);
        run.max_tables = static_cast<int>(config.get_int("algo.max_tables", 0));
        if (run.mode == lsvi::Mode::sublinear_adaptive && run.lambda_quant <= 0.0)
            throw ConfigError("sublinear_adaptive requires algo.lambda_quant > 0");
        if (run.mode == lsvi::Mode::sublinear && run.lambda_quant > 0.0)
            run.mode = lsvi::Mode::sublinear_adaptive;

        const LsviRunRow row = run_lsvi_once(instance, run, seed);
        const std::string path =
            (fs::path(out_dir) / ("lsvi_" + row.mode + "_seed" + std::to_string(seed) + ".csv"))
                .string();
        std::ofstream out(path, std::ios::binary);
        out << kLsviCsvHeader << "\n";
        out << row.seed << ',' << row.mode << ',' << row.n << ',' << format_double(row.c) << ','
            << format_double(row.eps_target) << ',' << format_double(row.suboptimality) << ','
            << format_double(row.probes_mean) << ',' << row.fallback_count << ','
            << format_double(row.wall_ms_value_update) << "\n";
        std::cout << "lsvi mode=" << row.mode << " seed=" << seed
                  << " suboptimality=" << format_double(row.suboptimality)
                  << " probes_mean=" << format_double(row.probes_mean)
                  << " fallbacks=" << row.fallback_count;
        if (row.kappa > 0) std::cout << " kappa=" << row.kappa;
        std::cout << "\n";
        return 0;
    }
    if (family == "lsvi_ucb") {
        ucb::UcbConfig run;
        try {
            run.variant = ucb::parse_variant(variant);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        const mdp::MdpInstance instance = load_or_fail(config);
        run.episodes = static_cast<int>(config.get_int("algo.K", 100));
        run.lambda_reg = config.get_double("algo.lambda_reg", 1.0);
        run.c_beta = config.get_double("algo.c_beta", 0.1);
        run.p = config.get_double("algo.p", 0.01);
        run.c = config.get_double("algo.c", 0.0);
        run.matnorm_tau = config.get_double("algo.tau", 0.55);
        run.max_tables = static_cast<int>(config.get_int("algo.max_tables", 128));
        run.seed = seed;

        const auto results = ucb::run_experiment(instance.mdp, run, {seed});
        const ucb::RunResult& res = results.front();
        const std::string path =
            (fs::path(out_dir) / ("ucb_" + std::string(ucb::variant_name(run.variant)) + "_seed" +
                                  std::to_string(seed) + ".csv"))
                .string();
        std::ofstream out(path, std::ios::binary);
        out << kUcbCsvHeader << "\n";
        for (const auto& ep : res.episodes) {
            out << res.seed << ',' << ucb::variant_name(res.variant) << ',' << ep.episode << ','
                << format_double(ep.gap) << ',' << format_double(ep.cum_regret) << ','
                << ep.probes << ',' << ep.fallbacks << ',' << ep.switches << ','
                << format_double(ep.wall_ms) << "\n";
        }
        std::cout << "lsvi_ucb variant=" << ucb::variant_name(run.variant) << " seed=" << seed
                  << " cum_regret=" << format_double(res.cum_regret)
                  << " probes=" << res.total_probes << " fallbacks=" << res.total_fallbacks
                  << " switches=" << res.switches << "\n";
        return 0;
    }
    throw ConfigError("unknown algo.family '" + family + "' (expected lsvi or lsvi_ucb)");
}

int cmd_sweep(const CliOptions& options) {
    KvConfig config = KvConfig::from_file(options.config_path);
    config.require_known(kKnownKeys);
    const std::string out_dir =
        options.out_dir.empty() ? config.get_string("output.dir", ".") : options.out_dir;
    fs::create_directories(out_dir);

    SweepSpec spec;
    for (long long a : config.get_int_list("sweep.A_list")) spec.a_list.push_back(static_cast<int>(a));
    if (spec.a_list.empty()) throw ConfigError("sweep requires sweep.A_list");
    spec.seeds = static_cast<int>(config.get_int("sweep.seeds", 10));
    spec.num_states = static_cast<int>(config.get_int("sweep.S", 2));
    spec.feature_dim = static_cast<int>(config.get_int("sweep.d", 8));
    spec.horizon = static_cast<int>(config.get_int("sweep.H", 2));
    spec.n = static_cast<int>(config.get_int("sweep.n", 64));
    spec.c = config.get_double("sweep.c", 0.8);
    spec.max_tables = static_cast<int>(config.get_int("sweep.max_tables", 0));
    spec.master_seed = options.seed ? *options.seed
                                    : static_cast<std::uint64_t>(config.get_int("mdp.seed", 1));

    const SweepReport report = run_sweep(spec);
    const std::string path = (fs::path(out_dir) / "sweep.csv").string();
    std::ofstream out(path, std::ios::binary);
    out << kSweepCsvHeader << "\n";
    for (const auto& agg : report.aggregates) {
        for (std::size_t i = 0; i < agg.a_values.size(); ++i) {
            out << agg.a_values[i] << ',' << agg.variant << ','
                << format_double(agg.mean_probes[i]) << ',' << format_double(agg.mean_wall_ms[i])
                << ',' << format_double(agg.mean_suboptimality[i]) << ','
                << format_double(agg.probes_slope) << ',' << format_double(agg.wall_slope) << "\n";
        }
    }
    for (const auto& agg : report.aggregates) {
        std::cout << "sweep variant=" << agg.variant
                  << " probes_slope=" << format_double(agg.probes_slope)
                  << " wall_slope=" << format_double(agg.wall_slope) << "\n";
    }
    return 0;
}

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& path, std::string& header,
                                               int& skipped) {
    std::ifstream in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    if (!std::getline(in, line)) return rows;
    header = line;
    const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',') + 1);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != columns) {
            ++skipped;
            continue;
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

double to_double_or(const std::string& s, double fallback, int& skipped) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        ++skipped;
        return fallback;
    }
}

}  // namespace

int cmd_report(const std::string& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("report: not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("report: no CSV files in " + dir);

    int skipped = 0;
    // variant -> (count, final metric sum, probes sum, preprocess label)
    struct Group {
        int rows = 0;
        double metric = 0.0;
        double probes = 0.0;
        double c_sum = 0.0;
    };
    std::map<std::string, Group> lsvi_groups;
    std::map<std::string, Group> ucb_groups;
    std::map<std::string, double> ucb_last_k;
    std::vector<std::string> sweep_lines;

    for (const auto& file : files) {
        std::string header;
        const auto rows = read_csv(file, header, skipped);
        if (header == kLsviCsvHeader) {
            for (const auto& row : rows) {
                Group& g = lsvi_groups[row[1]];
                g.rows += 1;
                g.metric += to_double_or(row[5], 0.0, skipped);
                g.probes += to_double_or(row[6], 0.0, skipped);
                g.c_sum += to_double_or(row[3], 0.0, skipped);
            }
        } else if (header == kUcbCsvHeader) {
            // Keep only each run's final row per variant for regret.
            std::map<std::string, std::map<std::string, std::vector<std::string>>> finals;
            for (const auto& row : rows) finals[row[1]][row[0]] = row;
            for (const auto& [variant, per_seed] : finals) {
                for (const auto& [seed, row] : per_seed) {
                    Group& g = ucb_groups[variant];
                    g.rows += 1;
                    g.metric += to_double_or(row[4], 0.0, skipped);
                    g.probes += to_double_or(row[5], 0.0, skipped);
                    ucb_last_k[variant] = to_double_or(row[2], 1.0, skipped);
                }
            }
        } else if (header == kSweepCsvHeader) {
            for (const auto& row : rows)
                sweep_lines.push_back("  A=" + row[0] + " " + row[1] + ": probes=" + row[2] +
                                      " slope=" + row[5]);
        } else {
            ++skipped;
        }
    }

    std::cout << "benchmark report (" << dir << ")\n";
    auto print_header = [] {
        std::printf("  %-20s %-28s %-14s %-16s %-22s\n", "variant", "Preprocess", "Regret",
                    "V. Iter. C.", "theory rho (ar15/alrw17)");
    };
    if (!lsvi_groups.empty()) {
        std::cout << "\nLSVI runs (metric = suboptimality, probes = per value update)\n";
        print_header();
        for (const auto& [variant, g] : lsvi_groups) {
            const double c = g.c_sum / g.rows;
            const double tau_ref = 0.5;
            std::string rho = "-";
            if (c > 0.0 && c < 1.0)
                rho = format_double(maxip::rho_theory(c, tau_ref, maxip::RhoRegime::ar15))
                          .substr(0, 6) +
                      "/" +
                      format_double(maxip::rho_theory(c, tau_ref, maxip::RhoRegime::alrw17))
                          .substr(0, 6);
            const char* preprocess = variant == "exact" ? "0" : "S*A^(1+o(1)) + S*d*A";
            std::printf("  %-20s %-28s %-14.4f %-16.1f %-22s\n", variant.c_str(), preprocess,
                        g.metric / g.rows, g.probes / g.rows, rho.c_str());
        }
    }
    if (!ucb_groups.empty()) {
        std::cout << "\nLSVI-UCB runs (metric = final cumulative regret, probes = per run)\n";
        print_header();
        for (const auto& [variant, g] : ucb_groups) {
            const double k = std::max(1.0, ucb_last_k[variant]);
            const double c = 1.0 - 1.0 / std::sqrt(k);
            const double tau_ref = 0.5;
            std::string rho = "-";
            if (c > 0.0 && c < 1.0)
                rho = format_double(maxip::rho_theory(c, tau_ref, maxip::RhoRegime::ar15))
                          .substr(0, 6) +
                      "/" +
                      format_double(maxip::rho_theory(c, tau_ref, maxip::RhoRegime::alrw17))
                          .substr(0, 6);
            const char* preprocess =
                (variant == "exact" || variant == "matrix_norm") ? "0" : "K*A^(1+o(1)) + K*d^2*A";
            std::printf("  %-20s %-28s %-14.4f %-16.1f %-22s\n", variant.c_str(), preprocess,
                        g.metric / g.rows, g.probes / g.rows, rho.c_str());
        }
    }
    if (!sweep_lines.empty()) {
        std::cout << "\nsweeps\n";
        for (const auto& line : sweep_lines) std::cout << line << "\n";
    }
    if (skipped > 0) std::cout << "\nwarning: skipped " << skipped << " malformed row(s)/file(s)\n";
    return 0;
}

}  // namespace sublsvi::bench
