#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sublsvi/linear_mdp.hpp"
#include "sublsvi/lsvi.hpp"
#include "sublsvi/lsvi_ucb.hpp"

namespace sublsvi::bench {

// Config/usage problems exit with code 2; runtime failures with 1.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Plain-text key=value configuration ('#' comments, dotted keys). Unknown
// keys are rejected with the offending name.
class KvConfig {
public:
    static KvConfig from_file(const std::string& path);
    static KvConfig from_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::vector<long long> get_int_list(const std::string& key) const;
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    // Throws ConfigError naming the first key outside the known set.
    void require_known(const std::vector<std::string>& known) const;

private:
    std::map<std::string, std::string> values_;
};

// One row of the LSVI results CSV.
struct LsviRunRow {
    std::uint64_t seed = 0;
    std::string mode;
    long long n = 0;
    double c = 0.0;
    double eps_target = 0.0;
    double suboptimality = 0.0;
    double probes_mean = 0.0;
    std::size_t fallback_count = 0;
    double wall_ms_value_update = 0.0;
    int kappa = 0;  // adaptive replica count, logged to stdout
};

LsviRunRow run_lsvi_once(const mdp::MdpInstance& instance, lsvi::LsviConfig config,
                         std::uint64_t seed);

// Least-squares slope of ln(y) against ln(x).
double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct SweepSpec {
    std::vector<int> a_list;       // ascending action counts, >= 3 entries
    int seeds = 10;
    int num_states = 2;
    int feature_dim = 8;
    int horizon = 2;
    int n = 64;                    // samples per span column
    double c = 0.8;
    std::uint64_t master_seed = 1;
    int max_tables = 0;  // 0 = scale with the action count
    int threads = 2;               // overridden by SUBLSVI_THREADS
};

struct SweepCell {
    int num_actions = 0;
    std::uint64_t seed = 0;
    std::string variant;
    double probes_mean = 0.0;
    double wall_ms_mean = 0.0;
    double suboptimality = 0.0;
};

struct SweepAggregate {
    std::string variant;
    std::vector<int> a_values;
    std::vector<double> mean_probes;
    std::vector<double> mean_wall_ms;
    std::vector<double> mean_suboptimality;
    double probes_slope = 0.0;
    double wall_slope = 0.0;
};

struct SweepReport {
    std::vector<SweepCell> cells;
    std::vector<SweepAggregate> aggregates;
};

// Paired exact/sublinear LSVI value-update measurements per (A, seed)
// cell; cells may run concurrently, output order is fixed.
SweepReport run_sweep(const SweepSpec& spec);

int env_thread_cap(int fallback);

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> variant;
};

int cmd_generate(const CliOptions& options);
int cmd_run(const CliOptions& options);
int cmd_sweep(const CliOptions& options);
int cmd_report(const std::string& dir);

// CSV headers are versioned; the report parses by header only.
extern const char* kLsviCsvHeader;
extern const char* kUcbCsvHeader;
extern const char* kSweepCsvHeader;

std::string format_double(double value);

}  // namespace sublsvi::bench
