#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sublsvi/bench.hpp"

using namespace sublsvi;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* env = std::getenv("SUBLSVI_CLI");
    return env ? env : "";
}

int run_cli(const std::string& args) {
    const int status = std::system((cli_path() + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Strips the trailing wall-clock column: timing is measured, everything
// else in a CSV is a pure function of (config, seed).
std::string without_wall_column(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        const auto comma = line.rfind(',');
        out << (comma == std::string::npos ? line : line.substr(0, comma)) << "\n";
    }
    return out.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("KvConfig parses key=value text") {
    const auto config = bench::KvConfig::from_string(
        "# comment\n"
        "mdp.S = 7\n"
        "algo.c=0.8  # trailing comment\n"
        "sweep.A_list=1024,4096,16384\n"
        "\n");
    CHECK(config.get_int("mdp.S", 0) == 7);
    CHECK(config.get_double("algo.c", 0.0) == doctest::Approx(0.8));
    CHECK(config.get_int("mdp.A", 12) == 12);  // fallback
    const auto list = config.get_int_list("sweep.A_list");
    REQUIRE(list.size() == 3);
    CHECK(list[2] == 16384);

    CHECK_THROWS_AS(bench::KvConfig::from_string("oops"), bench::ConfigError);
    CHECK_THROWS_AS(config.get_int("algo.c", 0), bench::ConfigError);  // not an int

    bench::KvConfig bad = bench::KvConfig::from_string("mdp.bogus=1\n");
    CHECK_THROWS_AS(bad.require_known({"mdp.S"}), bench::ConfigError);
    try {
        bad.require_known({"mdp.S"});
    } catch (const bench::ConfigError& e) {
        CHECK(std::string(e.what()).find("mdp.bogus") != std::string::npos);
    }
}

TEST_CASE("fit_loglog_slope recovers exact power laws") {
    CHECK(bench::fit_loglog_slope({1024, 4096, 16384}, {1024, 4096, 16384}) ==
          doctest::Approx(1.0));
    // y = 3 x^0.7
    std::vector<double> xs{1024, 4096, 16384};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(3.0 * std::pow(x, 0.7));
    CHECK(bench::fit_loglog_slope(xs, ys) == doctest::Approx(0.7));
    CHECK_THROWS_AS(bench::fit_loglog_slope({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("run_lsvi_once produces a sane row") {
    const auto instance = mdp::generate_linear_mdp(3, 4, 12, 4, 2);
    lsvi::LsviConfig config;
    config.n = 64;
    config.mode = lsvi::Mode::exact;
    const auto row = bench::run_lsvi_once(instance, config, 9);
    CHECK(row.mode == "exact");
    CHECK(row.suboptimality >= -1e-9);
    CHECK(row.probes_mean == doctest::Approx(12.0));  // exact scan = A per update
    CHECK(row.fallback_count == 0);
}

TEST_CASE("cli generate/run/report round trip") {
    REQUIRE(!cli_path().empty());
    TempDir dir("sublsvi_cli_test");

    write_file(dir.path / "gen.cfg",
               "mdp.S=4\nmdp.A=8\nmdp.d=4\nmdp.H=2\nmdp.seed=5\n");
    const std::string gen_args =
        "generate --config " + (dir.path / "gen.cfg").string() + " --out " + dir.path.string();
    CHECK(run_cli(gen_args) == 0);
    const fs::path mdp_file = dir.path / "mdp_S4_A8_d4_H2_seed5.mdp";
    REQUIRE(fs::exists(mdp_file));

    // Same seed twice: identical bytes.
    const std::string first = slurp(mdp_file);
    CHECK(run_cli(gen_args) == 0);
    CHECK(slurp(mdp_file) == first);

    write_file(dir.path / "run.cfg",
               "mdp.file=" + mdp_file.string() +
                   "\nalgo.family=lsvi\nalgo.variant=exact\nalgo.n=64\n");
    CHECK(run_cli("run --config " + (dir.path / "run.cfg").string() + " --out " +
                  dir.path.string() + " --seed 7") == 0);
    const fs::path csv = dir.path / "lsvi_exact_seed7.csv";
    REQUIRE(fs::exists(csv));
    const std::string contents = slurp(csv);
    CHECK(contents.rfind(bench::kLsviCsvHeader, 0) == 0);

    // Byte-identical on repetition (timing column aside).
    CHECK(run_cli("run --config " + (dir.path / "run.cfg").string() + " --out " +
                  dir.path.string() + " --seed 7") == 0);
    CHECK(without_wall_column(slurp(csv)) == without_wall_column(contents));

    // A quantization budget upgrades sublinear runs to the adaptive wrapper
    // and logs the replica count.
    write_file(dir.path / "adaptive.cfg",
               "mdp.file=" + mdp_file.string() +
                   "\nalgo.family=lsvi\nalgo.variant=sublinear\nalgo.n=64\n"
                   "algo.lambda_quant=0.1\nalgo.delta=0.1\n");
    const int status = std::system(
        (cli_path() + " run --config " + (dir.path / "adaptive.cfg").string() + " --out " +
         dir.path.string() + " --seed 2 > " + (dir.path / "adaptive.txt").string() + " 2>&1")
            .c_str());
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(slurp(dir.path / "adaptive.txt").find("kappa=") != std::string::npos);

    // UCB run emits the regret CSV.
    write_file(dir.path / "ucb.cfg",
               "mdp.file=" + mdp_file.string() +
                   "\nalgo.family=lsvi_ucb\nalgo.variant=matrix_norm\nalgo.K=30\n");
    CHECK(run_cli("run --config " + (dir.path / "ucb.cfg").string() + " --out " +
                  dir.path.string() + " --seed 3") == 0);
    REQUIRE(fs::exists(dir.path / "ucb_matrix_norm_seed3.csv"));

    CHECK(run_cli("report --dir " + dir.path.string()) == 0);
}

TEST_CASE("cli rejects bad configs with exit code 2") {
    REQUIRE(!cli_path().empty());
    TempDir dir("sublsvi_cli_err");
    write_file(dir.path / "bad.cfg", "mdp.bogus_key=3\n");
    CHECK(run_cli("generate --config " + (dir.path / "bad.cfg").string() + " --out " +
                  dir.path.string()) == 2);

    write_file(dir.path / "novariant.cfg",
               "mdp.file=" + (dir.path / "missing.mdp").string() +
                   "\nalgo.family=lsvi\nalgo.variant=warp\n");
    CHECK(run_cli("run --config " + (dir.path / "novariant.cfg").string() + " --out " +
                  dir.path.string()) == 2);

    // Runtime failure (missing MDP file) exits 1.
    write_file(dir.path / "nofile.cfg",
               "mdp.file=" + (dir.path / "missing.mdp").string() +
                   "\nalgo.family=lsvi\nalgo.variant=exact\n");
    CHECK(run_cli("run --config " + (dir.path / "nofile.cfg").string() + " --out " +
                  dir.path.string()) == 1);

    // Sweep with fewer than 3 action counts is a config error.
    write_file(dir.path / "sweep.cfg", "sweep.A_list=64,128\nsweep.seeds=1\n");
    CHECK(run_cli("sweep --config " + (dir.path / "sweep.cfg").string() + " --out " +
                  dir.path.string()) == 2);

    // Empty report directory is a runtime failure.
    fs::create_directories(dir.path / "empty");
    CHECK(run_cli("report --dir " + (dir.path / "empty").string()) == 1);
}

TEST_CASE("small sweep emits slopes with the exact scan anchored at 1") {
    bench::SweepSpec spec;
    spec.a_list = {32, 64, 128};
    spec.seeds = 2;
    spec.num_states = 2;
    spec.feature_dim = 4;
    spec.horizon = 2;
    spec.n = 32;
    spec.master_seed = 11;
    const auto report = bench::run_sweep(spec);
    REQUIRE(report.aggregates.size() == 2);
    for (const auto& agg : report.aggregates) {
        if (agg.variant == "exact") CHECK(agg.probes_slope == doctest::Approx(1.0).epsilon(1e-9));
        REQUIRE(agg.a_values.size() == 3);
    }
    // Cells are deterministic in the master seed, regardless of threading.
    bench::SweepSpec spec2 = spec;
    spec2.threads = 1;
    const auto report2 = bench::run_sweep(spec2);
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
        CHECK(report.cells[i].probes_mean == report2.cells[i].probes_mean);
        CHECK(report.cells[i].suboptimality == report2.cells[i].suboptimality);
    }
}

TEST_CASE("report skips corrupt rows with a warning") {
    REQUIRE(!cli_path().empty());
    TempDir dir("sublsvi_report_corrupt");
    std::ofstream csv(dir.path / "lsvi_x.csv");
    csv << bench::kLsviCsvHeader << "\n";
    csv << "1,exact,64,0.9,0.5,0.1,12,0,0.5\n";
    csv << "garbage,row\n";
    csv.close();
    const int status = std::system(
        (cli_path() + " report --dir " + dir.path.string() + " > " +
         (dir.path / "out.txt").string() + " 2>&1")
            .c_str());
    CHECK(WEXITSTATUS(status) == 0);
    const std::string out = slurp(dir.path / "out.txt");
    CHECK(out.find("warning") != std::string::npos);
    CHECK(out.find("skipped 1") != std::string::npos);
}
