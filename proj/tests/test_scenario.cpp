#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "pmode/errors.hpp"
#include "pmode/scenario.hpp"

using namespace pmode;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("pmode_scenario_" + name);
    fs::remove_all(dir);
    return dir;
}

const char* kMarkovian = R"({
  "scenario": "markovian",
  "system": {"preset": "tls_sigma_minus"},
  "bath": {"flat": {"f2": 0.7}},
  "time": {"t0": 0, "t1": 3, "n_points": 31}
})";

const char* kCompare = R"({
  "scenario": "compare",
  "system": {"preset": "tls_sigma_minus", "initial_level": 1},
  "bath": {"lorentzian": {"g": 1.0, "omega0": 0.0, "gamma": 0.2}},
  "time": {"t0": 0, "t1": 10, "n_points": 101},
  "numerics": {"rel_tol": 1e-10, "abs_tol": 1e-12, "d_A": 2, "n_modes": 400}
})";

const char* kTrajectories = R"({
  "scenario": "trajectories",
  "system": {"preset": "tls_sigma_minus"},
  "bath": {"lorentzian": {"g": 1.0, "gamma": 1.0}},
  "time": {"t1": 5, "n_points": 26},
  "trajectories": {"n_traj": 300, "seed": 12},
  "observables": ["P_e", "V"]
})";

} // namespace

TEST_CASE("config validation") {
    CHECK_NOTHROW(parse_scenario(kMarkovian));
    CHECK_THROWS_AS(parse_scenario("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"scenario": "markovian", "system": {"preset": "tls_sigma_minus"},
        "bath": {"flat": {"f2": 1}}, "time": {"t1": 1, "n_points": 3}, "extra": 1})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"scenario": "markovian", "system": {"preset": "tls_sigma_minus", "detunning": 1},
        "bath": {"flat": {"f2": 1}}, "time": {"t1": 1, "n_points": 3}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"scenario": "quantum", "system": {"preset": "tls_sigma_minus"},
        "bath": {"flat": {"f2": 1}}, "time": {"t1": 1, "n_points": 3}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"scenario": "markovian", "system": {"preset": "tls_sigma_minus"},
        "bath": {"flat": {"f2": 1}, "lorentzian": {"g": 1, "gamma": 1}}, "time": {"t1": 1, "n_points": 3}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"scenario": "markovian", "system": {"preset": "tls_sigma_minus"},
        "time": {"t1": 1, "n_points": 3}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"scenario": "markovian", "system": {"preset": "oscillator", "dim": 1},
        "bath": {"flat": {"f2": 1}}, "time": {"t1": 1, "n_points": 3}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"scenario": "markovian", "system": {"preset": "tls_sigma_minus"},
        "bath": {"lorentzian": {"g": 1, "gamma": 0}}, "time": {"t1": 1, "n_points": 3}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"scenario": "markovian", "system": {"preset": "oscillator", "dim": 3},
        "bath": {"flat": {"f2": 1}}, "time": {"t1": 1, "n_points": 3}, "observables": ["P_e"]})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_scenario(R"({"scenario": "markovian", "system": {"preset": "tls_sigma_minus"},
        "bath": {"flat": {"f2": 1}}, "time": {"t1": 1, "n_points": 3}, "numerics": {"d_A": "many"}})"),
                    ConfigError);

    const ScenarioConfig cfg = parse_scenario(R"({"scenario": "pseudomode",
        "system": {"preset": "oscillator", "dim": 3, "detuning": 0.5, "initial_level": 2},
        "bath": {"lorentzian": {"g": 0.3, "omega0": 1.0, "gamma": 0.4}},
        "time": {"t0": 0, "t1": 2, "n_points": 5},
        "numerics": {"d_A": "auto", "bath_grid": "uniform", "W": 8}})");
    CHECK(cfg.kind == ScenarioKind::Pseudomode);
    CHECK(cfg.system.dim == 3);
    CHECK_FALSE(cfg.numerics.ancilla_dim.has_value());
    CHECK(cfg.numerics.bath_grid == BathGrid::Uniform);
    CHECK(*cfg.numerics.window == 8.0);
}

TEST_CASE("exit codes by failure class") {
    CHECK(exit_code_for(ConfigError("x")) == 2);
    CHECK(exit_code_for(DimensionError("x")) == 2);
    CHECK(exit_code_for(IntegrationError("x", 1.0)) == 3);
    CHECK(exit_code_for(TruncationError("x")) == 4);
}

TEST_CASE("number formatting round-trips") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 30) - 15);
        const std::string s = format_number(x);
        CHECK(s.find(',') == std::string::npos);
        CHECK(std::stod(s) == x);
    }
    CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("markovian scenario writes the analytic decay") {
    const fs::path dir = scratch("markovian");
    const ScenarioOutcome out = run_scenario(parse_scenario(kMarkovian), dir);
    REQUIRE(out.files.size() == 1);
    const auto rows = read_csv(dir / "markovian.csv");
    REQUIRE(rows.size() == 32);
    CHECK(rows[0] == std::vector<std::string>{"t", "P_e"});
    CHECK(std::stod(rows.back()[0]) == 3.0);
    CHECK(std::abs(std::stod(rows.back()[1]) - std::exp(-0.7 * 3.0)) < 1e-6);
    const std::string text = slurp(dir / "markovian.csv");
    CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("compare scenario") {
    const fs::path dir = scratch("compare");
    const ScenarioOutcome out = run_scenario(parse_scenario(kCompare), dir);
    CHECK(out.files.size() == 4);
    const auto rows = read_csv(dir / "compare.csv");
    REQUIRE(rows.size() == 102);
    CHECK(rows[0].size() == 7);
    double max_pv = 0.0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        max_pv = std::max(max_pv, std::stod(rows[k][4]));
    }
    CHECK(max_pv < 1e-4);
    CHECK(fs::exists(dir / "volterra.csv"));
    CHECK(fs::exists(dir / "discrete_bath.csv"));
    CHECK(fs::exists(dir / "pseudomode.csv"));
}

TEST_CASE("trajectory scenario is deterministic") {
    const ScenarioConfig cfg = parse_scenario(kTrajectories);
    const fs::path d1 = scratch("traj1");
    const fs::path d2 = scratch("traj2");
    run_scenario(cfg, d1);
    run_scenario(cfg, d2);
    CHECK(slurp(d1 / "trajectories.csv") == slurp(d2 / "trajectories.csv"));
    CHECK(slurp(d1 / "jump_histogram.csv") == slurp(d2 / "jump_histogram.csv"));
    const auto rows = read_csv(d1 / "trajectories.csv");
    CHECK(rows[0] == std::vector<std::string>{"t", "P_e", "P_e_stderr", "V_re", "V_im", "V_stderr"});
}

TEST_CASE("scenario kinds reject mismatched baths and systems") {
    CHECK_THROWS_AS(run_scenario(parse_scenario(R"({"scenario": "pseudomode", "system": {"preset": "tls_sigma_minus"},
        "bath": {"flat": {"f2": 1}}, "time": {"t1": 1, "n_points": 3}})"),
                                 scratch("bad1")),
                    ConfigError);
    CHECK_THROWS_AS(run_scenario(parse_scenario(R"({"scenario": "volterra", "system": {"preset": "oscillator", "dim": 3},
        "bath": {"lorentzian": {"g": 1, "gamma": 1}}, "time": {"t1": 1, "n_points": 3}})"),
                                 scratch("bad2")),
                    ConfigError);
}
