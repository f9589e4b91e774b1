// scenario.hpp — Declarative scenario configs and the runner behind the CLI

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pmode/baths.hpp"
#include "pmode/dynamics.hpp"
#include "pmode/oracles.hpp"

namespace pmode {

enum class ScenarioKind { Markovian, Pseudomode, Volterra, DiscreteBath, Trajectories, Compare };
enum class SystemPreset { TlsSigmaMinus, Oscillator };

struct SystemBlock {
    SystemPreset preset{SystemPreset::TlsSigmaMinus};
    std::size_t dim{2};
    double detuning{0.0};
    std::size_t initial_level{1}; // TLS: 1 = excited; oscillator: Fock number
};

struct NumericsBlock {
    IntegratorConfig integrator;
    std::optional<std::size_t> ancilla_dim{2}; // nullopt = "auto"
    double truncation_tol{1e-6};
    std::size_t n_modes{kDefaultBathModes};
    std::optional<double> window;  // half-width W; default 20 gamma
    std::optional<double> volterra_step; // default 0.001 / max(g, gamma)
    BathGrid bath_grid{BathGrid::EqualWeight};
};

struct TrajectoriesBlock {
    std::size_t n_traj{1000};
    std::uint64_t seed{0};
    double dt_max{0.05};
};

struct ScenarioConfig {
    ScenarioKind kind{ScenarioKind::Markovian};
    SystemBlock system;
    SpectralDensity bath{FlatSpectrum{}};
    TimeGrid time;
    NumericsBlock numerics;
    TrajectoriesBlock trajectories;
    std::vector<std::string> observables; // empty = preset default
    std::filesystem::path output{"."};
};

// Parses one JSON document. Unknown keys, missing required blocks and
// out-of-range values raise ConfigError.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

struct ScenarioOutcome {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> summary;
    std::vector<std::string> warnings;
};

// Writes CSV files into out_dir (created if needed).
ScenarioOutcome run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

// Process exit status for an exception escaping run_scenario: 2 config, 3 integration, 4 truncation.
int exit_code_for(const std::exception& e);

// Shortest text with 17 significant digits, '.' separator, independent of locale.
std::string format_number(double x);

} // namespace pmode
