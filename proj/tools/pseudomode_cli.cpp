// pseudomode_cli.cpp — `pseudomode run <config.json> [--out DIR] [--seed N] [--quiet]`

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "pmode/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Non-Markovian Lorentzian-reservoir dynamics via a damped ancilla oscillator"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "Run one scenario config and write CSV results");
    run->add_option("config", config_path, "Scenario JSON file")->required();
    run->add_option("--out", out_dir, "Output directory (overrides the config's 'output')");
    run->add_option("--seed", seed, "Override the trajectory seed");
    run->add_flag("--quiet", quiet, "Suppress the summary on stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        pmode::ScenarioConfig cfg = pmode::load_scenario(config_path);
        if (seed) {
            cfg.trajectories.seed = *seed;
        }
        const std::filesystem::path dir = out_dir ? std::filesystem::path(*out_dir) : cfg.output;
        const pmode::ScenarioOutcome outcome = pmode::run_scenario(cfg, dir);
        for (const std::string& w : outcome.warnings) {
            std::cerr << "warning: " << w << '\n';
        }
        if (!quiet) {
            for (const std::string& line : outcome.summary) {
                std::cout << line << '\n';
            }
            for (const auto& f : outcome.files) {
                std::cout << "wrote " << f.string() << '\n';
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return pmode::exit_code_for(e);
    }
}
