// scenario.cpp — JSON scenario parsing, dispatch, and CSV output

#include "pmode/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "pmode/errors.hpp"
#include "pmode/pseudomode.hpp"
#include "pmode/trajectories.hpp"

namespace pmode {

namespace {

using nlohmann::json;

void require_known_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
        throw ConfigError(where + ": expected a JSON object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (allowed.count(key) == 0) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

double get_number(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) {
        throw ConfigError(where + ": missing required key '" + key + "'");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(where + "." + key + ": expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError(where + "." + key + ": must be finite");
    }
    return x;
}

double get_number_or(const json& obj, const std::string& where, const std::string& key, double fallback) {
    return obj.contains(key) ? get_number(obj, where, key) : fallback;
}

std::size_t get_count(const json& obj, const std::string& where, const std::string& key, std::size_t fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(where + "." + key + ": expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

void require_positive(double x, const std::string& what) {
    if (!(x > 0.0)) {
        throw ConfigError(what + ": must be positive");
    }
}

ScenarioKind parse_kind(const std::string& s) {
    if (s == "markovian") return ScenarioKind::Markovian;
    if (s == "pseudomode") return ScenarioKind::Pseudomode;
    if (s == "volterra") return ScenarioKind::Volterra;
    if (s == "discrete_bath") return ScenarioKind::DiscreteBath;
    if (s == "trajectories") return ScenarioKind::Trajectories;
    if (s == "compare") return ScenarioKind::Compare;
    throw ConfigError("scenario: unknown scenario kind '" + s + "'");
}

SystemBlock parse_system(const json& j) {
    require_known_keys(j, "system", {"preset", "dim", "detuning", "initial_level"});
    SystemBlock s;
    if (!j.contains("preset") || !j.at("preset").is_string()) {
        throw ConfigError("system: missing string key 'preset'");
    }
    const std::string preset = j.at("preset").get<std::string>();
    if (preset == "tls_sigma_minus") {
        s.preset = SystemPreset::TlsSigmaMinus;
        s.dim = get_count(j, "system", "dim", 2);
        if (s.dim != 2) {
            throw ConfigError("system.dim: the two-level preset has dimension 2");
        }
    } else if (preset == "oscillator") {
        s.preset = SystemPreset::Oscillator;
        if (!j.contains("dim")) {
            throw ConfigError("system: the oscillator preset needs 'dim'");
        }
        s.dim = get_count(j, "system", "dim", 0);
        if (s.dim < 2) {
            throw ConfigError("system.dim: oscillator truncation must be at least 2");
        }
    } else {
        throw ConfigError("system.preset: unknown preset '" + preset + "'");
    }
    s.detuning = get_number_or(j, "system", "detuning", 0.0);
    s.initial_level = get_count(j, "system", "initial_level", 1);
    if (s.initial_level >= s.dim) {
        throw ConfigError("system.initial_level: outside the system space");
    }
    return s;
}

SpectralDensity parse_bath(const json& j) {
    require_known_keys(j, "bath", {"flat", "lorentzian"});
    if (j.size() != 1) {
        throw ConfigError("bath: exactly one of 'flat' or 'lorentzian' is required");
    }
    if (j.contains("flat")) {
        const json& f = j.at("flat");
        require_known_keys(f, "bath.flat", {"f2"});
        const double f2 = get_number(f, "bath.flat", "f2");
        if (f2 < 0.0) {
            throw ConfigError("bath.flat.f2: must be non-negative");
        }
        return FlatSpectrum{f2};
    }
    const json& l = j.at("lorentzian");
    require_known_keys(l, "bath.lorentzian", {"g", "omega0", "gamma"});
    LorentzianSpectrum sd{get_number(l, "bath.lorentzian", "g"), get_number_or(l, "bath.lorentzian", "omega0", 0.0),
                          get_number(l, "bath.lorentzian", "gamma")};
    if (sd.g < 0.0) {
        throw ConfigError("bath.lorentzian.g: must be non-negative");
    }
    require_positive(sd.gamma, "bath.lorentzian.gamma");
    return sd;
}

TimeGrid parse_time(const json& j) {
    require_known_keys(j, "time", {"t0", "t1", "n_points"});
    TimeGrid g{get_number_or(j, "time", "t0", 0.0), get_number(j, "time", "t1"), get_count(j, "time", "n_points", 0)};
    if (g.n_points < 2) {
        throw ConfigError("time.n_points: need at least 2 output instants");
    }
    if (!(g.t1 > g.t0)) {
        throw ConfigError("time: t1 must exceed t0");
    }
    return g;
}

NumericsBlock parse_numerics(const json& j) {
    require_known_keys(j, "numerics", {"rel_tol", "abs_tol", "max_step", "initial_step", "d_A", "truncation_tol",
                                       "n_modes", "W", "h", "bath_grid"});
    NumericsBlock n;
    IntegratorConfig& ic = n.integrator;
    ic.rel_tol = get_number_or(j, "numerics", "rel_tol", ic.rel_tol);
    ic.abs_tol = get_number_or(j, "numerics", "abs_tol", ic.abs_tol);
    ic.max_step = get_number_or(j, "numerics", "max_step", ic.max_step);
    ic.initial_step = get_number_or(j, "numerics", "initial_step", ic.initial_step);
    if (!(ic.rel_tol > 0.0 && ic.rel_tol < 1.0) || !(ic.abs_tol > 0.0 && ic.abs_tol < 1.0)) {
        throw ConfigError("numerics: tolerances must lie in (0, 1)");
    }
    require_positive(ic.max_step, "numerics.max_step");
    require_positive(ic.initial_step, "numerics.initial_step");
    if (j.contains("d_A")) {
        const json& d = j.at("d_A");
        if (d.is_string() && d.get<std::string>() == "auto") {
            n.ancilla_dim.reset();
        } else if (d.is_number_integer() && d.get<long long>() >= 2) {
            n.ancilla_dim = d.get<std::size_t>();
        } else {
            throw ConfigError("numerics.d_A: expected an integer >= 2 or \"auto\"");
        }
    }
    n.truncation_tol = get_number_or(j, "numerics", "truncation_tol", n.truncation_tol);
    require_positive(n.truncation_tol, "numerics.truncation_tol");
    n.n_modes = get_count(j, "numerics", "n_modes", n.n_modes);
    if (j.contains("W")) {
        n.window = get_number(j, "numerics", "W");
        require_positive(*n.window, "numerics.W");
    }
    if (j.contains("h")) {
        n.volterra_step = get_number(j, "numerics", "h");
        require_positive(*n.volterra_step, "numerics.h");
    }
    if (j.contains("bath_grid")) {
        const json& b = j.at("bath_grid");
        const std::string s = b.is_string() ? b.get<std::string>() : std::string{};
        if (s == "uniform") {
            n.bath_grid = BathGrid::Uniform;
        } else if (s == "equal_weight") {
            n.bath_grid = BathGrid::EqualWeight;
        } else {
            throw ConfigError("numerics.bath_grid: expected \"uniform\" or \"equal_weight\"");
        }
    }
    return n;
}

TrajectoriesBlock parse_trajectories(const json& j) {
    require_known_keys(j, "trajectories", {"n_traj", "seed", "dt_max"});
    TrajectoriesBlock t;
    t.n_traj = get_count(j, "trajectories", "n_traj", t.n_traj);
    if (t.n_traj < 1) {
        throw ConfigError("trajectories.n_traj: must be at least 1");
    }
    t.seed = get_count(j, "trajectories", "seed", 0);
    t.dt_max = get_number_or(j, "trajectories", "dt_max", t.dt_max);
    require_positive(t.dt_max, "trajectories.dt_max");
    return t;
}

// ---- observables ----

struct Observable {
    std::string name;
    Operator op; // on the system space
    bool complex_valued{false};
};

std::vector<Observable> resolve_observables(const ScenarioConfig& cfg, const SystemSpec& sys) {
    std::vector<std::string> names = cfg.observables;
    const bool tls = cfg.system.preset == SystemPreset::TlsSigmaMinus;
    if (names.empty()) {
        names.push_back(tls ? "P_e" : "n");
    }
    std::vector<Observable> out;
    for (const std::string& name : names) {
        if (name == "P_e" || name == "P_g") {
            if (!tls) {
                throw ConfigError("observables: '" + name + "' is defined for the two-level preset only");
            }
            out.push_back({name, projector(2, name == "P_e" ? 1 : 0), false});
        } else if (name == "n") {
            out.push_back({name, sys.coupling.adjoint() * sys.coupling, false});
        } else if (name == "V") {
            out.push_back({name, sys.coupling, true});
        } else {
            throw ConfigError("observables: unknown observable '" + name + "' (expected P_e, P_g, n or V)");
        }
    }
    return out;
}

// ---- CSV ----

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) {
            throw ConfigError("cannot open output file " + path.string());
        }
    }

    void header(const std::vector<std::string>& cols) { row_text(cols); }

    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) {
            cells.push_back(format_number(v));
        }
        row_text(cells);
    }

    const std::filesystem::path& path() const { return path_; }

private:
    void row_text(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                out_ << ',';
            }
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::filesystem::path path_;
    std::ofstream out_;
};

std::vector<std::string> observable_columns(const std::vector<Observable>& obs) {
    std::vector<std::string> cols;
    for (const Observable& o : obs) {
        if (o.complex_valued) {
            cols.push_back(o.name + "_re");
            cols.push_back(o.name + "_im");
        } else {
            cols.push_back(o.name);
        }
    }
    return cols;
}

void append_values(std::vector<double>& row, const std::vector<Observable>& obs, const Operator& rho_s) {
    for (const Observable& o : obs) {
        const Complex v = expectation(o.op, rho_s);
        row.push_back(v.real());
        if (o.complex_valued) {
            row.push_back(v.imag());
        }
    }
}

std::filesystem::path write_state_curve(const std::filesystem::path& path, const std::vector<Observable>& obs,
                                        const std::vector<double>& times, const std::vector<Operator>& states) {
    CsvWriter csv(path);
    std::vector<std::string> cols{"t"};
    for (const std::string& c : observable_columns(obs)) {
        cols.push_back(c);
    }
    csv.header(cols);
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::vector<double> row{times[k]};
        append_values(row, obs, states[k]);
        csv.row(row);
    }
    return csv.path();
}

// ---- dispatch helpers ----

SystemSpec make_system(const SystemBlock& s) {
    return s.preset == SystemPreset::TlsSigmaMinus ? two_level_system(s.detuning)
                                                   : oscillator_system(s.dim, s.detuning);
}

const LorentzianSpectrum& require_lorentzian(const ScenarioConfig& cfg, const char* kind) {
    const auto* l = std::get_if<LorentzianSpectrum>(&cfg.bath);
    if (l == nullptr) {
        throw ConfigError(std::string("scenario '") + kind + "' needs a lorentzian bath");
    }
    return *l;
}

void require_excited_tls(const ScenarioConfig& cfg, const char* kind) {
    if (cfg.system.preset != SystemPreset::TlsSigmaMinus || cfg.system.initial_level != 1) {
        throw ConfigError(std::string("scenario '") + kind +
                          "' supports only the two-level preset starting in the excited state");
    }
}

std::vector<Operator> amplitude_states(const AmplitudeTrajectory& tr) {
    std::vector<Operator> states;
    for (const Complex& c : tr.amplitudes) {
        Operator rho = Operator::Zero(2, 2);
        rho(1, 1) = std::norm(c);
        rho(0, 0) = 1.0 - std::norm(c);
        states.push_back(rho);
    }
    return states;
}

double volterra_step(const ScenarioConfig& cfg, const LorentzianSpectrum& bath) {
    return cfg.numerics.volterra_step.value_or(0.001 / std::max(bath.g, bath.gamma));
}

AmplitudeTrajectory run_volterra(const ScenarioConfig& cfg, const LorentzianSpectrum& bath) {
    if (cfg.system.detuning != 0.0) {
        throw ConfigError("scenario 'volterra': only the resonant case (detuning 0) is supported");
    }
    return volterra_amplitude(bath, cfg.time, volterra_step(cfg, bath));
}

DiscreteBathRun run_discrete(const ScenarioConfig& cfg, const LorentzianSpectrum& bath, ScenarioOutcome& outcome) {
    const double window = cfg.numerics.window.value_or(kDefaultWindowWidths * bath.gamma);
    DiscreteBathRun run = discrete_bath_evolve(make_system(cfg.system), bath, cfg.numerics.n_modes, window, cfg.time,
                                               cfg.numerics.bath_grid);
    if (run.recurrence_warning) {
        outcome.warnings.push_back("discrete bath: t1 exceeds half the bath recurrence time; echoes expected");
    }
    return run;
}

std::size_t resolve_ancilla_dim(const ScenarioConfig& cfg, const EmbeddingSpec& spec, const DensityMatrix& rho_s0,
                                ScenarioOutcome& outcome) {
    if (cfg.numerics.ancilla_dim) {
        return *cfg.numerics.ancilla_dim;
    }
    const TruncationChoice choice =
        choose_truncation(spec, rho_s0, cfg.time, cfg.numerics.integrator, cfg.numerics.truncation_tol);
    outcome.summary.push_back("auto truncation: d_A = " + std::to_string(choice.ancilla_dim));
    return choice.ancilla_dim;
}

LorentzianRun run_pseudomode(const ScenarioConfig& cfg, const LorentzianSpectrum& bath, ScenarioOutcome& outcome) {
    EmbeddingSpec spec{make_system(cfg.system), bath, 2};
    const DensityMatrix rho_s0 = DensityMatrix::basis(cfg.system.dim, cfg.system.initial_level);
    spec.ancilla_dim = resolve_ancilla_dim(cfg, spec, rho_s0, outcome);
    LorentzianRun run = simulate_lorentzian(spec, rho_s0, cfg.time, cfg.numerics.integrator);
    if (run.truncation_warning) {
        std::ostringstream msg;
        msg << "pseudomode: weight coupled past the top ancilla level reached " << run.max_top_population
            << " (d_A = " << spec.ancilla_dim << ")";
        outcome.warnings.push_back(msg.str());
    }
    return run;
}

std::vector<Operator> ops_of(const std::vector<DensityMatrix>& states) {
    std::vector<Operator> out;
    out.reserve(states.size());
    for (const DensityMatrix& s : states) {
        out.push_back(s.op());
    }
    return out;
}

void run_trajectories(const ScenarioConfig& cfg, const std::filesystem::path& dir, ScenarioOutcome& outcome) {
    const SystemSpec sys = make_system(cfg.system);
    const std::vector<Observable> obs = resolve_observables(cfg, sys);
    const std::size_t ds = cfg.system.dim;

    std::optional<LindbladModel> model;
    std::size_t da = 1;
    if (const auto* flat = std::get_if<FlatSpectrum>(&cfg.bath)) {
        model.emplace(sys.hamiltonian, std::vector<JumpChannel>{{flat->f2, sys.coupling}});
    } else {
        const auto& bath = std::get<LorentzianSpectrum>(cfg.bath);
        EmbeddingSpec spec{sys, bath, 2};
        const DensityMatrix rho_s0 = DensityMatrix::basis(ds, cfg.system.initial_level);
        spec.ancilla_dim = resolve_ancilla_dim(cfg, spec, rho_s0, outcome);
        da = spec.ancilla_dim;
        model.emplace(build_embedding(spec, rho_s0).model);
    }

    StateVector psi0 = StateVector::Zero(static_cast<Eigen::Index>(ds * da));
    psi0(static_cast<Eigen::Index>(cfg.system.initial_level * da)) = 1.0;

    std::vector<Operator> lifted;
    for (const Observable& o : obs) {
        lifted.push_back(da == 1 ? o.op : kron(o.op, identity(da)));
    }
    TrajectoryConfig tcfg;
    tcfg.n_traj = cfg.trajectories.n_traj;
    tcfg.seed = cfg.trajectories.seed;
    tcfg.dt_max = cfg.trajectories.dt_max;
    tcfg.grid = cfg.time;
    tcfg.integrator = cfg.numerics.integrator;
    const EnsembleStats stats = ensemble_average(*model, psi0, tcfg, lifted);

    CsvWriter csv(dir / "trajectories.csv");
    std::vector<std::string> cols{"t"};
    for (const Observable& o : obs) {
        if (o.complex_valued) {
            cols.push_back(o.name + "_re");
            cols.push_back(o.name + "_im");
        } else {
            cols.push_back(o.name);
        }
        cols.push_back(o.name + "_stderr");
    }
    csv.header(cols);
    for (std::size_t k = 0; k < stats.times.size(); ++k) {
        std::vector<double> row{stats.times[k]};
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const Complex m = stats.observable_means[i][k];
            row.push_back(m.real());
            if (obs[i].complex_valued) {
                row.push_back(m.imag());
            }
            row.push_back(stats.observable_stderr ? (*stats.observable_stderr)[i][k] : std::nan(""));
        }
        csv.row(row);
    }
    outcome.files.push_back(csv.path());

    CsvWriter jumps(dir / "jump_histogram.csv");
    jumps.header({"jumps", "count"});
    for (std::size_t j = 0; j < stats.jump_histogram.size(); ++j) {
        jumps.row({static_cast<double>(j), static_cast<double>(stats.jump_histogram[j])});
    }
    outcome.files.push_back(jumps.path());
    outcome.summary.push_back("trajectories: " + std::to_string(stats.n_traj) + " runs");
}

void run_compare(const ScenarioConfig& cfg, const std::filesystem::path& dir, ScenarioOutcome& outcome) {
    const LorentzianSpectrum& bath = require_lorentzian(cfg, "compare");
    require_excited_tls(cfg, "compare");
    const LorentzianRun pm = run_pseudomode(cfg, bath, outcome);
    const AmplitudeTrajectory volt = run_volterra(cfg, bath);
    const DiscreteBathRun disc = run_discrete(cfg, bath, outcome);

    const std::vector<double> p_volt = volt.populations();
    const std::vector<double> p_disc = disc.trajectory.populations();
    const Operator pe = projector(2, 1);

    CsvWriter csv(dir / "compare.csv");
    csv.header({"t", "P_e_pseudomode", "P_e_volterra", "P_e_discrete_bath", "absdiff_pseudomode_volterra",
                "absdiff_pseudomode_discrete_bath", "absdiff_volterra_discrete_bath"});
    double max_pv = 0.0, max_pd = 0.0, max_vd = 0.0;
    for (std::size_t k = 0; k < pm.times.size(); ++k) {
        const double p = expectation(pe, pm.system_states[k]).real();
        const double dpv = std::abs(p - p_volt[k]);
        const double dpd = std::abs(p - p_disc[k]);
        const double dvd = std::abs(p_volt[k] - p_disc[k]);
        max_pv = std::max(max_pv, dpv);
        max_pd = std::max(max_pd, dpd);
        max_vd = std::max(max_vd, dvd);
        csv.row({pm.times[k], p, p_volt[k], p_disc[k], dpv, dpd, dvd});
    }
    outcome.files.push_back(csv.path());

    const std::vector<Observable> obs{{"P_e", pe, false}};
    outcome.files.push_back(write_state_curve(dir / "pseudomode.csv", obs, pm.times, ops_of(pm.system_states)));
    outcome.files.push_back(write_state_curve(dir / "volterra.csv", obs, volt.times, amplitude_states(volt)));
    outcome.files.push_back(
        write_state_curve(dir / "discrete_bath.csv", obs, disc.trajectory.times, amplitude_states(disc.trajectory)));

    outcome.summary.push_back("max |pseudomode - volterra| = " + format_number(max_pv));
    outcome.summary.push_back("max |pseudomode - discrete_bath| = " + format_number(max_pd));
    outcome.summary.push_back("max |volterra - discrete_bath| = " + format_number(max_vd));
}

} // namespace

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

ScenarioConfig parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    require_known_keys(doc, "config",
                       {"scenario", "system", "bath", "time", "numerics", "trajectories", "observables", "output"});
    for (const char* key : {"scenario", "system", "bath", "time"}) {
        if (!doc.contains(key)) {
            throw ConfigError(std::string("config: missing required block '") + key + "'");
        }
    }
    if (!doc.at("scenario").is_string()) {
        throw ConfigError("scenario: expected a string");
    }
    ScenarioConfig cfg;
    cfg.kind = parse_kind(doc.at("scenario").get<std::string>());
    cfg.system = parse_system(doc.at("system"));
    cfg.bath = parse_bath(doc.at("bath"));
    cfg.time = parse_time(doc.at("time"));
    if (doc.contains("numerics")) {
        cfg.numerics = parse_numerics(doc.at("numerics"));
    }
    if (doc.contains("trajectories")) {
        cfg.trajectories = parse_trajectories(doc.at("trajectories"));
    }
    if (doc.contains("observables")) {
        const json& o = doc.at("observables");
        if (!o.is_array()) {
            throw ConfigError("observables: expected an array of names");
        }
        for (const json& name : o) {
            if (!name.is_string()) {
                throw ConfigError("observables: expected an array of names");
            }
            cfg.observables.push_back(name.get<std::string>());
        }
    }
    if (doc.contains("output")) {
        if (!doc.at("output").is_string()) {
            throw ConfigError("output: expected a directory path string");
        }
        cfg.output = doc.at("output").get<std::string>();
    }
    // Resolve observables once so that typos fail at parse time.
    resolve_observables(cfg, make_system(cfg.system));
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

ScenarioOutcome run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory " + out_dir.string() + ": " + ec.message());
    }

    ScenarioOutcome outcome;
    const SystemSpec sys = make_system(cfg.system);
    switch (cfg.kind) {
    case ScenarioKind::Markovian: {
        const double omega_s =
            std::holds_alternative<LorentzianSpectrum>(cfg.bath)
                ? std::get<LorentzianSpectrum>(cfg.bath).omega0 + cfg.system.detuning
                : 0.0;
        const double rate = markovian_rate(cfg.bath, omega_s);
        const LindbladModel model(sys.hamiltonian, {{rate, sys.coupling}});
        const DensityMatrix rho0 = DensityMatrix::basis(cfg.system.dim, cfg.system.initial_level);
        const std::vector<DensityMatrix> states = evolve(model, rho0, cfg.time, cfg.numerics.integrator);
        outcome.files.push_back(write_state_curve(out_dir / "markovian.csv", resolve_observables(cfg, sys),
                                                  cfg.time.instants(), ops_of(states)));
        outcome.summary.push_back("markovian: rate = " + format_number(rate));
        break;
    }
    case ScenarioKind::Pseudomode: {
        const LorentzianSpectrum& bath = require_lorentzian(cfg, "pseudomode");
        const LorentzianRun run = run_pseudomode(cfg, bath, outcome);
        outcome.files.push_back(write_state_curve(out_dir / "pseudomode.csv", resolve_observables(cfg, sys), run.times,
                                                  ops_of(run.system_states)));
        break;
    }
    case ScenarioKind::Volterra: {
        const LorentzianSpectrum& bath = require_lorentzian(cfg, "volterra");
        require_excited_tls(cfg, "volterra");
        const AmplitudeTrajectory tr = run_volterra(cfg, bath);
        outcome.files.push_back(write_state_curve(out_dir / "volterra.csv", resolve_observables(cfg, sys), tr.times,
                                                  amplitude_states(tr)));
        break;
    }
    case ScenarioKind::DiscreteBath: {
        const LorentzianSpectrum& bath = require_lorentzian(cfg, "discrete_bath");
        require_excited_tls(cfg, "discrete_bath");
        const DiscreteBathRun run = run_discrete(cfg, bath, outcome);
        outcome.files.push_back(write_state_curve(out_dir / "discrete_bath.csv", resolve_observables(cfg, sys),
                                                  run.trajectory.times, amplitude_states(run.trajectory)));
        outcome.summary.push_back("discrete bath: max norm error = " + format_number(run.max_norm_error));
        break;
    }
    case ScenarioKind::Trajectories:
        run_trajectories(cfg, out_dir, outcome);
        break;
    case ScenarioKind::Compare:
        run_compare(cfg, out_dir, outcome);
        break;
    }
    return outcome;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const TruncationError*>(&e) != nullptr) {
        return 4;
    }
    if (dynamic_cast<const IntegrationError*>(&e) != nullptr) {
        return 3;
    }
    if (dynamic_cast<const ConfigError*>(&e) != nullptr || dynamic_cast<const PreconditionError*>(&e) != nullptr ||
        dynamic_cast<const DimensionError*>(&e) != nullptr ||
        dynamic_cast<const UnsupportedModelError*>(&e) != nullptr) {
        return 2;
    }
    return 1;
}

} // namespace pmode
