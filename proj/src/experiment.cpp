// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

#include "fredkin/experiment.hpp"

#include "parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fredkin {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

long to_integer(std::string_view key, std::string_view text) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

bool to_bool(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(std::string(key), "expected true or false, got '" + std::string(text) + "'");
}

template <class Parse>
auto parse_field(std::string_view key, Parse&& parse) {
    try {
        return parse();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string(key), e.what());
    }
}

const std::vector<std::string>& sweep_parameters() {
    static const std::vector<std::string> names{"Omega_over_g", "kappa_over_g",  "gamma_over_g",
                                                "kappa_gamma_over_g", "J_over_g", "Delta_over_g"};
    return names;
}

void set_parameter(ExperimentConfig& config, const std::string& name, double value) {
    if (name == "Omega_over_g") config.Omega_over_g = value;
    else if (name == "kappa_over_g") config.kappa_over_g = value;
    else if (name == "gamma_over_g") config.gamma_over_g = value;
    else if (name == "kappa_gamma_over_g") config.kappa_over_g = config.gamma_over_g = value;
    else if (name == "J_over_g") config.J_over_g = value;
    else if (name == "Delta_over_g") config.Delta_over_g = value;
    else throw ConfigError("sweep_parameter", "unknown sweep parameter '" + name + "'");
}

std::vector<double> sweep_grid(const ExperimentConfig& config) {
    std::vector<double> grid;
    const int n = config.sweep_points;
    for (int k = 0; k < n; ++k) {
        grid.push_back(n == 1 ? config.sweep_start
                              : config.sweep_start + (config.sweep_stop - config.sweep_start) * k / (n - 1));
    }
    return grid;
}

std::string provenance(const ExperimentConfig& config) {
    std::string out;
    for (const auto& [key, value] : describe(config)) out += "# " + key + " = " + value + "\n";
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    file << content;
    if (!file) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::filesystem::path populations_path(const std::string& output, int initial) {
    std::filesystem::path base(output);
    if (base.extension() == ".csv") base.replace_extension();
    base += "_q" + std::to_string(initial) + ".csv";
    return base;
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

std::string to_string(Task task) {
    switch (task) {
        case Task::Populations: return "populations";
        case Task::Fidelity: return "fidelity";
        case Task::Sweep: return "sweep";
    }
    return "?";
}

Task parse_task(std::string_view text) {
    if (text == "populations") return Task::Populations;
    if (text == "fidelity") return Task::Fidelity;
    if (text == "sweep") return Task::Sweep;
    throw std::invalid_argument("unknown task '" + std::string(text) + "'");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "scheme",       "g",           "J_over_g",        "Delta_over_g", "Omega_over_g", "kappa_over_g",
        "gamma_over_g", "pulse",       "fock_cap",        "sector_cap",   "dt_over_invg", "samples",
        "task",         "sweep_parameter", "sweep_start", "sweep_stop",   "sweep_points", "output",
        "format",       "record_timing", "threads"};
    return keys;
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view raw) {
    const std::string_view v = trim(raw);
    if (key == "scheme") c.scheme = parse_field(key, [&] { return parse_scheme(v); });
    else if (key == "g") c.g = to_double(key, v);
    else if (key == "J_over_g") c.J_over_g = to_double(key, v);
    else if (key == "Delta_over_g") c.Delta_over_g = to_double(key, v);
    else if (key == "Omega_over_g") c.Omega_over_g = to_double(key, v);
    else if (key == "kappa_over_g") c.kappa_over_g = to_double(key, v);
    else if (key == "gamma_over_g") c.gamma_over_g = to_double(key, v);
    else if (key == "pulse") c.pulse = parse_field(key, [&] { return parse_pulse_kind(v); });
    else if (key == "fock_cap") c.fock_cap = static_cast<int>(to_integer(key, v));
    else if (key == "sector_cap") {
        if (v == "none") c.sector_cap.reset();
        else c.sector_cap = static_cast<int>(to_integer(key, v));
    }
    else if (key == "dt_over_invg") c.dt_over_invg = to_double(key, v);
    else if (key == "samples") {
        const long n = to_integer(key, v);
        if (n < 2) throw ConfigError("samples", "must be >= 2");
        c.samples = static_cast<std::size_t>(n);
    }
    else if (key == "task") c.task = parse_field(key, [&] { return parse_task(v); });
    else if (key == "sweep_parameter") c.sweep_parameter = std::string(v);
    else if (key == "sweep_start") c.sweep_start = to_double(key, v);
    else if (key == "sweep_stop") c.sweep_stop = to_double(key, v);
    else if (key == "sweep_points") c.sweep_points = static_cast<int>(to_integer(key, v));
    else if (key == "output") c.output = std::string(v);
    else if (key == "format") c.format = std::string(v);
    else if (key == "record_timing") c.record_timing = to_bool(key, v);
    else if (key == "threads") {
        const long n = to_integer(key, v);
        if (n < 0) throw ConfigError("threads", "must be >= 0");
        c.threads = static_cast<unsigned>(n);
    }
    else if (key == "preset") {
        const Preset& p = parse_field(key, [&]() -> const Preset& { return find_preset(v); });
        c.kappa_over_g = p.kappa_over_g;
        c.gamma_over_g = p.gamma_over_g;
    }
    else throw ConfigError(std::string(key), "unknown configuration key");
}

Settings parse_settings(std::string_view text) {
    Settings out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        }
        out.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
    }
    return out;
}

Settings load_settings(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ConfigError("config", "cannot read '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_settings(buffer.str());
}

ExperimentConfig resolve_config(const Settings& settings) {
    ExperimentConfig config;
    for (const auto& [key, value] : settings) {
        if (key == "scheme") config = scheme_defaults(parse_field(key, [&] { return parse_scheme(trim(value)); }));
    }
    for (const auto& [key, value] : settings) {
        if (key == "preset") apply_setting(config, key, value);
    }
    for (const auto& [key, value] : settings) {
        if (key != "preset") apply_setting(config, key, value);
    }
    return config;
}

ExperimentConfig parse_config(std::string_view text) { return resolve_config(parse_settings(text)); }

std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& c) {
    return {{"scheme", to_string(c.scheme)},
            {"g", format_number(c.g)},
            {"J_over_g", format_number(c.J_over_g)},
            {"Delta_over_g", format_number(c.Delta_over_g)},
            {"Omega_over_g", format_number(c.Omega_over_g)},
            {"kappa_over_g", format_number(c.kappa_over_g)},
            {"gamma_over_g", format_number(c.gamma_over_g)},
            {"pulse", to_string(c.pulse)},
            {"fock_cap", std::to_string(c.fock_cap)},
            {"sector_cap", c.sector_cap ? std::to_string(*c.sector_cap) : "none"},
            {"dt_over_invg", format_number(c.dt_over_invg)},
            {"samples", std::to_string(c.samples)},
            {"task", to_string(c.task)},
            {"sweep_parameter", c.sweep_parameter},
            {"sweep_start", format_number(c.sweep_start)},
            {"sweep_stop", format_number(c.sweep_stop)},
            {"sweep_points", std::to_string(c.sweep_points)},
            {"output", c.output},
            {"format", c.format},
            {"record_timing", c.record_timing ? "true" : "false"},
            {"threads", std::to_string(c.threads)}};
}

void validate(const ExperimentConfig& c) {
    if (!(c.g > 0.0)) throw ConfigError("g", "must be > 0");
    const std::pair<const char*, double> ratios[] = {{"J_over_g", c.J_over_g},         {"Delta_over_g", c.Delta_over_g},
                                                     {"Omega_over_g", c.Omega_over_g}, {"kappa_over_g", c.kappa_over_g},
                                                     {"gamma_over_g", c.gamma_over_g}};
    for (const auto& [name, value] : ratios) {
        if (!(value >= 0.0)) throw ConfigError(name, "must be >= 0");
    }
    if (!(c.Omega_over_g > 0.0)) throw ConfigError("Omega_over_g", "must be > 0");
    if (!(c.dt_over_invg > 0.0)) throw ConfigError("dt_over_invg", "must be > 0");
    if (c.fock_cap < 1) throw ConfigError("fock_cap", "must be >= 1");
    if (c.sector_cap && *c.sector_cap < 2) throw ConfigError("sector_cap", "must be >= 2 to hold every qubit state");
    if (c.samples < 2) throw ConfigError("samples", "must be >= 2");
    if (c.format != "csv" && c.format != "json") throw ConfigError("format", "must be csv or json");
    if (c.task == Task::Sweep) {
        const auto& names = sweep_parameters();
        if (std::find(names.begin(), names.end(), c.sweep_parameter) == names.end()) {
            throw ConfigError("sweep_parameter", "unknown sweep parameter '" + c.sweep_parameter + "'");
        }
        if (c.sweep_points < 1) throw ConfigError("sweep_points", "must be >= 1");
        if (c.sweep_start < 0.0) throw ConfigError("sweep_start", "must be >= 0");
        if (c.sweep_points > 1 && !(c.sweep_start < c.sweep_stop)) {
            throw ConfigError("sweep_stop", "sweep range must be ascending");
        }
        if (c.sweep_parameter == "Omega_over_g" && !(c.sweep_start > 0.0)) {
            throw ConfigError("sweep_start", "drive amplitude must be > 0");
        }
    }
}

ExperimentConfig scheme_defaults(Scheme scheme) {
    ExperimentConfig c;
    c.scheme = scheme;
    if (scheme == Scheme::Dispersive) {
        c.Delta_over_g = 1.0;
        c.Omega_over_g = 0.02;
        c.pulse = PulseKind::Constant;
    }
    return c;
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> list{
        {"toroidal", 3.5 / 750.0, 2.62 / 750.0,
         "toroidal microcavity: g = 2pi x 750 MHz, kappa = 2pi x 3.5 MHz, gamma = 2pi x 2.62 MHz"},
        {"nanocavity", 4e5 / 2.5e9, 1.6e7 / 2.5e9,
         "photonic-crystal nanocavity: g = 2.5e9 Hz, kappa = 4e5 Hz, gamma = 1.6e7 Hz"}};
    return list;
}

const Preset& find_preset(std::string_view name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p;
    }
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

double gate_time(const ExperimentConfig& c) {
    if (c.pulse == PulseKind::Constant && c.scheme == Scheme::Dispersive) {
        return dispersive_gate_time(c.Omega_over_g, 1.0);
    }
    return resonant_gate_time(c.Omega_over_g);
}

GateSetup to_gate_setup(const ExperimentConfig& c) {
    validate(c);
    GateSetup s;
    s.scheme = c.scheme;
    s.phys = {1.0, c.J_over_g, c.Delta_over_g};
    s.schedule = DriveSchedule(c.pulse, c.Omega_over_g, gate_time(c));
    s.decay = {c.kappa_over_g, c.gamma_over_g};
    s.fock_cap = c.fock_cap;
    s.sector_cap = c.sector_cap;
    s.evolve.dt = c.dt_over_invg;
    s.evolve.samples = c.samples;
    s.threads = c.threads;
    return s;
}

FidelityRecord run_fidelity(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const ChannelResult result = reconstruct_channel(to_gate_setup(config));
    const FidelityReport report = average_gate_fidelity(result.channel, fredkin_ideal());
    FidelityRecord rec;
    rec.scheme = config.scheme;
    rec.drive = config.Omega_over_g;
    rec.fidelity = report.fidelity;
    rec.leakage = result.leakage;
    rec.trace_drift = result.trace_drift;
    if (config.record_timing) {
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    if (report.imaginary_flag) rec.status = "imaginary residue " + format_number(report.imaginary_residue);
    return rec;
}

std::vector<FidelityRecord> run_sweep(const ExperimentConfig& config) {
    validate(config);
    const auto grid = sweep_grid(config);
    std::vector<FidelityRecord> rows(grid.size());
    const unsigned outer = detail::worker_count(config.threads, grid.size());
    detail::parallel_for(grid.size(), outer, [&](std::size_t k) {
        ExperimentConfig point = config;
        set_parameter(point, config.sweep_parameter, grid[k]);
        point.threads = outer > 1 ? 1 : config.threads;
        FidelityRecord& rec = rows[k];
        try {
            rec = run_fidelity(point);
        } catch (const std::exception& e) {
            rec.scheme = point.scheme;
            rec.drive = point.Omega_over_g;
            rec.fidelity = rec.leakage = rec.trace_drift = std::numeric_limits<double>::quiet_NaN();
            rec.status = std::string("error: ") + e.what();
        }
        rec.param = grid[k];
    });
    return rows;
}

std::vector<PopulationRun> run_populations(const ExperimentConfig& config) {
    const GateSetup setup = to_gate_setup(config);
    const HilbertSpace space = build_space(setup.fock_cap, setup.sector_cap);
    const TimeDependentHamiltonian h = gate_hamiltonian(space, setup.phys, setup.schedule);
    const double T = setup.schedule.gate_time();
    std::vector<BasisLabel> targets;
    for (int q = 0; q < kQubitDim; ++q) targets.push_back({qubit_atoms(q), {0, 0, 0}});

    std::vector<PopulationRun> runs(kQubitDim);
    detail::parallel_for(runs.size(), setup.threads, [&](std::size_t q) {
        const StateVector psi0 = qubit_embedding(space, static_cast<int>(q));
        const Trajectory traj = setup.decay.is_zero()
                                    ? evolve_state(h, psi0, T, setup.evolve)
                                    : evolve_density(h, setup.decay, psi0 * psi0.adjoint(), T, setup.evolve);
        runs[q].initial = static_cast<int>(q);
        runs[q].table = population_series(traj, targets);
        for (int k = 0; k < kQubitDim; ++k) runs[q].table.labels[static_cast<std::size_t>(k)] = "p_q" + std::to_string(k);
    });
    return runs;
}

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string fidelity_csv(const ExperimentConfig& config, const std::vector<FidelityRecord>& rows) {
    std::string out = provenance(config);
    out += "param,scheme,drive,fidelity,leakage,trace_drift,seconds,status\n";
    for (const auto& r : rows) {
        std::string status = r.status;
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        out += format_number(r.param) + "," + to_string(r.scheme) + "," + format_number(r.drive) + "," +
               format_number(r.fidelity) + "," + format_number(r.leakage) + "," + format_number(r.trace_drift) +
               "," + format_number(r.seconds) + "," + status + "\n";
    }
    return out;
}

std::string fidelity_json(const ExperimentConfig& config, const std::vector<FidelityRecord>& rows) {
    nlohmann::ordered_json doc;
    for (const auto& [key, value] : describe(config)) doc["config"][key] = value;
    doc["rows"] = nlohmann::ordered_json::array();
    auto number = [](double v) -> nlohmann::ordered_json {
        if (!std::isfinite(v)) return nullptr;
        return std::stod(format_number(v));
    };
    for (const auto& r : rows) {
        doc["rows"].push_back({{"param", number(r.param)},
                               {"scheme", to_string(r.scheme)},
                               {"drive", number(r.drive)},
                               {"fidelity", number(r.fidelity)},
                               {"leakage", number(r.leakage)},
                               {"trace_drift", number(r.trace_drift)},
                               {"seconds", number(r.seconds)},
                               {"status", r.status}});
    }
    return doc.dump(2) + "\n";
}

std::string populations_csv(const ExperimentConfig& config, const PopulationRun& run) {
    std::string out = provenance(config);
    out += "# initial = q" + std::to_string(run.initial) + "\n";
    out += "t_in_invg";
    for (const auto& label : run.table.labels) out += "," + label;
    out += "\n";
    for (std::size_t r = 0; r < run.table.times.size(); ++r) {
        out += format_number(run.table.times[r]);
        for (Eigen::Index c = 0; c < run.table.values.cols(); ++c) {
            out += "," + format_number(run.table.values(static_cast<Eigen::Index>(r), c));
        }
        out += "\n";
    }
    return out;
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
    validate(config);
    ExperimentSummary summary;
    summary.task = config.task;
    switch (config.task) {
        case Task::Populations:
            summary.populations = run_populations(config);
            break;
        case Task::Fidelity:
            summary.records.push_back(run_fidelity(config));
            summary.records.back().param = config.Omega_over_g;
            break;
        case Task::Sweep:
            summary.records = run_sweep(config);
            break;
    }
    if (config.output.empty()) return summary;

    if (config.task == Task::Populations) {
        for (const auto& run : summary.populations) {
            const auto path = populations_path(config.output, run.initial);
            write_file(path, populations_csv(config, run));
            summary.files.push_back(path);
        }
    } else {
        const std::filesystem::path path(config.output);
        write_file(path, config.format == "json" ? fidelity_json(config, summary.records)
                                                 : fidelity_csv(config, summary.records));
        summary.files.push_back(path);
    }
    return summary;
}

}  // namespace fredkin
