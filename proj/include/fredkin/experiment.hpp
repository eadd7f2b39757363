// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file experiment.hpp
 * @brief Experiment configuration, single runs, parameter sweeps and their
 *        CSV / JSON serialisation.
 *
 * All rates are ratios to g, and g = 1 internally. A configuration is a flat
 * "key = value" text file; every key can also be overridden individually.
 */

#pragma once

#include "fredkin/channel.hpp"
#include "fredkin/pulses.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fredkin {

enum class Task { Populations, Fidelity, Sweep };

std::string to_string(Task task);
Task parse_task(std::string_view text);

/// Invalid configuration; field() names the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct ExperimentConfig {
    Scheme scheme = Scheme::Resonant;
    double g = 1.0;
    double J_over_g = 1.0;
    double Delta_over_g = 0.0;
    double Omega_over_g = 0.05;
    double kappa_over_g = 0.0;
    double gamma_over_g = 0.0;
    PulseKind pulse = PulseKind::Adiabatic;
    int fock_cap = 2;
    std::optional<int> sector_cap = 2;
    double dt_over_invg = 0.01;
    std::size_t samples = 500;
    Task task = Task::Fidelity;
    /// Omega_over_g, kappa_over_g, gamma_over_g, kappa_gamma_over_g (both rates), J_over_g or Delta_over_g.
    std::string sweep_parameter = "Omega_over_g";
    double sweep_start = 0.02;
    double sweep_stop = 0.1;
    int sweep_points = 5;
    std::string output;            ///< file path (populations: path prefix); empty writes nothing
    std::string format = "csv";    ///< csv or json
    bool record_timing = false;    ///< wall-clock column; off keeps outputs byte-reproducible
    unsigned threads = 0;          ///< 0: hardware concurrency
};

/// Keys accepted by apply_setting, in canonical order.
const std::vector<std::string>& config_keys();

/// Sets one key from text. Throws ConfigError for unknown keys or bad values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Splits "key = value" lines; '#' starts a comment. Throws ConfigError on malformed lines.
Settings parse_settings(std::string_view text);
Settings load_settings(const std::filesystem::path& path);

/**
 * Builds a configuration from ordered settings: the last `scheme` selects
 * scheme_defaults(), the last `preset` then sets kappa and gamma, and finally
 * every setting is applied in order, so later entries win.
 */
ExperimentConfig resolve_config(const Settings& settings);
ExperimentConfig parse_config(std::string_view text);

/// Resolved configuration as "key = value" lines, one per entry of config_keys().
std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& config);

/// Throws ConfigError when a ratio is negative, the sweep range is not ascending, etc.
void validate(const ExperimentConfig& config);

/// Scheme defaults: resonant (J = g, Delta = 0, adiabatic) or dispersive (Delta = J = g, constant).
ExperimentConfig scheme_defaults(Scheme scheme);

struct Preset {
    std::string name;
    double kappa_over_g;
    double gamma_over_g;
    std::string description;
};

/// Toroidal-microcavity and photonic-crystal nanocavity parameter sets.
const std::vector<Preset>& presets();
const Preset& find_preset(std::string_view name);

/// Gate time implied by the configuration (adiabatic: sqrt3 pi/(sqrt2 Omega); constant
/// dispersive: g pi / Omega^2; constant resonant: same area as the adiabatic pulse).
double gate_time(const ExperimentConfig& config);
GateSetup to_gate_setup(const ExperimentConfig& config);

struct FidelityRecord {
    double param = 0.0;
    Scheme scheme = Scheme::Resonant;
    double drive = 0.0;  ///< Omega / g
    double fidelity = 0.0;
    double leakage = 0.0;
    double trace_drift = 0.0;
    double seconds = 0.0;
    std::string status = "ok";
};

FidelityRecord run_fidelity(const ExperimentConfig& config);

/// Evenly spaced grid from sweep_start to sweep_stop; failing points are recorded in-row.
std::vector<FidelityRecord> run_sweep(const ExperimentConfig& config);

/// Qubit-state populations for each of the eight qubit initial states.
struct PopulationRun {
    int initial = 0;
    PopulationTable table;  ///< columns p_q0..p_q7 (qubit states with vacuum cavities)
};
std::vector<PopulationRun> run_populations(const ExperimentConfig& config);

/// "%.12g" formatting used by every writer.
std::string format_number(double value);

std::string fidelity_csv(const ExperimentConfig& config, const std::vector<FidelityRecord>& rows);
std::string fidelity_json(const ExperimentConfig& config, const std::vector<FidelityRecord>& rows);
std::string populations_csv(const ExperimentConfig& config, const PopulationRun& run);

struct ExperimentSummary {
    Task task = Task::Fidelity;
    std::vector<FidelityRecord> records;
    std::vector<PopulationRun> populations;
    std::vector<std::filesystem::path> files;
};

/// Validates, runs the configured task and writes its outputs when `output` is set.
ExperimentSummary run_experiment(const ExperimentConfig& config);

}  // namespace fredkin
