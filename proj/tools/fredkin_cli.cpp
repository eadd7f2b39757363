// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line runner: populations, fidelity and sweep tasks plus the preset list.

#include "fredkin/experiment.hpp"
#include "fredkin/propagate.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

namespace {

struct Invocation {
    std::string config_file;
    std::string preset;
    std::map<std::string, std::string> overrides;
};

// Every config key becomes a --<key> flag on the subcommand.
void add_config_flags(CLI::App& cmd, Invocation& inv) {
    cmd.add_option("-c,--config", inv.config_file, "key = value configuration file")->check(CLI::ExistingFile);
    cmd.add_option("--preset", inv.preset, "experimental parameter set (see `presets`)");
    for (const auto& key : fredkin::config_keys()) {
        if (key == "task") continue;
        cmd.add_option("--" + key, inv.overrides[key], "override " + key);
    }
}

fredkin::ExperimentConfig build_config(const Invocation& inv, fredkin::Task task, const CLI::App& cmd) {
    fredkin::Settings settings;
    if (!inv.config_file.empty()) settings = fredkin::load_settings(inv.config_file);
    if (!inv.preset.empty()) settings.emplace_back("preset", inv.preset);
    for (const auto& key : fredkin::config_keys()) {
        if (key == "task") continue;
        if (cmd.count("--" + key) > 0) settings.emplace_back(key, inv.overrides.at(key));
    }
    settings.emplace_back("task", fredkin::to_string(task));
    return fredkin::resolve_config(settings);
}

void print_records(const fredkin::ExperimentConfig& config, const fredkin::ExperimentSummary& summary) {
    if (config.output.empty()) {
        std::cout << (config.format == "json" ? fredkin::fidelity_json(config, summary.records)
                                              : fredkin::fidelity_csv(config, summary.records));
    }
}

void print_populations(const fredkin::ExperimentSummary& summary) {
    std::cout << "initial";
    for (int q = 0; q < fredkin::kQubitDim; ++q) std::cout << ",p_q" << q << "(T)";
    std::cout << "\n";
    for (const auto& run : summary.populations) {
        std::cout << "q" << run.initial;
        const auto last = run.table.values.rows() - 1;
        for (Eigen::Index c = 0; c < run.table.values.cols(); ++c) {
            std::cout << "," << fredkin::format_number(run.table.values(last, c));
        }
        std::cout << "\n";
    }
}

int report(const std::string& kind, const std::string& field, const std::string& message) {
    std::cerr << "error: kind=" << kind;
    if (!field.empty()) std::cerr << " field=" << field;
    std::cerr << " message=\"" << message << "\"\n";
    return kind == "config" ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled three-cavity Fredkin gate simulator"};
    app.require_subcommand(1);

    Invocation populations, fidelity, sweep;
    auto* pop_cmd = app.add_subcommand("populations", "qubit-state populations for the eight initial states");
    auto* fid_cmd = app.add_subcommand("fidelity", "average gate fidelity of one configuration");
    auto* sweep_cmd = app.add_subcommand("sweep", "fidelity over a parameter grid");
    auto* presets_cmd = app.add_subcommand("presets", "list the experimental parameter presets");
    add_config_flags(*pop_cmd, populations);
    add_config_flags(*fid_cmd, fidelity);
    add_config_flags(*sweep_cmd, sweep);

    CLI11_PARSE(app, argc, argv);

    try {
        if (presets_cmd->parsed()) {
            std::cout << "name,kappa_over_g,gamma_over_g,description\n";
            for (const auto& p : fredkin::presets()) {
                std::cout << p.name << "," << fredkin::format_number(p.kappa_over_g) << ","
                          << fredkin::format_number(p.gamma_over_g) << ",\"" << p.description << "\"\n";
            }
            return 0;
        }
        if (pop_cmd->parsed()) {
            const auto config = build_config(populations, fredkin::Task::Populations, *pop_cmd);
            const auto summary = fredkin::run_experiment(config);
            print_populations(summary);
            for (const auto& f : summary.files) std::cerr << "wrote " << f.string() << "\n";
            return 0;
        }
        const bool single = fid_cmd->parsed();
        const auto config = single ? build_config(fidelity, fredkin::Task::Fidelity, *fid_cmd)
                                   : build_config(sweep, fredkin::Task::Sweep, *sweep_cmd);
        const auto summary = fredkin::run_experiment(config);
        print_records(config, summary);
        for (const auto& f : summary.files) std::cerr << "wrote " << f.string() << "\n";
        for (const auto& r : summary.records) {
            if (r.status != "ok") std::cerr << "warning: param=" << fredkin::format_number(r.param) << " status=\"" << r.status << "\"\n";
        }
        return 0;
    } catch (const fredkin::ConfigError& e) {
        return report("config", e.field(), e.what());
    } catch (const fredkin::IntegrationError& e) {
        return report("integration", "", e.what());
    } catch (const std::invalid_argument& e) {
        return report("config", "", e.what());
    } catch (const std::exception& e) {
        return report("runtime", "", e.what());
    }
}
