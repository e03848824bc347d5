// Copyright 2026 The fermicheck Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Command line:
//   fermicheck list
//   fermicheck run <name> [--instance <instance>]
//   fermicheck run-all
// with --tol, --seed, --format text|json and --out <path> accepted anywhere.
// Exit status: 0 every check passed, 1 some check failed, 2 usage error.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fermicheck/scenarios.hpp"

namespace fermicheck {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

inline bool emit(const std::string &text, const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    if (!cfg.output_path) {
        out << text << "\n";
        return true;
    }
    std::ofstream file(*cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        err << "error: cannot open output file '" << *cfg.output_path << "'\n";
        return false;
    }
    file << text << "\n";
    return static_cast<bool>(file);
}

}  // namespace detail

/// Parses `args` (without the program name) and executes the command.
inline int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Machine checks for parity-superselected fermionic modes and GPT local tomography", "fermicheck"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string format = "text";
    std::string out_path;
    app.add_option("--tol", cfg.tolerance, "tolerance for pass/fail decisions")->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for sampled checks")->capture_default_str();
    app.add_option("--format", format, "report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    app.add_option("--out", out_path, "write the report to this file instead of stdout");

    auto *list_cmd = app.add_subcommand("list", "list registered scenarios");
    auto *run_cmd = app.add_subcommand("run", "run one scenario");
    std::string name;
    std::string instance;
    run_cmd->add_option("name", name, "scenario name")->required();
    run_cmd->add_option("--instance", instance, "instance suffix for parameterized families (e.g. gpt-tomography)");
    auto *run_all_cmd = app.add_subcommand("run-all", "run every scenario");

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.emplace_back("fermicheck");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &a : argv_storage) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return kExitUsage;
    }

    cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Text;
    if (!out_path.empty()) {
        cfg.output_path = out_path;
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (list_cmd->parsed()) {
        const auto ds = list_scenarios();
        std::string text;
        if (cfg.format == OutputFormat::Json) {
            text = descriptors_to_json(ds);
        } else {
            for (const auto &d : ds) {
                text += d.name + std::string(d.name.size() < 36 ? 36 - d.name.size() : 1, ' ') + d.description + "\n";
            }
            text.pop_back();
        }
        return detail::emit(text, cfg, out, err) ? kExitPass : kExitUsage;
    }

    if (run_cmd->parsed()) {
        const std::string full = instance.empty() ? name : name + "-" + instance;
        Report report;
        try {
            report = run(full, cfg);
        } catch (const UnknownScenarioError &e) {
            err << "error: " << e.what() << " (see 'fermicheck list')\n";
            return kExitUsage;
        }
        const std::string text = cfg.format == OutputFormat::Json ? to_json(report) : to_text(report);
        if (!detail::emit(text, cfg, out, err)) {
            return kExitUsage;
        }
        return report.passed() ? kExitPass : kExitCheckFailure;
    }

    if (run_all_cmd->parsed()) {
        const AggregateReport agg = run_all(cfg);
        const std::string text = cfg.format == OutputFormat::Json ? to_json(agg) : to_text(agg);
        if (!detail::emit(text, cfg, out, err)) {
            return kExitUsage;
        }
        return agg.passed() ? kExitPass : kExitCheckFailure;
    }
    return kExitUsage;
}

}  // namespace fermicheck
