// SPDX-License-Identifier: Apache-2.0
//
// emdof — electromagnetic degrees-of-freedom analysis for free-space MIMO
// Copyright (C) 2026 the emdof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Command-line front end.
//
//   emdof figure <fig2|fig3a|fig3b|fig4|fig5>   run a figure preset
//   emdof sweep    --config cfg.json            run a sweep config
//   emdof compute  --config cfg.json            single-point computation
//   emdof validate --config cfg.json            check + print resolved config
//
// Exit codes: 0 success, 2 validation/usage error, 3 runtime error,
// 4 I/O error.

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <emdof/emdof.hpp>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_runtime = 3;
constexpr int exit_io = 4;

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
    double threshold = -1.0; // <0 = not given
    std::string snr_range;   // "a:b:step"
    std::vector<std::string> overrides;
    bool verbose = false;
};

void add_output_options(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--format", opt.format, "Data table format: csv or json")->capture_default_str();
    cmd->add_option("--threshold", opt.threshold, "DOF threshold epsilon in (0,1)");
    cmd->add_option("--snr-db", opt.snr_range, "SNR sweep as start:stop:step in dB");
    cmd->add_option("--override", opt.overrides,
                    "Config override as dotted.path=value (repeatable)");
    cmd->add_flag("-v,--verbose", opt.verbose, "Progress output on stderr");
}

nlohmann::json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw emdof::io_error("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw emdof::config_error("", "'" + path + "' is not valid JSON: " + std::string(e.what()));
    }
    return doc;
}

void apply_flag_overrides(nlohmann::json& doc, const CommonOptions& opt) {
    if (opt.threshold >= 0.0)
        emdof::apply_override(doc, "analysis.dof_threshold", std::to_string(opt.threshold));
    if (!opt.snr_range.empty()) {
        double a = 0, b = 0, s = 1;
        if (std::sscanf(opt.snr_range.c_str(), "%lf:%lf:%lf", &a, &b, &s) != 3)
            throw emdof::config_error("sweep.snr_db", "--snr-db expects start:stop:step");
        doc["sweep"]["snr_db"] = {{"start", a}, {"stop", b}, {"step", s}};
    }
    for (const std::string& kv : opt.overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw emdof::config_error("", "--override expects dotted.path=value, got '" + kv + "'");
        emdof::apply_override(doc, kv.substr(0, eq), kv.substr(eq + 1));
    }
}

emdof::ExperimentConfig resolve(nlohmann::json doc, const CommonOptions& opt,
                                std::vector<std::string>& overridden) {
    apply_flag_overrides(doc, opt);
    return emdof::parse_config_json(doc, &overridden);
}

void write_and_report(const emdof::SweepResult& result, const CommonOptions& opt) {
    const auto format = emdof::output_format_from_string(opt.format);
    const auto files = emdof::write_results(result, format, opt.out_dir);
    std::cout << files.data.string() << "\n" << files.metadata.string() << "\n";
}

int run_result(const std::function<emdof::SweepResult()>& make_result, const CommonOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    emdof::SweepResult result = make_result();
    if (opt.verbose) {
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cerr << "computed " << result.rows.size() << " rows in " << sec << " s\n";
    }
    write_and_report(result, opt);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"emdof: EDOF/DOF/capacity analysis of free-space MIMO systems"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string figure_tag;
    std::string dump_matrix_path;

    CLI::App* figure = app.add_subcommand("figure", "Run a figure preset end-to-end");
    figure->add_option("tag", figure_tag, "One of fig2, fig3a, fig3b, fig4, fig5")->required();
    add_output_options(figure, opt);

    CLI::App* sweep = app.add_subcommand("sweep", "Run a sweep described by a config file");
    sweep->add_option("--config", opt.config_path, "Config file (JSON)")->required();
    add_output_options(sweep, opt);

    CLI::App* compute = app.add_subcommand("compute", "Run a single configuration point");
    compute->add_option("--config", opt.config_path, "Config file (JSON)")->required();
    compute->add_option("--dump-matrix", dump_matrix_path,
                        "Also write the assembled channel matrix (EMDOF-MATRIX 1 container)");
    add_output_options(compute, opt);

    CLI::App* validate_cmd = app.add_subcommand("validate", "Validate a config and print its resolved form");
    validate_cmd->add_option("--config", opt.config_path, "Config file (JSON)")->required();
    validate_cmd->add_flag("-v,--verbose", opt.verbose, "Progress output on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_validation;
    }

    try {
        std::vector<std::string> overridden;

        if (figure->parsed()) {
            nlohmann::json doc = {{"preset", figure_tag}};
            emdof::ExperimentConfig config = resolve(doc, opt, overridden);
            if (opt.verbose) std::cerr << "running preset " << config.preset << "\n";
            return run_result([&] { return emdof::run(config); }, opt);
        }

        if (sweep->parsed()) {
            emdof::ExperimentConfig config = resolve(load_document(opt.config_path), opt, overridden);
            if (opt.verbose) std::cerr << "running " << config.preset << " sweep\n";
            return run_result([&] { return emdof::run(config); }, opt);
        }

        if (compute->parsed()) {
            emdof::ExperimentConfig config = resolve(load_document(opt.config_path), opt, overridden);
            if (config.element_counts.size() != 1 || config.distances.size() != 1 ||
                config.modes.size() != 1 || config.snr_db.size() > 1)
                throw emdof::config_error(
                    "geometry", "compute expects a single point (one n, one d, one mode, at most one snr)");
            if (!dump_matrix_path.empty()) {
                auto [sources, receivers] = emdof::make_paired_planes(
                    config.side_length, config.element_counts[0], config.distances[0], config.grid);
                emdof::write_channel_matrix(emdof::assemble_channel(sources, receivers, config.modes[0]),
                                            dump_matrix_path);
                if (opt.verbose) std::cerr << "channel matrix written to " << dump_matrix_path << "\n";
            }
            return run_result(
                [&] {
                    emdof::SweepResult r = emdof::run_custom(config);
                    r.name = "compute";
                    r.metadata["name"] = "compute";
                    return r;
                },
                opt);
        }

        if (validate_cmd->parsed()) {
            emdof::ExperimentConfig config =
                emdof::parse_config(opt.config_path, &overridden);
            nlohmann::json report = emdof::config_to_json(config);
            if (!overridden.empty()) report["preset_fields_overridden"] = overridden;
            std::cout << report.dump(2) << "\n";
            return exit_ok;
        }
    } catch (const emdof::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_validation;
    } catch (const emdof::invalid_argument_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const emdof::io_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return exit_io;
    } catch (const emdof::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_ok;
}
