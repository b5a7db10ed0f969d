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
// Result writers. The data table is CSV (floating values at 12 significant
// digits) or JSON; a metadata sidecar (<name>.meta.json) always carries the
// full resolved config and conventions. Files are written to a temporary
// name and renamed, so a failed run never leaves a partial output.

#ifndef EMDOF_RESULTS_IO_HPP
#define EMDOF_RESULTS_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <variant>

#include <json.hpp>

#include "common.hpp"
#include "sweep.hpp"

namespace emdof {

enum class OutputFormat { Csv, Json };

inline OutputFormat output_format_from_string(const std::string& text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw invalid_argument_error("unknown output format '" + text + "' (valid: csv, json)");
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string cell_to_string(const Cell& cell) {
    if (std::holds_alternative<std::int64_t>(cell)) return std::to_string(std::get<std::int64_t>(cell));
    if (std::holds_alternative<double>(cell)) return format_double(std::get<double>(cell));
    return std::get<std::string>(cell);
}

inline nlohmann::json cell_to_json(const Cell& cell) {
    if (std::holds_alternative<std::int64_t>(cell)) return std::get<std::int64_t>(cell);
    if (std::holds_alternative<double>(cell)) return std::get<double>(cell);
    return std::get<std::string>(cell);
}

} // namespace detail

inline std::string to_csv(const SweepResult& result) {
    std::string out;
    for (std::size_t c = 0; c < result.columns.size(); ++c) {
        if (c) out.push_back(',');
        out += result.columns[c];
    }
    out.push_back('\n');
    for (const auto& row : result.rows) {
        if (row.size() != result.columns.size())
            throw dimension_error("to_csv: row with " + std::to_string(row.size()) +
                                  " cells does not match " + std::to_string(result.columns.size()) +
                                  " columns");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out.push_back(',');
            out += detail::cell_to_string(row[c]);
        }
        out.push_back('\n');
    }
    return out;
}

inline nlohmann::json to_json_table(const SweepResult& result) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : result.rows) {
        nlohmann::json r;
        for (std::size_t c = 0; c < row.size(); ++c) r[result.columns[c]] = detail::cell_to_json(row[c]);
        rows.push_back(std::move(r));
    }
    return {{"columns", result.columns}, {"rows", rows}};
}

namespace detail {

inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path tmp = path.parent_path() / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw io_error("write failed for '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        throw io_error("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
    }
}

} // namespace detail

struct WrittenFiles {
    std::filesystem::path data;
    std::filesystem::path metadata;
};

// Writes <dir>/<name>.(csv|json) plus <dir>/<name>.meta.json.
inline WrittenFiles write_results(const SweepResult& result, OutputFormat format,
                                  const std::filesystem::path& directory) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) throw io_error("cannot create output directory '" + directory.string() + "': " + ec.message());

    WrittenFiles files;
    files.data = directory / (result.name + (format == OutputFormat::Csv ? ".csv" : ".json"));
    files.metadata = directory / (result.name + ".meta.json");

    if (format == OutputFormat::Csv)
        detail::atomic_write_text(files.data, to_csv(result));
    else
        detail::atomic_write_text(files.data, to_json_table(result).dump(2) + "\n");
    detail::atomic_write_text(files.metadata, result.metadata.dump(2) + "\n");
    return files;
}

} // namespace emdof

#endif // EMDOF_RESULTS_IO_HPP
