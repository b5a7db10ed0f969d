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
// JSON experiment-config parsing. The schema is strict: unknown keys are
// rejected and every validation error names the offending field path.
// A config naming a figure preset starts from the preset's parameters and
// merges the explicitly given fields on top (the merge is recorded).
//
//   {
//     "preset": "custom",                           // optional
//     "geometry": { "side_length": 10.0,
//                   "n": 20,                        // or n_values / n_range
//                   "d": 7.0,                       // or d_values / d_range
//                   "grid": "edge_inclusive" },     // optional
//     "mode":  { "kind": "scalar",
//                "source_polarizations": "x",       // optional per kind
//                "receiver_polarizations": "x" },   // optional per kind
//     "modes": [ ... ],                             // alternative to "mode"
//     "sweep": { "snr_db": {"start":0,"stop":30,"step":1} },  // or [..]
//     "analysis": { "bandwidth": 1.0, "dof_threshold": 0.01,
//                   "capacity_rank_override": 400 } // all optional
//   }

#ifndef EMDOF_CONFIG_HPP
#define EMDOF_CONFIG_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "sweep.hpp"

namespace emdof {

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw config_error(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
}

inline double get_number(const json& v, const std::string& path) {
    if (!v.is_number())
        throw config_error(path, "expected a number, got " + std::string(v.type_name()));
    return v.get<double>();
}

inline std::size_t get_positive_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
        throw config_error(path, "expected a positive integer");
    return static_cast<std::size_t>(v.get<std::int64_t>());
}

inline std::string get_string(const json& v, const std::string& path) {
    if (!v.is_string())
        throw config_error(path, "expected a string, got " + std::string(v.type_name()));
    return v.get<std::string>();
}

inline std::vector<double> parse_double_list(const json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>()};
    if (v.is_array()) {
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(get_number(v[i], path + "[" + std::to_string(i) + "]"));
        return out;
    }
    if (v.is_object()) {
        reject_unknown_keys(v, {"start", "stop", "step"}, path);
        if (!v.contains("start") || !v.contains("stop"))
            throw config_error(path, "range needs start and stop");
        return range_values(get_number(v["start"], path + ".start"),
                            get_number(v["stop"], path + ".stop"),
                            v.contains("step") ? get_number(v["step"], path + ".step") : 1.0,
                            path.c_str());
    }
    throw config_error(path, "expected a number, an array or a {start,stop,step} range");
}

inline std::vector<std::size_t> parse_count_list(const json& v, const std::string& path) {
    if (v.is_number()) return {get_positive_integer(v, path)};
    if (v.is_array()) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(get_positive_integer(v[i], path + "[" + std::to_string(i) + "]"));
        return out;
    }
    if (v.is_object()) {
        reject_unknown_keys(v, {"start", "stop", "step"}, path);
        if (!v.contains("start") || !v.contains("stop"))
            throw config_error(path, "range needs start and stop");
        const std::size_t start = get_positive_integer(v["start"], path + ".start");
        const std::size_t stop = get_positive_integer(v["stop"], path + ".stop");
        const std::size_t step =
            v.contains("step") ? get_positive_integer(v["step"], path + ".step") : 1;
        if (stop < start) throw config_error(path, "stop must be >= start");
        std::vector<std::size_t> out;
        for (std::size_t n = start; n <= stop; n += step) out.push_back(n);
        return out;
    }
    throw config_error(path, "expected an integer, an array or a {start,stop,step} range");
}

inline GreensKind parse_kind(const std::string& text, const std::string& path) {
    if (text == "scalar") return GreensKind::Scalar;
    if (text == "dyadic_full") return GreensKind::DyadicFull;
    if (text == "dyadic_farfield_projector") return GreensKind::DyadicFarfieldProjector;
    throw config_error(path, "unknown Green's kind '" + text +
                                 "' (valid: scalar, dyadic_full, dyadic_farfield_projector)");
}

inline PolarizationMode parse_mode(const json& v, const std::string& path) {
    if (!v.is_object()) throw config_error(path, "expected an object");
    reject_unknown_keys(v, {"kind", "source_polarizations", "receiver_polarizations"}, path);
    if (!v.contains("kind")) throw config_error(path + ".kind", "required field is missing");
    PolarizationMode mode;
    mode.kind = parse_kind(get_string(v["kind"], path + ".kind"), path + ".kind");
    const std::string default_mask = mode.kind == GreensKind::Scalar ? "x" : "xyz";
    auto mask = [&](const char* key) {
        return v.contains(key) ? get_string(v[key], path + "." + key) : default_mask;
    };
    try {
        mode.source_axes = parse_axes(mask("source_polarizations"));
        mode.receiver_axes = parse_axes(mask("receiver_polarizations"));
        validate(mode);
    } catch (const config_error&) {
        throw;
    } catch (const invalid_argument_error& e) {
        throw config_error(path, e.what());
    }
    return mode;
}

inline GridConvention parse_grid(const std::string& text, const std::string& path) {
    if (text == "edge_inclusive") return GridConvention::EdgeInclusive;
    if (text == "cell_centered") return GridConvention::CellCentered;
    throw config_error(path, "unknown grid convention '" + text +
                                 "' (valid: edge_inclusive, cell_centered)");
}

// Parses a config in canonical or shorthand form, no preset merging.
inline ExperimentConfig parse_config_fields(const json& j) {
    if (!j.is_object()) throw config_error("", "config root must be a JSON object");
    reject_unknown_keys(j, {"preset", "geometry", "mode", "modes", "sweep", "analysis"}, "");

    ExperimentConfig config;
    if (j.contains("preset")) config.preset = get_string(j["preset"], "preset");

    if (!j.contains("geometry")) throw config_error("geometry", "required section is missing");
    const json& g = j["geometry"];
    if (!g.is_object()) throw config_error("geometry", "expected an object");
    reject_unknown_keys(g, {"side_length", "n", "n_values", "n_range", "d", "d_values", "d_range", "grid"},
                        "geometry");
    if (!g.contains("side_length"))
        throw config_error("geometry.side_length", "required field is missing");
    config.side_length = get_number(g["side_length"], "geometry.side_length");

    int n_specs = g.contains("n") + g.contains("n_values") + g.contains("n_range");
    if (n_specs != 1)
        throw config_error("geometry.n", "exactly one of n, n_values, n_range is required");
    if (g.contains("n")) config.element_counts = parse_count_list(g["n"], "geometry.n");
    if (g.contains("n_values")) config.element_counts = parse_count_list(g["n_values"], "geometry.n_values");
    if (g.contains("n_range")) config.element_counts = parse_count_list(g["n_range"], "geometry.n_range");

    int d_specs = g.contains("d") + g.contains("d_values") + g.contains("d_range");
    if (d_specs != 1)
        throw config_error("geometry.d", "exactly one of d, d_values, d_range is required");
    if (g.contains("d")) config.distances = parse_double_list(g["d"], "geometry.d");
    if (g.contains("d_values")) config.distances = parse_double_list(g["d_values"], "geometry.d_values");
    if (g.contains("d_range")) config.distances = parse_double_list(g["d_range"], "geometry.d_range");

    if (g.contains("grid"))
        config.grid = parse_grid(get_string(g["grid"], "geometry.grid"), "geometry.grid");

    if (j.contains("mode") && j.contains("modes"))
        throw config_error("mode", "give either mode or modes, not both");
    if (j.contains("mode")) config.modes = {parse_mode(j["mode"], "mode")};
    if (j.contains("modes")) {
        if (!j["modes"].is_array() || j["modes"].empty())
            throw config_error("modes", "expected a non-empty array");
        for (std::size_t i = 0; i < j["modes"].size(); ++i)
            config.modes.push_back(parse_mode(j["modes"][i], "modes[" + std::to_string(i) + "]"));
    }
    if (config.modes.empty())
        throw config_error("mode", "required section is missing (give mode or modes)");

    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        if (!s.is_object()) throw config_error("sweep", "expected an object");
        reject_unknown_keys(s, {"snr_db"}, "sweep");
        if (s.contains("snr_db")) config.snr_db = parse_double_list(s["snr_db"], "sweep.snr_db");
    }

    if (j.contains("analysis")) {
        const json& a = j["analysis"];
        if (!a.is_object()) throw config_error("analysis", "expected an object");
        reject_unknown_keys(a, {"bandwidth", "dof_threshold", "capacity_rank_override"}, "analysis");
        if (a.contains("bandwidth"))
            config.bandwidth = get_number(a["bandwidth"], "analysis.bandwidth");
        if (a.contains("dof_threshold"))
            config.dof_threshold = get_number(a["dof_threshold"], "analysis.dof_threshold");
        if (a.contains("capacity_rank_override"))
            config.capacity_rank_override =
                get_positive_integer(a["capacity_rank_override"], "analysis.capacity_rank_override");
    }

    validate(config);
    return config;
}

} // namespace detail

// Parses a config JSON document. A "preset" other than "custom" starts from
// the preset parameters; any geometry/mode/sweep/analysis fields given in
// the document replace the preset's values (field paths of the replacements
// are appended to `overridden` when provided). A result-metadata sidecar
// (schema emdof-result/1) is accepted as well, which makes
// parse(write(config)) a round trip.
inline ExperimentConfig parse_config_json(const nlohmann::json& document,
                                          std::vector<std::string>* overridden = nullptr) {
    using nlohmann::json;
    const json* root = &document;
    if (document.is_object() && document.contains("schema") && document.contains("config")) {
        if (detail::get_string(document["schema"], "schema").rfind("emdof-result/", 0) != 0)
            throw config_error("schema", "not an emdof result sidecar");
        root = &document["config"];
    }
    if (!root->is_object()) throw config_error("", "config root must be a JSON object");

    const std::string preset =
        root->contains("preset") ? detail::get_string((*root)["preset"], "preset") : "custom";
    if (preset == "custom") return detail::parse_config_fields(*root);

    // Start from the preset's canonical form and merge the given fields.
    json merged = config_to_json(preset_config(preset));
    if (root->contains("geometry")) {
        const json& g = (*root)["geometry"];
        if (!g.is_object()) throw config_error("geometry", "expected an object");
        const bool replaces_n = g.contains("n") || g.contains("n_values") || g.contains("n_range");
        const bool replaces_d = g.contains("d") || g.contains("d_values") || g.contains("d_range");
        if (replaces_n) merged["geometry"].erase("n_values");
        if (replaces_d) merged["geometry"].erase("d_values");
        for (auto it = g.begin(); it != g.end(); ++it) {
            merged["geometry"][it.key()] = it.value();
            if (overridden) overridden->push_back("geometry." + it.key());
        }
    }
    if (root->contains("mode") && root->contains("modes"))
        throw config_error("mode", "give either mode or modes, not both");
    for (const char* key : {"mode", "modes"})
        if (root->contains(key)) {
            merged.erase("mode");
            merged.erase("modes");
            merged[key] = (*root)[key];
            if (overridden) overridden->push_back(key);
        }
    if (root->contains("sweep")) {
        merged["sweep"] = (*root)["sweep"];
        if (overridden) overridden->push_back("sweep");
    }
    if (root->contains("analysis")) {
        const json& a = (*root)["analysis"];
        if (!a.is_object()) throw config_error("analysis", "expected an object");
        for (auto it = a.begin(); it != a.end(); ++it) {
            merged["analysis"][it.key()] = it.value();
            if (overridden) overridden->push_back("analysis." + it.key());
        }
    }
    detail::reject_unknown_keys(*root, {"preset", "geometry", "mode", "modes", "sweep", "analysis"}, "");
    return detail::parse_config_fields(merged);
}

inline ExperimentConfig parse_config(const std::filesystem::path& path,
                                     std::vector<std::string>* overridden = nullptr) {
    std::ifstream in(path);
    if (!in)
        throw io_error("parse_config: cannot open '" + path.string() + "'");
    nlohmann::json document;
    try {
        in >> document;
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error("", "'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config_json(document, overridden);
}

// Sets `value` (parsed as JSON when possible, else as a string) at a dotted
// path like "geometry.n" inside a raw config document.
inline void apply_override(nlohmann::json& document, const std::string& dotted_path,
                           const std::string& value) {
    if (dotted_path.empty()) throw config_error("", "override path must not be empty");
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(value);
    } catch (const nlohmann::json::parse_error&) {
        parsed = value;
    }
    nlohmann::json* node = &document;
    std::size_t begin = 0;
    for (;;) {
        const std::size_t dot = dotted_path.find('.', begin);
        const std::string key = dotted_path.substr(begin, dot - begin);
        if (key.empty()) throw config_error(dotted_path, "override path has an empty segment");
        if (dot == std::string::npos) {
            (*node)[key] = parsed;
            return;
        }
        node = &(*node)[key];
        begin = dot + 1;
    }
}

} // namespace emdof

#endif // EMDOF_CONFIG_HPP
