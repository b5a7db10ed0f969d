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
// Parameter-sweep engine. One sweep point (assemble + eigensolve) is the
// unit of parallel work; points never share matrices, results are collected
// by declared index, so a sweep's rows are identical for any thread count.

#ifndef EMDOF_SWEEP_HPP
#define EMDOF_SWEEP_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "channel.hpp"
#include "common.hpp"
#include "geometry.hpp"
#include "spectra.hpp"

namespace emdof {

// Declarative description of a run: geometry ranges, polarization modes,
// SNR range and analysis knobs. Presets fill this with figure parameters.
struct ExperimentConfig {
    std::string preset = "custom"; // fig2|fig3a|fig3b|fig4|fig5|custom
    double side_length = 0.0;
    std::vector<std::size_t> element_counts; // N values (elements per side)
    std::vector<double> distances;           // D values
    std::vector<PolarizationMode> modes;
    std::vector<double> snr_db; // empty = no capacity columns
    double bandwidth = 1.0;
    double dof_threshold = default_dof_threshold;
    GridConvention grid = GridConvention::EdgeInclusive;
    std::optional<std::size_t> capacity_rank_override;

    friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
        return a.preset == b.preset && a.side_length == b.side_length &&
               a.element_counts == b.element_counts && a.distances == b.distances &&
               a.modes == b.modes && a.snr_db == b.snr_db && a.bandwidth == b.bandwidth &&
               a.dof_threshold == b.dof_threshold && a.grid == b.grid &&
               a.capacity_rank_override == b.capacity_rank_override;
    }
};

inline void validate(const ExperimentConfig& config) {
    if (!(config.side_length > 0.0) || !std::isfinite(config.side_length))
        throw config_error("geometry.side_length", "must be positive, got " + std::to_string(config.side_length));
    if (config.element_counts.empty())
        throw config_error("geometry.n", "at least one element count is required");
    for (std::size_t i = 0; i < config.element_counts.size(); ++i) {
        if (config.element_counts[i] < 1)
            throw config_error("geometry.n", "element counts must be >= 1");
        if (i > 0 && config.element_counts[i] <= config.element_counts[i - 1])
            throw config_error("geometry.n", "element counts must be strictly increasing");
    }
    if (config.distances.empty())
        throw config_error("geometry.d", "at least one distance is required");
    for (std::size_t i = 0; i < config.distances.size(); ++i) {
        if (!(config.distances[i] > 0.0) || !std::isfinite(config.distances[i]))
            throw config_error("geometry.d", "distances must be positive, got " +
                                                 std::to_string(config.distances[i]));
        if (i > 0 && !(config.distances[i] > config.distances[i - 1]))
            throw config_error("geometry.d", "distances must be strictly increasing");
    }
    if (config.modes.empty())
        throw config_error("mode", "at least one polarization mode is required");
    for (const PolarizationMode& m : config.modes) {
        try {
            validate(m);
        } catch (const invalid_argument_error& e) {
            throw config_error("mode", e.what());
        }
    }
    for (std::size_t i = 0; i < config.snr_db.size(); ++i) {
        if (!std::isfinite(config.snr_db[i]))
            throw config_error("sweep.snr_db", "values must be finite");
        if (i > 0 && !(config.snr_db[i] > config.snr_db[i - 1]))
            throw config_error("sweep.snr_db", "values must be strictly increasing");
    }
    if (!(config.bandwidth > 0.0) || !std::isfinite(config.bandwidth))
        throw config_error("analysis.bandwidth", "must be positive");
    if (!(config.dof_threshold > 0.0) || !(config.dof_threshold < 1.0))
        throw config_error("analysis.dof_threshold", "must lie in (0, 1)");
    if (config.capacity_rank_override && *config.capacity_rank_override < 1)
        throw config_error("analysis.capacity_rank_override", "must be >= 1");
}

namespace detail {

inline std::vector<double> range_values(double start, double stop, double step, const char* field) {
    if (!(step > 0.0) || !std::isfinite(step))
        throw config_error(field, "step must be positive");
    if (!(stop >= start))
        throw config_error(field, "stop must be >= start");
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

template <typename Fn>
inline void parallel_for_index(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::scoped_lock lock(failure_mutex);
                if (!first_failure) first_failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (first_failure) std::rethrow_exception(first_failure);
}

} // namespace detail

using Cell = std::variant<std::int64_t, double, std::string>;

// Tabular sweep output plus metadata sufficient to reproduce the run.
struct SweepResult {
    std::string name; // output basename: preset tag, "custom" or "compute"
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json metadata;
};

inline nlohmann::json config_to_json(const ExperimentConfig& config) {
    nlohmann::json modes = nlohmann::json::array();
    for (const PolarizationMode& m : config.modes)
        modes.push_back({{"kind", to_string(m.kind)},
                         {"source_polarizations", axes_string(m.source_axes)},
                         {"receiver_polarizations", axes_string(m.receiver_axes)}});
    nlohmann::json analysis = {{"bandwidth", config.bandwidth},
                               {"dof_threshold", config.dof_threshold}};
    if (config.capacity_rank_override)
        analysis["capacity_rank_override"] = *config.capacity_rank_override;
    nlohmann::json j = {
        {"preset", config.preset},
        {"geometry",
         {{"side_length", config.side_length},
          {"n_values", config.element_counts},
          {"d_values", config.distances},
          {"grid", config.grid == GridConvention::EdgeInclusive ? "edge_inclusive" : "cell_centered"}}},
        {"modes", modes},
        {"analysis", analysis},
    };
    if (!config.snr_db.empty()) j["sweep"] = {{"snr_db", config.snr_db}};
    return j;
}

namespace detail {

inline std::string iso8601_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

inline nlohmann::json run_metadata(const ExperimentConfig& config, const std::string& name) {
    return nlohmann::json{
        {"schema", "emdof-result/1"},
        {"name", name},
        {"config", config_to_json(config)},
        {"conventions",
         {{"lambda0", 1.0},
          {"wavenumber_k0", "2*pi (lambda0 = 1)"},
          {"phase_convention", "exp(-j*k0*R)"},
          {"grid_convention",
           config.grid == GridConvention::EdgeInclusive ? "edge_inclusive" : "cell_centered"},
          {"element_ordering", "row-major, x fastest"},
          {"block_layout", "polarization-major, position-minor"},
          {"correlation_side", "smaller of H*Hdagger / Hdagger*H, ties -> Hdagger*H"},
          {"transverse_realization", "source-column masking of the exact full dyadic tensor"},
          {"capacity_rank_rule",
           config.capacity_rank_override ? "override" : "dof at dof_threshold"},
          {"capacity_spectrum_scale", "top-rank eigenvalues normalized to mean 1"},
          {"dof_threshold", config.dof_threshold},
          {"singularity_floor", default_singularity_floor}}},
        {"code_version", version},
        {"timestamp_utc", iso8601_utc_now()},
    };
}

// Assemble + eigensolve one sweep point.
inline Spectrum point_spectrum(const ExperimentConfig& config, std::size_t elements_per_side,
                               double plane_distance, const PolarizationMode& mode) {
    auto [sources, receivers] =
        make_paired_planes(config.side_length, elements_per_side, plane_distance, config.grid);
    const ChannelMatrix h = assemble_channel(sources, receivers, mode);
    return hermitian_eigenvalues(correlation(h));
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

} // namespace detail

// Capacity comparison over an SNR range for one fixed geometry:
// columns rho_db, capacity_exact, capacity_edof.
inline SweepResult run_fig2(const ExperimentConfig& config, unsigned threads = 0) {
    (void)threads; // single eigensolve; rho loop is trivial
    validate(config);
    if (config.element_counts.size() != 1 || config.distances.size() != 1 || config.modes.size() != 1)
        throw config_error("geometry", "fig2 expects a single N, a single D and a single mode");
    if (config.snr_db.empty())
        throw config_error("sweep.snr_db", "fig2 sweeps SNR and needs a non-empty range");

    const Spectrum spectrum =
        detail::point_spectrum(config, config.element_counts[0], config.distances[0], config.modes[0]);
    const double psi = edof(spectrum);
    const std::size_t d = dof(spectrum, config.dof_threshold);
    const std::size_t rank = config.capacity_rank_override.value_or(d);
    const Spectrum scaled = normalized_for_capacity(spectrum, rank);

    SweepResult out;
    out.name = config.preset == "custom" ? "fig2" : config.preset;
    out.columns = {"rho_db", "capacity_exact", "capacity_edof"};
    for (double db : config.snr_db) {
        const double rho = detail::db_to_linear(db);
        out.rows.push_back({db, capacity_exact(scaled, rho, config.bandwidth, rank),
                            capacity_edof(psi, rho, config.bandwidth)});
    }
    out.metadata = detail::run_metadata(config, out.name);
    out.metadata["derived"] = {{"edof", psi}, {"dof", d}, {"capacity_rank", rank}};
    return out;
}

// EDOF saturation versus element count and distance: columns
// distance, n, edof. One Green's kind per run (fig3a/fig3b).
inline SweepResult run_fig3(const ExperimentConfig& config, unsigned threads = 0) {
    validate(config);
    if (config.modes.size() != 1)
        throw config_error("mode", "fig3 runs one Green's kind at a time (fig3a scalar, fig3b dyadic)");

    const std::size_t n_points = config.distances.size() * config.element_counts.size();
    std::vector<double> edofs(n_points);
    detail::parallel_for_index(n_points, threads, [&](std::size_t i) {
        const std::size_t di = i / config.element_counts.size();
        const std::size_t ni = i % config.element_counts.size();
        const Spectrum s = detail::point_spectrum(config, config.element_counts[ni],
                                                  config.distances[di], config.modes[0]);
        edofs[i] = edof(s);
    });

    SweepResult out;
    out.name = config.preset == "custom" ? "fig3" : config.preset;
    out.columns = {"distance", "n", "edof"};
    for (std::size_t di = 0; di < config.distances.size(); ++di)
        for (std::size_t ni = 0; ni < config.element_counts.size(); ++ni)
            out.rows.push_back({config.distances[di],
                                static_cast<std::int64_t>(config.element_counts[ni]),
                                edofs[di * config.element_counts.size() + ni]});
    out.metadata = detail::run_metadata(config, out.name);
    return out;
}

// Model-based significant-mode count versus the paraxial estimate:
// columns distance, edof, dof, paraxial_dof.
inline SweepResult run_fig4(const ExperimentConfig& config, unsigned threads = 0) {
    validate(config);
    if (config.element_counts.size() != 1 || config.modes.size() != 1)
        throw config_error("geometry", "fig4 expects a single N and a single mode");

    const std::size_t n_points = config.distances.size();
    std::vector<double> edofs(n_points);
    std::vector<std::int64_t> dofs(n_points);
    detail::parallel_for_index(n_points, threads, [&](std::size_t i) {
        const Spectrum s = detail::point_spectrum(config, config.element_counts[0],
                                                  config.distances[i], config.modes[0]);
        edofs[i] = edof(s);
        dofs[i] = static_cast<std::int64_t>(dof(s, config.dof_threshold));
    });

    const double area = config.side_length * config.side_length;
    SweepResult out;
    out.name = config.preset == "custom" ? "fig4" : config.preset;
    out.columns = {"distance", "edof", "dof", "paraxial_dof"};
    for (std::size_t i = 0; i < n_points; ++i)
        out.rows.push_back({config.distances[i], edofs[i], dofs[i],
                            paraxial_dof(area, area, config.distances[i])});
    out.metadata = detail::run_metadata(config, out.name);
    return out;
}

// EDOF versus distance for several source-polarization sets:
// columns distance, source_polarizations, edof.
inline SweepResult run_fig5(const ExperimentConfig& config, unsigned threads = 0) {
    validate(config);
    if (config.element_counts.size() != 1)
        throw config_error("geometry.n", "fig5 expects a single N");

    const std::size_t n_points = config.distances.size() * config.modes.size();
    std::vector<double> edofs(n_points);
    detail::parallel_for_index(n_points, threads, [&](std::size_t i) {
        const std::size_t di = i / config.modes.size();
        const std::size_t mi = i % config.modes.size();
        const Spectrum s = detail::point_spectrum(config, config.element_counts[0],
                                                  config.distances[di], config.modes[mi]);
        edofs[i] = edof(s);
    });

    SweepResult out;
    out.name = config.preset == "custom" ? "fig5" : config.preset;
    out.columns = {"distance", "source_polarizations", "edof"};
    for (std::size_t di = 0; di < config.distances.size(); ++di)
        for (std::size_t mi = 0; mi < config.modes.size(); ++mi)
            out.rows.push_back({config.distances[di], axes_string(config.modes[mi].source_axes),
                                edofs[di * config.modes.size() + mi]});
    out.metadata = detail::run_metadata(config, out.name);
    return out;
}

// Cartesian-product sweep over distances x element counts x modes, with an
// optional SNR dimension. Columns: distance, n, mode, [rho_db], edof, dof,
// [capacity_exact, capacity_edof].
inline SweepResult run_custom(const ExperimentConfig& config, unsigned threads = 0) {
    validate(config);
    const bool with_capacity = !config.snr_db.empty();

    struct Point {
        double edof = 0.0;
        std::size_t dof = 0;
        Spectrum spectrum;
    };
    const std::size_t n_points =
        config.distances.size() * config.element_counts.size() * config.modes.size();
    std::vector<Point> points(n_points);
    detail::parallel_for_index(n_points, threads, [&](std::size_t i) {
        std::size_t rest = i;
        const std::size_t mi = rest % config.modes.size();
        rest /= config.modes.size();
        const std::size_t ni = rest % config.element_counts.size();
        rest /= config.element_counts.size();
        const std::size_t di = rest;
        Point p;
        p.spectrum = detail::point_spectrum(config, config.element_counts[ni],
                                            config.distances[di], config.modes[mi]);
        p.edof = edof(p.spectrum);
        p.dof = dof(p.spectrum, config.dof_threshold);
        points[i] = std::move(p);
    });

    SweepResult out;
    out.name = config.preset;
    out.columns = {"distance", "n", "mode"};
    if (with_capacity) out.columns.push_back("rho_db");
    out.columns.push_back("edof");
    out.columns.push_back("dof");
    if (with_capacity) {
        out.columns.push_back("capacity_exact");
        out.columns.push_back("capacity_edof");
    }

    for (std::size_t di = 0; di < config.distances.size(); ++di)
        for (std::size_t ni = 0; ni < config.element_counts.size(); ++ni)
            for (std::size_t mi = 0; mi < config.modes.size(); ++mi) {
                const Point& p = points[(di * config.element_counts.size() + ni) * config.modes.size() + mi];
                std::vector<Cell> common = {config.distances[di],
                                            static_cast<std::int64_t>(config.element_counts[ni]),
                                            config.modes[mi].label()};
                if (!with_capacity) {
                    auto row = common;
                    row.push_back(p.edof);
                    row.push_back(static_cast<std::int64_t>(p.dof));
                    out.rows.push_back(std::move(row));
                    continue;
                }
                const std::size_t rank = config.capacity_rank_override.value_or(p.dof);
                const Spectrum scaled = normalized_for_capacity(p.spectrum, rank);
                for (double db : config.snr_db) {
                    auto row = common;
                    const double rho = detail::db_to_linear(db);
                    row.push_back(db);
                    row.push_back(p.edof);
                    row.push_back(static_cast<std::int64_t>(p.dof));
                    row.push_back(capacity_exact(scaled, rho, config.bandwidth, rank));
                    row.push_back(capacity_edof(p.edof, rho, config.bandwidth));
                    out.rows.push_back(std::move(row));
                }
            }
    out.metadata = detail::run_metadata(config, out.name);
    return out;
}

// Built-in experiment presets.
inline ExperimentConfig preset_config(const std::string& tag) {
    ExperimentConfig c;
    c.preset = tag;
    if (tag == "fig2") {
        c.side_length = 10.0;
        c.element_counts = {20};
        c.distances = {7.0};
        c.modes = {PolarizationMode::scalar()};
        c.snr_db = detail::range_values(0.0, 30.0, 1.0, "sweep.snr_db");
        return c;
    }
    if (tag == "fig3a" || tag == "fig3b") {
        c.side_length = 10.0;
        const std::size_t n_max = tag == "fig3a" ? 30 : 20;
        for (std::size_t n = 2; n <= n_max; ++n) c.element_counts.push_back(n);
        c.distances = {1.0, 4.0, 7.0, 10.0, 13.0};
        c.modes = {tag == "fig3a" ? PolarizationMode::scalar() : PolarizationMode::dyadic_full()};
        return c;
    }
    if (tag == "fig4") {
        c.side_length = 10.0; // 5.0 is the documented alternate for this comparison
        c.element_counts = {20};
        c.distances = detail::range_values(1.0, 13.0, 1.0, "geometry.d_range");
        c.modes = {PolarizationMode::scalar()};
        return c;
    }
    if (tag == "fig5") {
        c.side_length = 5.0;
        c.element_counts = {11};
        c.distances = detail::range_values(1.0, 13.0, 1.0, "geometry.d_range");
        c.modes = {PolarizationMode::dyadic("x", "xyz"), PolarizationMode::dyadic("xy", "xyz"),
                   PolarizationMode::dyadic_full()};
        return c;
    }
    throw invalid_argument_error("unknown figure preset '" + tag +
                                 "' (valid: fig2, fig3a, fig3b, fig4, fig5)");
}

// Dispatches a config to its preset runner ("custom" runs the generic sweep).
inline SweepResult run(const ExperimentConfig& config, unsigned threads = 0) {
    if (config.preset == "fig2") return run_fig2(config, threads);
    if (config.preset == "fig3a" || config.preset == "fig3b") return run_fig3(config, threads);
    if (config.preset == "fig4") return run_fig4(config, threads);
    if (config.preset == "fig5") return run_fig5(config, threads);
    if (config.preset == "custom") return run_custom(config, threads);
    throw invalid_argument_error("unknown preset '" + config.preset + "'");
}

} // namespace emdof

#endif // EMDOF_SWEEP_HPP
