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

#ifndef EMDOF_GEOMETRY_HPP
#define EMDOF_GEOMETRY_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace emdof {

// Position in units of the free-space wavelength.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline bool operator==(const Vec3& a, const Vec3& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

inline double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline bool is_finite(const Vec3& v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

// Edge-inclusive places the outermost grid points on the aperture edges
// (spacing L/(N-1)); cell-centered offsets them half a cell inward
// (spacing L/N). Edge-inclusive is the default; cell-centered exists as a
// sensitivity switch.
enum class GridConvention {
    EdgeInclusive,
    CellCentered,
};

// N x N uniform grid on a square plane normal to the z axis.
struct PlaneSpec {
    double side_length = 0.0;   // L, wavelengths
    std::size_t grid_count = 0; // N elements per side, N^2 total
    Vec3 center{};
    GridConvention grid = GridConvention::EdgeInclusive;
};

// Ordered set of point-element positions.
struct ArrayGeometry {
    std::vector<Vec3> elements;
    std::string label;
    std::optional<PlaneSpec> provenance;

    std::size_t size() const noexcept { return elements.size(); }
};

namespace detail {

inline double grid_coordinate(double center, double side_length, std::size_t index,
                              std::size_t count, GridConvention grid) {
    if (grid == GridConvention::CellCentered)
        return center - side_length / 2.0 + (static_cast<double>(index) + 0.5) * side_length / static_cast<double>(count);
    return center - side_length / 2.0 +
           static_cast<double>(index) * side_length / static_cast<double>(count - 1);
}

} // namespace detail

// Builds the N x N grid spanning [-L/2, +L/2] about the center in x and y.
// Ordering is row-major with x varying fastest, so matrix layouts are
// reproducible byte-for-byte. N = 1 degenerates to the single center point.
inline ArrayGeometry make_planar_array(const PlaneSpec& spec, std::string label = "plane") {
    if (!(spec.side_length > 0.0) || !std::isfinite(spec.side_length))
        throw invalid_argument_error("make_planar_array: side_length must be positive, got " +
                                     std::to_string(spec.side_length));
    if (spec.grid_count == 0)
        throw invalid_argument_error("make_planar_array: grid_count must be at least 1");
    if (!is_finite(spec.center))
        throw invalid_argument_error("make_planar_array: center must be finite");

    ArrayGeometry out;
    out.label = std::move(label);
    out.provenance = spec;
    const std::size_t n = spec.grid_count;
    out.elements.reserve(n * n);
    if (n == 1 && spec.grid == GridConvention::EdgeInclusive) {
        out.elements.push_back(spec.center);
        return out;
    }
    for (std::size_t iy = 0; iy < n; ++iy) {
        const double y = detail::grid_coordinate(spec.center.y, spec.side_length, iy, n, spec.grid);
        for (std::size_t ix = 0; ix < n; ++ix) {
            const double x = detail::grid_coordinate(spec.center.x, spec.side_length, ix, n, spec.grid);
            out.elements.push_back({x, y, spec.center.z});
        }
    }
    return out;
}

// Source plane centered at the origin, receiver plane centered at (0,0,D),
// identical grids and ordering on both.
inline std::pair<ArrayGeometry, ArrayGeometry>
make_paired_planes(double side_length, std::size_t grid_count, double plane_distance,
                   GridConvention grid = GridConvention::EdgeInclusive) {
    if (!(plane_distance > 0.0) || !std::isfinite(plane_distance))
        throw invalid_argument_error("make_paired_planes: plane distance must be positive, got " +
                                     std::to_string(plane_distance));
    PlaneSpec src{side_length, grid_count, Vec3{0.0, 0.0, 0.0}, grid};
    PlaneSpec rx{side_length, grid_count, Vec3{0.0, 0.0, plane_distance}, grid};
    return {make_planar_array(src, "source"), make_planar_array(rx, "receiver")};
}

// Minimum pairwise distance within one array (> 0 means all positions distinct).
inline double min_pairwise_separation(const ArrayGeometry& a) {
    if (a.elements.empty())
        throw invalid_argument_error("min_pairwise_separation: empty geometry");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.elements.size(); ++i)
        for (std::size_t j = i + 1; j < a.elements.size(); ++j)
            best = std::min(best, distance(a.elements[i], a.elements[j]));
    return best;
}

// Minimum distance over all cross pairs; callers must require > 0 before
// channel assembly (guards the Green's-function singularity at r = r').
inline double min_cross_separation(const ArrayGeometry& a, const ArrayGeometry& b) {
    if (a.elements.empty() || b.elements.empty())
        throw invalid_argument_error("min_cross_separation: empty geometry");
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& p : a.elements)
        for (const Vec3& q : b.elements)
            best = std::min(best, distance(p, q));
    return best;
}

// Checks the ArrayGeometry invariants (non-empty, finite, pairwise distinct).
inline void validate(const ArrayGeometry& a) {
    if (a.elements.empty())
        throw invalid_argument_error("ArrayGeometry '" + a.label + "' is empty");
    for (const Vec3& p : a.elements)
        if (!is_finite(p))
            throw invalid_argument_error("ArrayGeometry '" + a.label + "' has a non-finite position");
    if (a.elements.size() > 1 && !(min_pairwise_separation(a) > 0.0))
        throw invalid_argument_error("ArrayGeometry '" + a.label + "' has coincident positions");
}

} // namespace emdof

#endif // EMDOF_GEOMETRY_HPP
