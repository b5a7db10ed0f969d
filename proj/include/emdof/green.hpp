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
// Free-space Green's functions under the exp(-j*k0*R) phase convention.
// Flipping the convention conjugates every channel entry without changing
// the eigenvalue spectrum; the convention is recorded in all output
// metadata and covered by an invariance test.

#ifndef EMDOF_GREEN_HPP
#define EMDOF_GREEN_HPP

#include <array>
#include <cmath>
#include <string>

#include "common.hpp"
#include "geometry.hpp"

namespace emdof {

// Which kernel couples a source element to a receiver element.
enum class GreensKind {
    Scalar,                  // exp(-j k0 R) / (4 pi R)
    DyadicFull,              // (I + grad grad / k0^2) g, closed form
    DyadicFarfieldProjector, // (I - rhat rhat^T) g
};

// 3x3 complex tensor indexed [receiver polarization][source polarization],
// polarization order (x, y, z).
struct DyadicTensor {
    std::array<Complex, 9> entries{};

    Complex& operator()(int rx_pol, int src_pol) { return entries[static_cast<std::size_t>(rx_pol * 3 + src_pol)]; }
    const Complex& operator()(int rx_pol, int src_pol) const {
        return entries[static_cast<std::size_t>(rx_pol * 3 + src_pol)];
    }

    // Tensor applied to a real direction vector (used by the projector test).
    std::array<Complex, 3> apply(const Vec3& v) const {
        std::array<Complex, 3> out{};
        const double c[3] = {v.x, v.y, v.z};
        for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q)
                out[static_cast<std::size_t>(p)] += (*this)(p, q) * c[q];
        return out;
    }
};

namespace detail {

inline double checked_separation(const Vec3& observation, const Vec3& source, double floor,
                                 const char* who) {
    const double r = distance(observation, source);
    if (!(r > floor))
        throw singularity_error(std::string(who) + ": source/observation separation " +
                                std::to_string(r) + " is at or below the singularity floor " +
                                std::to_string(floor));
    return r;
}

} // namespace detail

// Scalar free-space Green's function g(r, r') = exp(-j k0 R) / (4 pi R).
inline Complex scalar_green(const Vec3& observation, const Vec3& source,
                            double floor = default_singularity_floor) {
    const double r = detail::checked_separation(observation, source, floor, "scalar_green");
    return std::exp(Complex(0.0, -k0 * r)) / (4.0 * pi * r);
}

// Full dyadic Green's function (I + grad grad / k0^2) g in closed form:
//
//   G_pq = g(R) * [ a(u) delta_pq + b(u) rhat_p rhat_q ],  u = k0 R,
//   a(u) = 1 - j/u - 1/u^2,   b(u) = -1 + 3j/u + 3/u^2.
//
// The closed form is the production path; the finite-difference evaluation
// of grad grad g exists only as a test oracle (it is ~45 kernel calls per
// pair and fragile near the source).
inline DyadicTensor dyadic_green(const Vec3& observation, const Vec3& source,
                                 double floor = default_singularity_floor) {
    const double r = detail::checked_separation(observation, source, floor, "dyadic_green");
    const Vec3 d = observation - source;
    const double rhat[3] = {d.x / r, d.y / r, d.z / r};
    const double u = k0 * r;
    const Complex inv_u(0.0, 1.0 / u); // j/u
    const double inv_u2 = 1.0 / (u * u);
    const Complex a = 1.0 - inv_u - inv_u2;
    const Complex b = -1.0 + 3.0 * inv_u + 3.0 * inv_u2;
    const Complex g = std::exp(Complex(0.0, -u)) / (4.0 * pi * r);

    DyadicTensor t;
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
            t(p, q) = g * ((p == q ? a : Complex(0.0)) + b * rhat[p] * rhat[q]);
    return t;
}

// Far-field approximation (I - rhat rhat^T) g: the transverse projector
// applied to the scalar kernel. Annihilates the radial source polarization.
inline DyadicTensor farfield_projector_green(const Vec3& observation, const Vec3& source,
                                             double floor = default_singularity_floor) {
    const double r = detail::checked_separation(observation, source, floor, "farfield_projector_green");
    const Vec3 d = observation - source;
    const double rhat[3] = {d.x / r, d.y / r, d.z / r};
    const Complex g = std::exp(Complex(0.0, -k0 * r)) / (4.0 * pi * r);

    DyadicTensor t;
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
            t(p, q) = g * ((p == q ? 1.0 : 0.0) - rhat[p] * rhat[q]);
    return t;
}

// Classical antenna-range boundaries for an aperture of side L (lambda0 = 1):
// radiating near-field starts at 0.62*sqrt(L^3), far field at 2*L^2.
struct FieldBoundaries {
    double near_limit = 0.0; // D_n
    double far_limit = 0.0;  // D_f
};

inline FieldBoundaries field_boundaries(double side_length) {
    if (!(side_length > 0.0) || !std::isfinite(side_length))
        throw invalid_argument_error("field_boundaries: side length must be positive, got " +
                                     std::to_string(side_length));
    return {0.62 * std::sqrt(side_length * side_length * side_length),
            2.0 * side_length * side_length};
}

inline const char* to_string(GreensKind kind) {
    switch (kind) {
    case GreensKind::Scalar: return "scalar";
    case GreensKind::DyadicFull: return "dyadic_full";
    case GreensKind::DyadicFarfieldProjector: return "dyadic_farfield_projector";
    }
    return "unknown";
}

} // namespace emdof

#endif // EMDOF_GREEN_HPP
