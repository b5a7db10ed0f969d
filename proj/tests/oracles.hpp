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
// Test-only oracles. These stay independent of the closed forms they check:
// the dyadic oracle differentiates the scalar kernel numerically, the
// matvec oracle is a naive double loop.

#ifndef EMDOF_TESTS_ORACLES_HPP
#define EMDOF_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <random>

#include <emdof/geometry.hpp>
#include <emdof/green.hpp>

namespace emdof::testing {

// (I + grad grad / k0^2) g evaluated with second-order central differences
// on the observation point.
inline DyadicTensor dyadic_green_finite_difference(const Vec3& observation, const Vec3& source,
                                                   double h) {
    auto g_at = [&](double dx, double dy, double dz) {
        return scalar_green({observation.x + dx, observation.y + dy, observation.z + dz}, source);
    };
    const double axis[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const Complex g0 = g_at(0, 0, 0);

    DyadicTensor t;
    for (int p = 0; p < 3; ++p) {
        for (int q = 0; q < 3; ++q) {
            Complex second_derivative;
            if (p == q) {
                second_derivative = (g_at(h * axis[p][0], h * axis[p][1], h * axis[p][2]) - 2.0 * g0 +
                                     g_at(-h * axis[p][0], -h * axis[p][1], -h * axis[p][2])) /
                                    (h * h);
            } else {
                auto shifted = [&](double sp, double sq) {
                    return g_at(sp * h * axis[p][0] + sq * h * axis[q][0],
                                sp * h * axis[p][1] + sq * h * axis[q][1],
                                sp * h * axis[p][2] + sq * h * axis[q][2]);
                };
                second_derivative =
                    (shifted(1, 1) - shifted(1, -1) - shifted(-1, 1) + shifted(-1, -1)) / (4.0 * h * h);
            }
            t(p, q) = (p == q ? g0 : Complex(0.0)) + second_derivative / (k0 * k0);
        }
    }
    return t;
}

// Worst relative entry difference between two tensors, scaled by the larger
// tensor magnitude.
inline double max_relative_difference(const DyadicTensor& a, const DyadicTensor& b) {
    double worst = 0.0, scale = 0.0;
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) {
            worst = std::max(worst, std::abs(a(p, q) - b(p, q)));
            scale = std::max({scale, std::abs(a(p, q)), std::abs(b(p, q))});
        }
    return worst / scale;
}

// Explicit superposition sum: f_m = sum_n H(m,n) t_n.
inline Eigen::VectorXcd naive_matvec(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& t) {
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(h.rows());
    for (Eigen::Index m = 0; m < h.rows(); ++m)
        for (Eigen::Index n = 0; n < h.cols(); ++n)
            f(m) += h(m, n) * t(n);
    return f;
}

// Random point pair with separation in [min_r, max_r], reproducible.
inline std::pair<Vec3, Vec3> random_pair(std::mt19937& rng, double min_r, double max_r) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> radius(min_r, max_r);
    for (;;) {
        Vec3 direction{unit(rng), unit(rng), unit(rng)};
        const double len = norm(direction);
        if (len < 1e-3 || len > 1.0) continue;
        const double r = radius(rng);
        Vec3 base{unit(rng), unit(rng), unit(rng)};
        Vec3 offset{direction.x / len * r, direction.y / len * r, direction.z / len * r};
        return {base + offset, base};
    }
}

// Random complex matrix with entries in the unit square, reproducible.
inline Eigen::MatrixXcd random_complex_matrix(std::mt19937& rng, Eigen::Index rows, Eigen::Index cols) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = Complex(unit(rng), unit(rng));
    return m;
}

} // namespace emdof::testing

#endif // EMDOF_TESTS_ORACLES_HPP
