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
// Eigenvalue spectra of correlation matrices and the derived figures of
// merit: EDOF, DOF, channel capacities and the paraxial mode estimate.

#ifndef EMDOF_SPECTRA_HPP
#define EMDOF_SPECTRA_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "channel.hpp"
#include "common.hpp"

namespace emdof {

// Eigenvalues of a Hermitian PSD correlation matrix, sorted descending,
// negative roundoff clamped to zero.
struct Spectrum {
    std::vector<double> eigenvalues;
    std::size_t matrix_dimension = 0;

    double sum() const { return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0); }
    double sum_squares() const {
        double q = 0.0;
        for (double v : eigenvalues) q += v * v;
        return q;
    }
};

// Dense Hermitian eigenvalues with the accuracy contract enforced on every
// call: sum(sigma) = tr(R) and sum(sigma^2) = |R|_F^2, both to 1e-9
// relative. Negative roundoff eigenvalues are clamped to zero; a clamp
// larger than 1e-10 * sigma_max means the input was not PSD.
inline Spectrum hermitian_eigenvalues(const Eigen::MatrixXcd& r) {
    if (r.rows() != r.cols())
        throw dimension_error("hermitian_eigenvalues: matrix is " + std::to_string(r.rows()) + "x" +
                              std::to_string(r.cols()) + ", expected square");
    if (!r.allFinite())
        throw invalid_argument_error("hermitian_eigenvalues: matrix contains non-finite entries");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(r, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw solver_error("hermitian_eigenvalues: eigensolver failed to converge on a " +
                           std::to_string(r.rows()) + "x" + std::to_string(r.cols()) +
                           " matrix (backend info code " + std::to_string(solver.info()) + ")");

    Spectrum out;
    out.matrix_dimension = static_cast<std::size_t>(r.rows());
    out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + r.rows());
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<double>());

    const double largest = out.eigenvalues.empty() ? 0.0 : std::max(out.eigenvalues.front(), 0.0);
    for (double& v : out.eigenvalues) {
        if (v < 0.0) {
            if (-v > 1e-10 * largest)
                throw solver_error("hermitian_eigenvalues: eigenvalue " + std::to_string(v) +
                                   " is negative beyond roundoff (matrix is not PSD)");
            v = 0.0;
        }
    }

    const double trace = r.trace().real();
    const double frob2 = r.squaredNorm();
    const double sum = out.sum();
    const double sum2 = out.sum_squares();
    if (std::abs(sum - trace) > 1e-9 * std::max(std::abs(trace), 1e-300) ||
        std::abs(sum2 - frob2) > 1e-9 * std::max(frob2, 1e-300))
        throw solver_error("hermitian_eigenvalues: trace/Frobenius contract violated (sum " +
                           std::to_string(sum) + " vs trace " + std::to_string(trace) + ", sum2 " +
                           std::to_string(sum2) + " vs |R|_F^2 " + std::to_string(frob2) + ")");
    return out;
}

inline Spectrum hermitian_eigenvalues(const CorrelationMatrix& r) {
    return hermitian_eigenvalues(r.entries);
}

// EDOF = (sum sigma)^2 / sum sigma^2: the equivalent number of independent
// SISO channels. Scale-invariant; lies in [1, #positive eigenvalues].
inline double edof(const Spectrum& spectrum) {
    const double s = spectrum.sum();
    const double q = spectrum.sum_squares();
    if (!(q > 0.0))
        throw invalid_argument_error("edof: spectrum has no strictly positive eigenvalue");
    return s * s / q;
}

// Same quantity as tr(R)^2 / |R|_F^2 without an eigendecomposition.
inline double edof_from_matrix(const Eigen::MatrixXcd& r) {
    if (r.rows() != r.cols())
        throw dimension_error("edof_from_matrix: matrix must be square");
    const double trace = r.trace().real();
    const double frob2 = r.squaredNorm();
    if (!(frob2 > 0.0))
        throw invalid_argument_error("edof_from_matrix: zero matrix");
    return trace * trace / frob2;
}

inline double edof_from_matrix(const CorrelationMatrix& r) { return edof_from_matrix(r.entries); }

// Count of significant eigenvalues: sigma_i >= threshold * sigma_max.
// A zero spectrum has no significant modes.
inline std::size_t dof(const Spectrum& spectrum, double threshold = default_dof_threshold) {
    if (spectrum.eigenvalues.empty())
        throw invalid_argument_error("dof: empty spectrum");
    if (!(threshold > 0.0) || !(threshold < 1.0))
        throw invalid_argument_error("dof: threshold must lie in (0, 1), got " + std::to_string(threshold));
    const double cutoff = threshold * spectrum.eigenvalues.front();
    if (!(cutoff > 0.0)) return 0;
    std::size_t count = 0;
    for (double v : spectrum.eigenvalues) {
        if (v >= cutoff) ++count;
        else break; // sorted descending
    }
    return count;
}

// Capacity with power split equally over n subchannels:
// C = B * sum_{i=1..n} log2(1 + rho sigma_i / n).
inline double capacity_exact(const Spectrum& spectrum, double snr, double bandwidth, std::size_t rank) {
    if (!(snr >= 0.0))
        throw invalid_argument_error("capacity_exact: snr must be >= 0");
    if (!(bandwidth > 0.0))
        throw invalid_argument_error("capacity_exact: bandwidth must be > 0");
    if (rank < 1)
        throw invalid_argument_error("capacity_exact: rank must be >= 1");
    const double n = static_cast<double>(rank);
    const std::size_t terms = std::min(rank, spectrum.eigenvalues.size());
    double c = 0.0;
    for (std::size_t i = 0; i < terms; ++i)
        c += std::log1p(snr * spectrum.eigenvalues[i] / n);
    return bandwidth * c / std::numbers::ln2_v<double>;
}

// Ideal capacity with n identical unit subchannels: C = B n log2(1 + rho/n).
inline double capacity_ideal(std::size_t rank, double snr, double bandwidth) {
    if (rank < 1)
        throw invalid_argument_error("capacity_ideal: rank must be >= 1");
    if (!(snr >= 0.0))
        throw invalid_argument_error("capacity_ideal: snr must be >= 0");
    if (!(bandwidth > 0.0))
        throw invalid_argument_error("capacity_ideal: bandwidth must be > 0");
    const double n = static_cast<double>(rank);
    return bandwidth * n * std::log1p(snr / n) / std::numbers::ln2_v<double>;
}

// EDOF-approximated capacity: C ~ B psi log2(1 + rho/psi), psi in [1, n].
inline double capacity_edof(double effective_dof, double snr, double bandwidth) {
    if (!(effective_dof >= 1.0))
        throw invalid_argument_error("capacity_edof: EDOF must be >= 1, got " +
                                     std::to_string(effective_dof));
    if (!(snr >= 0.0))
        throw invalid_argument_error("capacity_edof: snr must be >= 0");
    if (!(bandwidth > 0.0))
        throw invalid_argument_error("capacity_edof: bandwidth must be > 0");
    return bandwidth * effective_dof * std::log1p(snr / effective_dof) / std::numbers::ln2_v<double>;
}

// Paraxial solid-angle mode-count estimate: psi = A_S A_R / D^2 (lambda0 = 1).
inline double paraxial_dof(double source_area, double receiver_area, double plane_distance) {
    if (!(source_area > 0.0) || !(receiver_area > 0.0) || !(plane_distance > 0.0))
        throw invalid_argument_error("paraxial_dof: areas and distance must be positive");
    return source_area * receiver_area / (plane_distance * plane_distance);
}

// Rescales the spectrum so the top `rank` eigenvalues have mean 1 (the
// receive-SNR convention: channel gain is absorbed into rho). Capacities in
// summaries and sweeps are computed on this scale, which makes the exact
// eigenvalue-sum capacity commensurable with the scale-free EDOF
// approximation. An ideal spectrum {1,...,1} is a fixed point.
inline Spectrum normalized_for_capacity(const Spectrum& spectrum, std::size_t rank) {
    const std::size_t terms = std::min(rank, spectrum.eigenvalues.size());
    double top = 0.0;
    for (std::size_t i = 0; i < terms; ++i) top += spectrum.eigenvalues[i];
    if (!(top > 0.0))
        throw invalid_argument_error("normalized_for_capacity: top eigenvalues sum to zero");
    Spectrum out = spectrum;
    const double scale = static_cast<double>(rank) / top;
    for (double& v : out.eigenvalues) v *= scale;
    return out;
}

// Everything derived from one correlation matrix.
struct SpectralSummary {
    Spectrum spectrum; // raw (unnormalized) eigenvalues
    double edof = 0.0;
    std::size_t dof = 0;
    double capacity_exact = 0.0;
    double capacity_edof = 0.0;
    std::size_t capacity_rank = 0; // the n used in the capacity formulas
    double snr = 0.0;              // linear
    double bandwidth = 0.0;
    double dof_threshold = 0.0;
};

inline SpectralSummary summarize(const CorrelationMatrix& r, double snr, double bandwidth,
                                 double threshold = default_dof_threshold,
                                 std::optional<std::size_t> rank_override = std::nullopt) {
    SpectralSummary out;
    out.spectrum = hermitian_eigenvalues(r);
    out.edof = edof(out.spectrum);
    out.dof = dof(out.spectrum, threshold);
    out.capacity_rank = rank_override.value_or(out.dof);
    out.snr = snr;
    out.bandwidth = bandwidth;
    out.dof_threshold = threshold;

    if (out.edof < 1.0 - 1e-9 || out.edof > static_cast<double>(out.dof) + 1e-9)
        throw solver_error("summarize: EDOF " + std::to_string(out.edof) +
                           " violates 1 <= EDOF <= DOF (DOF = " + std::to_string(out.dof) + ")");

    const Spectrum scaled = normalized_for_capacity(out.spectrum, out.capacity_rank);
    out.capacity_exact = capacity_exact(scaled, snr, bandwidth, out.capacity_rank);
    out.capacity_edof = capacity_edof(out.edof, snr, bandwidth);
    return out;
}

} // namespace emdof

#endif // EMDOF_SPECTRA_HPP
