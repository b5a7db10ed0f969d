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
// MIMO channel matrix assembly. Block layout is polarization-major,
// position-minor: row (p, m) = p*N_R + m, column (q, n) = q*N_S + n, with
// polarizations ordered as listed in the mode masks (canonically x, y, z).

#ifndef EMDOF_CHANNEL_HPP
#define EMDOF_CHANNEL_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"
#include "green.hpp"

namespace emdof {

enum class Axis : int { X = 0, Y = 1, Z = 2 };

inline char to_char(Axis a) { return a == Axis::X ? 'x' : (a == Axis::Y ? 'y' : 'z'); }

inline std::string axes_string(const std::vector<Axis>& axes) {
    std::string s;
    for (Axis a : axes) s.push_back(to_char(a));
    return s;
}

// Parses a polarization subset like "x", "xy", "xyz". Canonical order is
// x < y < z; duplicates and other characters are rejected.
inline std::vector<Axis> parse_axes(const std::string& text) {
    std::vector<Axis> out;
    for (char c : text) {
        Axis a;
        switch (c) {
        case 'x': a = Axis::X; break;
        case 'y': a = Axis::Y; break;
        case 'z': a = Axis::Z; break;
        default:
            throw invalid_argument_error("polarization mask '" + text + "': unknown axis '" +
                                         std::string(1, c) + "'");
        }
        if (!out.empty() && static_cast<int>(a) <= static_cast<int>(out.back()))
            throw invalid_argument_error("polarization mask '" + text +
                                         "' must list distinct axes in x,y,z order");
        out.push_back(a);
    }
    if (out.empty())
        throw invalid_argument_error("polarization mask must not be empty");
    return out;
}

// Which Cartesian polarizations participate on each side, and through which
// kernel. Transverse-only studies are realized by masking source columns of
// the full dyadic tensor (the entries kept are exact, not approximated);
// the far-field projector is a separate kind for far-field comparisons.
struct PolarizationMode {
    std::vector<Axis> source_axes;
    std::vector<Axis> receiver_axes;
    GreensKind kind = GreensKind::Scalar;

    static PolarizationMode scalar() { return {{Axis::X}, {Axis::X}, GreensKind::Scalar}; }
    static PolarizationMode dyadic_full() {
        return {{Axis::X, Axis::Y, Axis::Z}, {Axis::X, Axis::Y, Axis::Z}, GreensKind::DyadicFull};
    }
    static PolarizationMode dyadic(const std::string& source, const std::string& receiver) {
        return {parse_axes(source), parse_axes(receiver), GreensKind::DyadicFull};
    }

    std::string label() const {
        return std::string(to_string(kind)) + ":" + axes_string(source_axes) + "->" + axes_string(receiver_axes);
    }

    friend bool operator==(const PolarizationMode& a, const PolarizationMode& b) {
        return a.kind == b.kind && a.source_axes == b.source_axes && a.receiver_axes == b.receiver_axes;
    }
};

inline void validate(const PolarizationMode& mode) {
    auto check_mask = [](const std::vector<Axis>& axes, const char* side) {
        if (axes.empty())
            throw invalid_argument_error(std::string("PolarizationMode: empty ") + side + " mask");
        for (std::size_t i = 1; i < axes.size(); ++i)
            if (static_cast<int>(axes[i]) <= static_cast<int>(axes[i - 1]))
                throw invalid_argument_error(std::string("PolarizationMode: ") + side +
                                             " mask must list distinct axes in x,y,z order");
    };
    check_mask(mode.source_axes, "source");
    check_mask(mode.receiver_axes, "receiver");
    if (mode.kind == GreensKind::Scalar &&
        (mode.source_axes.size() != 1 || mode.receiver_axes.size() != 1))
        throw invalid_argument_error("PolarizationMode: scalar kind requires singleton masks");
}

// Complex matrix coupling source amplitudes to received field amplitudes.
struct ChannelMatrix {
    Eigen::MatrixXcd entries; // (|receiver_mask| * N_R) x (|source_mask| * N_S)
    PolarizationMode mode;
    std::size_t source_count = 0;
    std::size_t receiver_count = 0;
    std::string source_label;
    std::string receiver_label;
};

// Entry ((p,m),(q,n)) = component (p,q) of the selected kernel between
// receiver element m and source element n. Entries are evaluated
// independently, so the result is identical regardless of evaluation order.
inline ChannelMatrix assemble_channel(const ArrayGeometry& sources, const ArrayGeometry& receivers,
                                      const PolarizationMode& mode,
                                      double floor = default_singularity_floor) {
    validate(mode);
    if (sources.elements.empty() || receivers.elements.empty())
        throw invalid_argument_error("assemble_channel: empty geometry");
    if (!(min_cross_separation(sources, receivers) > floor))
        throw singularity_error("assemble_channel: source/receiver arrays contain a cross pair at or "
                                "below the singularity floor " +
                                std::to_string(floor));

    const std::size_t n_src = sources.size();
    const std::size_t n_rx = receivers.size();
    ChannelMatrix out;
    out.mode = mode;
    out.source_count = n_src;
    out.receiver_count = n_rx;
    out.source_label = sources.label;
    out.receiver_label = receivers.label;

    if (mode.kind == GreensKind::Scalar) {
        out.entries.resize(static_cast<Eigen::Index>(n_rx), static_cast<Eigen::Index>(n_src));
        for (std::size_t m = 0; m < n_rx; ++m)
            for (std::size_t n = 0; n < n_src; ++n)
                out.entries(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
                    scalar_green(receivers.elements[m], sources.elements[n], floor);
        return out;
    }

    const std::size_t n_rp = mode.receiver_axes.size();
    const std::size_t n_sp = mode.source_axes.size();
    out.entries.resize(static_cast<Eigen::Index>(n_rp * n_rx), static_cast<Eigen::Index>(n_sp * n_src));
    for (std::size_t m = 0; m < n_rx; ++m) {
        for (std::size_t n = 0; n < n_src; ++n) {
            const DyadicTensor t = (mode.kind == GreensKind::DyadicFull)
                                       ? dyadic_green(receivers.elements[m], sources.elements[n], floor)
                                       : farfield_projector_green(receivers.elements[m], sources.elements[n], floor);
            for (std::size_t pi = 0; pi < n_rp; ++pi)
                for (std::size_t qi = 0; qi < n_sp; ++qi)
                    out.entries(static_cast<Eigen::Index>(pi * n_rx + m),
                                static_cast<Eigen::Index>(qi * n_src + n)) =
                        t(static_cast<int>(mode.receiver_axes[pi]), static_cast<int>(mode.source_axes[qi]));
        }
    }
    return out;
}

// f = H t: the superposition of all source contributions at each receiver.
inline Eigen::VectorXcd apply_channel(const ChannelMatrix& channel, const Eigen::VectorXcd& amplitudes) {
    if (amplitudes.size() != channel.entries.cols())
        throw dimension_error("apply_channel: amplitude vector has length " +
                              std::to_string(amplitudes.size()) + ", channel expects " +
                              std::to_string(channel.entries.cols()));
    return channel.entries * amplitudes;
}

enum class CorrelationSide {
    HHdagger, // R = H H^dagger  (receive side)
    HdaggerH, // R = H^dagger H  (transmit side)
};

inline const char* to_string(CorrelationSide side) {
    return side == CorrelationSide::HHdagger ? "H*Hdagger" : "Hdagger*H";
}

// Hermitian PSD correlation matrix; both sides share the same nonzero
// eigenvalues, so the smaller product is formed.
struct CorrelationMatrix {
    Eigen::MatrixXcd entries;
    CorrelationSide side_used = CorrelationSide::HdaggerH;
    double symmetrization_defect = 0.0; // max |R - R^dagger| relative, before symmetrizing
};

inline CorrelationMatrix correlation(const Eigen::MatrixXcd& h) {
    CorrelationMatrix out;
    if (h.rows() < h.cols()) {
        out.side_used = CorrelationSide::HHdagger;
        out.entries = h * h.adjoint();
    } else {
        out.side_used = CorrelationSide::HdaggerH;
        out.entries = h.adjoint() * h;
    }
    // Symmetrize to protect the Hermitian eigensolver from accumulated
    // floating-point drift; the correction must be negligible.
    const Eigen::MatrixXcd adj = out.entries.adjoint();
    const double scale = out.entries.cwiseAbs().maxCoeff();
    const double defect = (out.entries - adj).cwiseAbs().maxCoeff();
    out.symmetrization_defect = scale > 0.0 ? defect / scale : 0.0;
    if (out.symmetrization_defect > 1e-12)
        throw solver_error("correlation: Hermitian defect " + std::to_string(out.symmetrization_defect) +
                           " exceeds 1e-12 relative");
    out.entries = (out.entries + adj) / 2.0;
    return out;
}

inline CorrelationMatrix correlation(const ChannelMatrix& channel) {
    return correlation(channel.entries);
}

// --- channel matrix container -------------------------------------------
//
// Cross-implementation dump format "EMDOF-MATRIX 1":
//   line 1: "EMDOF-MATRIX 1"
//   line 2: single-line JSON-style header written by this library:
//           rows, cols, source/receiver counts and masks, kind, layout tag,
//           lambda0 convention
//   body:   rows*cols complex entries, row-major, each as two IEEE-754
//           doubles (re, im), little-endian.

inline void write_channel_matrix(const ChannelMatrix& channel, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("write_channel_matrix: cannot open '" + path.string() + "' for writing");
    out << "EMDOF-MATRIX 1\n";
    out << "{\"rows\":" << channel.entries.rows() << ",\"cols\":" << channel.entries.cols()
        << ",\"sources\":" << channel.source_count << ",\"receivers\":" << channel.receiver_count
        << ",\"source_mask\":\"" << axes_string(channel.mode.source_axes) << "\""
        << ",\"receiver_mask\":\"" << axes_string(channel.mode.receiver_axes) << "\""
        << ",\"kind\":\"" << to_string(channel.mode.kind) << "\""
        << ",\"layout\":\"polarization-major\",\"lambda0\":1.0,\"phase\":\"exp(-j*k0*R)\"}\n";
    for (Eigen::Index r = 0; r < channel.entries.rows(); ++r)
        for (Eigen::Index c = 0; c < channel.entries.cols(); ++c) {
            const Complex v = channel.entries(r, c);
            const double buf[2] = {v.real(), v.imag()};
            out.write(reinterpret_cast<const char*>(buf), sizeof(buf));
        }
    if (!out)
        throw io_error("write_channel_matrix: write failed for '" + path.string() + "'");
}

inline ChannelMatrix read_channel_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("read_channel_matrix: cannot open '" + path.string() + "'");
    std::string magic, header;
    std::getline(in, magic);
    std::getline(in, header);
    if (magic != "EMDOF-MATRIX 1")
        throw io_error("read_channel_matrix: '" + path.string() + "' is not an EMDOF-MATRIX 1 file");

    auto field = [&header, &path](const std::string& key) -> std::string {
        const std::string needle = "\"" + key + "\":";
        const std::size_t at = header.find(needle);
        if (at == std::string::npos)
            throw io_error("read_channel_matrix: header of '" + path.string() + "' lacks field '" + key + "'");
        std::size_t begin = at + needle.size();
        bool quoted = header[begin] == '"';
        if (quoted) ++begin;
        std::size_t end = begin;
        while (end < header.size() && (quoted ? header[end] != '"' : (header[end] != ',' && header[end] != '}')))
            ++end;
        return header.substr(begin, end - begin);
    };

    ChannelMatrix out;
    const auto rows = static_cast<Eigen::Index>(std::stoll(field("rows")));
    const auto cols = static_cast<Eigen::Index>(std::stoll(field("cols")));
    out.source_count = static_cast<std::size_t>(std::stoull(field("sources")));
    out.receiver_count = static_cast<std::size_t>(std::stoull(field("receivers")));
    out.mode.source_axes = parse_axes(field("source_mask"));
    out.mode.receiver_axes = parse_axes(field("receiver_mask"));
    const std::string kind = field("kind");
    if (kind == "scalar")
        out.mode.kind = GreensKind::Scalar;
    else if (kind == "dyadic_full")
        out.mode.kind = GreensKind::DyadicFull;
    else if (kind == "dyadic_farfield_projector")
        out.mode.kind = GreensKind::DyadicFarfieldProjector;
    else
        throw io_error("read_channel_matrix: unknown kind '" + kind + "' in '" + path.string() + "'");

    out.entries.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            double buf[2];
            in.read(reinterpret_cast<char*>(buf), sizeof(buf));
            if (!in)
                throw io_error("read_channel_matrix: '" + path.string() + "' is truncated");
            out.entries(r, c) = Complex(buf[0], buf[1]);
        }
    return out;
}

} // namespace emdof

#endif // EMDOF_CHANNEL_HPP
