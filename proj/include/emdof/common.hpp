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

#ifndef EMDOF_COMMON_HPP
#define EMDOF_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace emdof {

inline constexpr const char* version = "0.1.0";

// All lengths are dimensionless multiples of the free-space wavelength
// (lambda0 = 1), so the wavenumber is fixed.
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double k0 = 2.0 * pi;

// Pairs closer than this raise singularity_error instead of producing a
// huge Green's-function value that would silently destroy the spectrum.
inline constexpr double default_singularity_floor = 1e-9;

// Relative eigenvalue threshold defining "significant" for the DOF count.
inline constexpr double default_dof_threshold = 1e-2;

using Complex = std::complex<double>;

class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Bad parameter values (rejected preconditions, malformed inputs).
class invalid_argument_error : public error {
  public:
    using error::error;
};

// Config-file validation failure; `field()` is the offending field path.
class config_error : public invalid_argument_error {
  public:
    config_error(std::string field_path, const std::string& message)
        : invalid_argument_error(field_path + ": " + message), field_path_(std::move(field_path)) {}
    const std::string& field() const noexcept { return field_path_; }

  private:
    std::string field_path_;
};

// Coincident (or near-coincident) source/observation points.
class singularity_error : public error {
  public:
    using error::error;
};

// Shape mismatch between operands.
class dimension_error : public error {
  public:
    using error::error;
};

// Eigensolver failure or a violated numerical-accuracy contract.
class solver_error : public error {
  public:
    using error::error;
};

// File-system failure; message carries the path involved.
class io_error : public error {
  public:
    using error::error;
};

} // namespace emdof

#endif // EMDOF_COMMON_HPP
