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

#ifndef EMDOF_EMDOF_HPP
#define EMDOF_EMDOF_HPP

#include "common.hpp"
#include "geometry.hpp"
#include "green.hpp"
#include "channel.hpp"
#include "spectra.hpp"
#include "sweep.hpp"
#include "config.hpp"
#include "results_io.hpp"

#endif // EMDOF_EMDOF_HPP
