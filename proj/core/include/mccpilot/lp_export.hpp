// SPDX-License-Identifier: Apache-2.0
//
// mccpilot: pilot pattern design and delay-Doppler channel recovery
// Copyright (C) 2026 The mccpilot authors
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

#pragma once

#include "mccpilot/solver.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>

namespace mcc {

struct LpModelStats
{
    std::size_t assignment_vars = 0; ///< X: k*k pilot indicators
    std::size_t link_vars = 0;       ///< E: cell-to-pilot links with cost <= radius
    std::size_t line_vars = 0;       ///< Z: one per modular line
    std::size_t constraints = 0;
    int radius = 0;

    std::size_t variables() const { return assignment_vars + link_vars + line_vars; }
};

/// Writes the integrated 0-1 model in CPLEX LP text format.
///
/// Variables: x_f_t (pilot at subband f, slot t), e_f_t_g_s (cell (f,t)
/// served by pilot (g,s), only created when the cost is within `radius`),
/// z_l (line l may hold a redundant triple). Objective: sum of cost * e.
/// Rows: cover_*, link_*, slot_*, band_*, line_*, budget, sym_*.
LpModelStats write_lp(const SolverConfig& config, int radius, std::ostream& out);

/// Computes r_k unless config.radius_cap is set, then writes `path`,
/// creating parent directories.
/// Throws std::runtime_error on I/O failure.
LpModelStats export_lp(const SolverConfig& config, const std::filesystem::path& path);

} // namespace mcc
