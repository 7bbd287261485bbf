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

#include "mccpilot/pattern.hpp"

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace mcc {

/// Grid point (subband f, slot t).
struct Cell
{
    int f = 0;
    int t = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Cost of serving grid point (f, t) from a pilot at (f2, t2):
/// |f - f2| + ((t - t2) mod k). Frequency distance is plain, time distance
/// only looks backwards (a pilot serves the current slot and later slots,
/// wrapping around the period). Throws std::out_of_range on bad indices.
int metric_cost(int f, int t, int f2, int t2, int k);

struct CoverageReport
{
    int k = 0;
    std::vector<int> a; ///< nearest-pilot distance, entry (f, t) at f*k + t
    int radius = 0;
    long long total = 0;

    int at(int f, int t) const { return a[static_cast<std::size_t>(f * k + t)]; }
};

CoverageReport coverage(const PilotPattern& pattern);

/// Point set {(f, t) : u*f + v*t == c (mod k)} for a primitive direction.
struct ModularLine
{
    int u = 0;
    int v = 0;
    int c = 0;
    std::vector<int> points; ///< sorted cell ids f*k + t, exactly k of them
};

/// All distinct modular lines of the k x k torus plus a point-to-line index.
/// Lines are deduplicated by their point sets, which stays correct for
/// composite k where coefficient normalisation is ambiguous.
struct LineSet
{
    int k = 0;
    std::vector<ModularLine> lines;
    std::vector<std::vector<int>> through; ///< through[f*k + t] = ids of lines holding the cell

    std::size_t size() const { return lines.size(); }
};

std::vector<ModularLine> enumerate_modular_lines(int k);

/// Shared, immutable line set for k; built once per k and then read-only.
std::shared_ptr<const LineSet> modular_lines(int k);

struct CollinearityCensus
{
    std::vector<int> counts;  ///< pilots per line, indexed like LineSet::lines
    int redundant_lines = 0;  ///< lines holding >= 3 pilots
    bool has_four_collinear = false;
    int max_count = 0;
};

CollinearityCensus collinearity_census(const PilotPattern& pattern, const LineSet& lines);

/// Three pilots on one modular line at subbands f-d, f, f+d (d >= 1).
struct SymmetricTriple
{
    int line = 0;
    int d = 0;
    Cell low;
    Cell mid;
    Cell high;
};

std::vector<SymmetricTriple> symmetric_triples(const PilotPattern& pattern, const LineSet& lines);

/// Squared virtual-domain correlation over all k x k offsets.
struct CoherenceMap
{
    int k = 0;
    std::vector<double> rho_sq; ///< entry (i, j) at i*k + j; i pairs with subband differences
    int pilot_count = 0;
    /// difference-class representative (df, dt) -> number of unordered pilot pairs
    std::map<std::pair<int, int>, int> multiplicities;
    double max_offpeak = 0.0; ///< max over (i, j) != (0, 0) of rho

    double at(int i, int j) const { return rho_sq[static_cast<std::size_t>(i * k + j)]; }
};

/// Pilot set P = {(schedule[t], t)}; throws std::invalid_argument if empty.
CoherenceMap coherence_map(const PilotPattern& pattern);

/// |sin(n*pi*x) / sin(pi*x)|, continued by its limit n at integer x.
double dirichlet_ratio(int n, double x);

/// Normalised DD-domain correlation magnitude of a uniformly hopped pattern
/// with hop increment d: (1/(Mk)) D_k(nu - d*M*tau) * D_M(tau).
double legacy_kernel(double tau, double nu, int M, int k, int d);

/// Strongest off-origin value of legacy_kernel, sin(pi/k) / (M sin(pi/(Mk))).
double kernel_peak(int M, int k);

/// Hop increment d if schedule[t+1] - schedule[t] is constant mod k.
std::optional<int> hop_increment(const PilotPattern& pattern);

} // namespace mcc
