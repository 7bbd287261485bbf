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

#include <cstdint>
#include <span>
#include <vector>

namespace mcc {

/// Time-frequency resource layout: k subbands of M subcarriers each.
struct GridDims
{
    int k = 17;
    int M = 24;

    int N() const { return k * M; }

    /// Throws std::invalid_argument unless k >= 1 and M >= 1.
    void check() const;
};

/// One period of a hopped pilot allocation on the k x k grid.
///
/// Slot t activates subband schedule[t]. Both indices are 0-based. The
/// binary incidence matrix X has X[f][t] == 1 exactly when schedule[t] == f.
struct PilotPattern
{
    int k = 0;
    std::vector<int> schedule;
    bool is_permutation = false;

    int operator[](int t) const { return schedule[static_cast<std::size_t>(t)]; }

    friend bool operator==(const PilotPattern&, const PilotPattern&) = default;
};

/// Checks the one-subband-per-slot constraint and, when requested, that every
/// subband is visited once. Recomputes `pattern.is_permutation` in place.
bool validate(PilotPattern& pattern, bool require_permutation);

/// Builds a pattern from a schedule; throws std::invalid_argument when an
/// entry falls outside {0, ..., k-1}.
PilotPattern make_pattern(std::vector<int> schedule);

/// Regular block hopping. Odd k: f0 + t*floor(k/2); even k: the interleaved
/// progression f0 + floor(t/2) + (k/2)*(t mod 2). All mod k.
PilotPattern baseline_3gpp(int k, int f0 = 0);

/// Quadratic trajectory t^2 mod k. Not a permutation for odd prime k.
PilotPattern baseline_chirp(int k);

/// Uniform random permutation, reproducible for a fixed seed.
PilotPattern baseline_random(int k, std::uint64_t seed);

/// schedule'[t] = schedule[(t + s) mod k].
PilotPattern cyclic_shift(const PilotPattern& pattern, int s);

/// Row-major k x k incidence matrix, entry (f, t) at index f*k + t.
std::vector<std::uint8_t> to_incidence(const PilotPattern& pattern);

/// Inverse of to_incidence; throws unless each column holds exactly one 1.
PilotPattern from_incidence(int k, std::span<const std::uint8_t> incidence);

/// Reduces x into {0, ..., m-1} for any sign of x.
inline int mod(long long x, int m)
{
    const long long r = x % m;
    return static_cast<int>(r < 0 ? r + m : r);
}

} // namespace mcc
