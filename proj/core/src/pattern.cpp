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

#include "mccpilot/pattern.hpp"

#include "mccpilot/rng.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace mcc {

void GridDims::check() const
{
    if (k < 1 || M < 1)
        throw std::invalid_argument("GridDims: k and M must be positive (k=" + std::to_string(k) +
                                    ", M=" + std::to_string(M) + ")");
}

bool validate(PilotPattern& pattern, bool require_permutation)
{
    const int k = pattern.k;
    if (k < 1 || pattern.schedule.size() != static_cast<std::size_t>(k)) {
        pattern.is_permutation = false;
        return false;
    }
    std::vector<int> visits(static_cast<std::size_t>(k), 0);
    bool columns_ok = true;
    for (const int f : pattern.schedule) {
        if (f < 0 || f >= k) {
            columns_ok = false;
            continue;
        }
        ++visits[static_cast<std::size_t>(f)];
    }
    pattern.is_permutation =
        columns_ok && std::all_of(visits.begin(), visits.end(), [](int v) { return v == 1; });
    return columns_ok && (!require_permutation || pattern.is_permutation);
}

PilotPattern make_pattern(std::vector<int> schedule)
{
    PilotPattern p;
    p.k = static_cast<int>(schedule.size());
    p.schedule = std::move(schedule);
    if (!validate(p, false))
        throw std::invalid_argument("make_pattern: schedule entries must lie in [0, k)");
    return p;
}

PilotPattern baseline_3gpp(int k, int f0)
{
    if (k < 2)
        throw std::invalid_argument("baseline_3gpp: k must be >= 2");
    std::vector<int> s(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) {
        const long long f = (k % 2 == 1) ? static_cast<long long>(f0) + static_cast<long long>(t) * (k / 2)
                                         : static_cast<long long>(f0) + t / 2 + (k / 2) * (t % 2);
        s[static_cast<std::size_t>(t)] = mod(f, k);
    }
    return make_pattern(std::move(s));
}

PilotPattern baseline_chirp(int k)
{
    if (k < 2)
        throw std::invalid_argument("baseline_chirp: k must be >= 2");
    std::vector<int> s(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t)
        s[static_cast<std::size_t>(t)] = mod(static_cast<long long>(t) * t, k);
    return make_pattern(std::move(s));
}

PilotPattern baseline_random(int k, std::uint64_t seed)
{
    if (k < 1)
        throw std::invalid_argument("baseline_random: k must be >= 1");
    std::vector<int> s(static_cast<std::size_t>(k));
    std::iota(s.begin(), s.end(), 0);
    Rng rng(derive_seed(seed, {0x72616e64ULL, static_cast<std::uint64_t>(k)}));
    // Fisher-Yates with our own unbiased index draw
    for (std::size_t i = s.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(s[i - 1], s[j]);
    }
    return make_pattern(std::move(s));
}

PilotPattern cyclic_shift(const PilotPattern& pattern, int s)
{
    const int k = pattern.k;
    PilotPattern out = pattern;
    for (int t = 0; t < k; ++t)
        out.schedule[static_cast<std::size_t>(t)] = pattern[mod(static_cast<long long>(t) + s, k)];
    return out;
}

std::vector<std::uint8_t> to_incidence(const PilotPattern& pattern)
{
    const int k = pattern.k;
    std::vector<std::uint8_t> x(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0);
    for (int t = 0; t < k; ++t)
        x[static_cast<std::size_t>(pattern[t] * k + t)] = 1;
    return x;
}

PilotPattern from_incidence(int k, std::span<const std::uint8_t> incidence)
{
    if (k < 1 || incidence.size() != static_cast<std::size_t>(k) * static_cast<std::size_t>(k))
        throw std::invalid_argument("from_incidence: expected a k x k matrix");
    std::vector<int> s(static_cast<std::size_t>(k), -1);
    for (int t = 0; t < k; ++t) {
        int ones = 0;
        for (int f = 0; f < k; ++f) {
            if (incidence[static_cast<std::size_t>(f * k + t)] != 0) {
                ++ones;
                s[static_cast<std::size_t>(t)] = f;
            }
        }
        if (ones != 1)
            throw std::invalid_argument("from_incidence: column " + std::to_string(t) +
                                        " must hold exactly one pilot");
    }
    return make_pattern(std::move(s));
}

} // namespace mcc
