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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace oracle {

void for_each_permutation(int k, const std::function<void(const Schedule&)>& fn)
{
    Schedule s(static_cast<std::size_t>(k));
    std::iota(s.begin(), s.end(), 0);
    do {
        fn(s);
    } while (std::next_permutation(s.begin(), s.end()));
}

std::vector<int> nearest_distances(const Schedule& sched)
{
    const int k = static_cast<int>(sched.size());
    std::vector<int> a(static_cast<std::size_t>(k * k), std::numeric_limits<int>::max());
    for (int f = 0; f < k; ++f)
        for (int t = 0; t < k; ++t)
            for (int s = 0; s < k; ++s) {
                const int c = std::abs(f - sched[static_cast<std::size_t>(s)]) + ((t - s) % k + k) % k;
                auto& cell = a[static_cast<std::size_t>(f * k + t)];
                cell = std::min(cell, c);
            }
    return a;
}

int radius(const Schedule& sched)
{
    const auto a = nearest_distances(sched);
    return *std::max_element(a.begin(), a.end());
}

long long total(const Schedule& sched)
{
    const auto a = nearest_distances(sched);
    return std::accumulate(a.begin(), a.end(), 0LL);
}

std::set<std::vector<int>> lines(int k)
{
    std::set<std::vector<int>> out;
    for (int u = 0; u < k; ++u)
        for (int v = 0; v < k; ++v) {
            if (std::gcd(std::gcd(u, v), k) != 1)
                continue;
            for (int c = 0; c < k; ++c) {
                std::vector<int> pts;
                for (int f = 0; f < k; ++f)
                    for (int t = 0; t < k; ++t)
                        if ((u * f + v * t - c) % k == 0)
                            pts.push_back(f * k + t);
                out.insert(pts);
            }
        }
    return out;
}

std::vector<int> line_counts(const Schedule& sched, const std::set<std::vector<int>>& ls)
{
    const int k = static_cast<int>(sched.size());
    std::vector<int> counts;
    for (const auto& line : ls) {
        int n = 0;
        for (int t = 0; t < k; ++t)
            n += std::binary_search(line.begin(), line.end(), sched[static_cast<std::size_t>(t)] * k + t) ? 1 : 0;
        counts.push_back(n);
    }
    return counts;
}

int symmetric_triple_count(const Schedule& sched, const std::set<std::vector<int>>& ls)
{
    const int k = static_cast<int>(sched.size());
    int count = 0;
    for (const auto& line : ls) {
        std::vector<int> f_on;
        for (int t = 0; t < k; ++t)
            if (std::binary_search(line.begin(), line.end(), sched[static_cast<std::size_t>(t)] * k + t))
                f_on.push_back(sched[static_cast<std::size_t>(t)]);
        const std::size_t n = f_on.size();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                for (std::size_t c = b + 1; c < n; ++c) {
                    int f[3] = {f_on[a], f_on[b], f_on[c]};
                    std::sort(f, f + 3);
                    if (f[1] - f[0] >= 1 && f[1] - f[0] == f[2] - f[1])
                        ++count;
                }
    }
    return count;
}

double coherence_sq(const Schedule& sched, int i, int j)
{
    const int k = static_cast<int>(sched.size());
    std::complex<double> s = 0.0;
    for (int t = 0; t < k; ++t) {
        const double ph = 2.0 * std::numbers::pi * (sched[static_cast<std::size_t>(t)] * i + t * j) / k;
        s += std::polar(1.0, ph);
    }
    return std::norm(s) / (static_cast<double>(k) * k);
}

double coherence_sq_pairs(const Schedule& sched, int i, int j)
{
    const int k = static_cast<int>(sched.size());
    double s = 0.0;
    for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q) {
            const int df = sched[static_cast<std::size_t>(p)] - sched[static_cast<std::size_t>(q)];
            const int dt = p - q;
            s += std::cos(2.0 * std::numbers::pi * (df * i + dt * j) / k);
        }
    return s / (static_cast<double>(k) * k);
}

double dft_ambiguity(int M, int k, int d, double tau, double nu)
{
    std::complex<double> s = 0.0;
    for (int t = 0; t < k; ++t) {
        const int f = (d * t) % k;
        for (int m = 0; m < M; ++m) {
            const int n = f * M + m;
            s += std::polar(1.0, 2.0 * std::numbers::pi * (n * tau - t * nu));
        }
    }
    return std::abs(s) / (static_cast<double>(M) * k);
}

bool admissible(const Schedule& sched, const Constraints& c, const std::set<std::vector<int>>& ls)
{
    if (c.radius_cap && radius(sched) > *c.radius_cap)
        return false;
    if (c.collinearity) {
        int redundant = 0;
        for (const int n : line_counts(sched, ls)) {
            if (c.forbid_four && n > 3)
                return false;
            if (n >= 3)
                ++redundant;
        }
        if (redundant > c.budget)
            return false;
    }
    if (c.symmetric_exclusion && symmetric_triple_count(sched, ls) > 0)
        return false;
    return true;
}

ExhaustiveResult exhaustive_min_total(int k, const Constraints& c)
{
    const auto ls = lines(k);
    ExhaustiveResult res;
    for_each_permutation(k, [&](const Schedule& s) {
        if (!admissible(s, c, ls))
            return;
        const long long tot = total(s);
        if (!res.feasible || tot < res.objective) {
            res.feasible = true;
            res.objective = tot;
            res.best = s;
        }
    });
    return res;
}

int exhaustive_min_radius(int k)
{
    int best = std::numeric_limits<int>::max();
    for_each_permutation(k, [&](const Schedule& s) { best = std::min(best, radius(s)); });
    return best;
}

int exhaustive_min_redundant(int k)
{
    const auto ls = lines(k);
    int best = -1;
    for_each_permutation(k, [&](const Schedule& s) {
        if (symmetric_triple_count(s, ls) > 0)
            return;
        int redundant = 0;
        for (const int n : line_counts(s, ls)) {
            if (n > 3)
                return;
            if (n == 3)
                ++redundant;
        }
        if (best < 0 || redundant < best)
            best = redundant;
    });
    return best;
}

} // namespace oracle
