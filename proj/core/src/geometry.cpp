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

#include "mccpilot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mcc {

namespace {

void require_valid(const PilotPattern& pattern, const char* who)
{
    PilotPattern copy = pattern;
    if (!validate(copy, false))
        throw std::invalid_argument(std::string(who) + ": pattern violates the one-subband-per-slot constraint");
}

} // namespace

int metric_cost(int f, int t, int f2, int t2, int k)
{
    const auto in_range = [k](int x) { return x >= 0 && x < k; };
    if (k < 1 || !in_range(f) || !in_range(t) || !in_range(f2) || !in_range(t2))
        throw std::out_of_range("metric_cost: index outside {0, ..., k-1}");
    return std::abs(f - f2) + mod(t - t2, k);
}

CoverageReport coverage(const PilotPattern& pattern)
{
    require_valid(pattern, "coverage");
    const int k = pattern.k;
    CoverageReport rep;
    rep.k = k;
    rep.a.assign(static_cast<std::size_t>(k * k), 0);
    for (int f = 0; f < k; ++f) {
        for (int t = 0; t < k; ++t) {
            int best = std::numeric_limits<int>::max();
            for (int tp = 0; tp < k; ++tp)
                best = std::min(best, metric_cost(f, t, pattern[tp], tp, k));
            rep.a[static_cast<std::size_t>(f * k + t)] = best;
            rep.radius = std::max(rep.radius, best);
            rep.total += best;
        }
    }
    return rep;
}

std::vector<ModularLine> enumerate_modular_lines(int k)
{
    if (k < 2)
        throw std::invalid_argument("enumerate_modular_lines: k must be >= 2");
    std::vector<ModularLine> lines;
    std::map<std::vector<int>, std::size_t> seen;
    for (int u = 0; u < k; ++u) {
        for (int v = 0; v < k; ++v) {
            if (std::gcd(std::gcd(u, v), k) != 1)
                continue;
            for (int c = 0; c < k; ++c) {
                std::vector<int> pts;
                pts.reserve(static_cast<std::size_t>(k));
                for (int f = 0; f < k; ++f)
                    for (int t = 0; t < k; ++t)
                        if (mod(static_cast<long long>(u) * f + static_cast<long long>(v) * t, k) == c)
                            pts.push_back(f * k + t);
                if (seen.contains(pts))
                    continue;
                seen.emplace(pts, lines.size());
                lines.push_back(ModularLine{u, v, c, std::move(pts)});
            }
        }
    }
    return lines;
}

std::shared_ptr<const LineSet> modular_lines(int k)
{
    static std::mutex guard;
    static std::map<int, std::shared_ptr<const LineSet>> cache;

    std::lock_guard lock(guard);
    if (auto it = cache.find(k); it != cache.end())
        return it->second;

    auto set = std::make_shared<LineSet>();
    set->k = k;
    set->lines = enumerate_modular_lines(k);
    set->through.assign(static_cast<std::size_t>(k * k), {});
    for (std::size_t id = 0; id < set->lines.size(); ++id)
        for (const int cell : set->lines[id].points)
            set->through[static_cast<std::size_t>(cell)].push_back(static_cast<int>(id));
    cache.emplace(k, set);
    return set;
}

CollinearityCensus collinearity_census(const PilotPattern& pattern, const LineSet& lines)
{
    require_valid(pattern, "collinearity_census");
    if (lines.k != pattern.k)
        throw std::invalid_argument("collinearity_census: line set built for a different k");
    const int k = pattern.k;
    CollinearityCensus census;
    census.counts.assign(lines.size(), 0);
    for (int t = 0; t < k; ++t)
        for (const int id : lines.through[static_cast<std::size_t>(pattern[t] * k + t)])
            ++census.counts[static_cast<std::size_t>(id)];
    for (const int c : census.counts) {
        census.max_count = std::max(census.max_count, c);
        if (c >= 3)
            ++census.redundant_lines;
        if (c >= 4)
            census.has_four_collinear = true;
    }
    return census;
}

std::vector<SymmetricTriple> symmetric_triples(const PilotPattern& pattern, const LineSet& lines)
{
    require_valid(pattern, "symmetric_triples");
    if (lines.k != pattern.k)
        throw std::invalid_argument("symmetric_triples: line set built for a different k");
    const int k = pattern.k;

    std::vector<std::vector<Cell>> on_line(lines.size());
    for (int t = 0; t < k; ++t)
        for (const int id : lines.through[static_cast<std::size_t>(pattern[t] * k + t)])
            on_line[static_cast<std::size_t>(id)].push_back(Cell{pattern[t], t});

    std::vector<SymmetricTriple> out;
    for (std::size_t id = 0; id < on_line.size(); ++id) {
        auto& pts = on_line[id];
        if (pts.size() < 3)
            continue;
        std::sort(pts.begin(), pts.end());
        for (std::size_t a = 0; a < pts.size(); ++a)
            for (std::size_t b = a + 1; b < pts.size(); ++b)
                for (std::size_t c = b + 1; c < pts.size(); ++c) {
                    const int d = pts[b].f - pts[a].f;
                    if (d >= 1 && pts[c].f - pts[b].f == d)
                        out.push_back(SymmetricTriple{static_cast<int>(id), d, pts[a], pts[b], pts[c]});
                }
    }
    return out;
}

CoherenceMap coherence_map(const PilotPattern& pattern)
{
    require_valid(pattern, "coherence_map");
    const int k = pattern.k;
    if (k < 1)
        throw std::invalid_argument("coherence_map: empty pilot set");

    CoherenceMap map;
    map.k = k;
    map.pilot_count = k;
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            int df = pattern[b] - pattern[a];
            int dt = b - a;
            // one representative per antipodal pair {(df,dt), (-df,-dt)}
            if (df < 0 || (df == 0 && dt < 0)) {
                df = -df;
                dt = -dt;
            }
            ++map.multiplicities[{df, dt}];
        }
    }

    const double p = static_cast<double>(map.pilot_count);
    const double w = 2.0 * std::numbers::pi / static_cast<double>(k);
    map.rho_sq.assign(static_cast<std::size_t>(k * k), 0.0);
    double peak_sq = 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            double acc = 0.0;
            for (const auto& [diff, count] : map.multiplicities) {
                // reduce the phase argument mod k so cos sees a small angle
                const int arg = mod(static_cast<long long>(diff.first) * i + static_cast<long long>(diff.second) * j, k);
                acc += count * std::cos(w * arg);
            }
            const double r = 1.0 / p + 2.0 / (p * p) * acc;
            map.rho_sq[static_cast<std::size_t>(i * k + j)] = r;
            if (i != 0 || j != 0)
                peak_sq = std::max(peak_sq, r);
        }
    }
    map.max_offpeak = k > 1 ? std::sqrt(std::max(0.0, peak_sq)) : 1.0;
    return map;
}

double dirichlet_ratio(int n, double x)
{
    const double den = std::sin(std::numbers::pi * x);
    if (std::abs(den) < 1e-9)
        return static_cast<double>(n);
    return std::abs(std::sin(n * std::numbers::pi * x) / den);
}

double legacy_kernel(double tau, double nu, int M, int k, int d)
{
    if (M < 1 || k < 1)
        throw std::invalid_argument("legacy_kernel: M and k must be positive");
    const double ridge = nu - static_cast<double>(d) * M * tau;
    return dirichlet_ratio(k, ridge) * dirichlet_ratio(M, tau) / (static_cast<double>(M) * k);
}

double kernel_peak(int M, int k)
{
    if (M < 1 || k < 1)
        throw std::invalid_argument("kernel_peak: M and k must be positive");
    return dirichlet_ratio(M, 1.0 / (static_cast<double>(M) * k)) / M;
}

std::optional<int> hop_increment(const PilotPattern& pattern)
{
    const int k = pattern.k;
    if (k < 2)
        return std::nullopt;
    const int d = mod(pattern[1] - pattern[0], k);
    for (int t = 1; t + 1 < k; ++t)
        if (mod(pattern[t + 1] - pattern[t], k) != d)
            return std::nullopt;
    return d;
}

} // namespace mcc
