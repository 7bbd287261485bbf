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

#include "mccpilot/lp_export.hpp"

#include "mccpilot/geometry.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

namespace mcc {

namespace {

std::string xname(int f, int t) { return "x_" + std::to_string(f) + "_" + std::to_string(t); }

std::string ename(int f, int t, int g, int s)
{
    return "e_" + std::to_string(f) + "_" + std::to_string(t) + "_" + std::to_string(g) + "_" + std::to_string(s);
}

/// Accumulates "+ c name" terms and wraps lines well below the 510-char limit
/// some readers enforce.
class RowWriter
{
public:
    explicit RowWriter(std::ostream& out) : out_(out) {}

    void term(long long coef, const std::string& name)
    {
        if (terms_ > 0 && terms_ % 8 == 0)
            out_ << "\n  ";
        if (coef < 0)
            out_ << (terms_ == 0 ? "-" : " - ") << (coef == -1 ? "" : std::to_string(-coef) + " ") << name;
        else
            out_ << (terms_ == 0 ? "" : " + ") << (coef == 1 ? "" : std::to_string(coef) + " ") << name;
        ++terms_;
    }

    void reset() { terms_ = 0; }

private:
    std::ostream& out_;
    int terms_ = 0;
};

} // namespace

LpModelStats write_lp(const SolverConfig& config, int radius, std::ostream& out)
{
    config.check();
    const int k = config.k;
    if (k < 2)
        throw std::invalid_argument("write_lp: k must be >= 2");
    const auto lines = modular_lines(k);

    LpModelStats stats;
    stats.radius = radius;
    stats.assignment_vars = static_cast<std::size_t>(k * k);
    stats.line_vars = lines->size();

    struct Link
    {
        int f, t, g, s, cost;
    };
    std::vector<Link> links;
    for (int f = 0; f < k; ++f)
        for (int t = 0; t < k; ++t)
            for (int g = 0; g < k; ++g)
                for (int s = 0; s < k; ++s) {
                    const int c = metric_cost(f, t, g, s, k);
                    if (c <= radius)
                        links.push_back({f, t, g, s, c});
                }
    stats.link_vars = links.size();

    out << "\\ MCC pilot pattern model, k = " << k << ", radius cap = " << radius
        << ", collinearity budget = " << config.collinearity_budget << "\n";
    out << "Minimize\n obj: ";
    RowWriter row(out);
    for (const auto& l : links)
        row.term(l.cost, ename(l.f, l.t, l.g, l.s));
    if (links.empty())
        out << "0 " << xname(0, 0);
    out << "\nSubject To\n";

    // every cell is served by exactly one pilot within the radius
    std::size_t i = 0;
    while (i < links.size()) {
        const int f = links[i].f;
        const int t = links[i].t;
        out << " cover_" << f << "_" << t << ": ";
        row.reset();
        for (; i < links.size() && links[i].f == f && links[i].t == t; ++i)
            row.term(1, ename(f, t, links[i].g, links[i].s));
        out << " = 1\n";
        ++stats.constraints;
    }
    // cells with no admissible link make the model infeasible; say so explicitly
    {
        std::vector<char> covered(static_cast<std::size_t>(k * k), 0);
        for (const auto& l : links)
            covered[static_cast<std::size_t>(l.f * k + l.t)] = 1;
        for (int c = 0; c < k * k; ++c)
            if (!covered[static_cast<std::size_t>(c)]) {
                out << " cover_" << c / k << "_" << c % k << ": 0 " << xname(0, 0) << " = 1\n";
                ++stats.constraints;
            }
    }
    for (const auto& l : links) {
        out << " link_" << l.f << "_" << l.t << "_" << l.g << "_" << l.s << ": "
            << ename(l.f, l.t, l.g, l.s) << " - " << xname(l.g, l.s) << " <= 0\n";
        ++stats.constraints;
    }
    for (int t = 0; t < k; ++t) {
        out << " slot_" << t << ": ";
        row.reset();
        for (int f = 0; f < k; ++f)
            row.term(1, xname(f, t));
        out << " = 1\n";
        ++stats.constraints;
    }
    for (int f = 0; f < k; ++f) {
        out << " band_" << f << ": ";
        row.reset();
        for (int t = 0; t < k; ++t)
            row.term(1, xname(f, t));
        out << " = 1\n";
        ++stats.constraints;
    }

    const long long z_mult = config.forbid_four_collinear ? 1 : k - 2;
    for (std::size_t id = 0; id < lines->size(); ++id) {
        out << " line_" << id << ": ";
        row.reset();
        for (const int cell : lines->lines[id].points)
            row.term(1, xname(cell / k, cell % k));
        if (z_mult > 0)
            row.term(-z_mult, "z_" + std::to_string(id));
        else
            row.term(0, "z_" + std::to_string(id));
        out << " <= 2\n";
        ++stats.constraints;
    }
    out << " budget: ";
    row.reset();
    for (std::size_t id = 0; id < lines->size(); ++id)
        row.term(1, "z_" + std::to_string(id));
    out << " <= " << config.collinearity_budget << "\n";
    ++stats.constraints;

    if (config.enforce_symmetric_triple_exclusion) {
        std::set<std::array<int, 3>> emitted;
        for (const auto& line : lines->lines) {
            // points grouped by subband; a triple needs subbands f-d, f, f+d
            std::vector<std::vector<int>> by_band(static_cast<std::size_t>(k));
            for (const int cell : line.points)
                by_band[static_cast<std::size_t>(cell / k)].push_back(cell);
            for (int f = 1; f + 1 < k; ++f)
                for (int d = 1; f - d >= 0 && f + d < k; ++d)
                    for (const int lo : by_band[static_cast<std::size_t>(f - d)])
                        for (const int mid : by_band[static_cast<std::size_t>(f)])
                            for (const int hi : by_band[static_cast<std::size_t>(f + d)]) {
                                std::array<int, 3> key{lo, mid, hi};
                                if (!emitted.insert(key).second)
                                    continue;
                                out << " sym_" << lo << "_" << mid << "_" << hi << ": " << xname(lo / k, lo % k)
                                    << " + " << xname(mid / k, mid % k) << " + " << xname(hi / k, hi % k)
                                    << " <= 2\n";
                                ++stats.constraints;
                            }
        }
    }

    out << "Binaries\n";
    std::vector<std::string> names;
    for (int f = 0; f < k; ++f)
        for (int t = 0; t < k; ++t)
            names.push_back(xname(f, t));
    for (const auto& l : links)
        names.push_back(ename(l.f, l.t, l.g, l.s));
    for (std::size_t id = 0; id < lines->size(); ++id)
        names.push_back("z_" + std::to_string(id));
    for (std::size_t n = 0; n < names.size(); ++n)
        out << (n % 10 == 0 ? (n == 0 ? " " : "\n ") : " ") << names[n];
    out << "\nEnd\n";
    return stats;
}

LpModelStats export_lp(const SolverConfig& config, const std::filesystem::path& path)
{
    int radius = 0;
    if (config.radius_cap)
        radius = *config.radius_cap;
    else
        radius = min_covering_radius(config.k, SearchLimits{config.time_limit_s, config.node_limit, config.jobs}).radius;

    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream file(path);
    if (!file)
        throw std::runtime_error("export_lp: cannot open " + path.string());
    const auto stats = write_lp(config, radius, file);
    file.flush();
    if (!file)
        throw std::runtime_error("export_lp: write failed for " + path.string());
    return stats;
}

} // namespace mcc
