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
#include "mccpilot/lp_export.hpp"
#include "mccpilot/solver.hpp"

#include "lp_parser.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>

using namespace mcc;

namespace {

oracle::LpModel export_and_parse(const SolverConfig& c, int radius, LpModelStats& stats)
{
    std::ostringstream out;
    stats = write_lp(c, radius, out);
    std::istringstream in(out.str());
    return oracle::parse_lp(in);
}

std::string x(int f, int t) { return "x_" + std::to_string(f) + "_" + std::to_string(t); }

std::string e(int f, int t, int g, int s)
{
    return "e_" + std::to_string(f) + "_" + std::to_string(t) + "_" + std::to_string(g) + "_" + std::to_string(s);
}

/// 0-1 assignment implied by a pattern: each cell links to its nearest
/// pilot (first in slot order), z marks lines holding three or more pilots.
std::map<std::string, double> assignment(const PilotPattern& p)
{
    const int k = p.k;
    std::map<std::string, double> a;
    for (int t = 0; t < k; ++t)
        a[x(p[t], t)] = 1.0;
    for (int f = 0; f < k; ++f)
        for (int t = 0; t < k; ++t) {
            int best = -1;
            int best_cost = 1 << 30;
            for (int s = 0; s < k; ++s) {
                const int c = metric_cost(f, t, p[s], s, k);
                if (c < best_cost) {
                    best_cost = c;
                    best = s;
                }
            }
            a[e(f, t, p[best], best)] = 1.0;
        }
    const auto ls = modular_lines(k);
    const auto census = collinearity_census(p, *ls);
    for (std::size_t id = 0; id < ls->size(); ++id)
        if (census.counts[id] >= 3)
            a["z_" + std::to_string(id)] = 1.0;
    return a;
}

} // namespace

TEST(LpExport, VariableCountsMatchFile)
{
    for (const int k : {3, 5, 6}) {
        SolverConfig c;
        c.k = k;
        c.collinearity_budget = 2;
        const int r = oracle::exhaustive_min_radius(k);
        LpModelStats stats;
        const auto model = export_and_parse(c, r, stats);
        EXPECT_EQ(stats.assignment_vars, static_cast<std::size_t>(k * k));
        EXPECT_EQ(stats.line_vars, modular_lines(k)->size());
        EXPECT_EQ(model.variables().size(), stats.variables()) << k;
        EXPECT_EQ(model.binaries.size(), stats.variables());
        EXPECT_EQ(model.rows.size(), stats.constraints);
        EXPECT_EQ(stats.radius, r);
        EXPECT_TRUE(model.minimize);
    }
}

TEST(LpExport, LinkVariablesRespectRadiusAndCost)
{
    const int k = 5;
    const int r = 2;
    SolverConfig c;
    c.k = k;
    LpModelStats stats;
    const auto model = export_and_parse(c, r, stats);
    std::size_t links = 0;
    for (int f = 0; f < k; ++f)
        for (int t = 0; t < k; ++t)
            for (int g = 0; g < k; ++g)
                for (int s = 0; s < k; ++s) {
                    const int cost = metric_cost(f, t, g, s, k);
                    const auto it = model.objective.find(e(f, t, g, s));
                    if (cost > r) {
                        EXPECT_EQ(it, model.objective.end());
                        continue;
                    }
                    ++links;
                    if (cost > 0) {
                        ASSERT_NE(it, model.objective.end());
                        EXPECT_DOUBLE_EQ(it->second, cost);
                    }
                }
    EXPECT_EQ(stats.link_vars, links);
}

TEST(LpExport, SolverOptimumSatisfiesEveryRow)
{
    for (const int k : {4, 5, 7}) {
        for (const bool sym : {false, true}) {
            if (k == 5 && sym)
                continue; // infeasible under the radius cap
            SolverConfig c;
            c.k = k;
            c.collinearity_budget = static_cast<int>(modular_lines(k)->size());
            c.enforce_symmetric_triple_exclusion = sym;
            const auto res = solve_mcc(c);
            ASSERT_TRUE(res.feasible());
            LpModelStats stats;
            const auto model = export_and_parse(c, res.radius_bound, stats);
            const auto a = assignment(*res.pattern);
            EXPECT_TRUE(oracle::violated_rows(model, a).empty()) << "k=" << k;
            EXPECT_DOUBLE_EQ(oracle::objective_value(model, a), static_cast<double>(res.objective));
        }
    }
}

TEST(LpExport, ViolatingPatternFailsRows)
{
    // the identity schedule puts all k pilots on one line
    const int k = 5;
    SolverConfig c;
    c.k = k;
    c.collinearity_budget = 0;
    LpModelStats stats;
    const auto model = export_and_parse(c, 4, stats);
    const auto a = assignment(make_pattern({0, 1, 2, 3, 4}));
    const auto bad = oracle::violated_rows(model, a);
    EXPECT_FALSE(bad.empty());
}

TEST(LpExport, WritesFile)
{
    const auto path = std::filesystem::temp_directory_path() / "mccpilot_lp_export_test.lp";
    SolverConfig c;
    c.k = 3;
    c.collinearity_budget = 1;
    const auto stats = export_lp(c, path);
    ASSERT_TRUE(std::filesystem::exists(path));
    EXPECT_GT(std::filesystem::file_size(path), 0U);
    EXPECT_EQ(stats.radius, oracle::exhaustive_min_radius(3));
    // a regular file cannot serve as a directory
    EXPECT_THROW(export_lp(c, path / "x.lp"), std::runtime_error);
    std::filesystem::remove(path);
    const auto nested = std::filesystem::temp_directory_path() / "mccpilot_lp_nested" / "a" / "m.lp";
    export_lp(c, nested);
    EXPECT_TRUE(std::filesystem::exists(nested));
    std::filesystem::remove_all(nested.parent_path().parent_path());
}
