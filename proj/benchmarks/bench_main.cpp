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

#include "mccpilot/channel.hpp"
#include "mccpilot/geometry.hpp"
#include "mccpilot/pattern.hpp"
#include "mccpilot/recovery.hpp"
#include "mccpilot/solver.hpp"

#include <benchmark/benchmark.h>

using namespace mcc;

static void BM_Coverage(benchmark::State& state)
{
    const auto p = baseline_random(static_cast<int>(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(coverage(p).total);
}
BENCHMARK(BM_Coverage)->Arg(7)->Arg(17)->Arg(29);

static void BM_CoherenceMap(benchmark::State& state)
{
    const auto p = baseline_random(static_cast<int>(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(coherence_map(p).max_offpeak);
}
BENCHMARK(BM_CoherenceMap)->Arg(17)->Arg(29);

static void BM_Census(benchmark::State& state)
{
    const int k = static_cast<int>(state.range(0));
    const auto p = baseline_random(k, 1);
    const auto lines = modular_lines(k);
    for (auto _ : state)
        benchmark::DoNotOptimize(collinearity_census(p, *lines).redundant_lines);
}
BENCHMARK(BM_Census)->Arg(17)->Arg(29);

static void BM_SolveCoverageOnly(benchmark::State& state)
{
    const auto cfg = SolverConfig::coverage_only(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_mcc(cfg).objective);
}
BENCHMARK(BM_SolveCoverageOnly)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

static void BM_SolveMcc(benchmark::State& state)
{
    SolverConfig cfg;
    cfg.k = static_cast<int>(state.range(0));
    cfg.collinearity_budget = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_mcc(cfg).objective);
}
BENCHMARK(BM_SolveMcc)->Args({7, 3})->Args({11, 8})->Unit(benchmark::kMillisecond);

static void BM_Recover(benchmark::State& state)
{
    SimConfig sim;
    RecoveryConfig rc;
    rc.iterations = static_cast<int>(state.range(0));
    const auto dicts = build_dictionaries(sim);
    const auto ch = sample_channel(sim);
    const auto win = observe(baseline_random(17, 2), 0, ch, sim, dicts);
    for (auto _ : state)
        benchmark::DoNotOptimize(recover(win, dicts, rc).lambda_used);
}
BENCHMARK(BM_Recover)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
