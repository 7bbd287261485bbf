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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mcc {

/// Configuration for the two-stage MCC construction.
///
/// Stage 1 finds the minimum covering radius r_k over all permutation
/// patterns. Stage 2 minimises the total nearest-pilot distance subject to
/// radius <= r_k, at most two pilots per modular line unless the line is one
/// of the (at most `collinearity_budget`) lines allowed to hold a triple, and
/// optionally no symmetric triples.
struct SolverConfig
{
    int k = 17;
    int collinearity_budget = 0;
    /// When false a budgeted line may hold any number of pilots instead of
    /// exactly one triple.
    bool forbid_four_collinear = true;
    bool enforce_symmetric_triple_exclusion = true;
    double time_limit_s = 60.0;
    /// Relative gap (incumbent - bound) / incumbent accepted as "solved".
    double optimality_gap_tolerance = 0.0;
    /// Deterministic work cap; 0 means unlimited. Limits that depend on wall
    /// time make results machine dependent, node limits do not.
    std::uint64_t node_limit = 0;
    int jobs = 1;
    /// Fix subband 0 to slot 0. Sound because every constraint and the
    /// objective are invariant under cyclic time shifts.
    bool break_symmetry = true;
    /// Skip stage 1 and use this radius cap.
    std::optional<int> radius_cap;
    /// Seed the incumbent with a deterministic local search before branching.
    bool warm_start = true;

    /// Configuration with the collinearity rules switched off entirely.
    static SolverConfig coverage_only(int k);

    /// Throws std::invalid_argument for out-of-range fields.
    void check() const;
};

enum class SolveStatus {
    optimal,        ///< search completed, optimum proven
    gap_optimal,    ///< search completed within the configured gap tolerance
    infeasible,     ///< search completed, no feasible pattern exists
    limit_feasible, ///< time or node limit hit with an incumbent
    limit_unknown,  ///< time or node limit hit before any feasible pattern was found
};

std::string to_string(SolveStatus status);

struct SolveResult
{
    SolveStatus status = SolveStatus::limit_unknown;
    std::optional<PilotPattern> pattern;
    int radius_bound = 0;    ///< r_k used as the hard radius cap
    long long objective = 0; ///< total coverage cost of `pattern`
    long long lower_bound = 0;
    bool proven_optimal = false;
    double gap = 1.0;
    std::uint64_t nodes_explored = 0;
    double wall_time_s = 0.0;
    int collinearity_budget = 0;
    bool radius_proven = true;

    bool feasible() const { return pattern.has_value(); }
};

struct RadiusResult
{
    int radius = 0;
    bool proven_optimal = true;
    std::uint64_t nodes_explored = 0;
};

/// Limits shared by the helper searches below.
struct SearchLimits
{
    double time_limit_s = 60.0;
    std::uint64_t node_limit = 0;
    int jobs = 1;
};

/// Smallest r such that some permutation pattern has covering radius <= r.
RadiusResult min_covering_radius(int k, const SearchLimits& limits = {});

/// Exact two-stage branch-and-bound. Ties between equal objectives resolve
/// to the lexicographically smallest schedule.
SolveResult solve_mcc(const SolverConfig& config);

struct TightenStep
{
    int budget = 0;
    SolveStatus status = SolveStatus::limit_unknown;
    long long objective = 0;
};

struct TightenResult
{
    int budget = 0;
    SolveResult result;
    long long reference_objective = 0; ///< coverage-only optimum under r_k
    std::vector<TightenStep> trail;
};

struct TightenOptions
{
    /// Relative coverage degradation tolerated versus the coverage-only
    /// optimum; +inf means tighten for feasibility alone.
    double degradation_threshold = 0.05;
    SolverConfig base; ///< k and budget are overwritten by tighten_budget
    /// Skips the coverage-only reference solve when already known.
    std::optional<long long> reference_objective;
};

/// Lowers the collinearity budget from `start` while the solve stays feasible
/// and its objective stays within the degradation threshold.
TightenResult tighten_budget(int k, int start, const TightenOptions& options = {});

/// Ablation: the permutation pattern with the fewest lines holding >= 3
/// pilots, subject to the symmetric-triple exclusion and no 4-collinear
/// lines; coverage is ignored. Returns the lexicographically first pattern
/// at the smallest feasible budget.
SolveResult solve_min_collinearity(int k, const SearchLimits& limits = {});

/// Lower bound on the coverage cost of one time column under radius cap r,
/// ignoring which subbands are still free. Exposed for tests.
long long column_lower_bound(int k, int r);

} // namespace mcc
