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

#include "mccpilot/channel.hpp"
#include "mccpilot/recovery.hpp"
#include "mccpilot/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcc {

/// floor(k/4), or 1 when that is zero so that small periods still score the
/// single worst shift.
int worst_quarter_count(int k);

/// Mean of the worst_quarter_count(values.size()) largest values.
double worst_quarter(std::vector<double> values);

/// Exact order statistic; the mean of the two central values for even counts.
double median(std::vector<double> values);

struct ShiftEvaluation
{
    std::vector<double> nmse; ///< indexed by shift
    int averaged = 0;         ///< how many of the largest were averaged
    double worst_quarter = 0.0;
};

/// Recovers the latest slot for every cyclic shift of `pattern` on the same
/// channel realization and reduces the k NMSE values to their worst quarter.
/// Errors are rethrown as std::runtime_error naming the shift.
ShiftEvaluation evaluate_shifts(const PilotPattern& pattern, const DDChannel& channel, const SimConfig& sim,
                                const RecoveryConfig& recovery, const Dictionaries& dicts);

double evaluate_pattern(const PilotPattern& pattern, const DDChannel& channel, const SimConfig& sim,
                        const RecoveryConfig& recovery);

// ---------------------------------------------------------------------------
// pattern construction

struct DesignOptions
{
    /// Per-solve node cap; keeps designs identical on every machine.
    std::uint64_t node_limit = 2'000'000;
    double time_limit_s = 3600.0;
    double degradation_threshold = 0.05;
    int jobs = 1;
};

struct MccDesign
{
    PilotPattern pattern;
    int radius = 0;
    int budget = 0;
    long long objective = 0;
    long long reference_objective = 0;
    SolveStatus status = SolveStatus::limit_unknown;
    /// True when no pattern with at most three pilots per line was found and
    /// budgeted lines were allowed to hold more.
    bool four_collinear_relaxed = false;
    /// True when even the relaxed model was infeasible under the radius cap
    /// and symmetric triples had to be admitted (k = 3 and k = 5, for example).
    bool symmetric_exclusion_relaxed = false;
};

/// Full MCC construction: r_k, the coverage-only reference, then budget
/// tightening starting from the reference pattern's redundant-line count.
/// Falls back to admitting four or more pilots on budgeted lines when the
/// strict model yields nothing within the limits, and then to dropping the
/// symmetric-triple exclusion.
MccDesign design_mcc(int k, const DesignOptions& options = {});

/// Names accepted by PatternLibrary::get, in reporting order.
const std::vector<std::string>& pattern_names();

/// Builds named patterns, memoized in memory and optionally on disk. Solved
/// patterns are cached under (name, k, hash of DesignOptions).
class PatternLibrary
{
public:
    explicit PatternLibrary(DesignOptions options = {}, std::optional<std::filesystem::path> cache_dir = {});

    /// `seed` only matters for "random". Thread-safe.
    PilotPattern get(const std::string& name, int k, std::uint64_t seed = 0);

    const DesignOptions& options() const { return options_; }

private:
    PilotPattern build(const std::string& name, int k);
    std::filesystem::path cache_file(const std::string& name, int k) const;

    DesignOptions options_;
    std::optional<std::filesystem::path> cache_dir_;
    std::mutex guard_;
    std::map<std::pair<std::string, int>, PilotPattern> memo_;
};

/// FNV-1a, used for cache keys and run metadata.
std::uint64_t fnv1a(std::string_view data);

// ---------------------------------------------------------------------------
// sweeps

enum class SweepKind { snr, interval, subwindow, k };

std::string to_string(SweepKind kind);
SweepKind parse_sweep_kind(std::string_view text);

struct SweepSpec
{
    SweepKind kind = SweepKind::snr;
    std::vector<double> values;
    SimConfig sim;
    RecoveryConfig recovery;
    std::vector<std::string> patterns{"mcc", "3gpp", "chirp", "random"};
    int realizations = 50;
    std::uint64_t seed = 1;
    int jobs = 1;

    void check() const;
};

/// Fields absent from the JSON keep their defaults. Keys: kind, values,
/// sim, recovery, patterns, realizations, seed, jobs. The result is check()ed.
SweepSpec parse_sweep_spec(std::string_view json_text);
std::string sweep_spec_to_json(const SweepSpec& spec);

/// Simulation setup for one sweep point. A k sweep also sets M = floor(408/k).
SimConfig apply_sweep_value(const SimConfig& base, SweepKind kind, double value);

struct SweepRow
{
    std::string pattern;
    SweepKind kind = SweepKind::snr;
    double value = 0.0;
    double median_worst_quarter = 0.0;
    int realizations_used = 0;
};

struct RawScore
{
    std::string pattern;
    double value = 0.0;
    int realization = 0;
    std::optional<double> worst_quarter; ///< empty when the realization failed
    std::string error;
};

struct SweepResult
{
    SweepKind kind = SweepKind::snr;
    std::vector<SweepRow> rows;
    std::vector<RawScore> raw;
};

using Progress = std::function<void(std::size_t done, std::size_t total)>;

/// Median over realizations of the worst-quarter NMSE for every (value,
/// pattern) pair. Channels are seeded from (spec.seed, realization) and shared
/// by all patterns and sweep values. Failed realizations are dropped; more
/// than 10% failures for any pair aborts with std::runtime_error. Output is
/// identical for any spec.jobs.
SweepResult run_sweep(const SweepSpec& spec, PatternLibrary& library, const Progress& progress = {});

inline constexpr std::string_view kSweepCsvHeader = "pattern,sweep_kind,sweep_value,metric,value,realizations_used";

std::string sweep_csv(const SweepResult& result);
std::string raw_csv(const SweepResult& result);

// ---------------------------------------------------------------------------
// comparison

struct PatternReport
{
    std::string name;
    PilotPattern pattern;
    int radius = 0;
    long long total = 0;
    int redundant_lines = 0;
    int max_line_count = 0;
    std::size_t symmetric_triples = 0;
    double max_offpeak = 0.0;
    std::optional<double> median_worst_quarter;
};

/// Geometry of all six named patterns at period `spec.sim.dims.k` plus, when
/// spec.realizations > 0, the median worst-quarter NMSE at spec.sim's SNR.
/// The random pattern's geometry uses the realization-0 draw.
std::vector<PatternReport> compare_patterns(const SweepSpec& spec, PatternLibrary& library,
                                            const Progress& progress = {});

std::string compare_csv(const std::vector<PatternReport>& reports);

} // namespace mcc
