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

#include "mccpilot/harness.hpp"

#include "mccpilot/geometry.hpp"
#include "mccpilot/io.hpp"
#include "mccpilot/rng.hpp"

#include "json_convert.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace mcc {

using detail::json;

namespace {

constexpr std::uint64_t kRandomPatternTag = 0x72616e64ULL; // "rand"

std::string num(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

PilotPattern random_pattern(int k, std::uint64_t master, int realization)
{
    return baseline_random(k, derive_seed(master, {static_cast<std::uint64_t>(realization), kRandomPatternTag}));
}

} // namespace

int worst_quarter_count(int k)
{
    if (k < 1)
        throw std::invalid_argument("worst_quarter_count: k must be >= 1");
    return std::max(1, k / 4);
}

double worst_quarter(std::vector<double> values)
{
    if (values.empty())
        throw std::invalid_argument("worst_quarter: no values");
    const int q = worst_quarter_count(static_cast<int>(values.size()));
    std::sort(values.begin(), values.end(), std::greater<>());
    double s = 0.0;
    for (int i = 0; i < q; ++i)
        s += values[static_cast<std::size_t>(i)];
    return s / q;
}

double median(std::vector<double> values)
{
    if (values.empty())
        throw std::invalid_argument("median: no values");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ShiftEvaluation evaluate_shifts(const PilotPattern& pattern, const DDChannel& channel, const SimConfig& sim,
                                const RecoveryConfig& recovery, const Dictionaries& dicts)
{
    ShiftEvaluation ev;
    ev.nmse.reserve(static_cast<std::size_t>(pattern.k));
    for (int s = 0; s < pattern.k; ++s) {
        try {
            const auto window = observe(pattern, s, channel, sim, dicts);
            const auto rec = recover(window, dicts, recovery);
            ev.nmse.push_back(nmse(rec.latest_channel, channel_at(channel, dicts, window.t0)));
        } catch (const std::exception& e) {
            throw std::runtime_error("shift " + std::to_string(s) + ": " + e.what());
        }
    }
    ev.averaged = worst_quarter_count(pattern.k);
    ev.worst_quarter = worst_quarter(ev.nmse);
    return ev;
}

double evaluate_pattern(const PilotPattern& pattern, const DDChannel& channel, const SimConfig& sim,
                        const RecoveryConfig& recovery)
{
    return evaluate_shifts(pattern, channel, sim, recovery, build_dictionaries(sim)).worst_quarter;
}

// ---------------------------------------------------------------------------

MccDesign design_mcc(int k, const DesignOptions& o)
{
    const SearchLimits limits{o.time_limit_s, o.node_limit, o.jobs};
    const RadiusResult rr = min_covering_radius(k, limits);

    SolverConfig ref = SolverConfig::coverage_only(k);
    ref.radius_cap = rr.radius;
    ref.node_limit = o.node_limit;
    ref.time_limit_s = o.time_limit_s;
    ref.jobs = o.jobs;
    const SolveResult reference = solve_mcc(ref);
    if (!reference.feasible())
        throw std::runtime_error("design_mcc: coverage-only reference found no pattern for k = " + std::to_string(k));
    const auto lines = k >= 2 ? modular_lines(k) : nullptr;
    const int start = lines ? collinearity_census(*reference.pattern, *lines).redundant_lines : 0;
    const int max_budget = lines ? static_cast<int>(lines->size()) : 0;

    TightenOptions topt;
    topt.degradation_threshold = o.degradation_threshold;
    topt.reference_objective = reference.objective;
    topt.base = ref;

    // strict first, then budgeted lines may hold four or more, then symmetric
    // triples are admitted while four-collinear lines stay forbidden
    struct Stage
    {
        bool forbid_four;
        bool symmetric_exclusion;
    };
    for (const Stage stage : {Stage{true, true}, Stage{false, true}, Stage{true, false}}) {
        topt.base.forbid_four_collinear = stage.forbid_four;
        topt.base.enforce_symmetric_triple_exclusion = stage.symmetric_exclusion;
        SolverConfig probe = topt.base;
        probe.collinearity_budget = std::min(start, max_budget);
        SolveResult first = solve_mcc(probe);
        int budget = probe.collinearity_budget;
        if (!first.feasible() && budget < max_budget) {
            probe.collinearity_budget = max_budget;
            first = solve_mcc(probe);
            if (first.feasible())
                budget = collinearity_census(*first.pattern, *lines).redundant_lines;
        }
        if (!first.feasible())
            continue;
        const TightenResult t = tighten_budget(k, budget, topt);
        if (!t.result.feasible())
            continue;
        MccDesign d;
        d.pattern = *t.result.pattern;
        d.radius = t.result.radius_bound;
        d.budget = t.budget;
        d.objective = t.result.objective;
        d.reference_objective = reference.objective;
        d.status = t.result.status;
        d.four_collinear_relaxed = !stage.forbid_four;
        d.symmetric_exclusion_relaxed = !stage.symmetric_exclusion;
        return d;
    }
    throw std::runtime_error("design_mcc: no MCC pattern found for k = " + std::to_string(k) +
                             " within the node limit");
}

const std::vector<std::string>& pattern_names()
{
    static const std::vector<std::string> names{"mcc",    "3gpp",          "chirp",
                                                "random", "coverage_only", "collinearity_only"};
    return names;
}

std::uint64_t fnv1a(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

PatternLibrary::PatternLibrary(DesignOptions options, std::optional<std::filesystem::path> cache_dir)
    : options_(options), cache_dir_(std::move(cache_dir))
{
}

std::filesystem::path PatternLibrary::cache_file(const std::string& name, int k) const
{
    const std::string key = "mccpilot-pattern-v1|" + name + "|" + std::to_string(k) + "|" +
                            std::to_string(options_.node_limit) + "|" + num(options_.time_limit_s) + "|" +
                            num(options_.degradation_threshold) + "|" + std::to_string(options_.jobs);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
    return *cache_dir_ / (name + "_k" + std::to_string(k) + "_" + hex + ".json");
}

PilotPattern PatternLibrary::get(const std::string& name, int k, std::uint64_t seed)
{
    if (name == "random")
        return baseline_random(k, seed);
    if (std::find(pattern_names().begin(), pattern_names().end(), name) == pattern_names().end())
        throw std::invalid_argument("unknown pattern name \"" + name + "\"");

    std::lock_guard lock(guard_);
    const auto key = std::make_pair(name, k);
    if (auto it = memo_.find(key); it != memo_.end())
        return it->second;

    const bool solved = name == "mcc" || name == "coverage_only" || name == "collinearity_only";
    PilotPattern pattern;
    bool loaded = false;
    if (solved && cache_dir_) {
        const auto file = cache_file(name, k);
        if (std::filesystem::exists(file)) {
            pattern = read_pattern(file);
            loaded = pattern.k == k;
        }
    }
    if (!loaded) {
        pattern = build(name, k);
        if (solved && cache_dir_)
            write_pattern(cache_file(name, k), pattern);
    }
    memo_.emplace(key, pattern);
    return pattern;
}

PilotPattern PatternLibrary::build(const std::string& name, int k)
{
    if (name == "3gpp")
        return baseline_3gpp(k, 0);
    if (name == "chirp")
        return baseline_chirp(k);
    if (name == "mcc")
        return design_mcc(k, options_).pattern;
    const SearchLimits limits{options_.time_limit_s, options_.node_limit, options_.jobs};
    if (name == "coverage_only") {
        SolverConfig c = SolverConfig::coverage_only(k);
        c.node_limit = options_.node_limit;
        c.time_limit_s = options_.time_limit_s;
        c.jobs = options_.jobs;
        const auto r = solve_mcc(c);
        if (!r.feasible())
            throw std::runtime_error("coverage_only: no pattern found (" + to_string(r.status) + ")");
        return *r.pattern;
    }
    const auto r = solve_min_collinearity(k, limits);
    if (!r.feasible())
        throw std::runtime_error("collinearity_only: no pattern found (" + to_string(r.status) + ")");
    return *r.pattern;
}

// ---------------------------------------------------------------------------

std::string to_string(SweepKind kind)
{
    switch (kind) {
    case SweepKind::snr: return "snr";
    case SweepKind::interval: return "interval";
    case SweepKind::subwindow: return "subwindow";
    case SweepKind::k: return "k";
    }
    return "unknown";
}

SweepKind parse_sweep_kind(std::string_view text)
{
    for (const auto kind : {SweepKind::snr, SweepKind::interval, SweepKind::subwindow, SweepKind::k})
        if (text == to_string(kind))
            return kind;
    throw std::invalid_argument("unknown sweep kind \"" + std::string(text) + "\" (snr|interval|subwindow|k)");
}

void SweepSpec::check() const
{
    if (values.empty())
        throw std::invalid_argument("sweep: values must not be empty");
    if (patterns.empty())
        throw std::invalid_argument("sweep: no patterns selected");
    for (const auto& p : patterns)
        if (std::find(pattern_names().begin(), pattern_names().end(), p) == pattern_names().end())
            throw std::invalid_argument("sweep: unknown pattern \"" + p + "\"");
    if (realizations < 1)
        throw std::invalid_argument("sweep: realizations must be >= 1");
    if (jobs < 1)
        throw std::invalid_argument("sweep: jobs must be >= 1");
    recovery.check();
    for (const double v : values)
        apply_sweep_value(sim, kind, v).check();
}

SweepSpec parse_sweep_spec(std::string_view json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("sweep spec: bad JSON: ") + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("sweep spec must be a JSON object");
    SweepSpec spec;
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const auto& key = it.key();
            const auto& v = it.value();
            if (key == "kind") {
                spec.kind = parse_sweep_kind(v.get<std::string>());
            } else if (key == "values") {
                spec.values.clear();
                for (const auto& x : v)
                    spec.values.push_back(detail::read_number(x));
            } else if (key == "sim") {
                detail::update_from_json(spec.sim, v);
            } else if (key == "recovery") {
                detail::update_from_json(spec.recovery, v);
            } else if (key == "patterns") {
                spec.patterns = v.get<std::vector<std::string>>();
            } else if (key == "realizations") {
                spec.realizations = v.get<int>();
            } else if (key == "seed") {
                spec.seed = v.get<std::uint64_t>();
            } else if (key == "jobs") {
                spec.jobs = v.get<int>();
            } else {
                throw std::invalid_argument("sweep spec: unknown key \"" + key + "\"");
            }
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("sweep spec: ") + e.what());
    }
    spec.check();
    return spec;
}

std::string sweep_spec_to_json(const SweepSpec& spec)
{
    json values = json::array();
    for (const double v : spec.values)
        values.push_back(detail::number_or_inf(v));
    json j{{"kind", to_string(spec.kind)},
           {"values", values},
           {"sim", detail::to_json(spec.sim)},
           {"recovery", detail::to_json(spec.recovery)},
           {"patterns", spec.patterns},
           {"realizations", spec.realizations},
           {"seed", spec.seed},
           {"jobs", spec.jobs}};
    return j.dump(2) + "\n";
}

SimConfig apply_sweep_value(const SimConfig& base, SweepKind kind, double value)
{
    SimConfig c = base;
    auto as_int = [&](const char* what) {
        if (!(std::isfinite(value) && value == std::floor(value)))
            throw std::invalid_argument(std::string("sweep: ") + what + " values must be integers");
        return static_cast<int>(value);
    };
    switch (kind) {
    case SweepKind::snr: c.snr_db = value; break;
    case SweepKind::interval: c.pilot_interval = value; break;
    case SweepKind::subwindow: c.window = as_int("subwindow"); break;
    case SweepKind::k: {
        const int k = as_int("k");
        if (k < 1 || k > 408)
            throw std::invalid_argument("sweep: k must lie in [1, 408]");
        c.dims.k = k;
        c.dims.M = 408 / k;
        break;
    }
    }
    return c;
}

SweepResult run_sweep(const SweepSpec& spec, PatternLibrary& library, const Progress& progress)
{
    spec.check();

    struct Point
    {
        SimConfig sim;
        Dictionaries dicts;
        std::vector<PilotPattern> patterns; // empty entries for "random"
    };
    std::vector<Point> points;
    for (const double v : spec.values) {
        Point pt;
        pt.sim = apply_sweep_value(spec.sim, spec.kind, v);
        pt.dicts = build_dictionaries(pt.sim);
        for (const auto& name : spec.patterns)
            pt.patterns.push_back(name == "random" ? PilotPattern{} : library.get(name, pt.sim.dims.k));
        points.push_back(std::move(pt));
    }

    const std::size_t P = spec.patterns.size();
    const auto R = static_cast<std::size_t>(spec.realizations);
    const std::size_t total = points.size() * P * R;
    std::vector<RawScore> raw(total);

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_guard;
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
            const std::size_t vi = i / (P * R);
            const std::size_t pi = (i / R) % P;
            const int r = static_cast<int>(i % R);
            const Point& pt = points[vi];
            RawScore& out = raw[i];
            out.pattern = spec.patterns[pi];
            out.value = spec.values[vi];
            out.realization = r;
            try {
                SimConfig sc = pt.sim;
                sc.seed = derive_seed(spec.seed, {static_cast<std::uint64_t>(r)});
                const DDChannel channel = sample_channel(sc);
                const PilotPattern pattern =
                    out.pattern == "random" ? random_pattern(sc.dims.k, spec.seed, r) : pt.patterns[pi];
                out.worst_quarter = evaluate_shifts(pattern, channel, sc, spec.recovery, pt.dicts).worst_quarter;
            } catch (const std::exception& e) {
                out.error = e.what();
            }
            const std::size_t d = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard lock(progress_guard);
                progress(d, total);
            }
        }
    };
    const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), total));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }

    SweepResult result;
    result.kind = spec.kind;
    for (std::size_t vi = 0; vi < points.size(); ++vi)
        for (std::size_t pi = 0; pi < P; ++pi) {
            std::vector<double> scores;
            std::string first_error;
            for (std::size_t r = 0; r < R; ++r) {
                const auto& s = raw[(vi * P + pi) * R + r];
                if (s.worst_quarter)
                    scores.push_back(*s.worst_quarter);
                else if (first_error.empty())
                    first_error = s.error;
            }
            const std::size_t failed = R - scores.size();
            if (failed * 10 > R)
                throw std::runtime_error("sweep aborted: " + std::to_string(failed) + " of " + std::to_string(R) +
                                         " realizations failed for pattern " + spec.patterns[pi] + " at " +
                                         to_string(spec.kind) + " = " + num(spec.values[vi]) + " (first error: " +
                                         first_error + ")");
            SweepRow row;
            row.pattern = spec.patterns[pi];
            row.kind = spec.kind;
            row.value = spec.values[vi];
            row.median_worst_quarter = median(scores);
            row.realizations_used = static_cast<int>(scores.size());
            result.rows.push_back(std::move(row));
        }
    result.raw = std::move(raw);
    return result;
}

std::string sweep_csv(const SweepResult& result)
{
    std::string out(kSweepCsvHeader);
    out += "\n";
    for (const auto& r : result.rows)
        out += r.pattern + "," + to_string(r.kind) + "," + num(r.value) + ",median_worst_quarter_nmse," +
               num(r.median_worst_quarter) + "," + std::to_string(r.realizations_used) + "\n";
    return out;
}

std::string raw_csv(const SweepResult& result)
{
    std::string out = "pattern,sweep_kind,sweep_value,realization,worst_quarter_nmse,status\n";
    for (const auto& r : result.raw) {
        std::string status = "ok";
        if (!r.worst_quarter) {
            status = r.error;
            std::replace(status.begin(), status.end(), ',', ';');
            std::replace(status.begin(), status.end(), '\n', ' ');
        }
        out += r.pattern + "," + to_string(result.kind) + "," + num(r.value) + "," + std::to_string(r.realization) +
               "," + (r.worst_quarter ? num(*r.worst_quarter) : std::string()) + "," + status + "\n";
    }
    return out;
}

std::vector<PatternReport> compare_patterns(const SweepSpec& spec, PatternLibrary& library, const Progress& progress)
{
    const int k = spec.sim.dims.k;
    std::vector<PatternReport> reports;
    const auto lines = k >= 2 ? modular_lines(k) : nullptr;
    for (const auto& name : pattern_names()) {
        PatternReport rep;
        rep.name = name;
        rep.pattern = name == "random" ? random_pattern(k, spec.seed, 0) : library.get(name, k);
        const auto cov = coverage(rep.pattern);
        rep.radius = cov.radius;
        rep.total = cov.total;
        if (lines) {
            const auto census = collinearity_census(rep.pattern, *lines);
            rep.redundant_lines = census.redundant_lines;
            rep.max_line_count = census.max_count;
            rep.symmetric_triples = symmetric_triples(rep.pattern, *lines).size();
        }
        rep.max_offpeak = coherence_map(rep.pattern).max_offpeak;
        reports.push_back(std::move(rep));
    }
    if (spec.realizations > 0) {
        SweepSpec s = spec;
        s.kind = SweepKind::snr;
        s.values = {spec.sim.snr_db};
        s.patterns = pattern_names();
        const auto res = run_sweep(s, library, progress);
        for (auto& rep : reports)
            for (const auto& row : res.rows)
                if (row.pattern == rep.name)
                    rep.median_worst_quarter = row.median_worst_quarter;
    }
    return reports;
}

std::string compare_csv(const std::vector<PatternReport>& reports)
{
    std::string out = "pattern,schedule,radius,total,redundant_lines,max_line_count,symmetric_triples,"
                      "max_offpeak_coherence,median_worst_quarter_nmse\n";
    for (const auto& r : reports) {
        std::string sched;
        for (std::size_t t = 0; t < r.pattern.schedule.size(); ++t)
            sched += (t ? " " : "") + std::to_string(r.pattern.schedule[t]);
        out += r.name + "," + sched + "," + std::to_string(r.radius) + "," + std::to_string(r.total) + "," +
               std::to_string(r.redundant_lines) + "," + std::to_string(r.max_line_count) + "," +
               std::to_string(r.symmetric_triples) + "," + num(r.max_offpeak) + "," +
               (r.median_worst_quarter ? num(*r.median_worst_quarter) : std::string()) + "\n";
    }
    return out;
}

} // namespace mcc
