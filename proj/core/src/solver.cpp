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

#include "mccpilot/solver.hpp"

#include "mccpilot/geometry.hpp"
#include "mccpilot/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mcc {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
constexpr int kMaxK = 62;

using Clock = std::chrono::steady_clock;

/// Everything the branch-and-bound needs to know about one search.
struct Problem
{
    int k = 0;
    std::optional<int> cap; ///< radius cap; engaged whenever coverage matters
    int window = 0;         ///< lags examined per cell, min(cap, k-1)
    bool minimize_coverage = false;
    bool stop_at_first = false;
    bool order_by_bound = true;

    bool collinearity = false;
    int budget = 0;
    int line_cap = 3;
    bool symmetric_exclusion = false;
    const LineSet* lines = nullptr;

    bool break_symmetry = true;
    long long full_column_bound = 0;

    double time_limit_s = 60.0;
    std::uint64_t node_limit = 0;
    double gap_tolerance = 0.0;
    int jobs = 1;
};

struct Incumbent
{
    long long objective = kInf;
    std::vector<int> schedule;
};

/// State shared by all workers of one search.
struct Shared
{
    explicit Shared(const Problem& p) : problem(p), start(Clock::now()) {}

    const Problem& problem;
    Clock::time_point start;

    std::atomic<long long> best{kInf};
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> stop{false};
    std::atomic<bool> limit_hit{false};
    std::atomic<bool> found{false};

    std::mutex guard;
    Incumbent incumbent;                 // guarded
    long long open_bound = kInf;         // guarded; min bound of abandoned nodes
    long long gap_pruned_bound = kInf;   // guarded; min bound of gap-pruned nodes

    double elapsed() const { return std::chrono::duration<double>(Clock::now() - start).count(); }

    void note_open(long long lb)
    {
        std::lock_guard lock(guard);
        open_bound = std::min(open_bound, lb);
    }

    void note_gap_pruned(long long lb)
    {
        std::lock_guard lock(guard);
        gap_pruned_bound = std::min(gap_pruned_bound, lb);
    }

    void offer(long long objective, const std::vector<int>& schedule)
    {
        std::lock_guard lock(guard);
        if (objective < incumbent.objective ||
            (objective == incumbent.objective && schedule < incumbent.schedule)) {
            incumbent.objective = objective;
            incumbent.schedule = schedule;
            best.store(objective);
        }
        found.store(true);
        if (problem.stop_at_first)
            stop.store(true);
    }

    /// True when no completion of `prefix` (slots 0..t) can improve on the
    /// incumbent, taking the lexicographic tie-break into account.
    bool dominated(long long lb, const std::vector<int>& schedule, int t)
    {
        const long long b = best.load();
        if (b >= kInf)
            return false;
        if (lb > b)
            return true;
        if (problem.gap_tolerance > 0.0 &&
            static_cast<double>(lb) >= (1.0 - problem.gap_tolerance) * static_cast<double>(b)) {
            note_gap_pruned(lb);
            return true;
        }
        if (lb < b)
            return false;
        std::lock_guard lock(guard);
        const auto& inc = incumbent.schedule;
        if (lb < incumbent.objective)
            return false;
        for (int s = 0; s <= t; ++s) {
            const int a = schedule[static_cast<std::size_t>(s)];
            const int c = inc[static_cast<std::size_t>(s)];
            if (a != c)
                return a > c;
        }
        return false;
    }
};

/// Depth-first search over slots 0..k-1, one worker's private state.
class Search
{
public:
    Search(const Problem& p, Shared& shared)
        : p_(p), shared_(shared), k_(p.k), sched_(static_cast<std::size_t>(p.k), -1),
          dist_(static_cast<std::size_t>(p.k), 0)
    {
        if (p_.collinearity) {
            counts_.assign(p_.lines->size(), 0);
            on_line_.assign(p_.lines->size(), {});
        }
    }

    struct Child
    {
        long long lb = 0;
        long long final_sum = 0;
        int subband = 0;
    };

    /// Applies a fixed prefix; returns false if it violates a constraint.
    bool apply_prefix(const std::vector<int>& prefix, long long& lb, long long& final_sum)
    {
        final_sum = 0;
        lb = root_bound();
        for (std::size_t t = 0; t < prefix.size(); ++t) {
            const int g = prefix[t];
            auto child = evaluate(static_cast<int>(t), g, final_sum);
            if (!child)
                return false;
            assign(static_cast<int>(t), g);
            lb = child->lb;
            final_sum = child->final_sum;
        }
        return true;
    }

    long long root_bound() const
    {
        return p_.minimize_coverage ? p_.full_column_bound * k_ : 0;
    }

    void run(int t, long long lb, long long final_sum)
    {
        dfs(t, lb, final_sum);
    }

    /// Children of the node at depth t in search order.
    std::vector<Child> children(int t, long long final_sum)
    {
        std::vector<Child> out;
        if (t == 0 && p_.break_symmetry) {
            if (auto c = evaluate(0, 0, final_sum))
                out.push_back(*c);
            return out;
        }
        for (int g = 0; g < k_; ++g) {
            if (used_ & (1ULL << g))
                continue;
            if (auto c = evaluate(t, g, final_sum))
                out.push_back(*c);
        }
        if (p_.order_by_bound)
            std::stable_sort(out.begin(), out.end(),
                             [](const Child& a, const Child& b) { return a.lb < b.lb; });
        return out;
    }

    void assign(int t, int g)
    {
        sched_[static_cast<std::size_t>(t)] = g;
        used_ |= (1ULL << g);
        if (!p_.collinearity)
            return;
        const int cell = g * k_ + t;
        for (const int id : p_.lines->through[static_cast<std::size_t>(cell)]) {
            auto& c = counts_[static_cast<std::size_t>(id)];
            ++c;
            if (c == 3)
                ++redundant_;
            on_line_[static_cast<std::size_t>(id)].push_back(cell);
        }
    }

    void unassign(int t)
    {
        const int g = sched_[static_cast<std::size_t>(t)];
        sched_[static_cast<std::size_t>(t)] = -1;
        used_ &= ~(1ULL << g);
        if (!p_.collinearity)
            return;
        const int cell = g * k_ + t;
        for (const int id : p_.lines->through[static_cast<std::size_t>(cell)]) {
            auto& c = counts_[static_cast<std::size_t>(id)];
            if (c == 3)
                --redundant_;
            --c;
            on_line_[static_cast<std::size_t>(id)].pop_back();
        }
    }

private:
    void dfs(int t, long long lb, long long final_sum)
    {
        const auto n = shared_.nodes.fetch_add(1) + 1;
        if (shared_.stop.load()) {
            shared_.note_open(lb);
            return;
        }
        if ((p_.node_limit != 0 && n > p_.node_limit) ||
            ((n & 255U) == 0 && shared_.elapsed() > p_.time_limit_s)) {
            shared_.limit_hit.store(true);
            shared_.stop.store(true);
            shared_.note_open(lb);
            return;
        }
        if (t == k_) {
            shared_.offer(final_sum, sched_);
            return;
        }
        const auto kids = children(t, final_sum);
        for (std::size_t i = 0; i < kids.size(); ++i) {
            const auto& c = kids[i];
            if (shared_.stop.load()) {
                for (std::size_t j = i; j < kids.size(); ++j)
                    shared_.note_open(kids[j].lb);
                return;
            }
            if (p_.minimize_coverage) {
                sched_[static_cast<std::size_t>(t)] = c.subband;
                const bool pruned = shared_.dominated(c.lb, sched_, t);
                sched_[static_cast<std::size_t>(t)] = -1;
                if (pruned)
                    continue;
            }
            assign(t, c.subband);
            dfs(t + 1, c.lb, c.final_sum);
            unassign(t);
        }
    }

    bool collinearity_ok(int t, int g) const
    {
        const int cell = g * k_ + t;
        int added = 0;
        for (const int id : p_.lines->through[static_cast<std::size_t>(cell)]) {
            const int c = counts_[static_cast<std::size_t>(id)] + 1;
            if (c < 3)
                continue;
            if (c > p_.line_cap)
                return false;
            if (c == 3)
                ++added;
            if (p_.symmetric_exclusion) {
                const auto& pts = on_line_[static_cast<std::size_t>(id)];
                for (std::size_t a = 0; a < pts.size(); ++a)
                    for (std::size_t b = a + 1; b < pts.size(); ++b) {
                        int f[3] = {g, pts[a] / k_, pts[b] / k_};
                        std::sort(f, f + 3);
                        if (f[1] - f[0] >= 1 && f[1] - f[0] == f[2] - f[1])
                            return false;
                    }
            }
        }
        return redundant_ + added <= p_.budget;
    }

    /// Coverage cost of column tau. With `exact` every slot in the window is
    /// assigned; otherwise unassigned slots are bounded by the distance to the
    /// nearest free subband. Returns -1 if some cell must exceed the cap.
    long long column_cost(int tau) const
    {
        const int cap = *p_.cap;
        long long sum = 0;
        for (int f = 0; f < k_; ++f) {
            int best = std::numeric_limits<int>::max();
            for (int lag = 0; lag <= p_.window && lag < best; ++lag) {
                int slot = tau - lag;
                if (slot < 0)
                    slot += k_;
                const int s = sched_[static_cast<std::size_t>(slot)];
                const int v = lag + (s >= 0 ? std::abs(f - s) : dist_[static_cast<std::size_t>(f)]);
                best = std::min(best, v);
            }
            if (best > cap)
                return -1;
            sum += best;
        }
        return sum;
    }

    /// Bound for the child obtained by placing subband g at slot t.
    std::optional<Child> evaluate(int t, int g, long long parent_final)
    {
        if (used_ & (1ULL << g))
            return std::nullopt;
        if (p_.collinearity && !collinearity_ok(t, g))
            return std::nullopt;

        Child child;
        child.subband = g;
        if (!p_.minimize_coverage && !p_.cap) {
            child.lb = 0;
            return child;
        }

        // temporarily place the pilot
        sched_[static_cast<std::size_t>(t)] = g;
        const std::uint64_t used = used_ | (1ULL << g);
        constexpr int far = 1 << 20;
        for (int f = 0; f < k_; ++f) {
            int d = far;
            for (int h = 0; h < k_; ++h)
                if (!(used & (1ULL << h)))
                    d = std::min(d, std::abs(f - h));
            dist_[static_cast<std::size_t>(f)] = d;
        }

        const int R = p_.window;
        long long final_sum = parent_final;
        long long partial = 0;
        bool ok = true;

        if (t >= R) {
            const long long c = column_cost(t);
            ok = c >= 0;
            final_sum += c;
        }
        if (ok && t == k_ - 1) {
            for (int tau = 0; tau < R && ok; ++tau) {
                const long long c = column_cost(tau);
                ok = c >= 0;
                final_sum += c;
            }
        } else if (ok) {
            for (int tau = 0; tau < std::min(R, t + 1) && ok; ++tau) {
                const long long c = column_cost(tau);
                ok = c >= 0;
                partial += c;
            }
            for (int tau = t + 1; tau < k_ && tau <= t + R && ok; ++tau) {
                const long long c = column_cost(tau);
                ok = c >= 0;
                partial += c;
            }
        }
        sched_[static_cast<std::size_t>(t)] = -1;
        if (!ok)
            return std::nullopt;

        const long long unknown_cols = std::max(0, k_ - 1 - (t + R));
        child.final_sum = final_sum;
        child.lb = p_.minimize_coverage ? final_sum + partial + unknown_cols * p_.full_column_bound : 0;
        return child;
    }

    const Problem& p_;
    Shared& shared_;
    int k_;
    std::vector<int> sched_;
    std::vector<int> dist_;
    std::uint64_t used_ = 0;
    std::vector<int> counts_;
    std::vector<std::vector<int>> on_line_;
    int redundant_ = 0;
};

struct Outcome
{
    bool found = false;
    bool completed = false;
    Incumbent incumbent;
    long long lower_bound = 0;
    std::uint64_t nodes = 0;
    double seconds = 0.0;
};

Outcome run_search(const Problem& p, const std::optional<Incumbent>& warm)
{
    Shared shared(p);
    if (warm) {
        shared.incumbent = *warm;
        shared.best.store(warm->objective);
    }

    Search root(p, shared);
    const long long root_lb = root.root_bound();

    if (p.jobs <= 1 || p.k < 4) {
        root.run(0, root_lb, 0);
    } else {
        // split the tree into prefixes of two slots and hand them out in order
        std::vector<std::vector<int>> tasks;
        for (const auto& c0 : root.children(0, 0)) {
            root.assign(0, c0.subband);
            for (const auto& c1 : root.children(1, c0.final_sum))
                tasks.push_back({c0.subband, c1.subband});
            root.unassign(0);
        }
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
                if (shared.stop.load()) {
                    shared.note_open(root_lb);
                    break;
                }
                Search local(p, shared);
                long long lb = 0;
                long long fin = 0;
                if (!local.apply_prefix(tasks[i], lb, fin))
                    continue;
                local.run(static_cast<int>(tasks[i].size()), lb, fin);
            }
        };
        std::vector<std::jthread> pool;
        for (int j = 0; j < p.jobs; ++j)
            pool.emplace_back(worker);
    }

    Outcome out;
    out.nodes = shared.nodes.load();
    out.seconds = shared.elapsed();
    out.completed = !shared.limit_hit.load();
    out.found = shared.incumbent.objective < kInf;
    out.incumbent = shared.incumbent;
    long long lb = std::min(shared.open_bound, shared.gap_pruned_bound);
    if (out.completed)
        lb = shared.gap_pruned_bound;
    out.lower_bound = std::min(lb, out.incumbent.objective);
    if (!out.found && out.completed)
        out.lower_bound = kInf;
    return out;
}

// ---------------------------------------------------------------------------
// warm start

struct Penalty
{
    long long violations = 0;
    long long objective = 0;
};

Penalty penalty(const PilotPattern& pat, const Problem& p)
{
    Penalty pen;
    if (p.cap || p.minimize_coverage) {
        const auto cov = coverage(pat);
        pen.objective = cov.total;
        if (p.cap)
            for (const int a : cov.a)
                pen.violations += std::max(0, a - *p.cap);
    }
    if (p.collinearity) {
        const auto census = collinearity_census(pat, *p.lines);
        for (const int c : census.counts)
            if (c > p.line_cap)
                pen.violations += c - p.line_cap;
        pen.violations += std::max(0, census.redundant_lines - p.budget);
        if (p.symmetric_exclusion)
            pen.violations += static_cast<long long>(symmetric_triples(pat, *p.lines).size());
    }
    return pen;
}

bool better(const Penalty& a, const Penalty& b)
{
    return a.violations != b.violations ? a.violations < b.violations : a.objective < b.objective;
}

PilotPattern normalise(const PilotPattern& pat)
{
    // rotate so that subband 0 sits at slot 0
    for (int t = 0; t < pat.k; ++t)
        if (pat[t] == 0)
            return cyclic_shift(pat, t);
    return pat;
}

std::optional<Incumbent> local_search(const Problem& p)
{
    const int k = p.k;
    if (k < 2)
        return std::nullopt;
    std::vector<PilotPattern> starts;
    starts.push_back(baseline_3gpp(k, 0));
    for (std::uint64_t i = 0; i < 6; ++i)
        starts.push_back(baseline_random(k, derive_seed(0x5eedULL, {static_cast<std::uint64_t>(k), i})));

    std::optional<Incumbent> best;
    for (auto pat : starts) {
        Penalty cur = penalty(pat, p);
        bool improved = true;
        while (improved) {
            improved = false;
            for (int a = 0; a < k && !improved; ++a)
                for (int b = a + 1; b < k && !improved; ++b) {
                    std::swap(pat.schedule[static_cast<std::size_t>(a)], pat.schedule[static_cast<std::size_t>(b)]);
                    const Penalty cand = penalty(pat, p);
                    if (better(cand, cur)) {
                        cur = cand;
                        improved = true;
                    } else {
                        std::swap(pat.schedule[static_cast<std::size_t>(a)], pat.schedule[static_cast<std::size_t>(b)]);
                    }
                }
        }
        if (cur.violations != 0)
            continue;
        const PilotPattern norm = p.break_symmetry ? normalise(pat) : pat;
        if (!best || cur.objective < best->objective ||
            (cur.objective == best->objective && norm.schedule < best->schedule))
            best = Incumbent{cur.objective, norm.schedule};
    }
    return best;
}

long long interval_cost(int a, int b, int lag, int cap)
{
    const int g = (a + b) / 2;
    if (lag + std::max(g - a, b - g) > cap)
        return kInf;
    long long s = 0;
    for (int x = a; x <= b; ++x)
        s += lag + std::abs(x - g);
    return s;
}

Problem base_problem(int k)
{
    if (k < 1 || k > kMaxK)
        throw std::invalid_argument("solver: k must lie in [1, " + std::to_string(kMaxK) + "]");
    Problem p;
    p.k = k;
    return p;
}

void attach_lines(Problem& p)
{
    if (p.k >= 2)
        p.lines = modular_lines(p.k).get();
}

void set_cap(Problem& p, int r)
{
    p.cap = r;
    p.window = std::min(r, p.k - 1);
    p.full_column_bound = column_lower_bound(p.k, r);
}

} // namespace

// ---------------------------------------------------------------------------

std::string to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::gap_optimal: return "gap_optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::limit_feasible: return "limit_feasible";
    case SolveStatus::limit_unknown: return "limit_unknown";
    }
    return "unknown";
}

SolverConfig SolverConfig::coverage_only(int k)
{
    SolverConfig c;
    c.k = k;
    c.collinearity_budget = k >= 2 ? static_cast<int>(modular_lines(k)->size()) : 0;
    c.forbid_four_collinear = false;
    c.enforce_symmetric_triple_exclusion = false;
    return c;
}

void SolverConfig::check() const
{
    if (k < 1 || k > kMaxK)
        throw std::invalid_argument("SolverConfig: k must lie in [1, " + std::to_string(kMaxK) + "]");
    if (collinearity_budget < 0)
        throw std::invalid_argument("SolverConfig: collinearity budget must be >= 0");
    if (k >= 2 && collinearity_budget > static_cast<int>(modular_lines(k)->size()))
        throw std::invalid_argument("SolverConfig: collinearity budget exceeds the number of modular lines");
    if (!(time_limit_s > 0.0))
        throw std::invalid_argument("SolverConfig: time limit must be positive");
    if (optimality_gap_tolerance < 0.0 || optimality_gap_tolerance >= 1.0)
        throw std::invalid_argument("SolverConfig: gap tolerance must lie in [0, 1)");
    if (jobs < 1)
        throw std::invalid_argument("SolverConfig: jobs must be >= 1");
    if (radius_cap && *radius_cap < 0)
        throw std::invalid_argument("SolverConfig: radius cap must be >= 0");
}

long long column_lower_bound(int k, int r)
{
    if (k < 1 || r < 0)
        throw std::invalid_argument("column_lower_bound: k >= 1 and r >= 0 required");
    const int lags = std::min(r, k - 1) + 1;
    if (lags > 12)
        return 0; // subset DP too large; trivial bound
    // Each lag owns at most one facility; with equal-slope V-shaped costs every
    // facility serves a contiguous run of subbands, so a DP over runs is exact
    // for a column whose pilots may sit anywhere.
    const int states = 1 << lags;
    std::vector<long long> dp(static_cast<std::size_t>((k + 1) * states), kInf);
    dp[0] = 0;
    for (int a = 0; a < k; ++a)
        for (int s = 0; s < states; ++s) {
            const long long base = dp[static_cast<std::size_t>(a * states + s)];
            if (base >= kInf)
                continue;
            for (int lag = 0; lag < lags; ++lag) {
                if (s & (1 << lag))
                    continue;
                for (int b = a; b < k; ++b) {
                    const long long c = interval_cost(a, b, lag, r);
                    if (c >= kInf)
                        break;
                    auto& cell = dp[static_cast<std::size_t>((b + 1) * states + (s | (1 << lag)))];
                    cell = std::min(cell, base + c);
                }
            }
        }
    long long best = kInf;
    for (int s = 0; s < states; ++s)
        best = std::min(best, dp[static_cast<std::size_t>(k * states + s)]);
    return best;
}

RadiusResult min_covering_radius(int k, const SearchLimits& limits)
{
    RadiusResult res;
    const auto start = Clock::now();
    for (int r = 0;; ++r) {
        if (column_lower_bound(k, r) >= kInf)
            continue; // no single column can be covered within r
        Problem p = base_problem(k);
        set_cap(p, r);
        // the coverage bound orders children even though only feasibility matters
        p.minimize_coverage = true;
        p.stop_at_first = true;
        p.order_by_bound = true;
        p.jobs = limits.jobs;
        p.node_limit = limits.node_limit;
        const double spent = std::chrono::duration<double>(Clock::now() - start).count();
        p.time_limit_s = std::max(1e-3, limits.time_limit_s - spent);
        const Outcome out = run_search(p, std::nullopt);
        res.nodes_explored += out.nodes;
        if (out.found) {
            res.radius = r;
            return res;
        }
        if (!out.completed)
            res.proven_optimal = false;
        if (r > 2 * k)
            throw std::logic_error("min_covering_radius: no feasible radius found");
    }
}

SolveResult solve_mcc(const SolverConfig& config)
{
    config.check();
    const auto start = Clock::now();
    const int k = config.k;

    SolveResult result;
    result.collinearity_budget = config.collinearity_budget;

    int radius = 0;
    if (config.radius_cap) {
        radius = *config.radius_cap;
    } else {
        const auto rr = min_covering_radius(k, SearchLimits{config.time_limit_s, config.node_limit, config.jobs});
        radius = rr.radius;
        result.radius_proven = rr.proven_optimal;
        result.nodes_explored += rr.nodes_explored;
    }
    result.radius_bound = radius;

    Problem p = base_problem(k);
    set_cap(p, radius);
    p.minimize_coverage = true;
    p.order_by_bound = true;
    p.collinearity = k >= 2;
    if (p.collinearity) {
        attach_lines(p);
        p.budget = config.collinearity_budget;
        p.line_cap = config.forbid_four_collinear ? 3 : k;
        p.symmetric_exclusion = config.enforce_symmetric_triple_exclusion;
        if (p.budget >= static_cast<int>(p.lines->size()) && p.line_cap >= k && !p.symmetric_exclusion)
            p.collinearity = false; // nothing left to enforce
    }
    p.break_symmetry = config.break_symmetry;
    p.gap_tolerance = config.optimality_gap_tolerance;
    p.node_limit = config.node_limit;
    p.jobs = config.jobs;
    const double spent = std::chrono::duration<double>(Clock::now() - start).count();
    p.time_limit_s = std::max(1e-3, config.time_limit_s - spent);

    std::optional<Incumbent> warm;
    if (config.warm_start)
        warm = local_search(p);

    const Outcome out = run_search(p, warm);
    result.nodes_explored += out.nodes;
    result.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();

    if (out.found) {
        result.pattern = make_pattern(out.incumbent.schedule);
        result.objective = out.incumbent.objective;
        result.lower_bound = out.lower_bound;
        result.gap = out.incumbent.objective > 0
                         ? static_cast<double>(out.incumbent.objective - out.lower_bound) /
                               static_cast<double>(out.incumbent.objective)
                         : 0.0;
        if (out.completed) {
            result.status = result.gap <= 0.0 ? SolveStatus::optimal : SolveStatus::gap_optimal;
            result.proven_optimal = result.gap <= 0.0;
        } else {
            result.status = SolveStatus::limit_feasible;
        }
    } else {
        result.status = out.completed ? SolveStatus::infeasible : SolveStatus::limit_unknown;
        result.lower_bound = out.completed ? 0 : out.lower_bound;
    }
    return result;
}

TightenResult tighten_budget(int k, int start, const TightenOptions& options)
{
    if (start < 0)
        throw std::invalid_argument("tighten_budget: start must be >= 0");

    TightenResult out;
    SolverConfig cfg = options.base;
    cfg.k = k;

    // stage 1 once, shared by every solve below
    if (!cfg.radius_cap) {
        const auto rr = min_covering_radius(k, SearchLimits{cfg.time_limit_s, cfg.node_limit, cfg.jobs});
        cfg.radius_cap = rr.radius;
    }

    SolverConfig ref = SolverConfig::coverage_only(k);
    ref.radius_cap = cfg.radius_cap;
    ref.time_limit_s = cfg.time_limit_s;
    ref.node_limit = cfg.node_limit;
    ref.jobs = cfg.jobs;
    ref.optimality_gap_tolerance = cfg.optimality_gap_tolerance;
    if (options.reference_objective) {
        out.reference_objective = *options.reference_objective;
    } else {
        const SolveResult reference = solve_mcc(ref);
        if (!reference.feasible())
            throw std::runtime_error("tighten_budget: coverage-only reference solve found no pattern (" +
                                     to_string(reference.status) + ")");
        out.reference_objective = reference.objective;
    }
    const double ceiling = std::isinf(options.degradation_threshold)
                               ? std::numeric_limits<double>::infinity()
                               : static_cast<double>(out.reference_objective) * (1.0 + options.degradation_threshold);

    const int max_budget = k >= 2 ? static_cast<int>(modular_lines(k)->size()) : 0;
    int budget = std::min(start, max_budget);
    cfg.collinearity_budget = budget;
    SolveResult current = solve_mcc(cfg);
    out.trail.push_back({budget, current.status, current.objective});
    while (current.feasible() && budget > 0) {
        cfg.collinearity_budget = budget - 1;
        SolveResult next = solve_mcc(cfg);
        out.trail.push_back({budget - 1, next.status, next.objective});
        if (!next.feasible() || static_cast<double>(next.objective) > ceiling)
            break;
        --budget;
        current = std::move(next);
    }
    out.budget = budget;
    out.result = std::move(current);
    return out;
}

SolveResult solve_min_collinearity(int k, const SearchLimits& limits)
{
    const auto start = Clock::now();
    SolveResult result;
    const int max_budget = k >= 2 ? static_cast<int>(modular_lines(k)->size()) : 0;

    auto attempt = [&](int budget) {
        Problem p = base_problem(k);
        p.collinearity = k >= 2;
        attach_lines(p);
        p.budget = budget;
        p.line_cap = 3;
        p.symmetric_exclusion = true;
        p.stop_at_first = true;
        p.order_by_bound = false;
        p.node_limit = limits.node_limit;
        p.jobs = 1; // first-found semantics need the sequential order
        const double spent = std::chrono::duration<double>(Clock::now() - start).count();
        p.time_limit_s = std::max(1e-3, limits.time_limit_s - spent);
        const Outcome out = run_search(p, std::nullopt);
        result.nodes_explored += out.nodes;
        return out;
    };

    // Walk the budget down from the first pattern found. The lexicographically
    // first pattern under budget b has some count c <= b, and it is also the
    // first one under budget c, so each step lands on an exact answer.
    Outcome out = attempt(max_budget);
    if (!out.found) {
        result.status = out.completed ? SolveStatus::infeasible : SolveStatus::limit_unknown;
    } else {
        bool proven = true;
        for (;;) {
            result.pattern = make_pattern(out.incumbent.schedule);
            const int count = k >= 2 ? collinearity_census(*result.pattern, *modular_lines(k)).redundant_lines : 0;
            result.collinearity_budget = count;
            if (count == 0)
                break;
            Outcome next = attempt(count - 1);
            if (!next.found) {
                proven = next.completed;
                break;
            }
            out = std::move(next);
        }
        const auto cov = coverage(*result.pattern);
        result.objective = cov.total;
        result.radius_bound = cov.radius;
        result.proven_optimal = proven;
        result.status = proven ? SolveStatus::optimal : SolveStatus::limit_feasible;
        result.gap = 0.0;
    }
    result.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

} // namespace mcc
