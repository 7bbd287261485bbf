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
#include "mccpilot/harness.hpp"
#include "mccpilot/io.hpp"
#include "mccpilot/lp_export.hpp"
#include "mccpilot/recovery.hpp"
#include "mccpilot/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// exit codes of `design`
constexpr int kExitOptimal = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGap = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitLimit = 5;

struct Globals
{
    std::uint64_t seed = 1;
    bool seed_given = false;
    int jobs = 1;
    fs::path out_dir = ".";
    bool quiet = false;
};

struct SimFlags
{
    int M = 24;
    int n_tau = 64;
    int n_nu = 16;
    int window = 10;
    int paths = 6;
    double max_doppler = 0.02;
    double interval = 1.0;
    double pdp_decay = 0.05;
    std::string snr = "30";

    void add(CLI::App* app)
    {
        app->add_option("--M", M, "subcarriers per subband")->capture_default_str();
        app->add_option("--n-tau", n_tau, "delay bins")->capture_default_str();
        app->add_option("--n-nu", n_nu, "Doppler bins")->capture_default_str();
        app->add_option("--window", window, "slots in the recovery window (T)")->capture_default_str();
        app->add_option("--paths", paths, "channel taps (S)")->capture_default_str();
        app->add_option("--max-doppler", max_doppler, "largest Doppler, cycles per slot")->capture_default_str();
        app->add_option("--interval", interval, "pilot interval multiplier")->capture_default_str();
        app->add_option("--pdp-decay", pdp_decay, "exponential delay-profile rate")->capture_default_str();
        app->add_option("--snr", snr, "SNR in dB, or inf")->capture_default_str();
    }

    mcc::SimConfig build(int k, std::uint64_t seed) const
    {
        mcc::SimConfig c;
        c.dims = {k, M};
        c.n_tau = n_tau;
        c.n_nu = n_nu;
        c.window = window;
        c.num_paths = paths;
        c.max_doppler = max_doppler;
        c.pilot_interval = interval;
        c.pdp_decay = pdp_decay;
        c.snr_db = parse_snr(snr);
        c.seed = seed;
        c.check();
        return c;
    }

    static double parse_snr(const std::string& s)
    {
        if (s == "inf" || s == "+inf")
            return INFINITY;
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("bad --snr value \"" + s + "\"");
        return v;
    }
};

void progress_bar(const Globals& g, std::size_t done, std::size_t total)
{
    if (g.quiet)
        return;
    const std::size_t step = std::max<std::size_t>(1, total / 20);
    if (done % step == 0 || done == total)
        std::fprintf(stderr, "  %zu/%zu evaluations\n", done, total);
}

mcc::PilotPattern load_or_name(const std::string& file, const std::string& name, int k, mcc::PatternLibrary& lib,
                               std::uint64_t seed)
{
    if (!file.empty())
        return mcc::read_pattern(file);
    if (name.empty())
        throw std::invalid_argument("give --pattern FILE or --name NAME");
    return lib.get(name, k, seed);
}

json solve_json(const mcc::SolveResult& r)
{
    json j{{"status", mcc::to_string(r.status)},
           {"radius_bound", r.radius_bound},
           {"radius_proven", r.radius_proven},
           {"objective", r.objective},
           {"lower_bound", r.lower_bound},
           {"proven_optimal", r.proven_optimal},
           {"gap", r.gap},
           {"nodes_explored", r.nodes_explored},
           {"wall_time_s", r.wall_time_s},
           {"collinearity_budget", r.collinearity_budget}};
    j["schedule"] = r.pattern ? json(r.pattern->schedule) : json(nullptr);
    return j;
}

int exit_code(mcc::SolveStatus s)
{
    switch (s) {
    case mcc::SolveStatus::optimal: return kExitOptimal;
    case mcc::SolveStatus::gap_optimal: return kExitGap;
    case mcc::SolveStatus::infeasible: return kExitInfeasible;
    case mcc::SolveStatus::limit_feasible:
    case mcc::SolveStatus::limit_unknown: return kExitLimit;
    }
    return kExitError;
}

json run_metadata(const Globals& g, const std::string& command)
{
    return json{{"tool", "mcc-pilot"}, {"version", mcc::version()}, {"command", command}, {"seed", g.seed},
                {"jobs", g.jobs}};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pilot pattern design, geometry metrics and windowed sparse channel recovery."};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(mcc::version()));

    Globals g;
    auto* seed_opt = app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    app.add_option("--jobs", g.jobs, "worker threads for sweeps and the solver")->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "directory for output files")->capture_default_str();
    app.add_flag("--quiet", g.quiet, "no progress output on stderr");

    // design ---------------------------------------------------------------
    auto* design = app.add_subcommand("design", "construct an MCC pattern");
    int d_k = 17;
    int d_budget = -1;
    bool d_no_sym = false;
    bool d_allow_four = false;
    double d_time = 600.0;
    double d_gap = 0.0;
    std::uint64_t d_nodes = 0;
    std::string d_lp;
    std::string d_out;
    bool d_tighten = false;
    double d_threshold = 0.05;
    design->add_option("--k", d_k, "period / number of subbands")->capture_default_str();
    design->add_option("--budget", d_budget,
                       "collinearity budget; omitted: tighten from the coverage-only pattern's count");
    design->add_flag("--no-symmetry-exclusion", d_no_sym, "allow symmetric triples");
    design->add_flag("--allow-four-collinear", d_allow_four, "budgeted lines may hold any number of pilots");
    design->add_option("--time-limit", d_time, "seconds per solve")->capture_default_str();
    design->add_option("--gap", d_gap, "relative optimality gap accepted")->capture_default_str();
    design->add_option("--node-limit", d_nodes, "nodes per solve, 0 = unlimited")->capture_default_str();
    design->add_flag("--tighten", d_tighten, "with --budget: lower the budget while coverage holds");
    design->add_option("--threshold", d_threshold, "coverage degradation tolerated while tightening")
        ->capture_default_str();
    design->add_option("--export-lp", d_lp, "write the 0-1 model in LP format");
    design->add_option("--out", d_out, "write the pattern (.json for JSON, text otherwise)");

    // metrics --------------------------------------------------------------
    auto* metrics = app.add_subcommand("metrics", "geometry metrics of a pattern");
    std::string m_file;
    std::string m_name;
    int m_k = 17;
    int m_M = 24;
    metrics->add_option("--pattern", m_file, "pattern file");
    metrics->add_option("--name", m_name, "named pattern: mcc, 3gpp, chirp, random, coverage_only, collinearity_only");
    metrics->add_option("--k", m_k, "period for --name")->capture_default_str();
    metrics->add_option("--M", m_M, "subband width for the legacy kernel peak")->capture_default_str();
    std::string m_rho_csv;
    metrics->add_option("--coherence-csv", m_rho_csv, "write the squared coherence map, k rows (i) by k columns (j)");

    // simulate -------------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "write one observation window as JSON");
    std::string s_file;
    std::string s_name = "3gpp";
    int s_k = 17;
    int s_shift = 0;
    std::string s_out;
    SimFlags s_sim;
    simulate->add_option("--pattern", s_file, "pattern file");
    simulate->add_option("--name", s_name, "named pattern when no file is given")->capture_default_str();
    simulate->add_option("--k", s_k, "period for --name")->capture_default_str();
    simulate->add_option("--shift", s_shift, "cyclic shift applied to the pattern")->capture_default_str();
    simulate->add_option("--out", s_out, "bundle path (default OUT_DIR/observations.json)");
    s_sim.add(simulate);

    // recover --------------------------------------------------------------
    auto* recover = app.add_subcommand("recover", "recover the latest-slot channel from a bundle");
    std::string r_bundle;
    mcc::RecoveryConfig r_cfg;
    double r_lambda = -1.0;
    int r_trunc = -1;
    bool r_no_debias = false;
    std::string r_csv;
    recover->add_option("--bundle", r_bundle, "observation bundle from `simulate`")->required();
    recover->add_option("--iterations", r_cfg.iterations, "FISTA iterations")->capture_default_str();
    recover->add_option("--lambda", r_lambda, "regularization weight (default: noise-scaled rule)");
    recover->add_option("--doppler-truncation", r_trunc, "Doppler half-width kept around the centroid");
    recover->add_flag("--no-debias", r_no_debias, "skip least-squares refinement on the support");
    recover->add_option("--support-threshold", r_cfg.support_threshold, "relative support threshold")
        ->capture_default_str();
    recover->add_option("--latest-csv", r_csv, "write the recovered latest-slot channel as re,im rows");

    // sweep ----------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "median worst-quarter NMSE over a parameter sweep");
    std::string w_config;
    std::string w_kind = "snr";
    std::vector<std::string> w_values{"0", "10", "20", "30"};
    std::vector<std::string> w_patterns;
    int w_real = 50;
    int w_k = 17;
    std::string w_cache;
    std::uint64_t w_nodes = mcc::DesignOptions{}.node_limit;
    SimFlags w_sim;
    sweep->add_option("--config", w_config, "sweep spec JSON; flags below are ignored when given");
    sweep->add_option("--kind", w_kind, "snr | interval | subwindow | k")->capture_default_str();
    sweep->add_option("--values", w_values, "sweep values")->delimiter(',')->capture_default_str();
    sweep->add_option("--patterns", w_patterns, "pattern names (default mcc,3gpp,chirp,random)")->delimiter(',');
    sweep->add_option("--realizations", w_real, "channel realizations")->capture_default_str();
    sweep->add_option("--k", w_k, "period")->capture_default_str();
    sweep->add_option("--cache-dir", w_cache, "solved-pattern cache (default OUT_DIR/pattern_cache)");
    sweep->add_option("--node-limit", w_nodes, "node cap per pattern solve")->capture_default_str();
    w_sim.add(sweep);
    sweep->footer("Each realization scores the mean of the worst floor(k/4) cyclic-shift NMSEs; for k < 4 the "
                  "single worst shift is used. A k sweep sets M = floor(408/k).");

    // compare --------------------------------------------------------------
    auto* compare = app.add_subcommand("compare", "geometry and NMSE of all six named patterns");
    int c_k = 17;
    int c_real = 50;
    std::string c_cache;
    std::uint64_t c_nodes = mcc::DesignOptions{}.node_limit;
    SimFlags c_sim;
    compare->add_option("--k", c_k, "period")->capture_default_str();
    compare->add_option("--realizations", c_real, "channel realizations; 0 skips NMSE")->capture_default_str();
    compare->add_option("--cache-dir", c_cache, "solved-pattern cache (default OUT_DIR/pattern_cache)");
    compare->add_option("--node-limit", c_nodes, "node cap per pattern solve")->capture_default_str();
    c_sim.add(compare);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }
    g.seed_given = seed_opt->count() > 0;

    try {
        if (*design) {
            mcc::SolverConfig cfg;
            cfg.k = d_k;
            cfg.enforce_symmetric_triple_exclusion = !d_no_sym;
            cfg.forbid_four_collinear = !d_allow_four;
            cfg.time_limit_s = d_time;
            cfg.optimality_gap_tolerance = d_gap;
            cfg.node_limit = d_nodes;
            cfg.jobs = g.jobs;

            json out;
            std::optional<mcc::PilotPattern> pattern;
            mcc::SolveStatus status = mcc::SolveStatus::limit_unknown;
            if (d_budget < 0) {
                mcc::DesignOptions o;
                o.node_limit = d_nodes;
                o.time_limit_s = d_time;
                o.degradation_threshold = d_threshold;
                o.jobs = g.jobs;
                const auto d = mcc::design_mcc(d_k, o);
                pattern = d.pattern;
                status = d.status;
                cfg.radius_cap = d.radius;
                cfg.collinearity_budget = d.budget;
                cfg.forbid_four_collinear = !d.four_collinear_relaxed;
                cfg.enforce_symmetric_triple_exclusion = !d.symmetric_exclusion_relaxed;
                out = json{{"status", mcc::to_string(d.status)},
                           {"radius_bound", d.radius},
                           {"collinearity_budget", d.budget},
                           {"objective", d.objective},
                           {"coverage_only_objective", d.reference_objective},
                           {"four_collinear_relaxed", d.four_collinear_relaxed},
                           {"symmetric_exclusion_relaxed", d.symmetric_exclusion_relaxed},
                           {"schedule", d.pattern.schedule}};
            } else {
                cfg.collinearity_budget = d_budget;
                if (d_tighten) {
                    mcc::TightenOptions t;
                    t.degradation_threshold = d_threshold;
                    t.base = cfg;
                    const auto tr = mcc::tighten_budget(d_k, d_budget, t);
                    out = solve_json(tr.result);
                    out["coverage_only_objective"] = tr.reference_objective;
                    json trail = json::array();
                    for (const auto& s : tr.trail)
                        trail.push_back({{"budget", s.budget}, {"status", mcc::to_string(s.status)},
                                         {"objective", s.objective}});
                    out["trail"] = trail;
                    pattern = tr.result.pattern;
                    status = tr.result.status;
                    cfg.collinearity_budget = tr.budget;
                    cfg.radius_cap = tr.result.radius_bound;
                } else {
                    const auto r = mcc::solve_mcc(cfg);
                    out = solve_json(r);
                    pattern = r.pattern;
                    status = r.status;
                    cfg.radius_cap = r.radius_bound;
                }
            }
            if (!d_lp.empty()) {
                const auto stats = mcc::export_lp(cfg, d_lp);
                out["lp"] = {{"path", d_lp},
                             {"variables", stats.variables()},
                             {"constraints", stats.constraints},
                             {"radius", stats.radius}};
            }
            if (!d_out.empty() && pattern)
                mcc::write_pattern(d_out, *pattern);
            std::cout << out.dump(2) << "\n";
            return exit_code(status);
        }

        if (*metrics) {
            mcc::PatternLibrary lib;
            auto p = load_or_name(m_file, m_name, m_k, lib, g.seed);
            const auto cov = mcc::coverage(p);
            json j{{"k", p.k}, {"schedule", p.schedule}, {"is_permutation", p.is_permutation},
                   {"radius", cov.radius}, {"total", cov.total}};
            if (p.k >= 2) {
                const auto lines = mcc::modular_lines(p.k);
                const auto census = mcc::collinearity_census(p, *lines);
                j["modular_lines"] = lines->size();
                j["redundant_lines"] = census.redundant_lines;
                j["max_line_count"] = census.max_count;
                j["has_four_collinear"] = census.has_four_collinear;
                j["symmetric_triples"] = mcc::symmetric_triples(p, *lines).size();
            }
            const auto rho = mcc::coherence_map(p);
            j["max_offpeak_coherence"] = rho.max_offpeak;
            if (!m_rho_csv.empty()) {
                std::string csv;
                char buf[32];
                for (int i = 0; i < p.k; ++i)
                    for (int jj = 0; jj < p.k; ++jj) {
                        std::snprintf(buf, sizeof buf, "%.17g", rho.at(i, jj));
                        csv += buf;
                        csv += jj + 1 < p.k ? ',' : '\n';
                    }
                mcc::write_file(m_rho_csv, csv);
            }
            if (const auto d = mcc::hop_increment(p)) {
                j["hop_increment"] = *d;
                j["legacy_kernel_peak"] = mcc::kernel_peak(m_M, p.k);
            }
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        if (*simulate) {
            mcc::PatternLibrary lib;
            auto p = load_or_name(s_file, s_name, s_k, lib, g.seed);
            mcc::ObservationBundle b;
            b.config = s_sim.build(p.k, g.seed);
            b.pattern = p;
            b.shift = s_shift;
            const auto dicts = mcc::build_dictionaries(b.config);
            const auto ch = mcc::sample_channel(b.config);
            b.window = mcc::observe(p, s_shift, ch, b.config, dicts);
            b.truth_latest = mcc::channel_at(ch, dicts, b.window.t0);
            const fs::path path = s_out.empty() ? g.out_dir / "observations.json" : fs::path(s_out);
            mcc::write_file(path, mcc::bundle_to_json(b));
            if (!g.quiet)
                std::fprintf(stderr, "wrote %s\n", path.string().c_str());
            return 0;
        }

        if (*recover) {
            const auto b = mcc::bundle_from_json(mcc::read_file(r_bundle));
            if (r_lambda >= 0.0)
                r_cfg.lambda_override = r_lambda;
            if (r_trunc >= 0)
                r_cfg.doppler_truncation = r_trunc;
            r_cfg.debias_on_support = !r_no_debias;
            const auto dicts = mcc::build_dictionaries(b.config);
            const auto res = mcc::recover(b.window, dicts, r_cfg);
            json j{{"nmse", mcc::nmse(res.latest_channel, b.truth_latest)},
                   {"lambda_used", res.lambda_used},
                   {"iterations", r_cfg.iterations},
                   {"objective_first", res.objective_trace.front()},
                   {"objective_last", res.objective_trace.back()},
                   {"restarts", res.restarts},
                   {"support_size", res.support_size},
                   {"rank_deficient", res.rank_deficient}};
            if (!r_csv.empty()) {
                std::ostringstream csv;
                csv.precision(17);
                csv << "re,im\n";
                for (Eigen::Index i = 0; i < res.latest_channel.size(); ++i)
                    csv << res.latest_channel(i).real() << "," << res.latest_channel(i).imag() << "\n";
                mcc::write_file(r_csv, csv.str());
            }
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        if (*sweep || *compare) {
            mcc::SweepSpec spec;
            fs::path cache;
            mcc::DesignOptions design_opts;
            if (*sweep) {
                if (!w_config.empty()) {
                    spec = mcc::parse_sweep_spec(mcc::read_file(w_config));
                    if (g.seed_given)
                        spec.seed = g.seed;
                } else {
                    spec.kind = mcc::parse_sweep_kind(w_kind);
                    for (const auto& v : w_values)
                        spec.values.push_back(SimFlags::parse_snr(v));
                    if (!w_patterns.empty())
                        spec.patterns = w_patterns;
                    spec.realizations = w_real;
                    spec.sim = w_sim.build(w_k, g.seed);
                    spec.seed = g.seed;
                }
                cache = w_cache.empty() ? g.out_dir / "pattern_cache" : fs::path(w_cache);
                design_opts.node_limit = w_nodes;
            } else {
                spec.sim = c_sim.build(c_k, g.seed);
                spec.values = {spec.sim.snr_db};
                spec.realizations = c_real;
                spec.seed = g.seed;
                cache = c_cache.empty() ? g.out_dir / "pattern_cache" : fs::path(c_cache);
                design_opts.node_limit = c_nodes;
            }
            spec.jobs = g.jobs;
            // pattern solves stay single-threaded so node-limited designs do
            // not depend on --jobs
            mcc::PatternLibrary lib(design_opts, cache);
            auto progress = [&](std::size_t done, std::size_t total) { progress_bar(g, done, total); };

            json meta = run_metadata(g, *sweep ? "sweep" : "compare");
            meta["spec"] = json::parse(mcc::sweep_spec_to_json(spec));
            meta["design_node_limit"] = design_opts.node_limit;
            meta["pattern_cache"] = cache.string();

            if (*sweep) {
                const auto result = mcc::run_sweep(spec, lib, progress);
                const std::string base = "sweep_" + mcc::to_string(spec.kind);
                const std::string csv = mcc::sweep_csv(result);
                mcc::write_file(g.out_dir / (base + ".csv"), csv);
                mcc::write_file(g.out_dir / (base + "_raw.csv"), mcc::raw_csv(result));
                json pats = json::object();
                for (const auto& name : spec.patterns)
                    if (name != "random" && spec.kind != mcc::SweepKind::k)
                        pats[name] = lib.get(name, spec.sim.dims.k).schedule;
                meta["patterns"] = pats;
                meta["channel_seeds"] = "derive_seed(seed, {realization})";
                mcc::write_file(g.out_dir / (base + "_metadata.json"), meta.dump(2) + "\n");
                std::cout << csv;
            } else {
                const auto reports = mcc::compare_patterns(spec, lib, progress);
                const std::string csv = mcc::compare_csv(reports);
                const std::string base = "compare_k" + std::to_string(spec.sim.dims.k);
                mcc::write_file(g.out_dir / (base + ".csv"), csv);
                mcc::write_file(g.out_dir / (base + "_metadata.json"), meta.dump(2) + "\n");
                std::cout << csv;
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "mcc-pilot: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
