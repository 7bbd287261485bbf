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

#include "mccpilot/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

namespace mcc {

void SimConfig::check() const
{
    dims.check();
    if (n_tau < 1 || n_nu < 1)
        throw std::invalid_argument("SimConfig: grid sizes must be positive");
    if (n_tau > dims.N())
        throw std::invalid_argument("SimConfig: N_tau must not exceed N = k*M");
    if (window < 1)
        throw std::invalid_argument("SimConfig: window must be >= 1");
    if (n_nu < window)
        throw std::invalid_argument("SimConfig: N_nu must be >= window length T");
    if (num_paths < 0 || static_cast<long long>(num_paths) > static_cast<long long>(n_tau) * n_nu)
        throw std::invalid_argument("SimConfig: num_paths must lie in [0, N_tau*N_nu]");
    if (!(max_doppler >= 0.0) || !(pilot_interval > 0.0) || !(pdp_decay >= 0.0))
        throw std::invalid_argument("SimConfig: Doppler, interval and decay must be non-negative");
    if (std::isnan(snr_db))
        throw std::invalid_argument("SimConfig: snr_db is NaN");
}

double SimConfig::doppler_of_bin(int m) const
{
    const double half = n_nu / 2.0;
    return max_doppler * (static_cast<double>(m) - std::floor(half)) / half;
}

Dictionaries build_dictionaries(const SimConfig& config, int num_slots)
{
    config.check();
    const int N = config.dims.N();
    Dictionaries d;
    d.F.resize(N, config.n_tau);
    const double norm = 1.0 / std::sqrt(static_cast<double>(config.n_tau));
    for (int n = 0; n < N; ++n)
        for (int l = 0; l < config.n_tau; ++l) {
            // reduce n*l mod N before scaling to keep the phase argument small
            const double ph = -2.0 * std::numbers::pi * static_cast<double>((static_cast<long long>(n) * l) % N) / N;
            d.F(n, l) = std::polar(norm, ph);
        }
    d.G.resize(num_slots, config.n_nu);
    for (int t = 0; t < num_slots; ++t)
        for (int m = 0; m < config.n_nu; ++m) {
            const double ph = 2.0 * std::numbers::pi * (t * config.pilot_interval) * config.doppler_of_bin(m);
            d.G(t, m) = std::polar(1.0, ph);
        }
    return d;
}

DDChannel make_channel(int n_tau, int n_nu, const std::vector<PathTap>& taps)
{
    DDChannel ch;
    ch.h = CMatrix::Zero(n_tau, n_nu);
    for (const auto& tap : taps) {
        if (tap.delay < 0 || tap.delay >= n_tau || tap.doppler < 0 || tap.doppler >= n_nu)
            throw std::invalid_argument("make_channel: tap outside the delay-Doppler grid");
        if (ch.h(tap.delay, tap.doppler) != cplx{})
            throw std::invalid_argument("make_channel: duplicate tap");
        ch.h(tap.delay, tap.doppler) = tap.gain;
        if (tap.gain != cplx{})
            ch.support.push_back(tap);
    }
    return ch;
}

DDChannel sample_channel(const SimConfig& config)
{
    config.check();
    const int S = config.num_paths;
    Rng rng(derive_seed(config.seed, {0x636861ULL}));

    // cumulative exponential power-delay profile
    std::vector<double> cdf(static_cast<std::size_t>(config.n_tau));
    double acc = 0.0;
    for (int l = 0; l < config.n_tau; ++l) {
        acc += std::exp(-config.pdp_decay * l);
        cdf[static_cast<std::size_t>(l)] = acc;
    }

    std::set<std::pair<int, int>> taken;
    std::vector<PathTap> taps;
    const double scale = S > 0 ? 1.0 / S : 0.0;
    while (static_cast<int>(taps.size()) < S) {
        const double u = rng.uniform() * acc;
        const int delay = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        const int dl = std::min(delay, config.n_tau - 1);
        const int dop = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.n_nu)));
        if (!taken.insert({dl, dop}).second)
            continue;
        taps.push_back(PathTap{dl, dop, rng.complex_normal(scale)});
    }
    return make_channel(config.n_tau, config.n_nu, taps);
}

CVector channel_at(const DDChannel& channel, const Dictionaries& dicts, int t)
{
    return dicts.F * (channel.h * dicts.G.row(t).transpose());
}

ObservationWindow observe(const PilotPattern& pattern, int shift, const DDChannel& channel,
                          const SimConfig& config, const Dictionaries& dicts)
{
    config.check();
    const int k = config.dims.k;
    const int M = config.dims.M;
    const int T = config.window;
    if (pattern.k != k)
        throw std::invalid_argument("observe: pattern period differs from dims.k");
    if (dicts.G.rows() < T || dicts.F.rows() != config.dims.N())
        throw std::invalid_argument("observe: dictionaries do not cover the window");

    ObservationWindow win;
    win.T = T;
    win.t0 = T - 1;
    win.M = M;

    std::vector<CVector> full(static_cast<std::size_t>(T));
    double power = 0.0;
    for (int t = 0; t < T; ++t) {
        full[static_cast<std::size_t>(t)] = channel_at(channel, dicts, t);
        power += full[static_cast<std::size_t>(t)].squaredNorm() / config.dims.N();
    }
    power /= T;
    const double sigma_sq = std::isinf(config.snr_db) && config.snr_db > 0
                                ? 0.0
                                : power * std::pow(10.0, -config.snr_db / 10.0);

    Rng noise(derive_seed(config.seed, {0x6e6f6973ULL}));
    for (int t = 0; t < T; ++t) {
        SlotObservation obs;
        obs.t = t;
        obs.subband = pattern[mod(static_cast<long long>(t) + shift, k)];
        obs.sigma_sq = sigma_sq;
        obs.y = full[static_cast<std::size_t>(t)].segment(static_cast<Eigen::Index>(obs.subband) * M, M);
        for (int m = 0; m < M; ++m) {
            const cplx w = noise.complex_normal(1.0);
            if (sigma_sq > 0.0)
                obs.y(m) += std::sqrt(sigma_sq) * w;
        }
        win.slots.push_back(std::move(obs));
    }
    return win;
}

} // namespace mcc
