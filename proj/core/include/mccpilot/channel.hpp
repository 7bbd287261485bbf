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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace mcc {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Synthetic sparse delay-Doppler channel setup.
///
/// Doppler bin m sits at nu_m = max_doppler * (m - N_nu/2) / (N_nu/2) cycles
/// per slot; the pilot interval multiplies the slot index in the phase.
struct SimConfig
{
    GridDims dims{17, 24};
    int n_tau = 64;
    int n_nu = 16;
    int window = 10;         ///< T, slots in the recovery window
    int num_paths = 6;       ///< S
    double max_doppler = 0.02;
    double pilot_interval = 1.0;
    double pdp_decay = 0.05; ///< exponential power-delay-profile rate per delay bin
    double snr_db = 30.0;    ///< +inf disables noise
    std::uint64_t seed = 1;

    void check() const;
    double doppler_of_bin(int m) const;
};

/// F (N x N_tau) maps delay to frequency; G (slots x N_nu) maps Doppler to
/// slot phase, rows indexed by absolute slot.
struct Dictionaries
{
    CMatrix F;
    CMatrix G;
};

Dictionaries build_dictionaries(const SimConfig& config, int num_slots);

/// Dictionaries sized for one recovery window (slots 0..T-1).
inline Dictionaries build_dictionaries(const SimConfig& config)
{
    return build_dictionaries(config, config.window);
}

struct PathTap
{
    int delay = 0;
    int doppler = 0; ///< bin index in [0, N_nu)
    cplx gain;
};

struct DDChannel
{
    CMatrix h; ///< N_tau x N_nu coefficients
    std::vector<PathTap> support;
};

/// S distinct on-grid taps; delay weighted by the exponential PDP, Doppler
/// uniform, gains CN(0, 1/S) so that E||h||_F^2 = 1. Deterministic in
/// config.seed.
DDChannel sample_channel(const SimConfig& config);

/// Builds a channel from an explicit tap list.
DDChannel make_channel(int n_tau, int n_nu, const std::vector<PathTap>& taps);

struct SlotObservation
{
    int t = 0;
    int subband = 0;
    CVector y; ///< M pilot measurements
    double sigma_sq = 0.0;
};

struct ObservationWindow
{
    int T = 0;
    int t0 = 0; ///< latest slot
    int M = 0;
    std::vector<SlotObservation> slots;
};

/// Full-band channel at slot t: F h G[t]^T.
CVector channel_at(const DDChannel& channel, const Dictionaries& dicts, int t);

/// Pilot observations over slots 0..T-1 (t0 = T-1). Slot t reads subband
/// pattern[(t + shift) mod k]. Noise is drawn from a stream that depends on
/// config.seed and the slot only, so every shift of one realization sees the
/// same noise samples.
ObservationWindow observe(const PilotPattern& pattern, int shift, const DDChannel& channel,
                          const SimConfig& config, const Dictionaries& dicts);

} // namespace mcc
