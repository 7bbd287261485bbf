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

#include <optional>
#include <vector>

namespace mcc {

struct RecoveryConfig
{
    int iterations = 500;
    std::optional<double> lambda_override;
    /// Half-width, in Doppler bins, kept around the energy centroid.
    std::optional<int> doppler_truncation;
    bool debias_on_support = true;
    double support_threshold = 0.05; ///< relative to the largest |h|
    int power_iterations = 50;
    double power_tolerance = 1e-6;

    void check() const;
};

struct RecoveryResult
{
    CMatrix h_est;
    CVector latest_channel;
    std::vector<double> objective_trace;
    double lambda_used = 0.0;
    double lipschitz = 0.0;
    int restarts = 0;
    bool rank_deficient = false;
    int support_size = 0;
};

/// Forward map of the windowed model: h -> [R_{f_t} F h G[t]^T]_t, stacked
/// slot after slot into one vector of length T*M.
class WindowOperator
{
public:
    WindowOperator(const ObservationWindow& window, const Dictionaries& dicts);

    CVector apply(const CMatrix& h) const;
    CMatrix adjoint(const CVector& y) const;

    /// Observations stacked in the same order as apply().
    const CVector& observations() const { return y_; }

    /// Column of the forward map for atom (delay, doppler).
    CVector atom(int delay, int doppler) const;

    int rows() const { return static_cast<int>(y_.size()); }
    Eigen::Index n_tau() const { return n_tau_; }
    Eigen::Index n_nu() const { return n_nu_; }

private:
    std::vector<CMatrix> f_sub_; ///< per-slot M x N_tau row block of F
    CMatrix g_win_;              ///< T x N_nu rows of G for the window slots
    CVector y_;
    Eigen::Index M_ = 0;
    Eigen::Index n_tau_ = 0;
    Eigen::Index n_nu_ = 0;
};

/// lambda = sqrt(2 sigma^2 N_tau N_nu ln(N_tau N_nu) / (M T)).
double lambda_rule(double sigma_bar_sq, int n_tau, int n_nu, int M, int T);

/// Mean per-slot noise variance over the window.
double mean_noise_variance(const ObservationWindow& window);

/// z * max(|z| - tau, 0) / |z|.
cplx soft_threshold(cplx z, double tau);

/// ||y - A h||^2 + lambda * sum |h_ij|.
double lasso_objective(const WindowOperator& op, const CMatrix& h, double lambda);

/// Gradient 2 A^H (A h - y) of the smooth term, as a complex matrix whose
/// real and imaginary parts are the partial derivatives.
CMatrix smooth_gradient(const WindowOperator& op, const CMatrix& h);

/// Largest eigenvalue of A^H A by power iteration.
double operator_norm_sq(const WindowOperator& op, int iterations, double tolerance);

/// Smallest lambda for which h = 0 solves the problem: 2 max |A^H y|.
double lambda_max(const WindowOperator& op);

/// Accelerated proximal gradient with restart on objective increase; the
/// objective trace is non-increasing. Throws std::runtime_error on NaN.
RecoveryResult fista(const ObservationWindow& window, const Dictionaries& dicts, double lambda,
                     const RecoveryConfig& config);

/// Optional Doppler truncation around the energy centroid, then least-squares
/// debiasing restricted to entries >= support_threshold * max |h|.
RecoveryResult refine(RecoveryResult result, const ObservationWindow& window, const Dictionaries& dicts,
                      const RecoveryConfig& config);

/// F h G[t0]^T.
CVector reconstruct_latest(const CMatrix& h_est, const Dictionaries& dicts, int t0);

/// ||est - truth||^2 / ||truth||^2; throws for zero truth or size mismatch.
double nmse(const CVector& est, const CVector& truth);

/// lambda rule (unless overridden), FISTA, refinement and latest-slot
/// reconstruction in one call.
RecoveryResult recover(const ObservationWindow& window, const Dictionaries& dicts, const RecoveryConfig& config);

} // namespace mcc
