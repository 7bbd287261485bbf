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

#include "mccpilot/recovery.hpp"

#include "mccpilot/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mcc {

void RecoveryConfig::check() const
{
    if (iterations < 1)
        throw std::invalid_argument("RecoveryConfig: iterations must be >= 1");
    if (!(support_threshold > 0.0 && support_threshold < 1.0))
        throw std::invalid_argument("RecoveryConfig: support threshold must lie in (0, 1)");
    if (doppler_truncation && *doppler_truncation < 0)
        throw std::invalid_argument("RecoveryConfig: Doppler truncation half-width must be >= 0");
    if (lambda_override && !(*lambda_override >= 0.0))
        throw std::invalid_argument("RecoveryConfig: lambda override must be >= 0");
    if (power_iterations < 1)
        throw std::invalid_argument("RecoveryConfig: power iterations must be >= 1");
}

WindowOperator::WindowOperator(const ObservationWindow& window, const Dictionaries& dicts)
    : M_(window.M), n_tau_(dicts.F.cols()), n_nu_(dicts.G.cols())
{
    const auto T = static_cast<Eigen::Index>(window.slots.size());
    if (T == 0 || M_ < 1)
        throw std::invalid_argument("WindowOperator: empty observation window");
    g_win_.resize(T, n_nu_);
    y_.resize(T * M_);
    f_sub_.reserve(static_cast<std::size_t>(T));
    for (Eigen::Index i = 0; i < T; ++i) {
        const auto& s = window.slots[static_cast<std::size_t>(i)];
        if (s.y.size() != M_ || (s.subband + 1) * M_ > dicts.F.rows() || s.t < 0 || s.t >= dicts.G.rows())
            throw std::invalid_argument("WindowOperator: slot " + std::to_string(i) +
                                        " does not match the dictionaries");
        f_sub_.push_back(dicts.F.middleRows(static_cast<Eigen::Index>(s.subband) * M_, M_));
        g_win_.row(i) = dicts.G.row(s.t);
        y_.segment(i * M_, M_) = s.y;
    }
}

CVector WindowOperator::apply(const CMatrix& h) const
{
    const CMatrix v = h * g_win_.transpose(); // N_tau x T
    CVector out(y_.size());
    for (std::size_t t = 0; t < f_sub_.size(); ++t)
        out.segment(static_cast<Eigen::Index>(t) * M_, M_).noalias() = f_sub_[t] * v.col(static_cast<Eigen::Index>(t));
    return out;
}

CMatrix WindowOperator::adjoint(const CVector& y) const
{
    CMatrix w(n_tau_, static_cast<Eigen::Index>(f_sub_.size()));
    for (std::size_t t = 0; t < f_sub_.size(); ++t)
        w.col(static_cast<Eigen::Index>(t)).noalias() =
            f_sub_[t].adjoint() * y.segment(static_cast<Eigen::Index>(t) * M_, M_);
    return w * g_win_.conjugate();
}

CVector WindowOperator::atom(int delay, int doppler) const
{
    CVector out(y_.size());
    for (std::size_t t = 0; t < f_sub_.size(); ++t)
        out.segment(static_cast<Eigen::Index>(t) * M_, M_) =
            f_sub_[t].col(delay) * g_win_(static_cast<Eigen::Index>(t), doppler);
    return out;
}

double lambda_rule(double sigma_bar_sq, int n_tau, int n_nu, int M, int T)
{
    if (!(sigma_bar_sq >= 0.0) || n_tau < 1 || n_nu < 1 || M < 1 || T < 1)
        throw std::invalid_argument("lambda_rule: noise variance must be >= 0 and sizes positive");
    const double grid = static_cast<double>(n_tau) * n_nu;
    return std::sqrt(2.0 * sigma_bar_sq * grid * std::log(grid) / (static_cast<double>(M) * T));
}

double mean_noise_variance(const ObservationWindow& window)
{
    if (window.slots.empty())
        return 0.0;
    double s = 0.0;
    for (const auto& slot : window.slots)
        s += slot.sigma_sq;
    return s / static_cast<double>(window.slots.size());
}

cplx soft_threshold(cplx z, double tau)
{
    const double m = std::abs(z);
    if (m <= tau)
        return {0.0, 0.0};
    return z * ((m - tau) / m);
}

namespace {

double l1(const CMatrix& h)
{
    return h.cwiseAbs().sum();
}

CMatrix prox(const CMatrix& v, double tau)
{
    return v.unaryExpr([tau](const cplx& z) { return soft_threshold(z, tau); });
}

} // namespace

double lasso_objective(const WindowOperator& op, const CMatrix& h, double lambda)
{
    return (op.apply(h) - op.observations()).squaredNorm() + lambda * l1(h);
}

CMatrix smooth_gradient(const WindowOperator& op, const CMatrix& h)
{
    return 2.0 * op.adjoint(op.apply(h) - op.observations());
}

double operator_norm_sq(const WindowOperator& op, int iterations, double tolerance)
{
    Rng rng(0x706f776572ULL);
    CMatrix v(op.n_tau(), op.n_nu());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = rng.complex_normal(1.0);
    v /= v.norm();
    double estimate = 0.0;
    for (int it = 0; it < iterations; ++it) {
        CMatrix w = op.adjoint(op.apply(v));
        const double next = std::real((v.conjugate().cwiseProduct(w)).sum());
        const double n = w.norm();
        if (n == 0.0)
            return 0.0;
        v = w / n;
        const bool converged = it > 0 && std::abs(next - estimate) <= tolerance * std::abs(next);
        estimate = next;
        if (converged)
            break;
    }
    return estimate;
}

double lambda_max(const WindowOperator& op)
{
    return 2.0 * op.adjoint(op.observations()).cwiseAbs().maxCoeff();
}

RecoveryResult fista(const ObservationWindow& window, const Dictionaries& dicts, double lambda,
                     const RecoveryConfig& config)
{
    config.check();
    if (!(lambda >= 0.0))
        throw std::invalid_argument("fista: lambda must be >= 0");
    const WindowOperator op(window, dicts);
    const CVector& b = op.observations();

    RecoveryResult res;
    res.lambda_used = lambda;
    res.objective_trace.reserve(static_cast<std::size_t>(config.iterations));

    CMatrix x = CMatrix::Zero(op.n_tau(), op.n_nu());
    double fx = b.squaredNorm();

    // zero is optimal once lambda reaches 2 max|A^H y|; return it exactly
    if (lambda >= lambda_max(op)) {
        res.h_est = x;
        res.objective_trace.assign(static_cast<std::size_t>(config.iterations), fx);
        res.latest_channel = reconstruct_latest(x, dicts, window.t0);
        return res;
    }

    res.lipschitz = 2.0 * operator_norm_sq(op, config.power_iterations, config.power_tolerance);
    double step = res.lipschitz > 0.0 ? 1.0 / res.lipschitz : 1.0;

    CMatrix y = x;
    double tk = 1.0;

    // one proximal step from point v; backtracks until the quadratic upper
    // bound of the smooth term holds
    auto prox_step = [&](const CMatrix& v, CMatrix& z, double& fz) {
        const CVector rv = op.apply(v) - b;
        const double fv = rv.squaredNorm();
        const CMatrix grad = 2.0 * op.adjoint(rv);
        for (int guard = 0; guard < 60; ++guard) {
            z = prox(v - step * grad, lambda * step);
            const CMatrix dz = z - v;
            const double smooth = (op.apply(z) - b).squaredNorm();
            const double bound =
                fv + std::real((grad.conjugate().cwiseProduct(dz)).sum()) + dz.squaredNorm() / (2.0 * step);
            if (smooth <= bound * (1.0 + 1e-12) + 1e-300) {
                fz = smooth + lambda * l1(z);
                return;
            }
            step *= 0.5;
        }
        throw std::runtime_error("fista: step-size backtracking failed");
    };

    CMatrix z;
    for (int it = 0; it < config.iterations; ++it) {
        double fz = 0.0;
        prox_step(y, z, fz);
        if (std::isnan(fz))
            throw std::runtime_error("fista: objective is NaN; step size estimate is unusable");
        if (fz > fx) {
            // momentum overshot: restart from the last accepted iterate
            ++res.restarts;
            tk = 1.0;
            prox_step(x, z, fz);
            if (std::isnan(fz))
                throw std::runtime_error("fista: objective is NaN; step size estimate is unusable");
            if (fz > fx) {
                y = x;
                res.objective_trace.push_back(fx);
                continue;
            }
        }
        const double tk1 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
        y = z + ((tk - 1.0) / tk1) * (z - x);
        x = z;
        fx = fz;
        tk = tk1;
        res.objective_trace.push_back(fx);
    }

    res.h_est = std::move(x);
    res.latest_channel = reconstruct_latest(res.h_est, dicts, window.t0);
    return res;
}

RecoveryResult refine(RecoveryResult result, const ObservationWindow& window, const Dictionaries& dicts,
                      const RecoveryConfig& config)
{
    config.check();
    CMatrix& h = result.h_est;

    if (config.doppler_truncation) {
        const Eigen::VectorXd energy = h.cwiseAbs2().colwise().sum().transpose();
        const double total = energy.sum();
        if (total > 0.0) {
            double centroid = 0.0;
            for (Eigen::Index m = 0; m < energy.size(); ++m)
                centroid += static_cast<double>(m) * energy(m);
            const auto center = static_cast<long>(std::lround(centroid / total));
            for (Eigen::Index m = 0; m < h.cols(); ++m)
                if (std::abs(static_cast<long>(m) - center) > *config.doppler_truncation)
                    h.col(m).setZero();
        }
    }

    if (config.debias_on_support) {
        const double peak = h.size() > 0 ? h.cwiseAbs().maxCoeff() : 0.0;
        std::vector<std::pair<int, int>> support;
        if (peak > 0.0)
            for (Eigen::Index m = 0; m < h.cols(); ++m)
                for (Eigen::Index l = 0; l < h.rows(); ++l)
                    if (std::abs(h(l, m)) >= config.support_threshold * peak)
                        support.emplace_back(static_cast<int>(l), static_cast<int>(m));
        result.support_size = static_cast<int>(support.size());
        if (!support.empty()) {
            const WindowOperator op(window, dicts);
            CMatrix a(op.rows(), static_cast<Eigen::Index>(support.size()));
            for (std::size_t j = 0; j < support.size(); ++j)
                a.col(static_cast<Eigen::Index>(j)) = op.atom(support[j].first, support[j].second);
            const Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(a);
            const CVector sol = cod.solve(op.observations());
            result.rank_deficient = cod.rank() < static_cast<Eigen::Index>(support.size());
            h.setZero();
            for (std::size_t j = 0; j < support.size(); ++j)
                h(support[j].first, support[j].second) = sol(static_cast<Eigen::Index>(j));
        }
    }

    result.latest_channel = reconstruct_latest(h, dicts, window.t0);
    return result;
}

CVector reconstruct_latest(const CMatrix& h_est, const Dictionaries& dicts, int t0)
{
    if (h_est.rows() != dicts.F.cols() || h_est.cols() != dicts.G.cols() || t0 < 0 || t0 >= dicts.G.rows())
        throw std::invalid_argument("reconstruct_latest: dimensions do not match the dictionaries");
    return dicts.F * (h_est * dicts.G.row(t0).transpose());
}

double nmse(const CVector& est, const CVector& truth)
{
    if (est.size() != truth.size())
        throw std::invalid_argument("nmse: length mismatch");
    const double den = truth.squaredNorm();
    if (!(den > 0.0))
        throw std::invalid_argument("nmse: reference channel is zero");
    return (est - truth).squaredNorm() / den;
}

RecoveryResult recover(const ObservationWindow& window, const Dictionaries& dicts, const RecoveryConfig& config)
{
    const double lambda = config.lambda_override
                              ? *config.lambda_override
                              : lambda_rule(mean_noise_variance(window), static_cast<int>(dicts.F.cols()),
                                            static_cast<int>(dicts.G.cols()), window.M, window.T);
    return refine(fista(window, dicts, lambda, config), window, dicts, config);
}

} // namespace mcc
