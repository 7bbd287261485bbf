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

// nlohmann::json conversions shared by io.cpp and harness.cpp.

#include "mccpilot/channel.hpp"
#include "mccpilot/recovery.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mcc::detail {

using json = nlohmann::json;

/// JSON has no infinity; +inf SNR is written as the string "inf".
inline json number_or_inf(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return v;
}

inline double read_number(const json& j)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
        throw std::invalid_argument("expected a number, got \"" + s + "\"");
    }
    return j.get<double>();
}

inline json to_json(const SimConfig& c)
{
    return json{{"k", c.dims.k},
                {"M", c.dims.M},
                {"n_tau", c.n_tau},
                {"n_nu", c.n_nu},
                {"window", c.window},
                {"num_paths", c.num_paths},
                {"max_doppler", c.max_doppler},
                {"pilot_interval", c.pilot_interval},
                {"pdp_decay", c.pdp_decay},
                {"snr_db", number_or_inf(c.snr_db)},
                {"seed", c.seed}};
}

/// Fields missing from `j` keep the values already in `c`.
inline void update_from_json(SimConfig& c, const json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("simulation config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& key = it.key();
        const auto& v = it.value();
        if (key == "k") c.dims.k = v.get<int>();
        else if (key == "M") c.dims.M = v.get<int>();
        else if (key == "n_tau") c.n_tau = v.get<int>();
        else if (key == "n_nu") c.n_nu = v.get<int>();
        else if (key == "window") c.window = v.get<int>();
        else if (key == "num_paths") c.num_paths = v.get<int>();
        else if (key == "max_doppler") c.max_doppler = v.get<double>();
        else if (key == "pilot_interval") c.pilot_interval = v.get<double>();
        else if (key == "pdp_decay") c.pdp_decay = v.get<double>();
        else if (key == "snr_db") c.snr_db = read_number(v);
        else if (key == "seed") c.seed = v.get<std::uint64_t>();
        else throw std::invalid_argument("unknown simulation config key \"" + key + "\"");
    }
}

inline json to_json(const RecoveryConfig& c)
{
    json j{{"iterations", c.iterations},
           {"debias_on_support", c.debias_on_support},
           {"support_threshold", c.support_threshold},
           {"power_iterations", c.power_iterations},
           {"power_tolerance", c.power_tolerance}};
    j["lambda_override"] = c.lambda_override ? json(*c.lambda_override) : json(nullptr);
    j["doppler_truncation"] = c.doppler_truncation ? json(*c.doppler_truncation) : json(nullptr);
    return j;
}

inline void update_from_json(RecoveryConfig& c, const json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("recovery config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& key = it.key();
        const auto& v = it.value();
        if (key == "iterations") c.iterations = v.get<int>();
        else if (key == "debias_on_support") c.debias_on_support = v.get<bool>();
        else if (key == "support_threshold") c.support_threshold = v.get<double>();
        else if (key == "power_iterations") c.power_iterations = v.get<int>();
        else if (key == "power_tolerance") c.power_tolerance = v.get<double>();
        else if (key == "lambda_override") {
            if (v.is_null()) c.lambda_override.reset();
            else c.lambda_override = v.get<double>();
        } else if (key == "doppler_truncation") {
            if (v.is_null()) c.doppler_truncation.reset();
            else c.doppler_truncation = v.get<int>();
        } else throw std::invalid_argument("unknown recovery config key \"" + key + "\"");
    }
}

inline json to_json(const CVector& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(json::array({v(i).real(), v(i).imag()}));
    return out;
}

inline CVector cvector_from_json(const json& j)
{
    if (!j.is_array())
        throw std::invalid_argument("complex array must be a JSON array of [re, im] pairs");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& p = j[i];
        if (!p.is_array() || p.size() != 2)
            throw std::invalid_argument("complex entry " + std::to_string(i) + " is not an [re, im] pair");
        v(static_cast<Eigen::Index>(i)) = cplx{p[0].get<double>(), p[1].get<double>()};
    }
    return v;
}

} // namespace mcc::detail
