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

// Minimal reader for the CPLEX LP subset emitted by the exporter: one
// objective, linear rows with <=, >= or =, a Binaries section.

#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct LpRow
{
    std::string name;
    std::map<std::string, double> terms;
    std::string sense; ///< "<=", ">=" or "="
    double rhs = 0.0;
};

struct LpModel
{
    bool minimize = true;
    std::map<std::string, double> objective;
    std::vector<LpRow> rows;
    std::vector<std::string> binaries;

    /// Every name that appears anywhere in the model.
    std::set<std::string> variables() const;
};

/// Throws std::runtime_error on malformed input.
LpModel parse_lp(std::istream& in);

/// Names of rows the assignment violates; unset variables count as 0.
std::vector<std::string> violated_rows(const LpModel& model, const std::map<std::string, double>& x);

double objective_value(const LpModel& model, const std::map<std::string, double>& x);

} // namespace oracle
