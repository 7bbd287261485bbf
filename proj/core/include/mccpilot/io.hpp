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
#include "mccpilot/pattern.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace mcc {

/// Library version string, e.g. "0.3.0".
const char* version();

/// Parses either the two-line text form ("k" then the schedule) or the JSON
/// object {"k": int, "schedule": [...]}. Throws std::invalid_argument.
PilotPattern parse_pattern(std::string_view text);
PilotPattern read_pattern(const std::filesystem::path& path);

std::string pattern_to_text(const PilotPattern& pattern);
std::string pattern_to_json(const PilotPattern& pattern);

/// Writes JSON when the extension is .json, text otherwise.
void write_pattern(const std::filesystem::path& path, const PilotPattern& pattern);

/// Everything `recover` needs offline: the simulation setup, the pattern and
/// shift that produced the window, the observations, and the true latest-slot
/// channel for scoring.
struct ObservationBundle
{
    SimConfig config;
    PilotPattern pattern;
    int shift = 0;
    ObservationWindow window;
    CVector truth_latest;
};

/// Complex arrays are lists of [re, im] pairs printed with 17 significant
/// digits, so a round trip is exact.
std::string bundle_to_json(const ObservationBundle& bundle);
ObservationBundle bundle_from_json(std::string_view text);

std::string sim_config_to_json(const SimConfig& config);

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes `content`, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);

} // namespace mcc
