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

#include "mccpilot/io.hpp"

#include "json_convert.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef MCCPILOT_VERSION
#define MCCPILOT_VERSION "unknown"
#endif

namespace mcc {

using detail::json;

const char* version()
{
    return MCCPILOT_VERSION;
}

namespace {

PilotPattern pattern_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("k") || !j.contains("schedule"))
        throw std::invalid_argument("pattern JSON needs \"k\" and \"schedule\"");
    const int k = j.at("k").get<int>();
    auto schedule = j.at("schedule").get<std::vector<int>>();
    if (static_cast<int>(schedule.size()) != k)
        throw std::invalid_argument("pattern: schedule length " + std::to_string(schedule.size()) +
                                    " differs from k = " + std::to_string(k));
    return make_pattern(std::move(schedule));
}

} // namespace

PilotPattern parse_pattern(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        throw std::invalid_argument("pattern: empty input");
    if (text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw std::invalid_argument(std::string("pattern: bad JSON: ") + e.what());
        }
        return pattern_from_json(j);
    }

    std::istringstream in{std::string(text)};
    std::string line;
    int k = 0;
    if (!std::getline(in, line) || !(std::istringstream(line) >> k) || k < 1)
        throw std::invalid_argument("pattern: first line must hold k >= 1");
    std::vector<int> schedule;
    if (std::getline(in, line)) {
        std::istringstream row(line);
        int v = 0;
        while (row >> v)
            schedule.push_back(v);
        if (!row.eof())
            throw std::invalid_argument("pattern: schedule line holds a non-integer token");
    }
    if (static_cast<int>(schedule.size()) != k)
        throw std::invalid_argument("pattern: schedule length " + std::to_string(schedule.size()) +
                                    " differs from k = " + std::to_string(k));
    return make_pattern(std::move(schedule));
}

PilotPattern read_pattern(const std::filesystem::path& path)
{
    return parse_pattern(read_file(path));
}

std::string pattern_to_text(const PilotPattern& pattern)
{
    std::string out = std::to_string(pattern.k) + "\n";
    for (std::size_t t = 0; t < pattern.schedule.size(); ++t)
        out += (t ? " " : "") + std::to_string(pattern.schedule[t]);
    return out + "\n";
}

std::string pattern_to_json(const PilotPattern& pattern)
{
    return json{{"k", pattern.k}, {"schedule", pattern.schedule}}.dump() + "\n";
}

void write_pattern(const std::filesystem::path& path, const PilotPattern& pattern)
{
    write_file(path, path.extension() == ".json" ? pattern_to_json(pattern) : pattern_to_text(pattern));
}

std::string bundle_to_json(const ObservationBundle& b)
{
    json slots = json::array();
    for (const auto& s : b.window.slots)
        slots.push_back(json{{"t", s.t}, {"subband", s.subband}, {"sigma_sq", s.sigma_sq}, {"y", detail::to_json(s.y)}});
    json j{{"format", "mccpilot-observations"},
           {"version", 1},
           {"config", detail::to_json(b.config)},
           {"pattern", {{"k", b.pattern.k}, {"schedule", b.pattern.schedule}}},
           {"shift", b.shift},
           {"window", {{"T", b.window.T}, {"t0", b.window.t0}, {"M", b.window.M}, {"slots", slots}}},
           {"truth_latest", detail::to_json(b.truth_latest)}};
    return j.dump(1) + "\n";
}

ObservationBundle bundle_from_json(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bundle: bad JSON: ") + e.what());
    }
    try {
        if (j.value("format", std::string()) != "mccpilot-observations")
            throw std::invalid_argument("bundle: missing or unknown \"format\"");
        ObservationBundle b;
        detail::update_from_json(b.config, j.at("config"));
        b.pattern = pattern_from_json(j.at("pattern"));
        b.shift = j.at("shift").get<int>();
        const auto& w = j.at("window");
        b.window.T = w.at("T").get<int>();
        b.window.t0 = w.at("t0").get<int>();
        b.window.M = w.at("M").get<int>();
        for (const auto& s : w.at("slots")) {
            SlotObservation obs;
            obs.t = s.at("t").get<int>();
            obs.subband = s.at("subband").get<int>();
            obs.sigma_sq = s.at("sigma_sq").get<double>();
            obs.y = detail::cvector_from_json(s.at("y"));
            b.window.slots.push_back(std::move(obs));
        }
        if (static_cast<int>(b.window.slots.size()) != b.window.T)
            throw std::invalid_argument("bundle: slot count differs from T");
        b.truth_latest = detail::cvector_from_json(j.at("truth_latest"));
        b.config.check();
        return b;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bundle: ") + e.what());
    }
}

std::string sim_config_to_json(const SimConfig& config)
{
    return detail::to_json(config).dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

} // namespace mcc
