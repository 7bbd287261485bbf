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

#include "lp_parser.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oracle {

namespace {

bool is_number(const std::string& s)
{
    if (s.empty())
        return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '.');
}

/// Reads "[+|-] [coef] name" terms from tokens[i..] until a relational
/// operator or the end of the range.
std::size_t read_terms(const std::vector<std::string>& tok, std::size_t i, std::map<std::string, double>& terms)
{
    double sign = 1.0;
    double coef = 1.0;
    bool have_coef = false;
    for (; i < tok.size(); ++i) {
        const auto& s = tok[i];
        if (s == "<=" || s == ">=" || s == "=" || s == "=<" || s == "=>")
            return i;
        if (s == "+") {
            sign = 1.0;
        } else if (s == "-") {
            sign = -1.0;
        } else if (is_number(s)) {
            coef = std::stod(s);
            have_coef = true;
        } else {
            std::string name = s;
            if (name[0] == '-') {
                sign = -1.0;
                name = name.substr(1);
            }
            terms[name] += sign * (have_coef ? coef : 1.0);
            sign = 1.0;
            coef = 1.0;
            have_coef = false;
        }
    }
    return i;
}

std::string lower(std::string s)
{
    for (auto& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

std::set<std::string> LpModel::variables() const
{
    std::set<std::string> v;
    for (const auto& [n, c] : objective)
        v.insert(n);
    for (const auto& r : rows)
        for (const auto& [n, c] : r.terms)
            v.insert(n);
    for (const auto& b : binaries)
        v.insert(b);
    return v;
}

LpModel parse_lp(std::istream& in)
{
    enum class Section { none, objective, constraints, binaries, done };
    Section sec = Section::none;
    LpModel model;

    std::string objective_text;
    std::vector<std::string> row_chunks; // one "name: ..." chunk per row
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '\\')
            continue;
        const std::string trimmed = line.substr(first);
        const std::string key = lower(trimmed);
        if (key.rfind("minimize", 0) == 0 || key.rfind("maximize", 0) == 0) {
            model.minimize = key[1] == 'i';
            sec = Section::objective;
            continue;
        }
        if (key.rfind("subject to", 0) == 0 || key == "st" || key == "s.t.") {
            sec = Section::constraints;
            continue;
        }
        if (key.rfind("binaries", 0) == 0 || key.rfind("binary", 0) == 0) {
            sec = Section::binaries;
            continue;
        }
        if (key == "end") {
            sec = Section::done;
            continue;
        }
        switch (sec) {
        case Section::objective: objective_text += " " + trimmed; break;
        case Section::constraints: {
            // a new row starts with "name:"; anything else continues the last row
            const auto colon = trimmed.find(':');
            const bool starts_row = colon != std::string::npos && trimmed.find(' ') > colon;
            if (starts_row || row_chunks.empty())
                row_chunks.push_back(trimmed);
            else
                row_chunks.back() += " " + trimmed;
            break;
        }
        case Section::binaries: {
            std::istringstream ss(trimmed);
            std::string name;
            while (ss >> name)
                model.binaries.push_back(name);
            break;
        }
        case Section::none:
        case Section::done: throw std::runtime_error("LP: text outside any section: " + trimmed);
        }
    }
    if (sec != Section::done)
        throw std::runtime_error("LP: missing End");

    auto tokens = [](const std::string& s) {
        std::vector<std::string> t;
        std::istringstream ss(s);
        std::string x;
        while (ss >> x)
            t.push_back(x);
        return t;
    };

    {
        auto tok = tokens(objective_text);
        std::size_t i = 0;
        if (!tok.empty() && tok[0].back() == ':')
            i = 1;
        if (read_terms(tok, i, model.objective) != tok.size())
            throw std::runtime_error("LP: relational operator in objective");
    }
    for (const auto& chunk : row_chunks) {
        const auto colon = chunk.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error("LP: unnamed row: " + chunk);
        LpRow row;
        row.name = chunk.substr(0, colon);
        auto tok = tokens(chunk.substr(colon + 1));
        const std::size_t op = read_terms(tok, 0, row.terms);
        if (op + 2 != tok.size())
            throw std::runtime_error("LP: row " + row.name + " lacks 'op rhs'");
        row.sense = tok[op] == "=<" ? "<=" : tok[op] == "=>" ? ">=" : tok[op];
        row.rhs = std::stod(tok[op + 1]);
        model.rows.push_back(std::move(row));
    }
    return model;
}

std::vector<std::string> violated_rows(const LpModel& model, const std::map<std::string, double>& x)
{
    std::vector<std::string> bad;
    for (const auto& r : model.rows) {
        double lhs = 0.0;
        for (const auto& [n, c] : r.terms)
            if (auto it = x.find(n); it != x.end())
                lhs += c * it->second;
        const double tol = 1e-9;
        const bool ok = r.sense == "<=" ? lhs <= r.rhs + tol : r.sense == ">=" ? lhs >= r.rhs - tol
                                                                                 : std::abs(lhs - r.rhs) <= tol;
        if (!ok)
            bad.push_back(r.name);
    }
    return bad;
}

double objective_value(const LpModel& model, const std::map<std::string, double>& x)
{
    double v = 0.0;
    for (const auto& [n, c] : model.objective)
        if (auto it = x.find(n); it != x.end())
            v += c * it->second;
    return v;
}

} // namespace oracle
