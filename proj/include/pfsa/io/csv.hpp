// SPDX-License-Identifier: Apache-2.0
//
// pfs-analytica: scheduled-SINR models and simulation of proportional fair OFDMA down-links
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

#include <pfsa/errors.hpp>
#include <pfsa/io/scenario_file.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

namespace pfsa::io {

inline constexpr const char *digest_prefix = "# scenario_digest: ";

struct CsvTable {
    std::string digest;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string &name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return static_cast<int>(i);
        return -1;
    }
};

// Writes next to the target and renames over it, so readers never see a partial file.
inline void write_file_atomic(const std::string &path, const std::string &content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path() && !fs::exists(target.parent_path()))
        throw ConfigError("output directory does not exist: " + target.parent_path().string(), "--out");
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ConfigError("cannot write '" + tmp.string() + "'", "--out");
        out << content;
        out.flush();
        if (!out)
            throw ConfigError("write failed for '" + tmp.string() + "'", "--out");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw ConfigError("cannot rename onto '" + path + "': " + ec.message(), "--out");
    }
}

inline std::string render_csv(const CsvTable &t)
{
    std::ostringstream o;
    o << digest_prefix << t.digest << "\n";
    for (std::size_t i = 0; i < t.header.size(); ++i)
        o << (i ? "," : "") << t.header[i];
    o << "\n";
    for (const auto &row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            o << (i ? "," : "") << row[i];
        o << "\n";
    }
    return o.str();
}

inline void write_csv(const std::string &path, const CsvTable &t) { write_file_atomic(path, render_csv(t)); }

inline CsvTable read_csv(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open '" + path + "'", "report");
    CsvTable t;
    std::string line;
    auto split = [](const std::string &s) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ss(s);
        while (std::getline(ss, cell, ','))
            out.push_back(cell);
        if (!s.empty() && s.back() == ',')
            out.emplace_back();
        return out;
    };
    while (std::getline(in, line)) {
        if (line.rfind(digest_prefix, 0) == 0) {
            t.digest = line.substr(std::string(digest_prefix).size());
            continue;
        }
        if (line.empty() || line[0] == '#')
            continue;
        if (t.header.empty())
            t.header = split(line);
        else
            t.rows.push_back(split(line));
    }
    if (t.digest.empty())
        throw ConfigError("'" + path + "' has no scenario digest line", "report");
    if (t.header.empty())
        throw ConfigError("'" + path + "' has no header row", "report");
    return t;
}

} // namespace pfsa::io
