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
#include <pfsa/mcs.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace pfsa {

inline double watts_from_dbm(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double dbm_from_watts(double w) { return 10.0 * std::log10(w / 1e-3); }

enum class McsPolicy { IndependentPerRB, UniformWorstRB };

struct TerminalPlacement {
    int id = 0;
    double pos_m = 0.0;
};

// Average received powers of one (terminal, RB) link, in watts.
struct LinkStats {
    double p_sig = 0.0;
    double p_intf = 0.0;
    double noise = 0.0;

    void validate() const
    {
        if (!(p_sig > 0.0) || !(p_intf >= 0.0) || !(noise >= 0.0) || !std::isfinite(p_sig) ||
            !std::isfinite(p_intf) || !std::isfinite(noise))
            throw DomainError("LinkStats requires p_sig > 0, p_intf >= 0, noise >= 0");
    }
    bool operator==(const LinkStats &) const = default;
};

// Dense (terminal, RB) table, row-major by terminal.
class LinkTable {
public:
    LinkTable() = default;
    LinkTable(int terminals, int rbs) : terminals_(terminals), rbs_(rbs), data_(std::size_t(terminals) * rbs) {}

    int terminals() const noexcept { return terminals_; }
    int rbs() const noexcept { return rbs_; }

    const LinkStats &at(int j, int n) const { return data_.at(index(j, n)); }
    LinkStats &at(int j, int n) { return data_.at(index(j, n)); }

    // All terminals' links on RB n.
    std::vector<LinkStats> column(int n) const
    {
        std::vector<LinkStats> col;
        col.reserve(terminals_);
        for (int j = 0; j < terminals_; ++j)
            col.push_back(at(j, n));
        return col;
    }

    bool operator==(const LinkTable &) const = default;

private:
    std::size_t index(int j, int n) const
    {
        if (j < 0 || j >= terminals_ || n < 0 || n >= rbs_)
            throw DomainError("link table index out of range");
        return std::size_t(j) * rbs_ + n;
    }

    int terminals_ = 0;
    int rbs_ = 0;
    std::vector<LinkStats> data_;
};

// R subcarriers x S symbols per RB, delivered once per TTI.
struct RbGeometry {
    int subcarriers_per_rb = 12;
    int symbols_per_subcarrier = 7;
    double tti_duration_s = 1e-3;

    double resource_elements() const { return double(subcarriers_per_rb) * symbols_per_subcarrier; }
    // Symbols per second carried by one RB; multiplies bits/symbol into bit/s.
    double symbol_rate() const { return resource_elements() / tti_duration_s; }
};

struct Scenario {
    std::string name = "unnamed";
    int n_rbs = 25;
    RbGeometry geometry;
    std::vector<TerminalPlacement> terminals;
    double serving_bs_pos_m = 0.0;
    double interferer_bs_pos_m = 500.0;
    double tx_power_signal_w = 0.8;
    double tx_power_interf_w = 0.8;
    double noise_w = watts_from_dbm(-112.0);
    int pfs_window = 100;
    McsPolicy mcs_policy = McsPolicy::IndependentPerRB;
    SpectralEfficiency efficiency = SpectralEfficiency::truncated_shannon(5.55);
    // When set, geometry and powers are bypassed.
    std::optional<LinkTable> explicit_links;

    int terminal_count() const
    {
        return explicit_links ? explicit_links->terminals() : static_cast<int>(terminals.size());
    }

    void validate() const
    {
        if (n_rbs < 1)
            throw ConfigError("must be >= 1", "n_rbs");
        if (geometry.subcarriers_per_rb < 1)
            throw ConfigError("must be >= 1", "subcarriers_per_rb");
        if (geometry.symbols_per_subcarrier < 1)
            throw ConfigError("must be >= 1", "symbols_per_subcarrier");
        if (!(geometry.tti_duration_s > 0.0))
            throw ConfigError("must be > 0", "tti_duration_s");
        if (pfs_window < 1)
            throw ConfigError("must be >= 1", "pfs_window");
        if (explicit_links) {
            if (explicit_links->rbs() != n_rbs)
                throw ConfigError("explicit link table RB count differs from n_rbs", "links");
            if (explicit_links->terminals() < 1)
                throw ConfigError("at least one terminal required", "links");
            for (int j = 0; j < explicit_links->terminals(); ++j)
                for (int n = 0; n < n_rbs; ++n) {
                    const auto &l = explicit_links->at(j, n);
                    if (!(l.noise > 0.0))
                        throw ConfigError("noise must be > 0 (E[X] diverges for zero noise: DivergentMean)",
                                          "links.noise");
                    try {
                        l.validate();
                    } catch (const DomainError &e) {
                        throw ConfigError(e.what(), "links");
                    }
                }
            return;
        }
        if (terminals.empty())
            throw ConfigError("at least one terminal required", "terminals");
        if (!(tx_power_signal_w > 0.0))
            throw ConfigError("must be > 0", "signal_per_rb");
        if (!(tx_power_interf_w > 0.0))
            throw ConfigError("must be > 0", "interferer_per_rb");
        if (!(noise_w > 0.0))
            throw ConfigError("must be > 0 (E[X] diverges for zero noise: DivergentMean)", "noise_per_rb");
        for (std::size_t i = 0; i < terminals.size(); ++i) {
            if (terminals[i].id != static_cast<int>(i))
                throw ConfigError("terminal ids must be unique and contiguous from 0", "terminals");
            if (terminals[i].pos_m == serving_bs_pos_m || terminals[i].pos_m == interferer_bs_pos_m)
                throw ConfigError("terminal placed on a base station", "terminals");
        }
    }

    // Twenty terminals on the line between the serving BS (0 m) and an interfering
    // BS at 500 m, spaced 12.5 m out to the cell border at 250 m; N = 25 RBs,
    // 0.8 W per RB, -112 dBm noise per RB, W = 100.
    static Scenario reference_lineup()
    {
        Scenario s;
        s.name = "reference_lineup";
        for (int j = 0; j < 20; ++j)
            s.terminals.push_back({j, 12.5 * (j + 1)});
        return s;
    }

    // Evenly spaced terminals between the serving BS and the cell border.
    static std::vector<TerminalPlacement> line(int count, double start_m, double spacing_m)
    {
        std::vector<TerminalPlacement> out;
        for (int j = 0; j < count; ++j)
            out.push_back({j, start_m + spacing_m * j});
        return out;
    }
};

// Urban macro path loss, d in meters.
inline double path_loss_db(double distance_m)
{
    if (!(distance_m > 0.0))
        throw DomainError("path loss requires distance > 0");
    return 35.2 + 35.0 * std::log10(distance_m);
}

inline double channel_gain(double distance_m) { return std::pow(10.0, -path_loss_db(distance_m) / 10.0); }

inline LinkTable build_link_stats(const Scenario &s)
{
    s.validate();
    if (s.explicit_links)
        return *s.explicit_links;
    LinkTable table(s.terminal_count(), s.n_rbs);
    for (const auto &t : s.terminals) {
        const LinkStats l{s.tx_power_signal_w * channel_gain(std::abs(t.pos_m - s.serving_bs_pos_m)),
                          s.tx_power_interf_w * channel_gain(std::abs(t.pos_m - s.interferer_bs_pos_m)),
                          s.noise_w};
        for (int n = 0; n < s.n_rbs; ++n)
            table.at(t.id, n) = l;
    }
    return table;
}

} // namespace pfsa
