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
#include <pfsa/numerics.hpp>
#include <pfsa/scenario.hpp>
#include <pfsa/simulator.hpp>

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace pfsa::io {

// Shortest text that parses back to the same double.
inline std::string format_number(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::uint64_t fnv1a64(const std::string &text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// A power as written in the file; the unit survives a round trip.
struct PowerValue {
    double value = 0.0;
    std::string unit = "W"; // W | mW | dBm

    double watts() const
    {
        if (unit == "W")
            return value;
        if (unit == "mW")
            return value * 1e-3;
        return watts_from_dbm(value);
    }
    std::string text() const { return format_number(value) + " " + unit; }
};

struct SimulationSettings {
    SimOptions options;
    int seeds = 30;
    std::uint64_t master_seed = 1;
};

struct AnalysisSettings {
    QuadratureSpec quadrature;
    std::size_t uniform_samples = 100000;
    std::uint64_t uniform_seed = 1;
    int curve_points = 200;
};

struct ScenarioFile {
    Scenario scenario;
    PowerValue signal{0.8, "W"};
    PowerValue interferer{0.8, "W"};
    PowerValue noise{-112.0, "dBm"};
    std::vector<std::pair<double, double>> staircase_db; // (sinr_dB, bits/symbol)
    SimulationSettings simulation;
    AnalysisSettings analysis;
};

namespace detail {

// Validation keys raised by the core types, mapped to their place in the file.
inline std::string file_key(const std::string &key)
{
    static const std::map<std::string, std::string> keys = {
        {"n_rbs", "scenario.n_rbs"},
        {"pfs_window", "scenario.pfs_window"},
        {"subcarriers_per_rb", "geometry.subcarriers_per_rb"},
        {"symbols_per_subcarrier", "geometry.symbols_per_subcarrier"},
        {"tti_duration_s", "geometry.tti_duration_s"},
        {"signal_per_rb", "powers.signal_per_rb"},
        {"interferer_per_rb", "powers.interferer_per_rb"},
        {"noise_per_rb", "powers.noise_per_rb"},
        {"terminals", "terminals.positions_m"},
    };
    const auto it = keys.find(key);
    return it == keys.end() ? key : it->second;
}

inline void reject_unknown(const YAML::Node &node, const std::string &where, const std::set<std::string> &allowed)
{
    if (!node.IsMap())
        throw ConfigError("expected a mapping", where);
    for (const auto &kv : node) {
        const auto k = kv.first.as<std::string>();
        if (!allowed.count(k))
            throw ConfigError("unknown key", where.empty() ? k : where + "." + k);
    }
}

template <class T>
T scalar(const YAML::Node &node, const std::string &key)
{
    try {
        return node.as<T>();
    } catch (const YAML::Exception &) {
        throw ConfigError("cannot read value '" + (node.IsScalar() ? node.Scalar() : std::string("<non-scalar>")) + "'",
                          key);
    }
}

template <class T>
void read_opt(const YAML::Node &parent, const char *name, const std::string &where, T &out)
{
    if (const auto n = parent[name])
        out = scalar<T>(n, where + "." + name);
}

inline PowerValue parse_power(const YAML::Node &node, const std::string &key)
{
    std::istringstream in(scalar<std::string>(node, key));
    PowerValue p;
    std::string extra;
    if (!(in >> p.value))
        throw ConfigError("expected '<number> <W|mW|dBm>'", key);
    if (!(in >> p.unit))
        p.unit = "W";
    if (in >> extra || (p.unit != "W" && p.unit != "mW" && p.unit != "dBm"))
        throw ConfigError("expected '<number> <W|mW|dBm>'", key);
    if (!std::isfinite(p.value))
        throw ConfigError("power must be finite", key);
    return p;
}

inline LinkStats parse_link_triple(const YAML::Node &node, const std::string &key)
{
    if (!node.IsSequence() || node.size() != 3)
        throw ConfigError("expected [signal_W, interference_W, noise_W]", key);
    return {scalar<double>(node[0], key), scalar<double>(node[1], key), scalar<double>(node[2], key)};
}

template <class E>
E parse_enum(const YAML::Node &node, const std::string &key, const std::vector<std::pair<std::string, E>> &names)
{
    const auto s = scalar<std::string>(node, key);
    for (const auto &[n, v] : names)
        if (n == s)
            return v;
    std::string options;
    for (const auto &[n, v] : names)
        options += (options.empty() ? "" : " | ") + n;
    throw ConfigError("'" + s + "' is not one of " + options, key);
}

template <class E>
std::string enum_name(E value, const std::vector<std::pair<std::string, E>> &names)
{
    for (const auto &[n, v] : names)
        if (v == value)
            return n;
    return "?";
}

inline const std::vector<std::pair<std::string, McsPolicy>> mcs_names = {
    {"independent", McsPolicy::IndependentPerRB}, {"uniform", McsPolicy::UniformWorstRB}};
inline const std::vector<std::pair<std::string, SchedulerKind>> scheduler_kinds = {
    {"sinr_pfs", SchedulerKind::SinrPFS}, {"rate_pfs", SchedulerKind::RatePFS},
    {"opportunistic", SchedulerKind::Opportunistic}};
inline const std::vector<std::pair<std::string, FadingMode>> fading_names = {
    {"block_iid", FadingMode::BlockIID}, {"jakes", FadingMode::JakesSoS}};
inline const std::vector<std::pair<std::string, FrequencyCorrelation>> correlation_names = {
    {"independent", FrequencyCorrelation::IndependentRBs}, {"tapped_delay_line", FrequencyCorrelation::TappedDelayLine}};
inline const std::vector<std::pair<std::string, RateWindowScope>> scope_names = {
    {"per_terminal", RateWindowScope::PerTerminal}, {"per_rb", RateWindowScope::PerRB}};

inline std::string list(const std::vector<double> &v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + format_number(v[i]);
    return s + "]";
}

} // namespace detail

inline const std::vector<std::pair<std::string, SchedulerKind>> &scheduler_names() { return detail::scheduler_kinds; }

// Parses and validates a scenario document. Errors name the offending key.
inline ScenarioFile parse_scenario(const std::string &yaml_text)
{
    using namespace detail;
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception &e) {
        throw ConfigError(std::string("YAML syntax: ") + e.what(), "<document>");
    }
    if (!root.IsMap())
        throw ConfigError("document must be a mapping", "<document>");
    reject_unknown(root, "", {"scenario", "geometry", "powers", "terminals", "links", "efficiency", "simulation",
                              "analysis"});

    ScenarioFile f;
    Scenario &s = f.scenario;
    if (const auto n = root["scenario"]) {
        reject_unknown(n, "scenario",
                       {"name", "n_rbs", "pfs_window", "mcs_policy", "serving_bs_pos_m", "interferer_bs_pos_m"});
        read_opt(n, "name", "scenario", s.name);
        read_opt(n, "n_rbs", "scenario", s.n_rbs);
        read_opt(n, "pfs_window", "scenario", s.pfs_window);
        read_opt(n, "serving_bs_pos_m", "scenario", s.serving_bs_pos_m);
        read_opt(n, "interferer_bs_pos_m", "scenario", s.interferer_bs_pos_m);
        if (n["mcs_policy"])
            s.mcs_policy = parse_enum(n["mcs_policy"], "scenario.mcs_policy", mcs_names);
    }
    if (const auto n = root["geometry"]) {
        reject_unknown(n, "geometry", {"subcarriers_per_rb", "symbols_per_subcarrier", "tti_duration_s"});
        read_opt(n, "subcarriers_per_rb", "geometry", s.geometry.subcarriers_per_rb);
        read_opt(n, "symbols_per_subcarrier", "geometry", s.geometry.symbols_per_subcarrier);
        read_opt(n, "tti_duration_s", "geometry", s.geometry.tti_duration_s);
    }
    if (const auto n = root["powers"]) {
        reject_unknown(n, "powers", {"signal_per_rb", "interferer_per_rb", "noise_per_rb"});
        if (n["signal_per_rb"])
            f.signal = parse_power(n["signal_per_rb"], "powers.signal_per_rb");
        if (n["interferer_per_rb"])
            f.interferer = parse_power(n["interferer_per_rb"], "powers.interferer_per_rb");
        if (n["noise_per_rb"])
            f.noise = parse_power(n["noise_per_rb"], "powers.noise_per_rb");
    }
    s.tx_power_signal_w = f.signal.watts();
    s.tx_power_interf_w = f.interferer.watts();
    s.noise_w = f.noise.watts();

    if (const auto n = root["terminals"]) {
        reject_unknown(n, "terminals", {"positions_m"});
        const auto p = n["positions_m"];
        if (!p || !p.IsSequence())
            throw ConfigError("expected a list of positions", "terminals.positions_m");
        for (std::size_t i = 0; i < p.size(); ++i)
            s.terminals.push_back({static_cast<int>(i), scalar<double>(p[i], "terminals.positions_m")});
    }
    if (const auto n = root["links"]) {
        if (root["terminals"])
            throw ConfigError("give either terminals or links, not both", "links");
        if (!n.IsSequence() || n.size() == 0)
            throw ConfigError("expected a non-empty list, one entry per terminal", "links");
        LinkTable t(static_cast<int>(n.size()), s.n_rbs);
        for (std::size_t j = 0; j < n.size(); ++j) {
            const std::string key = "links[" + std::to_string(j) + "]";
            const auto e = n[j];
            if (e.IsMap()) {
                reject_unknown(e, key, {"rbs"});
                const auto rbs = e["rbs"];
                if (!rbs || !rbs.IsSequence() || static_cast<int>(rbs.size()) != s.n_rbs)
                    throw ConfigError("per-RB list must have n_rbs entries", key + ".rbs");
                for (int r = 0; r < s.n_rbs; ++r)
                    t.at(static_cast<int>(j), r) = parse_link_triple(rbs[r], key + ".rbs");
            } else {
                const auto l = parse_link_triple(e, key);
                for (int r = 0; r < s.n_rbs; ++r)
                    t.at(static_cast<int>(j), r) = l;
            }
        }
        s.explicit_links = t;
    }
    if (const auto n = root["efficiency"]) {
        reject_unknown(n, "efficiency", {"kind", "cap_bits", "steps"});
        const auto kind = n["kind"] ? scalar<std::string>(n["kind"], "efficiency.kind") : "truncated_shannon";
        if (kind == "shannon") {
            s.efficiency = SpectralEfficiency::shannon();
        } else if (kind == "truncated_shannon") {
            double cap = 5.55;
            read_opt(n, "cap_bits", "efficiency", cap);
            if (!(cap > 0.0))
                throw ConfigError("must be > 0", "efficiency.cap_bits");
            s.efficiency = SpectralEfficiency::truncated_shannon(cap);
        } else if (kind == "staircase") {
            const auto steps = n["steps"];
            if (!steps || !steps.IsSequence() || steps.size() == 0)
                throw ConfigError("expected a list of [sinr_dB, bits_per_symbol] pairs", "efficiency.steps");
            std::vector<StaircaseStep> table;
            for (const auto &p : steps) {
                if (!p.IsSequence() || p.size() != 2)
                    throw ConfigError("expected [sinr_dB, bits_per_symbol]", "efficiency.steps");
                const double db = scalar<double>(p[0], "efficiency.steps");
                const double bits = scalar<double>(p[1], "efficiency.steps");
                f.staircase_db.emplace_back(db, bits);
                table.push_back({std::pow(10.0, db / 10.0), bits});
            }
            try {
                s.efficiency = SpectralEfficiency::staircase(table);
            } catch (const DomainError &e) {
                throw ConfigError(e.what(), "efficiency.steps");
            }
        } else {
            throw ConfigError("'" + kind + "' is not one of shannon | truncated_shannon | staircase",
                              "efficiency.kind");
        }
    }

    auto &sim = f.simulation;
    if (const auto n = root["simulation"]) {
        reject_unknown(n, "simulation",
                       {"scheduler", "seeds", "ttis", "master_seed", "rate_window", "cqi_delay_ttis", "fading"});
        if (n["scheduler"])
            sim.options.scheduler = parse_enum(n["scheduler"], "simulation.scheduler", scheduler_kinds);
        read_opt(n, "seeds", "simulation", sim.seeds);
        read_opt(n, "ttis", "simulation", sim.options.ttis);
        read_opt(n, "master_seed", "simulation", sim.master_seed);
        read_opt(n, "cqi_delay_ttis", "simulation", sim.options.cqi_delay_ttis);
        if (n["rate_window"])
            sim.options.rate_scope = parse_enum(n["rate_window"], "simulation.rate_window", scope_names);
        if (const auto fd = n["fading"]) {
            auto &fp = sim.options.fading;
            reject_unknown(fd, "simulation.fading",
                           {"mode", "oscillators", "doppler_hz", "correlation", "rb_bandwidth_hz", "taps"});
            if (fd["mode"])
                fp.mode = parse_enum(fd["mode"], "simulation.fading.mode", fading_names);
            if (fd["correlation"])
                fp.correlation = parse_enum(fd["correlation"], "simulation.fading.correlation", correlation_names);
            read_opt(fd, "oscillators", "simulation.fading", fp.oscillators);
            read_opt(fd, "doppler_hz", "simulation.fading", fp.doppler_hz);
            read_opt(fd, "rb_bandwidth_hz", "simulation.fading", fp.rb_bandwidth_hz);
            if (const auto taps = fd["taps"]) {
                if (!taps.IsSequence())
                    throw ConfigError("expected a list of [delay_s, power_fraction]", "simulation.fading.taps");
                for (const auto &p : taps) {
                    if (!p.IsSequence() || p.size() != 2)
                        throw ConfigError("expected [delay_s, power_fraction]", "simulation.fading.taps");
                    fp.taps.push_back({scalar<double>(p[0], "simulation.fading.taps"),
                                       scalar<double>(p[1], "simulation.fading.taps")});
                }
            }
        }
    }
    auto &an = f.analysis;
    if (const auto n = root["analysis"]) {
        reject_unknown(n, "analysis",
                       {"rel_tol", "abs_tol", "max_subdivisions", "uniform_samples", "uniform_seed", "curve_points"});
        read_opt(n, "rel_tol", "analysis", an.quadrature.rel_tol);
        read_opt(n, "abs_tol", "analysis", an.quadrature.abs_tol);
        read_opt(n, "max_subdivisions", "analysis", an.quadrature.max_subdivisions);
        read_opt(n, "uniform_samples", "analysis", an.uniform_samples);
        read_opt(n, "uniform_seed", "analysis", an.uniform_seed);
        read_opt(n, "curve_points", "analysis", an.curve_points);
    }

    try {
        s.validate();
    } catch (const ConfigError &e) {
        throw ConfigError(e.what(), file_key(e.key()));
    }
    if (sim.seeds < 1)
        throw ConfigError("must be >= 1", "simulation.seeds");
    sim.options.validate(s);
    try {
        an.quadrature.validate();
    } catch (const Error &e) {
        throw ConfigError(e.what(), "analysis");
    }
    if (an.uniform_samples < 1)
        throw ConfigError("must be >= 1", "analysis.uniform_samples");
    if (an.curve_points < 2)
        throw ConfigError("must be >= 2", "analysis.curve_points");
    return f;
}

inline ScenarioFile load_scenario(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file '" + path + "'", "--scenario");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

// Canonical text: fixed key order, no comments, shortest round-trip numbers.
inline std::string serialize_scenario(const ScenarioFile &f)
{
    using namespace detail;
    const Scenario &s = f.scenario;
    std::ostringstream o;
    o << "scenario:\n"
      << "  name: " << s.name << "\n"
      << "  n_rbs: " << s.n_rbs << "\n"
      << "  pfs_window: " << s.pfs_window << "\n"
      << "  mcs_policy: " << enum_name(s.mcs_policy, mcs_names) << "\n";
    if (!s.explicit_links)
        o << "  serving_bs_pos_m: " << format_number(s.serving_bs_pos_m) << "\n"
          << "  interferer_bs_pos_m: " << format_number(s.interferer_bs_pos_m) << "\n";
    o << "geometry:\n"
      << "  subcarriers_per_rb: " << s.geometry.subcarriers_per_rb << "\n"
      << "  symbols_per_subcarrier: " << s.geometry.symbols_per_subcarrier << "\n"
      << "  tti_duration_s: " << format_number(s.geometry.tti_duration_s) << "\n";
    if (s.explicit_links) {
        const auto &t = *s.explicit_links;
        o << "links:\n";
        for (int j = 0; j < t.terminals(); ++j) {
            bool uniform = true;
            for (int n = 1; n < t.rbs(); ++n)
                uniform = uniform && t.at(j, n) == t.at(j, 0);
            auto triple = [](const LinkStats &l) {
                return detail::list({l.p_sig, l.p_intf, l.noise});
            };
            if (uniform) {
                o << "  - " << triple(t.at(j, 0)) << "\n";
            } else {
                o << "  - rbs:\n";
                for (int n = 0; n < t.rbs(); ++n)
                    o << "      - " << triple(t.at(j, n)) << "\n";
            }
        }
    } else {
        o << "powers:\n"
          << "  signal_per_rb: " << f.signal.text() << "\n"
          << "  interferer_per_rb: " << f.interferer.text() << "\n"
          << "  noise_per_rb: " << f.noise.text() << "\n";
        std::vector<double> pos;
        for (const auto &t : s.terminals)
            pos.push_back(t.pos_m);
        o << "terminals:\n  positions_m: " << list(pos) << "\n";
    }
    o << "efficiency:\n";
    switch (s.efficiency.kind()) {
    case SpectralEfficiency::Kind::Shannon:
        o << "  kind: shannon\n";
        break;
    case SpectralEfficiency::Kind::TruncatedShannon:
        o << "  kind: truncated_shannon\n  cap_bits: " << format_number(s.efficiency.max_efficiency()) << "\n";
        break;
    case SpectralEfficiency::Kind::Staircase:
        o << "  kind: staircase\n  steps:\n";
        for (const auto &[db, bits] : f.staircase_db)
            o << "    - " << list({db, bits}) << "\n";
        break;
    }
    const auto &sim = f.simulation;
    const auto &fp = sim.options.fading;
    o << "simulation:\n"
      << "  scheduler: " << enum_name(sim.options.scheduler, scheduler_kinds) << "\n"
      << "  seeds: " << sim.seeds << "\n"
      << "  ttis: " << sim.options.ttis << "\n"
      << "  master_seed: " << sim.master_seed << "\n"
      << "  rate_window: " << enum_name(sim.options.rate_scope, scope_names) << "\n"
      << "  cqi_delay_ttis: " << sim.options.cqi_delay_ttis << "\n"
      << "  fading:\n"
      << "    mode: " << enum_name(fp.mode, fading_names) << "\n"
      << "    oscillators: " << fp.oscillators << "\n"
      << "    doppler_hz: " << format_number(fp.doppler_hz) << "\n"
      << "    correlation: " << enum_name(fp.correlation, correlation_names) << "\n"
      << "    rb_bandwidth_hz: " << format_number(fp.rb_bandwidth_hz) << "\n";
    if (fp.taps.empty()) {
        o << "    taps: []\n";
    } else {
        o << "    taps:\n";
        for (const auto &t : fp.taps)
            o << "      - " << list({t.delay_s, t.power}) << "\n";
    }
    const auto &an = f.analysis;
    o << "analysis:\n"
      << "  rel_tol: " << format_number(an.quadrature.rel_tol) << "\n"
      << "  abs_tol: " << format_number(an.quadrature.abs_tol) << "\n"
      << "  max_subdivisions: " << an.quadrature.max_subdivisions << "\n"
      << "  uniform_samples: " << an.uniform_samples << "\n"
      << "  uniform_seed: " << an.uniform_seed << "\n"
      << "  curve_points: " << an.curve_points << "\n";
    return o.str();
}

inline std::string scenario_digest(const ScenarioFile &f) { return hex64(fnv1a64(serialize_scenario(f))); }

} // namespace pfsa::io
