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
#include <pfsa/io/csv.hpp>
#include <pfsa/io/scenario_file.hpp>
#include <pfsa/io/svg.hpp>
#include <pfsa/parallel.hpp>
#include <pfsa/pfs_analytic.hpp>
#include <pfsa/ref_models.hpp>
#include <pfsa/simulator.hpp>
#include <pfsa/uniform_mcs.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pfsa::io {

inline const std::vector<std::string> &model_names()
{
    static const std::vector<std::string> names = {"analytic_indep", "analytic_uniform", "sim_sinr_pfs",
                                                   "sim_rate_pfs",   "gaussian",         "ian",
                                                   "naive"};
    return names;
}

// "all" or a comma-separated subset; returned in canonical column order.
inline std::vector<std::string> parse_models(const std::string &text)
{
    if (text == "all")
        return model_names();
    std::vector<std::string> picked;
    std::istringstream in(text);
    std::string m;
    while (std::getline(in, m, ',')) {
        if (m.empty())
            continue;
        if (std::find(model_names().begin(), model_names().end(), m) == model_names().end())
            throw ConfigError("unknown model '" + m + "'", "--models");
        picked.push_back(m);
    }
    if (picked.empty())
        throw ConfigError("no models selected", "--models");
    std::vector<std::string> out;
    for (const auto &n : model_names())
        if (std::find(picked.begin(), picked.end(), n) != picked.end())
            out.push_back(n);
    return out;
}

inline std::vector<double> parse_number_list(const std::string &text, const std::string &key)
{
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        char *end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (item.empty() || *end != '\0')
            throw ConfigError("'" + item + "' is not a number", key);
        out.push_back(v);
    }
    if (out.empty())
        throw ConfigError("empty list", key);
    return out;
}

struct RunOverrides {
    int threads = 1;
    std::optional<int> seeds;
    std::optional<long> ttis;
    std::optional<std::uint64_t> master_seed;
    std::optional<SchedulerKind> scheduler;
};

inline void apply_overrides(ScenarioFile &f, const RunOverrides &o)
{
    if (o.seeds)
        f.simulation.seeds = *o.seeds;
    if (o.ttis)
        f.simulation.options.ttis = *o.ttis;
    if (o.master_seed)
        f.simulation.master_seed = *o.master_seed;
    if (o.scheduler)
        f.simulation.options.scheduler = *o.scheduler;
    if (f.simulation.seeds < 1)
        throw ConfigError("must be >= 1", "--seeds");
    f.simulation.options.validate(f.scenario);
}

namespace detail {

inline std::string where(int j, int n)
{
    std::string s;
    if (j >= 0)
        s += "terminal " + std::to_string(j);
    if (n >= 0)
        s += (s.empty() ? "" : ", ") + std::string("RB ") + std::to_string(n);
    return s;
}

// Runs fn and re-raises numerical failures (and model preconditions that
// only show up numerically) with the terminal and RB attached.
template <class Fn>
auto located(int j, int n, Fn &&fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const NumericalError &e) {
        throw NumericalError(where(j, n) + ": " + e.what());
    } catch (const DegenerateStd &e) {
        throw NumericalError(where(j, n) + ": " + e.what());
    }
}

template <class D>
std::unique_ptr<ScheduledSinrModel<D>> build_model(const LinkTable &links, const QuadratureSpec &spec, int threads)
{
    try {
        return std::make_unique<ScheduledSinrModel<D>>(links, SchedulerMetric::ProportionalFair, spec, threads);
    } catch (const NumericalError &) {
        // Find the first failing RB, then the terminal inside it.
        for (int n = 0; n < links.rbs(); ++n) {
            std::vector<D> dists;
            for (int j = 0; j < links.terminals(); ++j)
                dists.push_back(located(j, n, [&] { return make_distribution<D>(links.at(j, n), spec); }));
            located(-1, n, [&] { return RbContest<D>(dists, SchedulerMetric::ProportionalFair, spec).terminals(); });
        }
        throw;
    }
}

template <class D>
std::vector<double> independent_rates(const ScheduledSinrModel<D> &model, const SpectralEfficiency &eff,
                                      const RbGeometry &g, int threads)
{
    const int J = model.terminals();
    std::vector<double> out(J, 0.0);
    parallel_for(J, threads, [&](int j) {
        std::vector<double> per_class(model.rb_class_count(), -1.0);
        double sum = 0.0;
        for (int n = 0; n < model.rbs(); ++n) {
            double &r = per_class[model.rb_class(n)];
            if (r < 0.0)
                r = located(j, n, [&] { return model.expected_rate_per_rb(j, n, eff, g); });
            sum += r;
        }
        out[j] = sum;
    });
    return out;
}

struct UniformResult {
    std::vector<double> rate;
    std::vector<double> std_error;
};

inline UniformResult uniform_rates(const ScheduledSinrModel<SinrDist> &model, const ScenarioFile &f, int threads)
{
    const int J = model.terminals();
    UniformResult out{std::vector<double>(J), std::vector<double>(J)};
    parallel_for(J, threads, [&](int j) {
        const ScheduledLaws<SinrDist> laws(model, j);
        AssignmentDist a;
        for (int n = 0; n < model.rbs(); ++n)
            a.probs.push_back(laws.probability(n));
        a.strategy = model.rbs() <= 12 ? AssignmentStrategy::ExactEnumeration
                                       : AssignmentStrategy::MonteCarloAssignments;
        a.samples = f.analysis.uniform_samples;
        a.seed = derive_seed(f.analysis.uniform_seed, static_cast<std::uint64_t>(j));
        const UniformMcsEvaluator<ScheduledLaws<SinrDist>> ev(laws, f.scenario.efficiency, f.scenario.geometry,
                                                              f.analysis.quadrature);
        const auto est = located(j, -1, [&] { return ev.total_rate(a); });
        out.rate[j] = est.rate_bps;
        out.std_error[j] = est.std_error_bps;
    });
    return out;
}

inline std::vector<double> gaussian_model_rates(const LinkTable &links, const ScenarioFile &f)
{
    const int J = links.terminals();
    std::vector<double> out(J, 0.0);
    std::vector<std::vector<LinkStats>> seen;
    std::vector<std::vector<double>> cached;
    for (int n = 0; n < links.rbs(); ++n) {
        const auto col = links.column(n);
        auto it = std::find(seen.begin(), seen.end(), col);
        if (it == seen.end()) {
            std::vector<RateMoments> m;
            for (int j = 0; j < J; ++j)
                m.push_back(located(j, n, [&] {
                    return gaussian_rate_moments(links.at(j, n), f.scenario.efficiency, f.analysis.quadrature);
                }));
            std::vector<double> r(J);
            for (int j = 0; j < J; ++j)
                r[j] = located(j, n, [&] {
                    return gaussian_pfs_rate(m, j, f.scenario.geometry, f.analysis.quadrature);
                });
            seen.push_back(col);
            cached.push_back(std::move(r));
            it = seen.end() - 1;
        }
        const auto &r = cached[it - seen.begin()];
        for (int j = 0; j < J; ++j)
            out[j] += r[j];
    }
    return out;
}

} // namespace detail

// Per-terminal rates of each requested model, with the matching uncertainty:
// 95% half-width for simulations, Monte-Carlo standard error for the uniform model.
struct ModelResults {
    std::vector<std::string> models;
    std::map<std::string, std::vector<double>> rate;
    std::map<std::string, std::vector<double>> uncertainty;
    std::shared_ptr<ScheduledSinrModel<SinrDist>> analytic;
};

inline ModelResults evaluate_models(const ScenarioFile &f, const std::vector<std::string> &models, int threads,
                                    bool need_analytic = false)
{
    const LinkTable links = build_link_stats(f.scenario);
    const auto &s = f.scenario;
    ModelResults r;
    r.models = models;
    auto has = [&](const char *m) { return std::find(models.begin(), models.end(), m) != models.end(); };

    if (need_analytic || has("analytic_indep") || has("analytic_uniform"))
        r.analytic = detail::build_model<SinrDist>(links, f.analysis.quadrature, threads);
    if (has("analytic_indep"))
        r.rate["analytic_indep"] = detail::independent_rates(*r.analytic, s.efficiency, s.geometry, threads);
    if (has("analytic_uniform")) {
        auto u = detail::uniform_rates(*r.analytic, f, threads);
        r.rate["analytic_uniform"] = u.rate;
        r.uncertainty["analytic_uniform"] = u.std_error;
    }
    for (auto [name, kind] : {std::pair{"sim_sinr_pfs", SchedulerKind::SinrPFS},
                              std::pair{"sim_rate_pfs", SchedulerKind::RatePFS}}) {
        if (!has(name))
            continue;
        SimOptions o = f.simulation.options;
        o.scheduler = kind;
        const auto sum = simulate_replications(s, o, f.simulation.seeds, f.simulation.master_seed, threads);
        for (const auto &a : sum.terminals) {
            r.rate[name].push_back(a.mean_rate_bps);
            r.uncertainty[name].push_back(a.ci95_halfwidth_bps);
        }
    }
    if (has("gaussian"))
        r.rate["gaussian"] = detail::gaussian_model_rates(links, f);
    if (has("ian")) {
        const auto ian = detail::build_model<ExponentialSinrDist>(links, f.analysis.quadrature, threads);
        r.rate["ian"] = detail::independent_rates(*ian, s.efficiency, s.geometry, threads);
    }
    if (has("naive"))
        for (int j = 0; j < links.terminals(); ++j)
            r.rate["naive"].push_back(naive_rate(links, j, s.efficiency, s.geometry));
    return r;
}

inline std::string uncertainty_column(const std::string &model)
{
    if (model == "analytic_uniform")
        return "analytic_uniform_se";
    if (model.rfind("sim_", 0) == 0)
        return model + "_ci95";
    return {};
}

inline CsvTable report_table(const ScenarioFile &f, const ModelResults &r, const std::string &digest)
{
    CsvTable t;
    t.digest = digest;
    t.header = {"terminal", "position_m"};
    for (const auto &m : r.models) {
        t.header.push_back(m);
        if (!uncertainty_column(m).empty())
            t.header.push_back(uncertainty_column(m));
    }
    const int J = f.scenario.terminal_count();
    for (int j = 0; j < J; ++j) {
        std::vector<std::string> row = {std::to_string(j),
                                        f.scenario.explicit_links ? "" : format_number(f.scenario.terminals[j].pos_m)};
        for (const auto &m : r.models) {
            row.push_back(format_number(r.rate.at(m)[j]));
            if (!uncertainty_column(m).empty())
                row.push_back(format_number(r.uncertainty.at(m)[j]));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

// ---- analyze --------------------------------------------------------------------

struct AnalyzeRequest {
    std::string scenario_path;
    std::string models = "all";
    std::string out;               // empty: print to stdout
    std::string probabilities_out; // per-(terminal, RB) scheduling probabilities
    std::string curves_out;        // (x, density) pairs
    std::string svg_out;           // rate chart
    std::string curves_svg_out;    // density chart
    std::vector<int> curve_terminals; // default: the middle terminal
    int curve_rb = 0;
    RunOverrides overrides;
};

inline double scheduled_quantile(const RbContest<SinrDist> &c, int j, double p)
{
    double lo = 0.0, hi = c.scheduled_mean(j);
    while (c.scheduled_cdf(j, hi) < p)
        hi *= 2.0;
    for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (c.scheduled_cdf(j, mid) < p ? lo : hi) = mid;
    }
    return hi;
}

inline void analyze(const AnalyzeRequest &req, std::ostream &out = std::cout)
{
    ScenarioFile f = load_scenario(req.scenario_path);
    // Digest of the file as written; command-line overrides do not change it.
    const std::string digest = scenario_digest(f);
    apply_overrides(f, req.overrides);
    const auto models = parse_models(req.models);
    const bool want_curves = !req.curves_out.empty() || !req.curves_svg_out.empty();
    const auto r = evaluate_models(f, models, req.overrides.threads, want_curves || !req.probabilities_out.empty());
    const auto table = report_table(f, r, digest);
    if (req.out.empty())
        out << render_csv(table);
    else
        write_csv(req.out, table);

    const int J = f.scenario.terminal_count();
    const int N = f.scenario.n_rbs;
    if (!req.probabilities_out.empty()) {
        CsvTable p;
        p.digest = table.digest;
        p.header = {"terminal", "rb", "scheduling_probability"};
        for (int j = 0; j < J; ++j)
            for (int n = 0; n < N; ++n)
                p.rows.push_back({std::to_string(j), std::to_string(n),
                                  format_number(r.analytic->scheduling_probability(j, n))});
        write_csv(req.probabilities_out, p);
    }
    if (!req.svg_out.empty()) {
        Chart c{f.scenario.name + ": mean rate per terminal", "terminal", "rate [Mbit/s]", {}};
        for (const auto &m : models) {
            Series s{m, {}, {}};
            for (int j = 0; j < J; ++j) {
                s.x.push_back(j + 1);
                s.y.push_back(r.rate.at(m)[j] / 1e6);
            }
            c.series.push_back(std::move(s));
        }
        write_file_atomic(req.svg_out, render_svg(c));
    }
    if (want_curves) {
        if (req.curve_rb < 0 || req.curve_rb >= N)
            throw ConfigError("RB index out of range", "--curve-rb");
        std::vector<int> terms = req.curve_terminals;
        if (terms.empty())
            terms.push_back(J / 2);
        CsvTable c;
        c.digest = table.digest;
        c.header = {"terminal", "rb", "x", "base_pdf", "scheduled_pdf"};
        Chart chart{f.scenario.name + ": SINR densities, RB " + std::to_string(req.curve_rb), "SINR (linear)",
                    "density", {}};
        const auto &contest = r.analytic->contest(req.curve_rb);
        for (int j : terms) {
            if (j < 0 || j >= J)
                throw ConfigError("terminal index out of range", "--curve-terminals");
            const double hi = detail::located(j, req.curve_rb, [&] { return scheduled_quantile(contest, j, 0.999); });
            Series base{"terminal " + std::to_string(j) + " base", {}, {}};
            Series sched{"terminal " + std::to_string(j) + " scheduled", {}, {}};
            for (int k = 0; k < f.analysis.curve_points; ++k) {
                const double x = hi * k / (f.analysis.curve_points - 1);
                const double b = contest.dist(j).pdf(x);
                const double sp = detail::located(j, req.curve_rb, [&] { return contest.scheduled_pdf(j, x); });
                c.rows.push_back({std::to_string(j), std::to_string(req.curve_rb), format_number(x),
                                  format_number(b), format_number(sp)});
                base.x.push_back(x);
                base.y.push_back(b);
                sched.x.push_back(x);
                sched.y.push_back(sp);
            }
            chart.series.push_back(std::move(base));
            chart.series.push_back(std::move(sched));
        }
        if (!req.curves_out.empty())
            write_csv(req.curves_out, c);
        if (!req.curves_svg_out.empty())
            write_file_atomic(req.curves_svg_out, render_svg(chart));
    }
}

// ---- simulate -------------------------------------------------------------------

struct SimulateRequest {
    std::string scenario_path;
    std::string out;       // aggregate CSV; empty: stdout
    std::string trace_out; // per-TTI records of replication 0
    std::string svg_out;
    RunOverrides overrides;
};

inline CsvTable aggregate_table(const std::string &digest, const SimSummary &s)
{
    CsvTable t;
    t.digest = digest;
    t.header = {"terminal", "mean_rate_bps", "ci95_halfwidth_bps", "scheduled_share"};
    for (const auto &a : s.terminals)
        t.rows.push_back({std::to_string(a.terminal), format_number(a.mean_rate_bps),
                          format_number(a.ci95_halfwidth_bps), format_number(a.scheduled_share)});
    return t;
}

inline CsvTable trace_table(const std::string &digest, const SimTrace &tr)
{
    CsvTable t;
    t.digest = digest;
    t.header = {"tti", "rb", "terminal", "sinr_db", "efficiency_bits_per_symbol", "bits"};
    t.rows.reserve(tr.records.size());
    for (const auto &r : tr.records)
        t.rows.push_back({std::to_string(r.tti), std::to_string(r.rb), std::to_string(r.terminal),
                          format_number(10.0 * std::log10(r.sinr)), format_number(r.efficiency),
                          format_number(r.bits)});
    return t;
}

inline void simulate_command(const SimulateRequest &req, std::ostream &out = std::cout)
{
    ScenarioFile f = load_scenario(req.scenario_path);
    const std::string digest = scenario_digest(f);
    apply_overrides(f, req.overrides);
    const auto &sim = f.simulation;
    const auto summary =
        simulate_replications(f.scenario, sim.options, sim.seeds, sim.master_seed, req.overrides.threads);
    const auto table = aggregate_table(digest, summary);
    if (req.out.empty())
        out << render_csv(table);
    else
        write_csv(req.out, table);
    if (!req.trace_out.empty()) {
        SimOptions o = sim.options;
        o.record_ttis = true;
        write_csv(req.trace_out, trace_table(digest, simulate(f.scenario, o, derive_seed(sim.master_seed, 0))));
    }
    if (!req.svg_out.empty()) {
        Chart c{f.scenario.name + ": simulated mean rate", "terminal", "rate [Mbit/s]", {}};
        Series mean{"mean", {}, {}}, lo{"95% low", {}, {}}, hi{"95% high", {}, {}};
        for (const auto &a : summary.terminals) {
            for (auto *s : {&mean, &lo, &hi})
                s->x.push_back(a.terminal + 1);
            mean.y.push_back(a.mean_rate_bps / 1e6);
            lo.y.push_back((a.mean_rate_bps - a.ci95_halfwidth_bps) / 1e6);
            hi.y.push_back((a.mean_rate_bps + a.ci95_halfwidth_bps) / 1e6);
        }
        c.series = {mean, lo, hi};
        write_file_atomic(req.svg_out, render_svg(c));
    }
}

// ---- compare --------------------------------------------------------------------

struct CompareRequest {
    std::vector<std::string> reports;
    std::string baseline = "sim_sinr_pfs";
    bool pairwise = false; // second report's columns against the same columns of the first
    std::string out;
    std::string summary_out;
};

struct ComparisonSummary {
    std::string model;
    double mean_abs_rel_error = 0.0;
    double max_abs_rel_error = 0.0;
};

struct Comparison {
    CsvTable table;
    std::vector<ComparisonSummary> summary;
};

inline bool is_rate_column(const std::string &c)
{
    if (c == "terminal" || c == "position_m" || c == "scheduled_share" || c == "ci95_halfwidth_bps")
        return false;
    auto ends = [&](const std::string &suffix) {
        return c.size() >= suffix.size() && c.compare(c.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    return !ends("_ci95") && !ends("_se");
}

inline double relative_error(double model, double baseline)
{
    if (model == baseline)
        return 0.0;
    return (model - baseline) / baseline;
}

inline Comparison compare_reports(const CompareRequest &req)
{
    if (req.reports.empty())
        throw ConfigError("no reports given", "reports");
    std::vector<CsvTable> tables;
    for (const auto &p : req.reports)
        tables.push_back(read_csv(p));
    for (std::size_t i = 1; i < tables.size(); ++i)
        if (tables[i].digest != tables[0].digest)
            throw DigestMismatch("scenario digest of '" + req.reports[i] + "' (" + tables[i].digest +
                                 ") differs from '" + req.reports[0] + "' (" + tables[0].digest + ")");
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const auto &t = tables[i];
        if (t.column("terminal") != 0 || t.rows.size() != tables[0].rows.size())
            throw ConfigError("reports must list the same terminals, 'terminal' first", req.reports[i]);
        for (std::size_t k = 0; k < t.rows.size(); ++k)
            if (t.rows[k].size() != t.header.size() || t.rows[k][0] != tables[0].rows[k][0])
                throw ConfigError("malformed or misaligned row " + std::to_string(k), req.reports[i]);
    }
    auto value = [](const CsvTable &t, std::size_t row, int col) {
        const auto &cell = t.rows[row][col];
        char *end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (cell.empty() || *end != '\0')
            throw ConfigError("non-numeric cell '" + cell + "'", t.header[col]);
        return v;
    };

    // (label, table, column) of each compared model and its baseline
    struct Pair {
        std::string label;
        int model_table, model_col, base_table, base_col;
    };
    std::vector<Pair> pairs;
    if (req.pairwise) {
        if (tables.size() != 2)
            throw ConfigError("pairwise comparison takes exactly two reports", "--pairwise");
        for (std::size_t c = 0; c < tables[1].header.size(); ++c) {
            const auto &name = tables[1].header[c];
            const int base = tables[0].column(name);
            if (is_rate_column(name) && base >= 0)
                pairs.push_back({name, 1, static_cast<int>(c), 0, base});
        }
    } else {
        int bt = -1, bc = -1;
        for (std::size_t i = 0; i < tables.size() && bt < 0; ++i)
            if (tables[i].column(req.baseline) >= 0) {
                bt = static_cast<int>(i);
                bc = tables[i].column(req.baseline);
            }
        if (bt < 0)
            throw ConfigError("baseline column '" + req.baseline + "' not found in any report", "--baseline");
        std::map<std::string, int> uses;
        for (const auto &t : tables)
            for (const auto &h : t.header)
                ++uses[h];
        for (std::size_t i = 0; i < tables.size(); ++i)
            for (std::size_t c = 0; c < tables[i].header.size(); ++c) {
                const auto &name = tables[i].header[c];
                if (!is_rate_column(name) || (static_cast<int>(i) == bt && static_cast<int>(c) == bc))
                    continue;
                const std::string label = uses[name] > 1 ? name + "@" + std::to_string(i + 1) : name;
                pairs.push_back({label, static_cast<int>(i), static_cast<int>(c), bt, bc});
            }
    }
    if (pairs.empty())
        throw ConfigError("nothing to compare", "reports");

    Comparison out;
    out.table.digest = tables[0].digest;
    out.table.header = {"terminal"};
    for (const auto &p : pairs)
        out.table.header.push_back(p.label + "_rel_error");
    std::vector<ComparisonSummary> sum(pairs.size());
    for (std::size_t k = 0; k < tables[0].rows.size(); ++k) {
        std::vector<std::string> row = {tables[0].rows[k][0]};
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto &p = pairs[i];
            const double e =
                relative_error(value(tables[p.model_table], k, p.model_col), value(tables[p.base_table], k, p.base_col));
            row.push_back(format_number(e));
            sum[i].mean_abs_rel_error += std::abs(e) / tables[0].rows.size();
            sum[i].max_abs_rel_error = std::max(sum[i].max_abs_rel_error, std::abs(e));
        }
        out.table.rows.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < pairs.size(); ++i)
        sum[i].model = pairs[i].label;
    out.summary = std::move(sum);
    return out;
}

inline CsvTable summary_table(const std::string &digest, const std::vector<ComparisonSummary> &s)
{
    CsvTable t;
    t.digest = digest;
    t.header = {"model", "mean_abs_rel_error", "max_abs_rel_error"};
    for (const auto &r : s)
        t.rows.push_back({r.model, format_number(r.mean_abs_rel_error), format_number(r.max_abs_rel_error)});
    return t;
}

inline void compare_command(const CompareRequest &req, std::ostream &out = std::cout)
{
    const auto c = compare_reports(req);
    if (req.out.empty())
        out << render_csv(c.table);
    else
        write_csv(req.out, c.table);
    const auto s = summary_table(c.table.digest, c.summary);
    if (!req.summary_out.empty())
        write_csv(req.summary_out, s);
    else
        out << render_csv(s);
}

// ---- sweep ----------------------------------------------------------------------

enum class SweepParameter { Position, Terminals };

struct SweepRequest {
    std::string scenario_path;
    SweepParameter parameter = SweepParameter::Position;
    std::string values;
    int terminal = -1; // position sweep: terminal to move (default last)
    std::string models = "analytic_indep,analytic_uniform,gaussian,ian,naive";
    std::string out;
    std::string svg_out;
    RunOverrides overrides;
};

inline void sweep_command(const SweepRequest &req, std::ostream &out = std::cout)
{
    const ScenarioFile base = load_scenario(req.scenario_path);
    const auto values = parse_number_list(req.values, "--values");
    const auto models = parse_models(req.models);
    if (base.scenario.explicit_links)
        throw ConfigError("sweeps need a geometric scenario (terminals, not links)", "links");
    const int J0 = base.scenario.terminal_count();

    CsvTable t;
    t.digest = scenario_digest(base);
    t.header = {req.parameter == SweepParameter::Position ? "position_m" : "terminals", "terminal"};
    for (const auto &m : models)
        t.header.push_back(m);
    std::map<std::string, Series> series;
    for (double v : values) {
        ScenarioFile f = base;
        std::vector<int> report;
        if (req.parameter == SweepParameter::Position) {
            const int k = req.terminal < 0 ? J0 - 1 : req.terminal;
            if (k >= J0)
                throw ConfigError("terminal index out of range", "--terminal");
            f.scenario.terminals[k].pos_m = v;
            report = {k};
        } else {
            const int J = static_cast<int>(v);
            if (J != v || J < 1 || J > J0)
                throw ConfigError("terminal counts must be integers in [1, " + std::to_string(J0) + "]", "--values");
            f.scenario.terminals.resize(J);
            for (int j = 0; j < J; ++j)
                report.push_back(j);
        }
        try {
            f.scenario.validate();
        } catch (const ConfigError &e) {
            throw ConfigError(std::string(e.what()) + " (sweep value " + format_number(v) + ")", "--values");
        }
        apply_overrides(f, req.overrides);
        const auto r = evaluate_models(f, models, req.overrides.threads);
        for (int j : report) {
            std::vector<std::string> row = {format_number(v), std::to_string(j)};
            for (const auto &m : models) {
                row.push_back(format_number(r.rate.at(m)[j]));
                if (req.parameter == SweepParameter::Position) {
                    series[m].name = m;
                    series[m].x.push_back(v);
                    series[m].y.push_back(r.rate.at(m)[j] / 1e6);
                }
            }
            t.rows.push_back(std::move(row));
        }
        if (req.parameter == SweepParameter::Terminals)
            for (const auto &m : models) {
                double total = 0.0;
                for (double x : r.rate.at(m))
                    total += x;
                series[m].name = m;
                series[m].x.push_back(v);
                series[m].y.push_back(total / 1e6);
            }
    }
    if (req.out.empty())
        out << render_csv(t);
    else
        write_csv(req.out, t);
    if (!req.svg_out.empty()) {
        Chart c{base.scenario.name + (req.parameter == SweepParameter::Position ? ": rate vs position"
                                                                                 : ": cell rate vs terminal count"),
                req.parameter == SweepParameter::Position ? "position [m]" : "terminals", "rate [Mbit/s]", {}};
        for (const auto &m : models)
            c.series.push_back(series[m]);
        write_file_atomic(req.svg_out, render_svg(c));
    }
}

} // namespace pfsa::io
