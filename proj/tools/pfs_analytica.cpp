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

#include <pfsa/io/commands.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace pfsa;
using namespace pfsa::io;

struct OverrideFlags {
    int seeds = 0;
    long ttis = 0;
    std::uint64_t master_seed = 0;
    std::string scheduler;

    void add(CLI::App *cmd, bool with_scheduler)
    {
        cmd->add_option("--seeds", seeds, "replications (overrides simulation.seeds)")->check(CLI::PositiveNumber);
        cmd->add_option("--ttis", ttis, "TTIs per replication (overrides simulation.ttis)")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", master_seed, "master seed (overrides simulation.master_seed)");
        if (with_scheduler)
            cmd->add_option("--scheduler", scheduler, "sinr_pfs | rate_pfs | opportunistic");
    }

    RunOverrides get(const CLI::App *cmd) const
    {
        RunOverrides o;
        o.threads = thread_count();
        if (cmd->count("--seeds"))
            o.seeds = seeds;
        if (cmd->count("--ttis"))
            o.ttis = ttis;
        if (cmd->count("--seed"))
            o.master_seed = master_seed;
        if (!scheduler.empty()) {
            bool found = false;
            for (const auto &[name, kind] : scheduler_names())
                if (name == scheduler) {
                    o.scheduler = kind;
                    found = true;
                }
            if (!found)
                throw ConfigError("'" + scheduler + "' is not one of sinr_pfs | rate_pfs | opportunistic",
                                  "--scheduler");
        }
        return o;
    }
};

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Scheduled-SINR models and Monte-Carlo simulation of proportional fair OFDMA down-links.\n"
                 "Exit codes: 0 success, 1 configuration error, 2 numerical failure.\n"
                 "PFS_ANALYTICA_THREADS caps the worker threads."};
    app.require_subcommand(1);

    AnalyzeRequest areq;
    OverrideFlags aflags;
    auto *analyze_cmd = app.add_subcommand("analyze", "per-terminal rates of analytic, simulated and reference models");
    analyze_cmd->add_option("--scenario", areq.scenario_path, "scenario YAML file")->required();
    analyze_cmd->add_option("--models", areq.models,
                            "'all' or a comma list of analytic_indep, analytic_uniform, sim_sinr_pfs, "
                            "sim_rate_pfs, gaussian, ian, naive");
    analyze_cmd->add_option("--out", areq.out, "report CSV (default: stdout)");
    analyze_cmd->add_option("--probabilities", areq.probabilities_out, "per-(terminal, RB) scheduling probabilities CSV");
    analyze_cmd->add_option("--curves", areq.curves_out, "base and scheduled SINR densities CSV");
    analyze_cmd->add_option("--curve-terminals", areq.curve_terminals, "terminals for --curves (default: middle one)")
        ->delimiter(',');
    analyze_cmd->add_option("--curve-rb", areq.curve_rb, "RB for --curves");
    analyze_cmd->add_option("--svg", areq.svg_out, "rate chart");
    analyze_cmd->add_option("--curves-svg", areq.curves_svg_out, "density chart");
    aflags.add(analyze_cmd, false);

    SimulateRequest sreq;
    OverrideFlags sflags;
    auto *simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo replications, per-terminal aggregates");
    simulate_cmd->add_option("--scenario", sreq.scenario_path, "scenario YAML file")->required();
    simulate_cmd->add_option("--out", sreq.out, "aggregate CSV (default: stdout)");
    simulate_cmd->add_option("--trace", sreq.trace_out, "per-TTI trace CSV of the first replication");
    simulate_cmd->add_option("--svg", sreq.svg_out, "rate chart");
    sflags.add(simulate_cmd, true);

    CompareRequest creq;
    auto *compare_cmd = app.add_subcommand("compare", "relative errors of report columns against a baseline");
    compare_cmd->add_option("reports", creq.reports, "report CSVs sharing one scenario digest")->required();
    compare_cmd->add_option("--baseline", creq.baseline, "baseline column (default sim_sinr_pfs)");
    compare_cmd->add_flag("--pairwise", creq.pairwise, "compare equal columns of two reports");
    compare_cmd->add_option("--out", creq.out, "comparison CSV (default: stdout)");
    compare_cmd->add_option("--summary", creq.summary_out, "summary CSV (default: stdout)");

    SweepRequest wreq;
    OverrideFlags wflags;
    std::string param = "position";
    auto *sweep_cmd = app.add_subcommand("sweep", "rates over a grid of terminal positions or terminal counts");
    sweep_cmd->add_option("--scenario", wreq.scenario_path, "scenario YAML file")->required();
    sweep_cmd->add_option("--param", param, "position | terminals");
    sweep_cmd->add_option("--values", wreq.values, "comma list of grid values")->required();
    sweep_cmd->add_option("--terminal", wreq.terminal, "terminal moved by a position sweep (default: last)");
    sweep_cmd->add_option("--models", wreq.models, "as for analyze");
    sweep_cmd->add_option("--out", wreq.out, "sweep CSV (default: stdout)");
    sweep_cmd->add_option("--svg", wreq.svg_out, "sweep chart");
    wflags.add(sweep_cmd, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*analyze_cmd) {
            areq.overrides = aflags.get(analyze_cmd);
            analyze(areq);
        } else if (*simulate_cmd) {
            sreq.overrides = sflags.get(simulate_cmd);
            simulate_command(sreq);
        } else if (*compare_cmd) {
            compare_command(creq);
        } else if (*sweep_cmd) {
            if (param == "position")
                wreq.parameter = SweepParameter::Position;
            else if (param == "terminals")
                wreq.parameter = SweepParameter::Terminals;
            else
                throw ConfigError("'" + param + "' is not one of position | terminals", "--param");
            wreq.overrides = wflags.get(sweep_cmd);
            sweep_command(wreq);
        }
    } catch (const ConfigError &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const DigestMismatch &e) {
        std::cerr << "digest mismatch: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const DomainError &e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
