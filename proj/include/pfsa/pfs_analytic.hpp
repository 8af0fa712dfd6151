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
#include <pfsa/numerics.hpp>
#include <pfsa/parallel.hpp>
#include <pfsa/scenario.hpp>
#include <pfsa/sinr_dist.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <vector>

namespace pfsa {

enum class SchedulerMetric {
    ProportionalFair, // argmax of X_j / E[X_j]
    Opportunistic,    // argmax of X_j
};

// Below this, a terminal's share of an RB is treated as zero for rate purposes.
inline constexpr double negligible_scheduling_probability = 1e-12;

// One RB contested by J terminals with independent SINRs. Terminal j wins when
// X_j / s_j is the largest ratio, where s_j = E[X_j] (proportional fair) or 1
// (opportunistic). Densities and CDFs are in raw SINR x.
template <SinrDistribution D>
class RbContest {
public:
    RbContest(std::vector<D> dists, SchedulerMetric metric = SchedulerMetric::ProportionalFair,
              const QuadratureSpec &spec = {})
        : dists_(std::move(dists)), metric_(metric), spec_(spec)
    {
        if (dists_.empty())
            throw DomainError("an RB contest needs at least one terminal");
        for (const auto &d : dists_) {
            means_.push_back(d.mean());
            scales_.push_back(metric_ == SchedulerMetric::ProportionalFair ? d.mean() : 1.0);
        }
        probs_.resize(dists_.size());
        for (int j = 0; j < terminals(); ++j)
            probs_[j] = compute_probability(j);
        tables_.resize(dists_.size());
        table_once_ = std::make_unique<std::once_flag[]>(dists_.size());
    }

    int terminals() const noexcept { return static_cast<int>(dists_.size()); }
    SchedulerMetric metric() const noexcept { return metric_; }
    const D &dist(int j) const { return dists_.at(j); }
    double mean(int j) const { return means_.at(j); }

    // P(M_j = 1).
    double scheduling_probability(int j) const { return probs_.at(j); }

    // log prod_{i != j} F_i((s_i / s_j) x): the probability that every other
    // terminal's metric stays below j's when X_j = x.
    double log_win_given(int j, double x) const
    {
        double acc = 0.0;
        for (int i = 0; i < terminals(); ++i) {
            if (i == j)
                continue;
            acc += dists_[i].log_cdf(scales_[i] / scales_[j] * x);
            if (acc == -std::numeric_limits<double>::infinity())
                break;
        }
        return acc;
    }

    // f_j(x) P(M_j = 1 | X_j = x), the unnormalized scheduled density.
    double joint_density(int j, double x) const
    {
        const double f = dists_[j].pdf(x);
        if (f == 0.0)
            return 0.0;
        const double lw = log_win_given(j, x);
        if (lw == -std::numeric_limits<double>::infinity())
            return 0.0;
        return std::exp(std::log(f) + lw);
    }

    // f_{X_j | M_j = 1}(x).
    double scheduled_pdf(int j, double x) const { return joint_density(j, x) / checked_probability(j); }

    // F_{X_j | M_j = 1}(x), from a cumulative table on the mapped axis
    // t = x / (x + E[X_j]) with exact quadrature inside the last cell.
    double scheduled_cdf(int j, double x) const
    {
        if (!(x >= 0.0))
            throw DomainError("SINR argument must be >= 0");
        const auto &tab = table(j);
        if (std::isinf(x))
            return tab.back() / checked_probability(j);
        const double m = means_[j];
        const double t = x / (x + m);
        const int k = std::min(static_cast<int>(t * table_cells), table_cells - 1);
        const double t0 = double(k) / table_cells;
        double part = 0.0;
        if (t > t0)
            part = kronrod15([&](double u) { return mapped_density(j, u); }, t0, t);
        return (tab[k] + part) / checked_probability(j);
    }

    // (1/P) int C(x) f_j(x) P(win | x) dx = E[C(X_j) | M_j = 1], in bits/symbol.
    double conditional_efficiency(int j, const SpectralEfficiency &eff) const
    {
        if (probs_[j] < negligible_scheduling_probability)
            return 0.0;
        return unconditional_efficiency(j, eff) / probs_[j];
    }

    // int C(x) f_j(x) P(win | x) dx = P(M_j = 1) E[C(X_j) | M_j = 1].
    double unconditional_efficiency(int j, const SpectralEfficiency &eff) const
    {
        if (probs_[j] < negligible_scheduling_probability)
            return 0.0;
        auto g = [&](double x) {
            const double jd = joint_density(j, x);
            return jd == 0.0 ? 0.0 : eff(x) * jd;
        };
        return integrate_piecewise(g, eff.breakpoints(), means_[j], spec_);
    }

    // E[X_j | M_j = 1].
    double scheduled_mean(int j) const
    {
        auto g = [&](double x) { return x * joint_density(j, x); };
        return integrate_semi_infinite(g, means_[j], spec_) / checked_probability(j);
    }

    static constexpr int table_cells = 1024;

private:
    double compute_probability(int j) const
    {
        auto g = [&](double x) { return joint_density(j, x); };
        try {
            return integrate_semi_infinite(g, means_[j], spec_);
        } catch (const NumericalError &e) {
            std::ostringstream os;
            os << "scheduling probability of terminal " << j << ": " << e.what();
            throw NonConvergence(os.str());
        }
    }

    double checked_probability(int j) const
    {
        const double p = probs_.at(j);
        if (!(p > std::numeric_limits<double>::min())) {
            std::ostringstream os;
            os << "scheduling probability of terminal " << j << " underflows (" << p << ")";
            throw SchedulingUnderflow(os.str());
        }
        return p;
    }

    // Joint density on the mapped axis t, x = m t / (1 - t).
    double mapped_density(int j, double t) const
    {
        const double s = 1.0 - t;
        if (s <= 0.0)
            return 0.0;
        const double m = means_[j];
        const double jd = joint_density(j, m * t / s);
        return jd == 0.0 ? 0.0 : jd * m / (s * s);
    }

    const std::vector<double> &table(int j) const
    {
        std::call_once(table_once_[j], [&] {
            std::vector<double> tab(table_cells + 1, 0.0);
            for (int k = 0; k < table_cells; ++k) {
                const double a = double(k) / table_cells;
                const double b = double(k + 1) / table_cells;
                tab[k + 1] = tab[k] + kronrod15([&](double u) { return mapped_density(j, u); }, a, b);
            }
            tables_[j] = std::move(tab);
        });
        return tables_[j];
    }

    std::vector<D> dists_;
    SchedulerMetric metric_;
    QuadratureSpec spec_;
    std::vector<double> means_;
    std::vector<double> scales_;
    std::vector<double> probs_;
    mutable std::vector<std::vector<double>> tables_;
    std::unique_ptr<std::once_flag[]> table_once_;
};

// Default per-link law construction; specialised laws (e.g. interference as
// noise) provide the same constructor signature.
template <SinrDistribution D>
D make_distribution(const LinkStats &link, const QuadratureSpec &spec)
{
    return D(link, spec);
}

// Scheduled-SINR model over the full (terminal, RB) grid. RBs whose link
// columns are identical share one RbContest.
template <SinrDistribution D = SinrDist>
class ScheduledSinrModel {
public:
    ScheduledSinrModel(const LinkTable &links, SchedulerMetric metric = SchedulerMetric::ProportionalFair,
                       const QuadratureSpec &spec = {}, int threads = 1)
        : terminals_(links.terminals()), rbs_(links.rbs())
    {
        if (terminals_ < 1 || rbs_ < 1)
            throw DomainError("model needs at least one terminal and one RB");
        std::vector<std::vector<LinkStats>> distinct;
        rb_class_.resize(rbs_);
        for (int n = 0; n < rbs_; ++n) {
            auto col = links.column(n);
            auto it = std::find(distinct.begin(), distinct.end(), col);
            if (it == distinct.end()) {
                rb_class_[n] = static_cast<int>(distinct.size());
                distinct.push_back(std::move(col));
            } else {
                rb_class_[n] = static_cast<int>(it - distinct.begin());
            }
        }
        contests_.resize(distinct.size());
        parallel_for(static_cast<int>(distinct.size()), threads, [&](int c) {
            std::vector<D> dists;
            for (const auto &l : distinct[c])
                dists.push_back(make_distribution<D>(l, spec));
            contests_[c] = std::make_shared<const RbContest<D>>(std::move(dists), metric, spec);
        });
    }

    int terminals() const noexcept { return terminals_; }
    int rbs() const noexcept { return rbs_; }

    const RbContest<D> &contest(int n) const { return *contests_.at(rb_class_.at(n)); }
    // RBs with the same class index have identical link columns.
    int rb_class(int n) const { return rb_class_.at(n); }
    int rb_class_count() const { return static_cast<int>(contests_.size()); }

    double scheduling_probability(int j, int n) const { return contest(n).scheduling_probability(j); }
    double scheduled_pdf(int j, int n, double x) const { return contest(n).scheduled_pdf(j, x); }
    double scheduled_cdf(int j, int n, double x) const { return contest(n).scheduled_cdf(j, x); }

    // Expected rate of terminal j on RB n in bit/s.
    double expected_rate_per_rb(int j, int n, const SpectralEfficiency &eff, const RbGeometry &g) const
    {
        return g.symbol_rate() * contest(n).unconditional_efficiency(j, eff);
    }

    // Sum over RBs; identical RB classes are evaluated once.
    double total_rate(int j, const SpectralEfficiency &eff, const RbGeometry &g) const
    {
        std::vector<double> per_class(contests_.size(), std::numeric_limits<double>::quiet_NaN());
        double sum = 0.0;
        for (int n = 0; n < rbs_; ++n) {
            double &v = per_class[rb_class_[n]];
            if (std::isnan(v))
                v = expected_rate_per_rb(j, n, eff, g);
            sum += v;
        }
        return sum;
    }

private:
    int terminals_;
    int rbs_;
    std::vector<int> rb_class_;
    std::vector<std::shared_ptr<const RbContest<D>>> contests_;
};

} // namespace pfsa
