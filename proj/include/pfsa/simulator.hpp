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
#include <pfsa/parallel.hpp>
#include <pfsa/rng.hpp>
#include <pfsa/scenario.hpp>

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

namespace pfsa {

// ---- Fading -------------------------------------------------------------------

enum class FadingMode { BlockIID, JakesSoS };
enum class FrequencyCorrelation { IndependentRBs, TappedDelayLine };

struct DelayTap {
    double delay_s = 0.0;
    double power = 1.0;
};

struct FadingProcess {
    FadingMode mode = FadingMode::BlockIID;
    int oscillators = 16;
    double doppler_hz = 5.5;
    FrequencyCorrelation correlation = FrequencyCorrelation::IndependentRBs;
    std::vector<DelayTap> taps;
    double rb_bandwidth_hz = 180e3;

    void validate() const
    {
        if (mode == FadingMode::JakesSoS) {
            if (oscillators < 1)
                throw ConfigError("must be >= 1", "fading.oscillators");
            if (!(doppler_hz > 0.0))
                throw ConfigError("must be > 0", "fading.doppler_hz");
        }
        if (correlation == FrequencyCorrelation::TappedDelayLine) {
            if (taps.empty())
                throw ConfigError("tapped delay line needs at least one tap", "fading.taps");
            double sum = 0.0;
            for (const auto &t : taps) {
                if (!(t.power > 0.0) || !(t.delay_s >= 0.0))
                    throw ConfigError("tap power must be > 0 and delay >= 0", "fading.taps");
                sum += t.power;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw ConfigError("tap powers must sum to 1", "fading.taps");
            if (!(rb_bandwidth_hz > 0.0))
                throw ConfigError("must be > 0", "fading.rb_bandwidth_hz");
        }
    }
};

// Sum-of-sinusoids Rayleigh process with unit mean power.
class JakesOscillatorBank {
public:
    JakesOscillatorBank() = default;
    JakesOscillatorBank(int oscillators, double doppler_hz, Rng &rng)
    {
        const double two_pi = 2.0 * std::numbers::pi;
        const double theta = two_pi * rng.uniform() - std::numbers::pi;
        for (int m = 0; m < oscillators; ++m) {
            const double alpha = (two_pi * (m + 1) - std::numbers::pi + theta) / oscillators;
            omega_.push_back(two_pi * doppler_hz * std::cos(alpha));
            phase_.push_back(two_pi * rng.uniform());
        }
        norm_ = 1.0 / std::sqrt(static_cast<double>(oscillators));
    }

    std::complex<double> gain(double t) const
    {
        double re = 0.0, im = 0.0;
        for (std::size_t m = 0; m < omega_.size(); ++m) {
            const double arg = omega_[m] * t + phase_[m];
            re += std::cos(arg);
            im += std::sin(arg);
        }
        return {re * norm_, im * norm_};
    }

private:
    std::vector<double> omega_;
    std::vector<double> phase_;
    double norm_ = 1.0;
};

// Power gains for every (terminal, RB, signal/interferer) process. Layout of
// draw(): ((j * rbs) + n) * 2 + link, link 0 = signal, 1 = interferer.
class FadingGenerator {
public:
    FadingGenerator(const FadingProcess &f, int terminals, int rbs, double tti_s, Rng &rng)
        : f_(f), terminals_(terminals), rbs_(rbs), tti_s_(tti_s)
    {
        f.validate();
        const int channels = terminals * 2;
        if (f.correlation == FrequencyCorrelation::TappedDelayLine) {
            const std::size_t k = f.taps.size();
            phasor_.resize(std::size_t(rbs) * k);
            for (int n = 0; n < rbs; ++n)
                for (std::size_t t = 0; t < k; ++t)
                    phasor_[n * k + t] = std::polar(std::sqrt(f.taps[t].power),
                                                    -2.0 * std::numbers::pi * n * f.rb_bandwidth_hz * f.taps[t].delay_s);
            taps_.resize(k);
        }
        if (f.mode == FadingMode::JakesSoS) {
            const std::size_t per = f.correlation == FrequencyCorrelation::TappedDelayLine ? f.taps.size() : rbs;
            banks_.reserve(channels * per);
            for (std::size_t i = 0; i < channels * per; ++i)
                banks_.emplace_back(f.oscillators, f.doppler_hz, rng);
        }
    }

    void draw(long tti, Rng &rng, std::vector<double> &gains)
    {
        gains.resize(std::size_t(terminals_) * rbs_ * 2);
        const double t = tti * tti_s_;
        const bool tdl = f_.correlation == FrequencyCorrelation::TappedDelayLine;
        const std::size_t k = f_.taps.size();
        for (int j = 0; j < terminals_; ++j)
            for (int link = 0; link < 2; ++link) {
                const std::size_t ch = std::size_t(j) * 2 + link;
                if (!tdl) {
                    for (int n = 0; n < rbs_; ++n) {
                        double g;
                        if (f_.mode == FadingMode::BlockIID)
                            g = rng.exponential();
                        else
                            g = std::norm(banks_[ch * rbs_ + n].gain(t));
                        gains[(std::size_t(j) * rbs_ + n) * 2 + link] = g;
                    }
                    continue;
                }
                for (std::size_t q = 0; q < k; ++q) {
                    if (f_.mode == FadingMode::BlockIID) {
                        const double re = rng.normal(), im = rng.normal();
                        taps_[q] = std::complex<double>(re, im) * std::numbers::sqrt2 * 0.5;
                    } else {
                        taps_[q] = banks_[ch * k + q].gain(t);
                    }
                }
                for (int n = 0; n < rbs_; ++n) {
                    std::complex<double> h = 0.0;
                    for (std::size_t q = 0; q < k; ++q)
                        h += taps_[q] * phasor_[n * k + q];
                    gains[(std::size_t(j) * rbs_ + n) * 2 + link] = std::norm(h);
                }
            }
    }

private:
    FadingProcess f_;
    int terminals_;
    int rbs_;
    double tti_s_;
    std::vector<JakesOscillatorBank> banks_;
    std::vector<std::complex<double>> phasor_;
    std::vector<std::complex<double>> taps_;
};

// ---- Simulation -----------------------------------------------------------------

enum class SchedulerKind { SinrPFS, RatePFS, Opportunistic };

// Served-bits window of the rate-based scheduler: per (terminal, RB) or pooled per terminal.
enum class RateWindowScope { PerRB, PerTerminal };

struct SimOptions {
    SchedulerKind scheduler = SchedulerKind::SinrPFS;
    FadingProcess fading;
    long ttis = 5000;
    RateWindowScope rate_scope = RateWindowScope::PerTerminal;
    int cqi_delay_ttis = 0;
    std::vector<double> cqi_levels = lte_cqi_efficiencies();
    bool record_scheduled_sinr = false;
    bool record_ttis = false;
    int batches = 10;

    void validate(const Scenario &s) const
    {
        fading.validate();
        if (ttis <= s.pfs_window)
            throw ConfigError("simulated TTIs must exceed the PFS window (warm-up is discarded)", "simulation.ttis");
        if (batches < 2 || ttis - s.pfs_window < batches)
            throw ConfigError("need at least 2 batches and one measured TTI per batch", "simulation.batches");
        if (cqi_delay_ttis < 0)
            throw ConfigError("must be >= 0", "simulation.cqi_delay_ttis");
        if (scheduler == SchedulerKind::RatePFS && cqi_levels.empty())
            throw ConfigError("rate-based scheduling needs CQI levels", "simulation.cqi_levels");
    }
};

struct TtiRecord {
    long tti = 0;
    int rb = 0;
    int terminal = 0;
    double sinr = 0.0;
    double efficiency = 0.0;
    double bits = 0.0;
};

struct SimTrace {
    int terminals = 0;
    int rbs = 0;
    long ttis = 0;
    long warmup = 0;
    double tti_s = 1e-3;
    int batches = 0;
    std::vector<double> bits;            // per terminal, measured period
    std::vector<double> batch_bits;      // terminal * batches + b
    std::vector<long> batch_ttis;        // per batch
    std::vector<long> scheduled;         // terminal * rbs + n, measured period
    std::vector<std::vector<double>> scheduled_sinr; // terminal * rbs + n
    std::vector<TtiRecord> records;      // every TTI including warm-up

    long measured_ttis() const { return ttis - warmup; }
    double rate_bps(int j) const { return bits.at(j) / (measured_ttis() * tti_s); }
    double scheduled_share(int j) const
    {
        long c = 0;
        for (int n = 0; n < rbs; ++n)
            c += scheduled[std::size_t(j) * rbs + n];
        return double(c) / (double(measured_ttis()) * rbs);
    }
    double scheduled_share(int j, int n) const
    {
        return double(scheduled.at(std::size_t(j) * rbs + n)) / double(measured_ttis());
    }
};

namespace detail {

class SlidingSum {
public:
    explicit SlidingSum(int w = 1) : buf_(w, 0.0) {}
    void push(double v)
    {
        sum_ += v - buf_[pos_];
        buf_[pos_] = v;
        pos_ = (pos_ + 1) % buf_.size();
        if (count_ < buf_.size())
            ++count_;
        if (pos_ == 0)
            sum_ = std::accumulate(buf_.begin(), buf_.end(), 0.0);
    }
    double sum() const { return sum_; }
    double mean() const { return count_ ? sum_ / count_ : 0.0; }

private:
    std::vector<double> buf_;
    std::size_t pos_ = 0;
    std::size_t count_ = 0;
    double sum_ = 0.0;
};

inline double quantized_efficiency(const std::vector<double> &levels, double bits)
{
    const int q = quantize_to_level(levels, bits);
    return q < 0 ? 0.0 : levels[q];
}

} // namespace detail

// One replication. Deterministic in (scenario, options, seed).
inline SimTrace simulate(const Scenario &s, const SimOptions &o, std::uint64_t seed)
{
    o.validate(s);
    const LinkTable links = build_link_stats(s);
    const int J = links.terminals();
    const int N = links.rbs();
    const int W = s.pfs_window;
    const double rs = s.geometry.resource_elements();
    const auto &eff = s.efficiency;

    Rng rng(seed);
    FadingGenerator fading(o.fading, J, N, s.geometry.tti_duration_s, rng);

    SimTrace tr;
    tr.terminals = J;
    tr.rbs = N;
    tr.ttis = o.ttis;
    tr.warmup = W;
    tr.tti_s = s.geometry.tti_duration_s;
    tr.batches = o.batches;
    tr.bits.assign(J, 0.0);
    tr.batch_bits.assign(std::size_t(J) * o.batches, 0.0);
    tr.batch_ttis.assign(o.batches, 0);
    tr.scheduled.assign(std::size_t(J) * N, 0);
    if (o.record_scheduled_sinr)
        tr.scheduled_sinr.resize(std::size_t(J) * N);
    if (o.record_ttis)
        tr.records.reserve(std::size_t(o.ttis) * N);

    const bool rate_pfs = o.scheduler == SchedulerKind::RatePFS;
    const bool per_rb_window = o.rate_scope == RateWindowScope::PerRB;
    std::vector<detail::SlidingSum> sinr_window;
    if (o.scheduler == SchedulerKind::SinrPFS)
        sinr_window.assign(std::size_t(J) * N, detail::SlidingSum(W));
    std::vector<detail::SlidingSum> served;
    if (rate_pfs)
        served.assign(per_rb_window ? std::size_t(J) * N : std::size_t(J), detail::SlidingSum(W));
    const double floor_bits = rs * *std::min_element(o.cqi_levels.begin(), o.cqi_levels.end());
    // Reported SINRs for the CQI delay line, oldest first.
    std::vector<std::vector<double>> reports;

    std::vector<double> gains;
    std::vector<double> gamma(std::size_t(J) * N);
    std::vector<int> winner(N);
    std::vector<double> delivered(std::size_t(J) * N);
    std::vector<double> worst(J);
    const long measured = o.ttis - W;

    for (long t = 0; t < o.ttis; ++t) {
        fading.draw(t, rng, gains);
        for (int j = 0; j < J; ++j)
            for (int n = 0; n < N; ++n) {
                const auto &l = links.at(j, n);
                const std::size_t i = std::size_t(j) * N + n;
                gamma[i] = l.p_sig * gains[i * 2] / (l.p_intf * gains[i * 2 + 1] + l.noise);
            }
        if (rate_pfs) {
            reports.push_back(gamma);
            if (static_cast<int>(reports.size()) > o.cqi_delay_ttis + 1)
                reports.erase(reports.begin());
        }

        for (int n = 0; n < N; ++n) {
            int best = 0;
            double best_metric = -1.0;
            for (int j = 0; j < J; ++j) {
                const std::size_t i = std::size_t(j) * N + n;
                double m;
                switch (o.scheduler) {
                case SchedulerKind::SinrPFS:
                    sinr_window[i].push(gamma[i]);
                    m = gamma[i] / sinr_window[i].mean();
                    break;
                case SchedulerKind::Opportunistic:
                    m = gamma[i];
                    break;
                default: {
                    const double rate = rs * detail::quantized_efficiency(o.cqi_levels, eff(reports.front()[i]));
                    const double past = per_rb_window ? served[i].sum() : served[j].sum();
                    m = rate / std::max(past, floor_bits);
                }
                }
                if (m > best_metric) {
                    best_metric = m;
                    best = j;
                }
            }
            winner[n] = best;
        }

        std::fill(delivered.begin(), delivered.end(), 0.0);
        if (s.mcs_policy == McsPolicy::UniformWorstRB) {
            std::fill(worst.begin(), worst.end(), std::numeric_limits<double>::infinity());
            for (int n = 0; n < N; ++n) {
                const int j = winner[n];
                worst[j] = std::min(worst[j], eff(gamma[std::size_t(j) * N + n]));
            }
        }
        for (int n = 0; n < N; ++n) {
            const int j = winner[n];
            const std::size_t i = std::size_t(j) * N + n;
            const double c = s.mcs_policy == McsPolicy::UniformWorstRB ? worst[j] : eff(gamma[i]);
            delivered[i] = rs * c;
            if (o.record_ttis)
                tr.records.push_back({t, n, j, gamma[i], c, delivered[i]});
            if (t >= W) {
                const long m = t - W;
                const int b = static_cast<int>(m * o.batches / measured);
                tr.bits[j] += delivered[i];
                tr.batch_bits[std::size_t(j) * o.batches + b] += delivered[i];
                ++tr.scheduled[i];
                if (o.record_scheduled_sinr)
                    tr.scheduled_sinr[i].push_back(gamma[i]);
            }
        }
        if (t >= W)
            ++tr.batch_ttis[static_cast<int>((t - W) * o.batches / measured)];
        if (rate_pfs) {
            if (per_rb_window) {
                for (std::size_t i = 0; i < delivered.size(); ++i)
                    served[i].push(delivered[i]);
            } else {
                for (int j = 0; j < J; ++j) {
                    double sum = 0.0;
                    for (int n = 0; n < N; ++n)
                        sum += delivered[std::size_t(j) * N + n];
                    served[j].push(sum);
                }
            }
        }
    }
    return tr;
}

// ---- Replications and statistics ------------------------------------------------

inline double student_t_quantile(double p, double dof)
{
    return boost::math::quantile(boost::math::students_t(dof), p);
}

// Mean and 95% half-width of a sample (Student t).
inline std::pair<double, double> mean_ci95(const std::vector<double> &x)
{
    if (x.size() < 2)
        throw DomainError("confidence interval needs at least two values");
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x)
        ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return {mean, student_t_quantile(0.975, n - 1.0) * sd / std::sqrt(n)};
}

struct TerminalAggregate {
    int terminal = 0;
    double mean_rate_bps = 0.0;
    double ci95_halfwidth_bps = 0.0;
    double scheduled_share = 0.0;
};

struct SimSummary {
    std::vector<TerminalAggregate> terminals;
    std::vector<SimTrace> traces; // kept only on request
};

// Replication r uses derive_seed(master_seed, r). Results do not depend on the
// thread count. A single replication gets its interval from batch means.
inline SimSummary simulate_replications(const Scenario &s, const SimOptions &o, int replications,
                                        std::uint64_t master_seed, int threads = 1, bool keep_traces = false)
{
    if (replications < 1)
        throw ConfigError("must be >= 1", "simulation.seeds");
    o.validate(s);
    std::vector<SimTrace> traces(replications);
    parallel_for(replications, threads,
                 [&](int r) { traces[r] = simulate(s, o, derive_seed(master_seed, static_cast<std::uint64_t>(r))); });

    const int J = traces.front().terminals;
    SimSummary out;
    for (int j = 0; j < J; ++j) {
        TerminalAggregate a;
        a.terminal = j;
        std::vector<double> rates;
        double share = 0.0;
        for (const auto &t : traces) {
            rates.push_back(t.rate_bps(j));
            share += t.scheduled_share(j);
        }
        if (replications >= 2) {
            std::tie(a.mean_rate_bps, a.ci95_halfwidth_bps) = mean_ci95(rates);
        } else {
            const auto &t = traces.front();
            std::vector<double> batch;
            for (int b = 0; b < t.batches; ++b)
                batch.push_back(t.batch_bits[std::size_t(j) * t.batches + b] / (t.batch_ttis[b] * t.tti_s));
            a.ci95_halfwidth_bps = mean_ci95(batch).second;
            a.mean_rate_bps = rates.front();
        }
        a.scheduled_share = share / replications;
        out.terminals.push_back(a);
    }
    if (keep_traces)
        out.traces = std::move(traces);
    return out;
}

// ---- Scheduled-SINR histogram ----------------------------------------------------

struct Histogram {
    std::vector<double> edges;   // bins + 1
    std::vector<double> density; // integrates to 1 over the edges
};

inline const std::vector<double> &scheduled_sinr_samples(const SimTrace &trace, int j, int n)
{
    if (trace.scheduled_sinr.empty())
        throw DomainError("trace was recorded without scheduled SINR samples");
    return trace.scheduled_sinr.at(std::size_t(j) * trace.rbs + n);
}

inline Histogram scheduled_sinr_histogram(const SimTrace &trace, int j, int n, int bins)
{
    const auto &x = scheduled_sinr_samples(trace, j, n);
    if (x.size() < 100)
        throw InsufficientSamples("terminal " + std::to_string(j) + ", RB " + std::to_string(n) + ": " +
                                  std::to_string(x.size()) + " scheduled samples, need >= 100");
    if (bins < 1)
        throw DomainError("bins must be >= 1");
    const double hi = *std::max_element(x.begin(), x.end());
    Histogram h;
    const double width = hi / bins;
    for (int b = 0; b <= bins; ++b)
        h.edges.push_back(width * b);
    h.density.assign(bins, 0.0);
    for (double v : x)
        h.density[std::min(bins - 1, static_cast<int>(v / width))] += 1.0;
    for (double &d : h.density)
        d /= x.size() * width;
    return h;
}

// Two-sided Kolmogorov-Smirnov distance between a sample and a CDF.
template <class Cdf>
double ks_distance(std::vector<double> x, Cdf &&cdf)
{
    if (x.empty())
        throw InsufficientSamples("KS distance of an empty sample");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

} // namespace pfsa
