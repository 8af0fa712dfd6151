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
#include <pfsa/pfs_analytic.hpp>
#include <pfsa/rng.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace pfsa {

// Per-RB conditional (scheduled) SINR laws of one terminal. `rb_class` groups
// RBs with identical laws; `scale` is a typical SINR magnitude for quadrature.
template <class L>
concept ConditionalLaws = requires(const L &l, int n, double x) {
    { l.rbs() } -> std::convertible_to<int>;
    { l.pdf(n, x) } -> std::convertible_to<double>;
    { l.cdf(n, x) } -> std::convertible_to<double>;
    { l.rb_class(n) } -> std::convertible_to<int>;
    { l.scale(n) } -> std::convertible_to<double>;
};

// Scheduled-SINR laws of terminal j taken from a ScheduledSinrModel.
template <SinrDistribution D>
class ScheduledLaws {
public:
    ScheduledLaws(const ScheduledSinrModel<D> &model, int terminal) : model_(&model), j_(terminal)
    {
        if (terminal < 0 || terminal >= model.terminals())
            throw DomainError("terminal index out of range");
    }
    int rbs() const { return model_->rbs(); }
    double pdf(int n, double x) const { return model_->scheduled_pdf(j_, n, x); }
    double cdf(int n, double x) const { return model_->scheduled_cdf(j_, n, x); }
    int rb_class(int n) const { return model_->rb_class(n); }
    double scale(int n) const { return model_->contest(n).mean(j_); }
    double probability(int n) const { return model_->scheduling_probability(j_, n); }

private:
    const ScheduledSinrModel<D> *model_;
    int j_;
};

using RbSubset = std::vector<int>;

enum class AssignmentStrategy { ExactEnumeration, MonteCarloAssignments };

inline constexpr int max_exact_enumeration_rbs = 16;

// Independent per-RB scheduling indicators of one terminal.
struct AssignmentDist {
    std::vector<double> probs;
    AssignmentStrategy strategy = AssignmentStrategy::MonteCarloAssignments;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;

    void validate() const
    {
        for (double p : probs)
            if (!(p >= 0.0 && p <= 1.0))
                throw DomainError("assignment probabilities must lie in [0, 1]");
        if (strategy == AssignmentStrategy::ExactEnumeration && probs.size() > max_exact_enumeration_rbs)
            throw EnumerationTooLarge("exact enumeration is limited to " + std::to_string(max_exact_enumeration_rbs) +
                                      " RBs, got " + std::to_string(probs.size()));
        if (strategy == AssignmentStrategy::MonteCarloAssignments && samples == 0)
            throw DomainError("Monte-Carlo assignment sampling needs at least one sample");
    }
};

// P(the assigned set is exactly A) = prod_{n in A} p_n prod_{n not in A} (1 - p_n).
inline double assignment_probability(const AssignmentDist &a, const RbSubset &subset)
{
    std::vector<char> in(a.probs.size(), 0);
    for (int n : subset) {
        if (n < 0 || n >= static_cast<int>(a.probs.size()))
            throw DomainError("RB index outside the assignment distribution");
        in[n] = 1;
    }
    double p = 1.0;
    for (std::size_t n = 0; n < a.probs.size(); ++n)
        p *= in[n] ? a.probs[n] : 1.0 - a.probs[n];
    return p;
}

template <ConditionalLaws L>
double min_order_cdf(const L &laws, const RbSubset &subset, double x)
{
    if (subset.empty())
        throw EmptySubset("minimum over an empty RB set");
    double survive = 1.0;
    for (int n : subset)
        survive *= 1.0 - laws.cdf(n, x);
    return 1.0 - survive;
}

template <ConditionalLaws L>
double min_order_pdf(const L &laws, const RbSubset &subset, double x)
{
    if (subset.empty())
        throw EmptySubset("minimum over an empty RB set");
    std::vector<double> surv(subset.size());
    for (std::size_t k = 0; k < subset.size(); ++k)
        surv[k] = 1.0 - laws.cdf(subset[k], x);
    double total = 0.0;
    for (std::size_t k = 0; k < subset.size(); ++k) {
        double term = laws.pdf(subset[k], x);
        if (term == 0.0)
            continue;
        for (std::size_t m = 0; m < subset.size(); ++m)
            if (m != k)
                term *= surv[m];
        total += term;
    }
    return total;
}

struct UniformRateEstimate {
    double rate_bps = 0.0;
    double std_error_bps = 0.0; // zero for exact enumeration
};

// Worst-RB uniform MCS rate prediction for one terminal. Integrals over the
// minimum depend on A only through how many RBs of each class it contains,
// so they are cached under that key.
template <ConditionalLaws L>
class UniformMcsEvaluator {
public:
    UniformMcsEvaluator(const L &laws, SpectralEfficiency eff, RbGeometry geometry, QuadratureSpec spec = {})
        : laws_(&laws), eff_(std::move(eff)), geometry_(geometry), spec_(spec)
    {
        for (int n = 0; n < laws.rbs(); ++n)
            classes_ = std::max(classes_, laws.rb_class(n) + 1);
    }

    // E[C(min_{n in A} X_n) | M_A = 1] in bits/symbol.
    double min_efficiency(const RbSubset &subset) const
    {
        if (subset.empty())
            throw EmptySubset("rate of an empty assignment");
        std::vector<int> key(classes_, 0);
        for (int n : subset)
            ++key[laws_->rb_class(n)];
        if (auto it = cache_.find(key); it != cache_.end())
            return it->second;
        // One representative RB per class, repeated by its count.
        RbSubset canon;
        for (int c = 0; c < classes_; ++c) {
            if (key[c] == 0)
                continue;
            const int rep = representative(c);
            canon.insert(canon.end(), key[c], rep);
        }
        double scale = std::numeric_limits<double>::infinity();
        for (int n : canon)
            scale = std::min(scale, laws_->scale(n));
        auto g = [&](double x) {
            const double f = min_order_pdf(*laws_, canon, x);
            return f == 0.0 ? 0.0 : f * eff_(x);
        };
        const double v = integrate_piecewise(g, eff_.breakpoints(), scale, spec_);
        cache_.emplace(std::move(key), v);
        return v;
    }

    // E[C(X_n) | M_n = 1], the independent-MCS efficiency of RB n.
    double rb_efficiency(int n) const { return min_efficiency({n}); }

    // R_{j,A} = P_A |A| (R S / T) E[C(min X) | M_A = 1].
    double rate_for_assignment(const AssignmentDist &a, const RbSubset &subset) const
    {
        return assignment_probability(a, subset) * static_cast<double>(subset.size()) * geometry_.symbol_rate() *
               min_efficiency(subset);
    }

    // Sum of R_{j,A} over all nonempty A.
    UniformRateEstimate total_rate(const AssignmentDist &a) const
    {
        a.validate();
        if (static_cast<int>(a.probs.size()) != laws_->rbs())
            throw DomainError("assignment distribution and laws disagree on the RB count");
        return a.strategy == AssignmentStrategy::ExactEnumeration ? exact(a) : sampled(a);
    }

    // Sum_n p_n E[C(X_n) | M_n = 1] R S / T: the independent-MCS total rate.
    double independent_rate(const AssignmentDist &a) const
    {
        double s = 0.0;
        for (int n = 0; n < laws_->rbs(); ++n)
            if (a.probs[n] > 0.0)
                s += a.probs[n] * rb_efficiency(n);
        return s * geometry_.symbol_rate();
    }

private:
    int representative(int cls) const
    {
        for (int n = 0; n < laws_->rbs(); ++n)
            if (laws_->rb_class(n) == cls)
                return n;
        throw DomainError("empty RB class");
    }

    UniformRateEstimate exact(const AssignmentDist &a) const
    {
        const int n_rbs = static_cast<int>(a.probs.size());
        double total = 0.0;
        RbSubset subset;
        for (std::uint32_t mask = 1; mask < (1u << n_rbs); ++mask) {
            subset.clear();
            for (int n = 0; n < n_rbs; ++n)
                if (mask & (1u << n))
                    subset.push_back(n);
            const double p = assignment_probability(a, subset);
            if (p == 0.0)
                continue;
            total += p * static_cast<double>(subset.size()) * min_efficiency(subset);
        }
        return {total * geometry_.symbol_rate(), 0.0};
    }

    // Draws A with independent Bernoulli(p_n) indicators and averages the
    // per-draw loss D(A) = sum_{n in A} E[C(X_n)|M] - |A| E[C(min X)|M] >= 0.
    // Since E[sum_{n in A} E[C(X_n)|M]] is the independent-MCS sum exactly,
    // independent - E[D] is an unbiased estimate of the uniform-MCS sum.
    UniformRateEstimate sampled(const AssignmentDist &a) const
    {
        const int n_rbs = static_cast<int>(a.probs.size());
        std::vector<double> per_rb(n_rbs, 0.0);
        for (int n = 0; n < n_rbs; ++n)
            if (a.probs[n] > 0.0)
                per_rb[n] = rb_efficiency(n);
        double independent = 0.0;
        for (int n = 0; n < n_rbs; ++n)
            independent += a.probs[n] * per_rb[n];

        double sum = 0.0, sum_sq = 0.0;
        RbSubset subset;
        for (std::size_t draw = 0; draw < a.samples; ++draw) {
            Rng rng(derive_seed(a.seed, draw));
            subset.clear();
            double indep_part = 0.0;
            for (int n = 0; n < n_rbs; ++n)
                if (rng.bernoulli(a.probs[n])) {
                    subset.push_back(n);
                    indep_part += per_rb[n];
                }
            double loss = 0.0;
            if (subset.size() > 1)
                loss = std::max(0.0, indep_part - static_cast<double>(subset.size()) * min_efficiency(subset));
            sum += loss;
            sum_sq += loss * loss;
        }
        const double n = static_cast<double>(a.samples);
        const double mean = sum / n;
        const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
        const double k = geometry_.symbol_rate();
        return {k * (independent - mean), k * std::sqrt(var / n)};
    }

    const L *laws_;
    SpectralEfficiency eff_;
    RbGeometry geometry_;
    QuadratureSpec spec_;
    int classes_ = 0;
    mutable std::map<std::vector<int>, double> cache_;
};

} // namespace pfsa
