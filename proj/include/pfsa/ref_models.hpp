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
#include <pfsa/scenario.hpp>

#include <cmath>
#include <limits>
#include <vector>

namespace pfsa {

enum class ReferenceModelKind { Gaussian, IaN, Naive };

class NegativeVariance : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// P_s / (P_i + eta): interference folded into the noise.
inline double mean_power_sinr(const LinkStats &l) { return l.p_sig / (l.p_intf + l.noise); }

// ---- Gaussian rate model ----------------------------------------------------

struct RateMoments {
    double mean = 0.0;     // bits/symbol
    double variance = 0.0; // raw; may be slightly negative after cancellation

    double std() const
    {
        if (variance < 0.0)
            throw NegativeVariance("rate variance " + std::to_string(variance) + " < 0");
        return std::sqrt(variance);
    }
};

// Moments of C(gamma_bar Y) with Y ~ Exp(1).
inline RateMoments gaussian_rate_moments(const LinkStats &link, const SpectralEfficiency &eff,
                                         const QuadratureSpec &spec = {})
{
    if (!(link.noise > 0.0))
        throw DivergentMean("Gaussian rate moments need noise > 0");
    const double g = mean_power_sinr(link);
    std::vector<double> bps;
    for (double b : eff.breakpoints())
        bps.push_back(b / g);
    auto m1 = [&](double y) { return eff(g * y) * std::exp(-y); };
    auto m2 = [&](double y) {
        const double c = eff(g * y);
        return c * c * std::exp(-y);
    };
    const double mean = integrate_piecewise(m1, bps, 1.0, spec);
    const double second = integrate_piecewise(m2, bps, 1.0, spec);
    return {mean, second - mean * mean};
}

// Expected rate of terminal j on one RB when every terminal's per-RB rate is
// Gaussian with the given moments and the larger normalized rate wins:
//   (R S / T) int_0^inf (y s_j + m_j) phi(y) prod_{i != j} Phi(m_i s_j / (m_j s_i) y) dy.
// The product runs over the other terminals and the integral over [0, inf).
inline double gaussian_pfs_rate(const std::vector<RateMoments> &moments, int j, const RbGeometry &geometry,
                                const QuadratureSpec &spec = {})
{
    if (j < 0 || j >= static_cast<int>(moments.size()))
        throw DomainError("terminal index out of range");
    std::vector<double> sd;
    for (const auto &m : moments) {
        const double s = m.std();
        if (!(s > 0.0))
            throw DegenerateStd("Gaussian reference model needs every rate standard deviation > 0");
        sd.push_back(s);
    }
    const double mj = moments[j].mean;
    const double sj = sd[j];
    std::vector<double> slope;
    for (std::size_t i = 0; i < moments.size(); ++i)
        if (static_cast<int>(i) != j)
            slope.push_back(moments[i].mean * sj / (mj * sd[i]));
    auto f = [&](double y) {
        double v = (y * sj + mj) * normal_pdf(y);
        for (double k : slope)
            v *= normal_cdf(k * y);
        return v;
    };
    return geometry.symbol_rate() * integrate_semi_infinite(f, spec);
}

// Gaussian-model total rate of every terminal over the link table.
inline std::vector<double> gaussian_rates(const LinkTable &links, const SpectralEfficiency &eff,
                                          const RbGeometry &geometry, const QuadratureSpec &spec = {})
{
    std::vector<double> out(links.terminals(), 0.0);
    for (int n = 0; n < links.rbs(); ++n) {
        std::vector<RateMoments> m;
        for (int j = 0; j < links.terminals(); ++j)
            m.push_back(gaussian_rate_moments(links.at(j, n), eff, spec));
        for (int j = 0; j < links.terminals(); ++j)
            out[j] += gaussian_pfs_rate(m, j, geometry, spec);
    }
    return out;
}

// ---- Interference as noise ---------------------------------------------------

// Exponential SINR with rate lambda = (P_i + eta) / P_s.
class ExponentialSinrDist {
public:
    explicit ExponentialSinrDist(const LinkStats &link, const QuadratureSpec & = {})
    {
        link.validate();
        lambda_ = (link.p_intf + link.noise) / link.p_sig;
        if (!(lambda_ > 0.0))
            throw DivergentMean("interference-as-noise SINR needs P_i + eta > 0");
    }

    double rate() const noexcept { return lambda_; }
    double pdf(double x) const { return check(x), lambda_ * std::exp(-lambda_ * x); }
    double ccdf(double x) const { return check(x), std::exp(-lambda_ * x); }
    double cdf(double x) const { return check(x), -std::expm1(-lambda_ * x); }
    double log_cdf(double x) const
    {
        check(x);
        if (x == 0.0)
            return -std::numeric_limits<double>::infinity();
        const double c = std::exp(-lambda_ * x);
        return c < 0.5 ? std::log1p(-c) : std::log(-std::expm1(-lambda_ * x));
    }
    double mean() const { return 1.0 / lambda_; }

private:
    static void check(double x)
    {
        if (!(x >= 0.0))
            throw DomainError("SINR argument must be >= 0");
    }
    double lambda_;
};

static_assert(SinrDistribution<ExponentialSinrDist>);

inline double ian_pdf(const LinkStats &link, double x) { return ExponentialSinrDist(link).pdf(x); }

// Interference-as-noise laws pushed through the scheduled-SINR model.
inline std::vector<double> ian_rates(const LinkTable &links, const SpectralEfficiency &eff, const RbGeometry &geometry,
                                     const QuadratureSpec &spec = {}, int threads = 1)
{
    const ScheduledSinrModel<ExponentialSinrDist> model(links, SchedulerMetric::ProportionalFair, spec, threads);
    std::vector<double> out(links.terminals());
    for (int j = 0; j < links.terminals(); ++j)
        out[j] = model.total_rate(j, eff, geometry);
    return out;
}

// ---- Naive --------------------------------------------------------------------

// Mean-power SINR, RBs split evenly among J terminals.
inline double naive_rate(const LinkTable &links, int j, const SpectralEfficiency &eff, const RbGeometry &geometry)
{
    const int J = links.terminals();
    if (J < 1)
        throw DomainError("naive rate needs J >= 1");
    double sum = 0.0;
    for (int n = 0; n < links.rbs(); ++n)
        sum += eff(mean_power_sinr(links.at(j, n)));
    return geometry.symbol_rate() / J * sum;
}

} // namespace pfsa
