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

#include <cmath>
#include <concepts>
#include <limits>

namespace pfsa {

// What the scheduled-SINR machinery needs from a per-link SINR law.
template <class D>
concept SinrDistribution = requires(const D &d, double x) {
    { d.pdf(x) } -> std::convertible_to<double>;
    { d.cdf(x) } -> std::convertible_to<double>;
    { d.log_cdf(x) } -> std::convertible_to<double>;
    { d.ccdf(x) } -> std::convertible_to<double>;
    { d.mean() } -> std::convertible_to<double>;
};

// SINR of a Rayleigh-faded signal against one Rayleigh-faded dominant
// interferer plus noise:
//   X = P_s G_s / (P_i G_i + eta),  G_s, G_i ~ Exp(1).
// Internally everything is expressed through a = P_i / P_s and b = eta / P_s,
// which makes the law independent of the absolute power scale.
class SinrDist {
public:
    explicit SinrDist(const LinkStats &link, const QuadratureSpec &spec = {}) : link_(link)
    {
        link.validate();
        a_ = link.p_intf / link.p_sig;
        b_ = link.noise / link.p_sig;
        if (b_ > 0.0)
            mean_ = quadrature_mean(spec);
    }

    const LinkStats &link() const noexcept { return link_; }
    double interference_ratio() const noexcept { return a_; }
    double noise_ratio() const noexcept { return b_; }

    double pdf(double x) const
    {
        check(x);
        const double u = 1.0 / (1.0 + a_ * x);
        return (b_ * u + a_ * u * u) * std::exp(-b_ * x);
    }

    // 1 - F(x) = exp(-b x) / (1 + a x)
    double ccdf(double x) const
    {
        check(x);
        return std::exp(-b_ * x) / (1.0 + a_ * x);
    }

    double cdf(double x) const
    {
        check(x);
        // (1 + a x - e^{-b x}) / (1 + a x), written to keep digits near x = 0.
        return (a_ * x - std::expm1(-b_ * x)) / (1.0 + a_ * x);
    }

    double log_cdf(double x) const
    {
        check(x);
        if (x == 0.0)
            return -std::numeric_limits<double>::infinity();
        const double c = std::exp(-b_ * x) / (1.0 + a_ * x);
        if (c < 0.5)
            return std::log1p(-c);
        return std::log(a_ * x - std::expm1(-b_ * x)) - std::log1p(a_ * x);
    }

    // E[X], from quadrature of x f(x).
    double mean() const
    {
        if (!(b_ > 0.0))
            throw DivergentMean("E[X] diverges for zero noise power");
        return mean_;
    }

    // E[X] = (P_s / P_i) e^{eta / P_i} E1(eta / P_i): the exponential-integral
    // antiderivative evaluated between 0 and infinity.
    double closed_form_mean() const
    {
        if (!(b_ > 0.0))
            throw DivergentMean("E[X] diverges for zero noise power");
        if (!(a_ > 0.0))
            throw DomainError("closed-form mean divides by the interference power");
        return scaled_expint_e1(b_ / a_) / a_;
    }

    // The exponential-integral antiderivative G(x) of x f(x), written with a
    // free x. E[X] = G(inf) - G(0) = -G(0); evaluating G at a single point
    // (as a bare expression for the mean would) gives the wrong answer.
    double antiderivative(double x) const
    {
        check(x);
        if (!(a_ > 0.0) || !(b_ > 0.0))
            throw DomainError("antiderivative requires positive interference and noise");
        if (std::isinf(x))
            return 0.0;
        const double ei_term = -std::exp(-b_ * x) * scaled_expint_e1(b_ * x + b_ / a_) / a_;
        const double rest = (1.0 / (a_ * (1.0 + a_ * x)) - 1.0 / a_) * std::exp(-b_ * x);
        return ei_term + rest;
    }

    // Law of X / E[X].
    double scaled_pdf(double z) const { return mean() * pdf(mean() * z); }
    double scaled_cdf(double z) const { return cdf(mean() * z); }
    double scaled_log_cdf(double z) const { return log_cdf(mean() * z); }

private:
    static void check(double x)
    {
        if (!(x >= 0.0))
            throw DomainError("SINR argument must be >= 0");
    }

    double quadrature_mean(const QuadratureSpec &spec) const
    {
        // Mass sits around x ~ 1/(a + b); scale the map accordingly.
        const double scale = 1.0 / (a_ + b_);
        return integrate_semi_infinite([this](double x) { return x * pdf(x); }, scale, spec);
    }

    LinkStats link_;
    double a_ = 0.0;
    double b_ = 0.0;
    double mean_ = std::numeric_limits<double>::quiet_NaN();
};

static_assert(SinrDistribution<SinrDist>);

} // namespace pfsa
