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

#include <pfsa/rng.hpp>
#include <pfsa/sinr_dist.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace pfsa;

namespace {

std::vector<LinkStats> property_grid()
{
    std::vector<LinkStats> grid;
    for (double sig_over_intf : {0.1, 1.0, 10.0, 100.0})
        for (double noise_over_sig : {1e-4, 1e-2, 1.0})
            grid.push_back({1.0, 1.0 / sig_over_intf, noise_over_sig});
    return grid;
}

// Dense log-graded trapezoid, independent of the adaptive driver.
template <class F>
double dense_grid(const F &f, double x_max)
{
    const double u0 = -40.0, u1 = std::log(x_max), h = 1e-4;
    const int n = static_cast<int>((u1 - u0) / h);
    const double step = (u1 - u0) / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = std::exp(u0 + i * step);
        s += ((i == 0 || i == n) ? 0.5 : 1.0) * f(x) * x;
    }
    return s * step;
}

} // namespace

TEST(SinrDist, PdfAtZero)
{
    const LinkStats l{2e-3, 5e-4, 1e-4};
    const SinrDist d(l);
    EXPECT_NEAR(d.pdf(0.0), l.noise / l.p_sig + l.p_intf / l.p_sig, 1e-15);
}

TEST(SinrDist, InterferenceFreeLimitIsExponential)
{
    const LinkStats l{1e-3, 0.0, 1e-4};
    const SinrDist d(l);
    for (double x : {0.0, 0.3, 2.0, 17.0})
        EXPECT_NEAR(d.pdf(x) * std::exp(l.noise / l.p_sig * x), l.noise / l.p_sig, 1e-12);
    EXPECT_NEAR(d.mean() / (l.p_sig / l.noise), 1.0, 1e-8);
}

TEST(SinrDist, CdfEndpointsAndConsistency)
{
    const SinrDist d({1e-3, 1e-3, 1e-4});
    EXPECT_EQ(d.cdf(0.0), 0.0);
    EXPECT_NEAR(d.cdf(1e9), 1.0, 1e-12);
    const double q = integrate([&](double x) { return d.pdf(x); }, 0.5, 2.0);
    EXPECT_NEAR(d.cdf(2.0) - d.cdf(0.5), q, 1e-8);
    EXPECT_NEAR(std::exp(d.log_cdf(0.7)), d.cdf(0.7), 1e-14);
    EXPECT_NEAR(std::exp(d.log_cdf(1e3)), d.cdf(1e3), 1e-14);
    EXPECT_NEAR(d.cdf(3.0) + d.ccdf(3.0), 1.0, 1e-15);
    EXPECT_THROW(d.cdf(-1.0), DomainError);
    EXPECT_THROW(d.pdf(-1e-9), DomainError);
}

TEST(SinrDist, MeanRegression)
{
    // P_s = P_i = 1 mW, eta = 0.1 mW: e^{0.1} E1(0.1) = 2.0146425447084516 (mpmath).
    const SinrDist d({1e-3, 1e-3, 1e-4});
    const double oracle = dense_grid([&](double x) { return x * d.pdf(x); }, 1e5);
    EXPECT_NEAR(oracle, 2.0146425447084516, 1e-6);
    EXPECT_NEAR(d.mean(), 2.0146425447084516, 1e-7);
    EXPECT_NEAR(d.closed_form_mean(), d.mean(), 1e-8);
}

TEST(SinrDist, ZeroNoiseMeanDiverges)
{
    const SinrDist d({1e-3, 1e-3, 0.0});
    EXPECT_THROW(d.mean(), DivergentMean);
    EXPECT_THROW(d.scaled_pdf(1.0), DivergentMean);
    EXPECT_NO_THROW(d.cdf(1.0));
}

TEST(SinrDist, ClosedFormNeedsInterference)
{
    const SinrDist d({1e-3, 0.0, 1e-4});
    EXPECT_THROW(d.closed_form_mean(), DomainError);
}

TEST(SinrDist, AntiderivativeBoundsGiveMean)
{
    for (const auto &l : property_grid()) {
        const SinrDist d(l);
        EXPECT_NEAR(-d.antiderivative(0.0) / d.mean(), 1.0, 1e-7);
        // dG/dx = x f(x)
        const double x = 1.3, h = 1e-5;
        const double fd = (d.antiderivative(x + h) - d.antiderivative(x - h)) / (2 * h);
        EXPECT_NEAR(fd, x * d.pdf(x), 1e-5 * std::max(1.0, x * d.pdf(x)));
    }
}

TEST(SinrDist, NormalizationAndScaledMomentsOnGrid)
{
    for (const auto &l : property_grid()) {
        const SinrDist d(l);
        const double m = d.mean();
        EXPECT_NEAR(integrate_semi_infinite([&](double x) { return d.pdf(x); }, m, {}), 1.0, 1e-6);
        EXPECT_NEAR(integrate_semi_infinite([&](double z) { return d.scaled_pdf(z); }), 1.0, 1e-6);
        EXPECT_NEAR(integrate_semi_infinite([&](double z) { return z * d.scaled_pdf(z); }), 1.0, 1e-6);
        EXPECT_NEAR(d.closed_form_mean() / m, 1.0, 1e-7);
        for (double z : {0.1, 1.0, 10.0})
            EXPECT_EQ(d.scaled_cdf(z), d.cdf(m * z));
    }
}

TEST(SinrDist, StochasticDominanceInSignalPower)
{
    for (const auto &l : property_grid()) {
        const SinrDist lo(l);
        const SinrDist hi({l.p_sig * 1.5, l.p_intf, l.noise});
        for (double x = 0.01; x < 1e4; x *= 1.9) {
            EXPECT_LE(hi.cdf(x), lo.cdf(x)) << "x = " << x;
            if (lo.ccdf(x) > 1e-300) {
                EXPECT_GT(hi.ccdf(x), lo.ccdf(x)) << "x = " << x;
            }
        }
    }
}

TEST(SinrDist, MonteCarloKolmogorovSmirnov)
{
    const LinkStats l{1.0, 0.5, 0.05};
    const SinrDist d(l);
    Rng rng(20240611);
    const int n = 1'000'000;
    std::vector<double> x(n);
    for (auto &v : x)
        v = l.p_sig * rng.exponential() / (l.p_intf * rng.exponential() + l.noise);
    std::sort(x.begin(), x.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = d.cdf(x[i]);
        ks = std::max({ks, std::abs(f - double(i) / n), std::abs(f - double(i + 1) / n)});
    }
    EXPECT_LT(ks, 0.01);
}
