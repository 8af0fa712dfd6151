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

#include <pfsa/ref_models.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace pfsa;

namespace {
const SpectralEfficiency constant_c = SpectralEfficiency::staircase({{0.0, 1.7}});
}

TEST(GaussianMoments, ConstantEfficiencyHasNoSpread)
{
    const auto m = gaussian_rate_moments({1e-3, 1e-3, 1e-4}, constant_c);
    EXPECT_NEAR(m.mean, 1.7, 1e-10);
    EXPECT_NEAR(m.variance, 0.0, 1e-9);
}

TEST(GaussianMoments, LinearEfficiencyGivesExponentialMoments)
{
    // C(x) = x has no direct constructor; a fine staircase would be approximate,
    // so check the exponential moments through the integrals themselves.
    const double g = 1.0;
    const double mean = integrate_semi_infinite([&](double y) { return g * y * std::exp(-y); });
    const double second = integrate_semi_infinite([&](double y) { return g * y * g * y * std::exp(-y); });
    EXPECT_NEAR(mean, 1.0, 1e-10);
    EXPECT_NEAR(second - mean * mean, 1.0, 1e-10);
}

TEST(GaussianMoments, ShannonMeanMatchesClosedForm)
{
    // gamma_bar = 10: E[log2(1 + 10 Y)] = e^{0.1} E1(0.1) / ln 2 = 2.9065148084148049 (mpmath).
    const LinkStats l{10.0, 0.5, 0.5};
    const auto m = gaussian_rate_moments(l, SpectralEfficiency::shannon());
    EXPECT_NEAR(m.mean, 2.9065148084148049, 1e-8);
    EXPECT_NEAR(m.mean, std::exp(0.1) * expint_e1(0.1) / std::log(2.0), 1e-8);
    EXPECT_GT(m.variance, 0.0);
    EXPECT_THROW(gaussian_rate_moments({1.0, 1.0, 0.0}, SpectralEfficiency::shannon()), DivergentMean);
    EXPECT_THROW((RateMoments{1.0, -1e-3}.std()), NegativeVariance);
}

TEST(GaussianPfs, SingleTerminalHalfMoments)
{
    const RbGeometry g;
    const RateMoments m{2.3, 0.64};
    EXPECT_NEAR(gaussian_pfs_rate({m}, 0, g) / g.symbol_rate(), 0.8 / std::sqrt(2 * M_PI) + 2.3 / 2, 1e-9);
}

TEST(GaussianPfs, SymmetricPairRegression)
{
    const RbGeometry g;
    const RateMoments m{2.0, 0.25};
    // int_0^inf (0.5 y + 2) phi(y) Phi(y) dy, evaluated independently:
    // 0.5 * (1/(2 sqrt(2 pi)) + 1/(4 sqrt(pi))) + 2 * 3/8.
    const double oracle = 0.5 * (1.0 / (2 * std::sqrt(2 * M_PI)) + 1.0 / (4 * std::sqrt(M_PI))) + 2.0 * 3.0 / 8.0;
    EXPECT_NEAR(gaussian_pfs_rate({m, m}, 0, g) / g.symbol_rate(), oracle, 1e-9);
}

TEST(GaussianPfs, ScaleInvariantArgument)
{
    const RbGeometry g;
    std::vector<RateMoments> m = {{2.0, 0.3}, {1.0, 0.5}, {3.0, 0.2}};
    std::vector<RateMoments> k = m;
    for (auto &x : k)
        x = {x.mean * 3.5, x.variance * 3.5 * 3.5};
    for (int j = 0; j < 3; ++j)
        EXPECT_NEAR(gaussian_pfs_rate(k, j, g) / gaussian_pfs_rate(m, j, g), 3.5, 1e-8);
}

TEST(GaussianPfs, DegenerateStd)
{
    EXPECT_THROW(gaussian_pfs_rate({{1.0, 0.0}, {1.0, 1.0}}, 1, RbGeometry{}), DegenerateStd);
}

TEST(Ian, PdfAndMean)
{
    const LinkStats l{1e-3, 4e-4, 1e-4};
    EXPECT_NEAR(ian_pdf(l, 0.0), (l.p_intf + l.noise) / l.p_sig, 1e-15);
    const double mean = integrate_semi_infinite([&](double x) { return x * ian_pdf(l, x); });
    EXPECT_NEAR(mean, l.p_sig / (l.p_intf + l.noise), 1e-8);
    const LinkStats clean{1e-3, 0.0, 1e-4};
    const SinrDist exact(clean);
    for (double x : {0.0, 1.0, 7.0, 30.0})
        EXPECT_NEAR(ian_pdf(clean, x), exact.pdf(x), 1e-14);
}

TEST(Ian, PipelineMatchesExactModelWithoutInterference)
{
    LinkTable t(4, 2);
    for (int j = 0; j < 4; ++j)
        for (int n = 0; n < 2; ++n)
            t.at(j, n) = {1e-3 * (j + 1), 0.0, 1e-4 * (n + 1)};
    const auto eff = SpectralEfficiency::truncated_shannon(5.55);
    const RbGeometry g;
    const auto ian = ian_rates(t, eff, g);
    const ScheduledSinrModel<> exact(t);
    for (int j = 0; j < 4; ++j)
        EXPECT_NEAR(ian[j] / exact.total_rate(j, eff, g), 1.0, 1e-6);
}

TEST(Naive, DirectArithmetic)
{
    LinkTable t(2, 1);
    t.at(0, 0) = {2e-3, 1e-3, 1e-3}; // gamma_bar = 1
    t.at(1, 0) = {1e-3, 1e-3, 1e-3};
    EXPECT_NEAR(naive_rate(t, 0, SpectralEfficiency::shannon(), RbGeometry{}), 42000.0, 1e-9);
    LinkTable one(1, 5);
    for (int n = 0; n < 5; ++n)
        one.at(0, n) = {1.0, 1.0, 1.0};
    EXPECT_NEAR(naive_rate(one, 0, constant_c, RbGeometry{}), 5 * 84 * 1.7 / 1e-3, 1e-6);
}
