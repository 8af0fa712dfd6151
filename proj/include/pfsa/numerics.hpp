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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

namespace pfsa {

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 4000;

    void validate() const
    {
        if (!(rel_tol > 0.0) || !(abs_tol >= 0.0) || max_subdivisions < 1)
            throw DomainError("QuadratureSpec requires rel_tol > 0, abs_tol >= 0, max_subdivisions >= 1");
    }
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 constants).
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment &o) const { return error < o.error; }
};

template <class F>
double checked_eval(const F &f, double x)
{
    const double v = f(x);
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "integrand returned " << v << " at x = " << x;
        throw NonFinite(os.str());
    }
    return v;
}

template <class F>
Segment kronrod15(const F &f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = checked_eval(f, c);
    double k = fc * kronrod_weights[7];
    double g = fc * gauss_weights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kronrod_nodes[i];
        const double s = checked_eval(f, c - dx) + checked_eval(f, c + dx);
        k += kronrod_weights[i] * s;
        if (i % 2 == 1)
            g += gauss_weights[i / 2] * s;
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

} // namespace detail

// Fixed 15-point Kronrod rule on [a, b]. Used where an adaptive driver would be
// wasted, e.g. on the cells of a tabulated CDF.
template <class F>
double kronrod15(const F &f, double a, double b)
{
    return detail::kronrod15(f, a, b).value;
}

// Globally adaptive Gauss-Kronrod integration on a finite interval.
// The interval with the largest error estimate is bisected until the summed
// estimate falls below max(rel_tol * |I|, abs_tol).
template <class F>
double integrate(const F &f, double a, double b, const QuadratureSpec &spec = {})
{
    spec.validate();
    if (a == b)
        return 0.0;
    std::priority_queue<detail::Segment> heap;
    auto first = detail::kronrod15(f, a, b);
    double total = first.value;
    double err = first.error;
    heap.push(first);
    int subdivisions = 0;
    while (err > std::max(spec.rel_tol * std::abs(total), spec.abs_tol)) {
        if (subdivisions >= spec.max_subdivisions) {
            std::ostringstream os;
            os << "quadrature did not converge after " << subdivisions
               << " subdivisions (estimate " << total << ", error " << err << ")";
            throw NonConvergence(os.str());
        }
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval can no longer be split in double precision.
            throw NonConvergence("quadrature interval underflow near x = " + std::to_string(mid));
        }
        auto left = detail::kronrod15(f, worst.a, mid);
        auto right = detail::kronrod15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
        // Re-sum periodically; the incremental updates accumulate cancellation error.
        if (subdivisions % 64 == 0) {
            auto copy = heap;
            total = 0.0;
            err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    return total;
}

// Integral over [0, inf) via x = t / (1 - t), dx = dt / (1 - t)^2.
template <class F>
double integrate_semi_infinite(const F &f, const QuadratureSpec &spec = {})
{
    auto mapped = [&f](double t) {
        const double s = 1.0 - t;
        const double x = t / s;
        const double v = f(x);
        if (v == 0.0)
            return 0.0;
        return v / (s * s);
    };
    return integrate(mapped, 0.0, 1.0, spec);
}

// Same mapping with a length scale: x = scale * t / (1 - t). Puts the bulk of
// the integrand near t = 1/2 when it is concentrated around x ~ scale.
template <class F>
double integrate_semi_infinite(const F &f, double scale, const QuadratureSpec &spec)
{
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw DomainError("integration scale must be positive and finite");
    auto scaled = [&f, scale](double u) { return scale * f(scale * u); };
    return integrate_semi_infinite(scaled, spec);
}

// Integral over [0, inf) split at the given interior points (kinks or jumps of
// the integrand). The last piece is mapped with the supplied length scale.
template <class F>
double integrate_piecewise(const F &f, std::vector<double> breakpoints, double scale,
                           const QuadratureSpec &spec = {})
{
    std::sort(breakpoints.begin(), breakpoints.end());
    double total = 0.0;
    double lo = 0.0;
    for (double bp : breakpoints) {
        if (!(bp > lo) || !std::isfinite(bp))
            continue;
        total += integrate(f, lo, bp, spec);
        lo = bp;
    }
    auto tail = [&f, lo](double y) { return f(lo + y); };
    return total + integrate_semi_infinite(tail, scale, spec);
}

namespace detail {

// e^y E1(y) by modified Lentz evaluation of the continued fraction; y > 1.
inline double scaled_e1_cf(double y)
{
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    double b = y + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < eps)
            return h;
    }
    throw NonConvergence("E1 continued fraction did not converge");
}

inline double e1_series(double y)
{
    constexpr double eps = 1e-17;
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -y / k;
        const double add = term / k;
        sum += add;
        if (std::abs(add) < eps * std::abs(sum))
            break;
    }
    return -std::numbers::egamma - std::log(y) - sum;
}

} // namespace detail

// E1(y) for y > 0. Power series up to y = 1, continued fraction beyond.
inline double expint_e1(double y)
{
    if (!(y > 0.0))
        throw DomainError("E1 requires a positive argument");
    if (y <= 1.0)
        return detail::e1_series(y);
    return std::exp(-y) * detail::scaled_e1_cf(y);
}

// e^y E1(y) without overflow for large y.
inline double scaled_expint_e1(double y)
{
    if (!(y > 0.0))
        throw DomainError("E1 requires a positive argument");
    if (y <= 1.0)
        return std::exp(y) * detail::e1_series(y);
    return detail::scaled_e1_cf(y);
}

// Ei(x) restricted to x < 0, where Ei(x) = -E1(-x).
inline double exp_integral_ei(double x)
{
    if (!(x < 0.0))
        throw DomainError("Ei is only provided for negative arguments");
    if (std::isinf(x))
        return -0.0;
    return -expint_e1(-x);
}

inline double normal_pdf(double x)
{
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

} // namespace pfsa
