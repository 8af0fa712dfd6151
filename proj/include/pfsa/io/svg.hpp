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

#include <pfsa/io/scenario_file.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace pfsa::io {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

namespace detail {

inline std::string escape_xml(const std::string &s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string fixed(double v, int digits = 2)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string tick_label(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace detail

// Plain SVG line chart with axes, four ticks per axis and a legend.
inline std::string render_svg(const Chart &c)
{
    using detail::fixed;
    constexpr double width = 720, height = 440, left = 80, right = 180, top = 40, bottom = 60;
    static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
                                    "#7f7f7f"};
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = 0.0, y1 = -x0;
    for (const auto &s : c.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (!std::isfinite(x0)) {
        x0 = 0;
        x1 = 1;
    }
    if (x1 <= x0)
        x1 = x0 + 1;
    if (!(y1 > y0))
        y1 = y0 + 1;
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << detail::escape_xml(c.title) << "</text>\n"
      << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
        o << "<line x1=\"" << fixed(px(xv)) << "\" y1=\"" << top + ph << "\" x2=\"" << fixed(px(xv)) << "\" y2=\""
          << top + ph + 5 << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
          << detail::tick_label(xv) << "</text>\n"
          << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(py(yv)) << "\" x2=\"" << left << "\" y2=\""
          << fixed(py(yv)) << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << left - 8 << "\" y=\"" << fixed(py(yv) + 4) << "\" text-anchor=\"end\">"
          << detail::tick_label(yv) << "</text>\n";
    }
    o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
      << detail::escape_xml(c.x_label) << "</text>\n"
      << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << top + ph / 2 << ")\">" << detail::escape_xml(c.y_label) << "</text>\n";
    for (std::size_t k = 0; k < c.series.size(); ++k) {
        const auto &s = c.series[k];
        const char *colour = palette[k % 8];
        o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                continue;
            o << (first ? "" : " ") << fixed(px(s.x[i])) << "," << fixed(py(s.y[i]));
            first = false;
        }
        o << "\"/>\n";
        const double ly = top + 10 + 18 * k;
        o << "<line x1=\"" << width - right + 12 << "\" y1=\"" << ly << "\" x2=\"" << width - right + 36
          << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n"
          << "<text x=\"" << width - right + 42 << "\" y=\"" << ly + 4 << "\">" << detail::escape_xml(s.name)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

} // namespace pfsa::io
