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
#include <cmath>
#include <limits>
#include <vector>

namespace pfsa {

struct StaircaseStep {
    double sinr;            // linear SINR threshold
    double bits_per_symbol; // efficiency from this threshold upward
};

// C(gamma): SINR -> bits per symbol.
class SpectralEfficiency {
public:
    enum class Kind { Shannon, TruncatedShannon, Staircase };

    static SpectralEfficiency shannon() { return SpectralEfficiency(Kind::Shannon); }

    static SpectralEfficiency truncated_shannon(double cap)
    {
        if (!(cap > 0.0))
            throw DomainError("truncated Shannon cap must be positive");
        SpectralEfficiency e(Kind::TruncatedShannon);
        e.cap_ = cap;
        return e;
    }

    // Steps must be strictly increasing in both SINR and efficiency.
    static SpectralEfficiency staircase(std::vector<StaircaseStep> steps)
    {
        if (steps.empty())
            throw DomainError("staircase table is empty");
        for (std::size_t i = 0; i < steps.size(); ++i) {
            if (!(steps[i].sinr >= 0.0) || !(steps[i].bits_per_symbol >= 0.0))
                throw DomainError("staircase entries must be non-negative");
            if (i > 0 && !(steps[i].sinr > steps[i - 1].sinr &&
                           steps[i].bits_per_symbol > steps[i - 1].bits_per_symbol))
                throw DomainError("staircase thresholds must be strictly increasing");
        }
        SpectralEfficiency e(Kind::Staircase);
        e.steps_ = std::move(steps);
        return e;
    }

    Kind kind() const noexcept { return kind_; }
    double cap() const noexcept { return cap_; }
    const std::vector<StaircaseStep> &steps() const noexcept { return steps_; }

    double operator()(double gamma) const
    {
        if (!(gamma >= 0.0))
            throw DomainError("spectral efficiency requires gamma >= 0");
        switch (kind_) {
        case Kind::Shannon:
            return std::log2(1.0 + gamma);
        case Kind::TruncatedShannon:
            return std::min(std::log2(1.0 + gamma), cap_);
        case Kind::Staircase: {
            // Right-continuous: the step applies from its threshold on.
            auto it = std::upper_bound(steps_.begin(), steps_.end(), gamma,
                                       [](double g, const StaircaseStep &s) { return g < s.sinr; });
            if (it == steps_.begin())
                return 0.0;
            return std::prev(it)->bits_per_symbol;
        }
        }
        return 0.0;
    }

    // Largest efficiency the function can return.
    double max_efficiency() const
    {
        switch (kind_) {
        case Kind::Shannon:
            return std::numeric_limits<double>::infinity();
        case Kind::TruncatedShannon:
            return cap_;
        case Kind::Staircase:
            return steps_.back().bits_per_symbol;
        }
        return 0.0;
    }

    // Points where C is discontinuous or has a kink; quadrature splits there.
    std::vector<double> breakpoints() const
    {
        std::vector<double> out;
        if (kind_ == Kind::TruncatedShannon)
            out.push_back(std::exp2(cap_) - 1.0);
        else if (kind_ == Kind::Staircase)
            for (const auto &s : steps_)
                out.push_back(s.sinr);
        return out;
    }

    bool operator==(const SpectralEfficiency &o) const
    {
        if (kind_ != o.kind_)
            return false;
        if (kind_ == Kind::TruncatedShannon)
            return cap_ == o.cap_;
        if (kind_ == Kind::Staircase) {
            if (steps_.size() != o.steps_.size())
                return false;
            for (std::size_t i = 0; i < steps_.size(); ++i)
                if (steps_[i].sinr != o.steps_[i].sinr ||
                    steps_[i].bits_per_symbol != o.steps_[i].bits_per_symbol)
                    return false;
        }
        return true;
    }

private:
    explicit SpectralEfficiency(Kind k) : kind_(k) {}

    Kind kind_;
    double cap_ = std::numeric_limits<double>::infinity();
    std::vector<StaircaseStep> steps_;
};

// LTE 4-bit CQI efficiencies (64-QAM table). Used to quantize rate feedback.
inline const std::vector<double> &lte_cqi_efficiencies()
{
    static const std::vector<double> table = {0.1523, 0.2344, 0.3770, 0.6016, 0.8770,
                                              1.1758, 1.4766, 1.9141, 2.4063, 2.7305,
                                              3.3223, 3.9023, 4.5234, 5.1152, 5.5547};
    return table;
}

// Index of the highest CQI level not exceeding `bits`, or -1 if none fits.
inline int quantize_to_level(const std::vector<double> &levels, double bits)
{
    auto it = std::upper_bound(levels.begin(), levels.end(), bits);
    return static_cast<int>(it - levels.begin()) - 1;
}

} // namespace pfsa
