// Copyright 2026 The lasiq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lasiq/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace lasiq {

void CollisionBounds::validate() const {
    if (!(d1_mhz > 0) || !(d2_mhz > 0) || !(d3_mhz > 0) || !(d4_max_detuning_mhz > 0))
        throw std::invalid_argument("collision bound widths must be positive");
    if (!(multiplier > 0)) throw std::invalid_argument("bounds multiplier must be positive");
}

std::array<PairMargin, 4> pair_collisions(double f_c_mhz, double f_t_mhz,
                                          double delta_c_mhz, double delta_t_mhz,
                                          const CollisionBounds& bounds) {
    bounds.validate();
    if (!(f_c_mhz > 0) || !(f_t_mhz > 0))
        throw std::invalid_argument("pair frequencies must be positive");
    if (!(delta_c_mhz < 0) || !(delta_t_mhz < 0))
        throw std::invalid_argument("anharmonicities must be negative");

    const double m = bounds.multiplier;
    const double detuning = f_c_mhz - f_t_mhz;
    // Two-photon and f01-on-f12 conditions are checked in both edge
    // orientations; the reported margin is from the worse one.
    const double d2_dist = std::min(std::abs(f_c_mhz - (f_t_mhz + delta_t_mhz / 2.0)),
                                    std::abs(f_t_mhz - (f_c_mhz + delta_c_mhz / 2.0)));
    const double d3_dist = std::min(std::abs(f_c_mhz - (f_t_mhz + delta_t_mhz)),
                                    std::abs(f_t_mhz - (f_c_mhz + delta_c_mhz)));
    return {PairMargin{CollisionType::type1, std::abs(detuning) - m * bounds.d1_mhz},
            PairMargin{CollisionType::type2, d2_dist - m * bounds.d2_mhz},
            PairMargin{CollisionType::type3, d3_dist - m * bounds.d3_mhz},
            PairMargin{CollisionType::type4,
                       bounds.d4_max_detuning_mhz - std::abs(detuning)}};
}

CollisionReport chip_collisions(const ChipState& chip,
                                const std::unordered_map<int, double>& freqs_mhz,
                                const CollisionBounds& bounds) {
    CollisionReport report;
    report.worst_margin_mhz = std::numeric_limits<double>::infinity();
    std::set<std::pair<std::pair<int, int>, int>> seen;  // (undirected edge, type)
    for (const auto& [c, t] : chip.edges) {
        auto fc = freqs_mhz.find(c);
        auto ft = freqs_mhz.find(t);
        if (fc == freqs_mhz.end())
            throw std::invalid_argument("no frequency for qubit " + std::to_string(c));
        if (ft == freqs_mhz.end())
            throw std::invalid_argument("no frequency for qubit " + std::to_string(t));
        const auto margins = pair_collisions(fc->second, ft->second,
                                             chip.qubit(c).anharmonicity_mhz,
                                             chip.qubit(t).anharmonicity_mhz, bounds);
        const std::pair<int, int> undirected{std::min(c, t), std::max(c, t)};
        for (const auto& pm : margins) {
            report.worst_margin_mhz = std::min(report.worst_margin_mhz, pm.margin_mhz);
            if (pm.margin_mhz < 0 &&
                seen.insert({undirected, static_cast<int>(pm.type)}).second) {
                report.violations.push_back({c, t, pm.type, pm.margin_mhz});
                ++report.counts[static_cast<int>(pm.type) - 1];
            }
        }
    }
    return report;
}

}  // namespace lasiq
