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

#pragma once

#include <array>
#include <unordered_map>
#include <vector>

#include "lasiq/lattice.hpp"

namespace lasiq {

/// Half-width tolerances around the four nearest-neighbor collision
/// conditions. multiplier scales d1..d3 (1 for plain bounds, 2 for the
/// doubled bounds used when generating tuning plans); the straddling
/// limit d4 is an absolute detuning cutoff and is not scaled.
struct CollisionBounds {
    double d1_mhz = 17.0;
    double d2_mhz = 4.0;
    double d3_mhz = 30.0;
    double d4_max_detuning_mhz = 330.0;
    double multiplier = 1.0;

    void validate() const;
};

enum class CollisionType : int { type1 = 1, type2 = 2, type3 = 3, type4 = 4 };

/// Margin is the distance from the condition boundary in MHz; negative
/// means the pair is inside the collision band.
struct PairMargin {
    CollisionType type;
    double margin_mhz;
};

/// Evaluates all four collision conditions for one control/target pair.
/// With detuning D = f_c - f_t and effective widths w_i = multiplier*d_i:
///   type-1: |D| < w1                         (level hybridization)
///   type-2: |f_c - (f_t + dt/2)| < w2        (two-photon |0>->|2>), both
///           orientations
///   type-3: |f_c - (f_t + dt)| < w3          (f01 on f12), both orientations
///   type-4: |D| > d4                         (slow gate, outside straddling)
/// Returns one margin per type; types 2 and 3 report the worse orientation.
std::array<PairMargin, 4> pair_collisions(double f_c_mhz, double f_t_mhz,
                                          double delta_c_mhz, double delta_t_mhz,
                                          const CollisionBounds& bounds);

struct CollisionReport {
    struct Violation {
        int control;
        int target;
        CollisionType type;
        double margin_mhz;  // < 0
    };
    std::vector<Violation> violations;  // ordered by chip edge index, then type
    std::array<int, 4> counts{0, 0, 0, 0};

    int total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
    bool empty() const { return violations.empty(); }
    /// Smallest margin over all edges and types (worst offender), or
    /// +infinity for a chip with no edges.
    double worst_margin_mhz = 0.0;
};

/// Scans every edge of the chip; a pair counts at most once per type.
/// Throws std::invalid_argument naming the qubit if a frequency is missing.
CollisionReport chip_collisions(const ChipState& chip,
                                const std::unordered_map<int, double>& freqs_mhz,
                                const CollisionBounds& bounds);

}  // namespace lasiq
