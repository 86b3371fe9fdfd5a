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

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "lasiq/collision.hpp"
#include "lasiq/lattice.hpp"

namespace lasiq {

struct YieldPoint {
    double yield = 0.0;            // fraction of collision-free trials
    double ci_halfwidth = 0.0;     // binomial 95% half-width
    double mean_collisions = 0.0;  // mean violation count per trial
};

struct YieldCurve {
    std::vector<double> sigma_grid_mhz;
    std::vector<YieldPoint> points;
    int trials = 0;
};

/// Monte Carlo collision-free yield: each trial perturbs every target
/// frequency by an independent Normal(0, sigma_f) draw and counts the
/// chip collisions. Per-trial RNG streams are derived from (seed, trial),
/// so the result is bit-identical at any thread count.
YieldPoint yield_estimate(const ChipState& chip,
                          const std::unordered_map<int, double>& targets_mhz,
                          double sigma_f_mhz, const CollisionBounds& bounds,
                          int trials, std::uint64_t seed, int threads = 1);

/// yield_estimate over an ascending sigma grid; point i uses the sub-seed
/// derived from (seed, i).
YieldCurve yield_curve(const ChipState& chip,
                       const std::unordered_map<int, double>& targets_mhz,
                       const std::vector<double>& sigma_grid_mhz,
                       const CollisionBounds& bounds, int trials,
                       std::uint64_t seed, int threads = 1);

}  // namespace lasiq
