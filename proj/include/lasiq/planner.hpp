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
#include <map>
#include <string>
#include <vector>

#include "lasiq/collision.hpp"
#include "lasiq/freq_model.hpp"
#include "lasiq/lattice.hpp"

namespace lasiq {

/// Physical constraints on a tuning plan. Frequencies can only be trimmed
/// downward, by at most the resistance shift the anneal can deliver.
struct PlanConstraints {
    double f_purcell_max_mhz = 5200.0;
    double max_dr_rel = 0.14;
    double spacing_min_mhz = 50.0;   // NN detuning comfort window
    double spacing_max_mhz = 250.0;
    CollisionBounds bounds{17.0, 4.0, 30.0, 330.0, 2.0};  // doubled widths
    std::vector<double> level_set_mhz;  // optional explicit level pattern
    // Shift classes with elevated anneal failure rates; the search prefers
    // targets whose resistance shift lies inside [avoid_low, avoid_high]
    // when it can do so without losing margin.
    double dr_avoid_low_rel = 0.01;
    double dr_avoid_high_rel = 0.10;

    void validate() const;
};

struct FrequencyPlan {
    std::map<int, double> targets_f_mhz;    // every qubit in scope
    std::map<int, double> targets_r_ohm;
    std::map<int, double> shifts_f_mhz;     // >= 0, downshift magnitude
    std::map<int, double> shifts_r_rel;     // >= 0, fractional increase
    double worst_margin_mhz = 0.0;          // min collision margin, plan bounds
    std::vector<int> skip_set;              // untuned (zero-shift) qubits

    struct Infeasibility {
        int qubit;
        std::string reason;
    };
    std::vector<Infeasibility> infeasible;  // named blocking qubits
};

struct PlanReport {
    struct Check {
        std::string name;    // e.g. "downshift", "max_dr", "purcell", ...
        int qubit = -1;      // offending qubit (or -1 for edge/global checks)
        int other = -1;      // second qubit for edge checks
        bool pass = true;
        double margin = 0.0;  // signed distance to the constraint boundary
    };
    std::vector<Check> failures;          // failing checks only
    double worst_collision_margin_mhz = 0.0;
    bool collisions_pass = true;
    bool downshift_pass = true;
    bool max_dr_pass = true;
    bool purcell_pass = true;
    bool spacing_pass = true;
    bool all_pass() const {
        return collisions_pass && downshift_pass && max_dr_pass && purcell_pass &&
               spacing_pass;
    }
};

/// Generates a collision-free downshift plan: a proper coloring of the
/// lattice seeds a small set of frequency levels, then a deterministic
/// local search raises the worst-case collision margin subject to
/// reachability. Qubits with no feasible slot are reported in
/// plan.infeasible and left untuned, never silently dropped.
FrequencyPlan generate_plan(const ChipState& chip, const PowerLawModel& model,
                            const PlanConstraints& constraints, std::uint64_t seed);

/// Checks every plan invariant (downshift-only, max shift, Purcell ceiling,
/// zero collisions at plan bounds, spacing window) and reports failures
/// with margins.
PlanReport validate_plan(const ChipState& chip, const PowerLawModel& model,
                         const FrequencyPlan& plan, const PlanConstraints& constraints);

/// Recomputes resistance targets from the plan's frequency targets through
/// the model inverse. Throws if a target implies a negative shift.
std::map<int, double> plan_to_resistance_targets(const FrequencyPlan& plan,
                                                 const PowerLawModel& model);

}  // namespace lasiq
