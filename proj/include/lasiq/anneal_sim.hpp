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

#include "lasiq/lattice.hpp"

namespace lasiq {

/// Stochastic model of one adaptive anneal: each exposure attempts a fixed
/// fraction of the remaining resistance gap (but never less than
/// min_step_rel of the current resistance — the smallest dose the process
/// can meter) with multiplicative log-normal noise, capped by a hidden
/// per-junction saturation limit drawn once from
/// Normal(saturation_mean_rel, saturation_sigma_rel).
struct AnnealConfig {
    double band_rel = 0.003;            // success half-band around R_T
    double step_fraction = 0.5;         // fraction of remaining gap per exposure
    double step_sigma_rel = 0.30;       // log-normal sigma of each step
    double min_step_rel = 0.006;        // smallest meterable step, rel. to r
    double saturation_mean_rel = 0.14;  // mean max fractional R increase
    double saturation_sigma_rel = 0.02;
    int max_exposures = 100;

    void validate() const;
};

enum class AnnealStatus { success, overshoot, undershoot_saturated, exposure_limit };

const char* to_string(AnnealStatus s);

struct AnnealOutcome {
    int qubit_id = -1;
    double r0_ohm = 0.0;
    double r_target_ohm = 0.0;
    double final_r_ohm = 0.0;
    int exposures = 0;
    AnnealStatus status = AnnealStatus::success;
    double final_dev_rel = 0.0;  // (final_r - R_T) / R_T
};

/// Simulates one junction anneal. Resistance only grows; a target below
/// r0*(1 - band) is a monotonicity error.
AnnealOutcome anneal_junction(double r0_ohm, double r_target_ohm,
                              const AnnealConfig& config, std::uint64_t seed);

/// Independent per-junction simulations with sub-seeds derived from
/// (seed, qubit id); chip-level results are schedule-invariant.
std::vector<AnnealOutcome> anneal_chip(const ChipState& chip,
                                       const std::map<int, double>& targets_r_ohm,
                                       const AnnealConfig& config, std::uint64_t seed);

struct SuccessStats {
    int total = 0;
    int successes = 0;
    int overshoots = 0;
    int undershoots = 0;
    int exposure_limited = 0;
    double success_rate = 0.0;
    double rms_dev_successes = 0.0;  // RMS |final_dev_rel| over successes

    struct Bin {
        double dr_lo_rel;
        double dr_hi_rel;
        int count = 0;
        int successes = 0;
        int overshoots = 0;
        int undershoots = 0;
        double success_rate = 0.0;
    };
    std::vector<Bin> bins;  // per planned-dR class
};

/// Aggregates outcomes into success statistics, bucketed by planned
/// fractional shift (r_target - r0)/r0 using the given bin edges.
SuccessStats success_stats(const std::vector<AnnealOutcome>& outcomes,
                           const std::vector<double>& planned_dr_bin_edges);

struct LogNormalFit {
    double mu = 0.0;
    double sigma = 0.0;
    double ks_stat = 0.0;  // Kolmogorov-Smirnov distance to the fitted CDF
};

/// Maximum-likelihood log-normal fit of strictly positive samples (for the
/// anneal, the growth increments final_r / r0). Throws on fewer than 10
/// samples, non-positive values, or a degenerate (constant) sample.
LogNormalFit lognormal_fit(const std::vector<double>& samples);

}  // namespace lasiq
