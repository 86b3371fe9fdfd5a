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

#include "lasiq/anneal_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lasiq/rng.hpp"

namespace lasiq {

void AnnealConfig::validate() const {
    if (!(band_rel > 0 && band_rel < 0.01))
        throw std::invalid_argument("band_rel must be in (0, 0.01)");
    if (!(step_fraction > 0 && step_fraction <= 1))
        throw std::invalid_argument("step_fraction must be in (0, 1]");
    if (!(step_sigma_rel >= 0) || !(min_step_rel >= 0))
        throw std::invalid_argument("step noise parameters must be >= 0");
    if (!(saturation_mean_rel > 0))
        throw std::invalid_argument("saturation_mean_rel must be positive");
    if (saturation_sigma_rel < 0)
        throw std::invalid_argument("saturation_sigma_rel must be >= 0");
    if (max_exposures < 1) throw std::invalid_argument("max_exposures must be >= 1");
}

const char* to_string(AnnealStatus s) {
    switch (s) {
        case AnnealStatus::success: return "success";
        case AnnealStatus::overshoot: return "overshoot";
        case AnnealStatus::undershoot_saturated: return "undershoot_saturated";
        case AnnealStatus::exposure_limit: return "exposure_limit";
    }
    return "unknown";
}

AnnealOutcome anneal_junction(double r0_ohm, double r_target_ohm,
                              const AnnealConfig& config, std::uint64_t seed) {
    config.validate();
    if (!(r0_ohm > 0) || !(r_target_ohm > 0))
        throw std::invalid_argument("resistances must be positive");
    if (r_target_ohm < r0_ohm * (1.0 - config.band_rel))
        throw std::invalid_argument(
            "target below initial resistance: the anneal only grows r_n");

    auto eng = rng::engine(seed, 0);
    std::normal_distribution<double> normal(0.0, 1.0);

    // The junction's hidden tuning-range limit, drawn once.
    const double sat_shift = std::max(
        0.0, config.saturation_mean_rel + config.saturation_sigma_rel * normal(eng));
    const double r_max = r0_ohm * (1.0 + sat_shift);

    AnnealOutcome out;
    out.r0_ohm = r0_ohm;
    out.r_target_ohm = r_target_ohm;

    const double band_lo = r_target_ohm * (1.0 - config.band_rel);
    double r = r0_ohm;
    bool saturated = false;
    while (r < band_lo && out.exposures < config.max_exposures) {
        if (r >= r_max) {
            saturated = true;
            break;
        }
        const double gap = r_target_ohm - r;
        const double attempt = std::max(config.step_fraction * gap,
                                        config.min_step_rel * r);
        const double increment = attempt * std::exp(config.step_sigma_rel * normal(eng));
        r = std::min(r + increment, r_max);
        ++out.exposures;
        if (r >= r_max && r < band_lo) {
            saturated = true;
            break;
        }
    }

    out.final_r_ohm = r;
    out.final_dev_rel = (r - r_target_ohm) / r_target_ohm;
    if (std::abs(out.final_dev_rel) <= config.band_rel)
        out.status = AnnealStatus::success;
    else if (out.final_dev_rel > config.band_rel)
        out.status = AnnealStatus::overshoot;
    else
        out.status = saturated ? AnnealStatus::undershoot_saturated
                               : AnnealStatus::exposure_limit;
    return out;
}

std::vector<AnnealOutcome> anneal_chip(const ChipState& chip,
                                       const std::map<int, double>& targets_r_ohm,
                                       const AnnealConfig& config, std::uint64_t seed) {
    std::vector<AnnealOutcome> outcomes;
    outcomes.reserve(chip.qubits.size());
    for (const auto& q : chip.qubits) {
        auto it = targets_r_ohm.find(q.id);
        if (it == targets_r_ohm.end())
            throw std::invalid_argument("no resistance target for qubit " +
                                        std::to_string(q.id));
        AnnealOutcome out = anneal_junction(
            q.r_n_ohm, it->second, config,
            rng::derive_seed(seed, static_cast<std::uint64_t>(q.id)));
        out.qubit_id = q.id;
        outcomes.push_back(out);
    }
    return outcomes;
}

SuccessStats success_stats(const std::vector<AnnealOutcome>& outcomes,
                           const std::vector<double>& planned_dr_bin_edges) {
    if (outcomes.empty()) throw std::invalid_argument("no outcomes to aggregate");
    for (std::size_t i = 1; i < planned_dr_bin_edges.size(); ++i)
        if (planned_dr_bin_edges[i] <= planned_dr_bin_edges[i - 1])
            throw std::invalid_argument("bin edges must be strictly ascending");

    SuccessStats stats;
    stats.total = static_cast<int>(outcomes.size());
    for (std::size_t i = 0; i + 1 < planned_dr_bin_edges.size(); ++i)
        stats.bins.push_back({planned_dr_bin_edges[i], planned_dr_bin_edges[i + 1]});

    double ss_dev = 0.0;
    for (const auto& out : outcomes) {
        switch (out.status) {
            case AnnealStatus::success:
                ++stats.successes;
                ss_dev += out.final_dev_rel * out.final_dev_rel;
                break;
            case AnnealStatus::overshoot: ++stats.overshoots; break;
            case AnnealStatus::undershoot_saturated: ++stats.undershoots; break;
            case AnnealStatus::exposure_limit: ++stats.exposure_limited; break;
        }
        const double planned_dr = (out.r_target_ohm - out.r0_ohm) / out.r0_ohm;
        for (auto& bin : stats.bins) {
            if (planned_dr >= bin.dr_lo_rel && planned_dr < bin.dr_hi_rel) {
                ++bin.count;
                if (out.status == AnnealStatus::success) ++bin.successes;
                if (out.status == AnnealStatus::overshoot) ++bin.overshoots;
                if (out.status == AnnealStatus::undershoot_saturated) ++bin.undershoots;
                break;
            }
        }
    }
    stats.success_rate = static_cast<double>(stats.successes) / stats.total;
    stats.rms_dev_successes =
        stats.successes > 0 ? std::sqrt(ss_dev / stats.successes) : 0.0;
    for (auto& bin : stats.bins)
        bin.success_rate =
            bin.count > 0 ? static_cast<double>(bin.successes) / bin.count : 0.0;
    return stats;
}

LogNormalFit lognormal_fit(const std::vector<double>& samples) {
    if (samples.size() < 10)
        throw std::invalid_argument("log-normal fit needs at least 10 samples");
    std::vector<double> logs;
    logs.reserve(samples.size());
    for (double s : samples) {
        if (!(s > 0))
            throw std::invalid_argument("log-normal fit requires positive samples");
        logs.push_back(std::log(s));
    }
    const double n = static_cast<double>(logs.size());
    double mu = 0;
    for (double l : logs) mu += l;
    mu /= n;
    double var = 0;
    for (double l : logs) var += (l - mu) * (l - mu);
    var /= n;  // MLE
    if (!(var > 1e-24))
        throw std::runtime_error("degenerate log-normal fit: samples are constant");

    LogNormalFit fit;
    fit.mu = mu;
    fit.sigma = std::sqrt(var);

    std::vector<double> sorted = logs;
    std::sort(sorted.begin(), sorted.end());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-(sorted[i] - mu) / (fit.sigma * std::sqrt(2.0)));
        d = std::max(d, std::abs(cdf - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    }
    fit.ks_stat = d;
    return fit;
}

}  // namespace lasiq
