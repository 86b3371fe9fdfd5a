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

#include "lasiq/yield_mc.hpp"

#include <cmath>
#include <random>
#include <thread>

#include "lasiq/rng.hpp"

namespace lasiq {

namespace {

struct TrialTally {
    long long collision_free = 0;
    long long total_violations = 0;
};

}  // namespace

YieldPoint yield_estimate(const ChipState& chip,
                          const std::unordered_map<int, double>& targets_mhz,
                          double sigma_f_mhz, const CollisionBounds& bounds, int trials,
                          std::uint64_t seed, int threads) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (sigma_f_mhz < 0) throw std::invalid_argument("sigma_f must be >= 0");
    bounds.validate();
    for (const auto& q : chip.qubits)
        if (!targets_mhz.count(q.id))
            throw std::invalid_argument("no target frequency for qubit " +
                                        std::to_string(q.id));

    // Perturbations draw in ascending qubit-id order from a per-trial
    // stream, so the tally is independent of threading.
    std::vector<int> ids;
    std::vector<double> base;
    ids.reserve(chip.qubits.size());
    for (const auto& q : chip.qubits) {
        ids.push_back(q.id);
        base.push_back(targets_mhz.at(q.id));
    }

    auto run_trial = [&](std::uint64_t trial) -> int {
        auto eng = rng::engine(seed, trial);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::unordered_map<int, double> perturbed;
        perturbed.reserve(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i)
            perturbed[ids[i]] = base[i] + sigma_f_mhz * normal(eng);
        return chip_collisions(chip, perturbed, bounds).total();
    };

    const int n_threads = std::max(1, std::min(threads, trials));
    std::vector<TrialTally> tallies(n_threads);
    auto worker = [&](int w) {
        TrialTally tally;
        for (int t = w; t < trials; t += n_threads) {
            int violations = run_trial(static_cast<std::uint64_t>(t));
            if (violations == 0) ++tally.collision_free;
            tally.total_violations += violations;
        }
        tallies[w] = tally;
    };
    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }

    TrialTally total;
    for (const auto& t : tallies) {
        total.collision_free += t.collision_free;
        total.total_violations += t.total_violations;
    }
    YieldPoint point;
    point.yield = static_cast<double>(total.collision_free) / trials;
    point.ci_halfwidth =
        1.96 * std::sqrt(point.yield * (1.0 - point.yield) / trials);
    point.mean_collisions = static_cast<double>(total.total_violations) / trials;
    return point;
}

YieldCurve yield_curve(const ChipState& chip,
                       const std::unordered_map<int, double>& targets_mhz,
                       const std::vector<double>& sigma_grid_mhz,
                       const CollisionBounds& bounds, int trials, std::uint64_t seed,
                       int threads) {
    if (sigma_grid_mhz.empty()) throw std::invalid_argument("sigma grid must be non-empty");
    for (std::size_t i = 1; i < sigma_grid_mhz.size(); ++i)
        if (sigma_grid_mhz[i] < sigma_grid_mhz[i - 1])
            throw std::invalid_argument("sigma grid must be ascending");

    YieldCurve curve;
    curve.sigma_grid_mhz = sigma_grid_mhz;
    curve.trials = trials;
    curve.points.reserve(sigma_grid_mhz.size());
    for (std::size_t i = 0; i < sigma_grid_mhz.size(); ++i)
        curve.points.push_back(yield_estimate(chip, targets_mhz, sigma_grid_mhz[i],
                                              bounds, trials,
                                              rng::derive_seed(seed, i), threads));
    return curve;
}

}  // namespace lasiq
