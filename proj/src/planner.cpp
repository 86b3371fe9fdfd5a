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

#include "lasiq/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "lasiq/rng.hpp"

namespace lasiq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSnapMhz = 0.5;  // shifts below this collapse to "untuned"

struct WorkQubit {
    int id;
    double current_f;   // model-predicted f01 at the current resistance
    double floor_f;     // lowest reachable target (max_dr_rel downshift)
    double ceil_f;      // min(current, Purcell ceiling)
    bool window_ok;     // floor <= ceil
    double r0;
    double delta;       // anharmonicity
    std::vector<int> edge_ids;  // incident chip edge indices
    double target;
};

struct SearchState {
    std::vector<WorkQubit> qubits;            // ascending id
    std::vector<std::pair<int, int>> edges;   // indices into qubits
    std::vector<double> edge_margin;          // min(collision, spacing) per edge
};

double edge_margin(const WorkQubit& a, const WorkQubit& b,
                   const PlanConstraints& cons) {
    const auto margins =
        pair_collisions(a.target, b.target, a.delta, b.delta, cons.bounds);
    double m = kInf;
    for (const auto& pm : margins) m = std::min(m, pm.margin_mhz);
    const double spacing = std::abs(a.target - b.target);
    m = std::min(m, spacing - cons.spacing_min_mhz);
    m = std::min(m, cons.spacing_max_mhz - spacing);
    return m;
}

// Greedy DSATUR proper coloring; heavy-hex graphs (max degree 3) come out
// with 3 colors in practice, arbitrary graphs may use more.
std::vector<int> dsatur_coloring(const SearchState& state) {
    const int n = static_cast<int>(state.qubits.size());
    std::vector<std::vector<int>> adj(n);
    for (const auto& [u, v] : state.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<int> color(n, -1);
    for (int step = 0; step < n; ++step) {
        int pick = -1, best_sat = -1, best_deg = -1;
        for (int i = 0; i < n; ++i) {
            if (color[i] >= 0) continue;
            std::set<int> sat;
            for (int j : adj[i])
                if (color[j] >= 0) sat.insert(color[j]);
            const int s = static_cast<int>(sat.size());
            const int d = static_cast<int>(adj[i].size());
            if (s > best_sat || (s == best_sat && d > best_deg)) {
                pick = i;
                best_sat = s;
                best_deg = d;
            }
        }
        std::set<int> used;
        for (int j : adj[pick])
            if (color[j] >= 0) used.insert(color[j]);
        int c = 0;
        while (used.count(c)) ++c;
        color[pick] = c;
    }
    return color;
}

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

struct CandidateScore {
    double global;    // worst margin over all edges if this move is taken
    double local;     // worst margin over the qubit's incident edges
    int in_band;      // resistance shift within the preferred window
    double neg_shift; // -|shift|: prefer smaller shifts on full ties

    bool better_than(const CandidateScore& o) const {
        constexpr double eps = 1e-9;
        if (global > o.global + eps) return true;
        if (global < o.global - eps) return false;
        if (local > o.local + eps) return true;
        if (local < o.local - eps) return false;
        if (in_band != o.in_band) return in_band > o.in_band;
        return neg_shift > o.neg_shift + eps;
    }
};

// Deterministic coordinate search: each pass scans qubits in id order and
// moves one to the best 1-MHz slot in its reachable window, accepting only
// moves that do not lower the global worst margin. The accept rule makes
// the worst margin monotonically non-decreasing over the search.
void local_search(SearchState& state, const PowerLawModel& model,
                  const PlanConstraints& cons) {
    const int n = static_cast<int>(state.qubits.size());
    for (std::size_t e = 0; e < state.edges.size(); ++e)
        state.edge_margin[e] = edge_margin(state.qubits[state.edges[e].first],
                                           state.qubits[state.edges[e].second], cons);

    auto shift_in_band = [&](const WorkQubit& q, double target) {
        if (target >= q.current_f - kSnapMhz) return 0;  // untuned
        const double dr = std::pow(target / q.current_f, 1.0 / model.p) - 1.0;
        return (dr >= cons.dr_avoid_low_rel && dr <= cons.dr_avoid_high_rel) ? 1 : 0;
    };

    for (int round = 0; round < 60; ++round) {
        bool moved = false;
        for (int i = 0; i < n; ++i) {
            WorkQubit& q = state.qubits[i];
            if (!q.window_ok || q.edge_ids.empty()) continue;

            double min_other = kInf;
            for (std::size_t e = 0; e < state.edges.size(); ++e) {
                if (std::find(q.edge_ids.begin(), q.edge_ids.end(),
                              static_cast<int>(e)) == q.edge_ids.end())
                    min_other = std::min(min_other, state.edge_margin[e]);
            }

            auto score_at = [&](double target) {
                const double saved = q.target;
                q.target = target;
                double local = kInf;
                for (int e : q.edge_ids)
                    local = std::min(local,
                                     edge_margin(state.qubits[state.edges[e].first],
                                                 state.qubits[state.edges[e].second],
                                                 cons));
                q.target = saved;
                return CandidateScore{std::min(min_other, local), local,
                                      shift_in_band(q, target),
                                      -std::abs(q.current_f - target)};
            };

            CandidateScore best = score_at(q.target);
            double best_target = q.target;
            const double lo = std::ceil(q.floor_f);
            const double hi = q.ceil_f;
            for (double t = lo; t <= hi + 1e-9; t += 1.0) {
                const CandidateScore s = score_at(t);
                if (s.better_than(best)) {
                    best = s;
                    best_target = t;
                }
            }
            // The exact zero-shift slot is always a candidate.
            const CandidateScore zero = score_at(q.ceil_f);
            if (zero.better_than(best)) {
                best = zero;
                best_target = q.ceil_f;
            }
            if (best_target != q.target) {
                q.target = best_target;
                for (int e : q.edge_ids)
                    state.edge_margin[e] =
                        edge_margin(state.qubits[state.edges[e].first],
                                    state.qubits[state.edges[e].second], cons);
                moved = true;
            }
        }
        if (!moved) break;
    }
}

double plan_worst_collision_margin(const SearchState& state,
                                   const PlanConstraints& cons) {
    double worst = kInf;
    for (const auto& [u, v] : state.edges) {
        const auto margins = pair_collisions(state.qubits[u].target,
                                             state.qubits[v].target,
                                             state.qubits[u].delta,
                                             state.qubits[v].delta, cons.bounds);
        for (const auto& pm : margins) worst = std::min(worst, pm.margin_mhz);
    }
    return worst;
}

}  // namespace

void PlanConstraints::validate() const {
    if (!(f_purcell_max_mhz > 0)) throw std::invalid_argument("Purcell cutoff must be positive");
    if (!(max_dr_rel > 0 && max_dr_rel < 1))
        throw std::invalid_argument("max_dr_rel must be in (0, 1)");
    if (!(spacing_min_mhz < spacing_max_mhz))
        throw std::invalid_argument("spacing window min must be below max");
    bounds.validate();
}

FrequencyPlan generate_plan(const ChipState& chip, const PowerLawModel& model,
                            const PlanConstraints& constraints, std::uint64_t seed) {
    constraints.validate();
    model.validate();

    SearchState state;
    std::map<int, int> index_of;
    for (const auto& q : chip.qubits) {
        WorkQubit w;
        w.id = q.id;
        w.r0 = q.r_n_ohm;
        w.delta = q.anharmonicity_mhz;
        w.current_f = predict_f01(model, q.r_n_ohm);
        w.floor_f = w.current_f * std::pow(1.0 + constraints.max_dr_rel, model.p);
        w.ceil_f = std::min(w.current_f, constraints.f_purcell_max_mhz);
        w.window_ok = w.floor_f <= w.ceil_f + 1e-9;
        w.target = w.current_f;
        index_of[q.id] = static_cast<int>(state.qubits.size());
        state.qubits.push_back(w);
    }
    for (const auto& [c, t] : chip.edges)
        state.edges.emplace_back(index_of.at(c), index_of.at(t));
    state.edge_margin.assign(state.edges.size(), 0.0);
    for (std::size_t e = 0; e < state.edges.size(); ++e) {
        state.qubits[state.edges[e].first].edge_ids.push_back(static_cast<int>(e));
        state.qubits[state.edges[e].second].edge_ids.push_back(static_cast<int>(e));
    }

    FrequencyPlan plan;
    for (const auto& w : state.qubits)
        if (!w.window_ok)
            plan.infeasible.push_back(
                {w.id, "no reachable target: Purcell ceiling needs a shift beyond "
                       "max_dr_rel"});

    // Already-satisfied chips keep their frequencies untouched.
    {
        bool ok = plan.infeasible.empty();
        for (const auto& w : state.qubits)
            if (w.current_f > constraints.f_purcell_max_mhz + 1e-9) ok = false;
        if (ok) {
            for (const auto& [u, v] : state.edges)
                if (edge_margin(state.qubits[u], state.qubits[v], constraints) < 0)
                    ok = false;
        }
        if (ok) {
            for (const auto& w : state.qubits) {
                plan.targets_f_mhz[w.id] = w.current_f;
                plan.targets_r_ohm[w.id] = w.r0;
                plan.shifts_f_mhz[w.id] = 0.0;
                plan.shifts_r_rel[w.id] = 0.0;
                plan.skip_set.push_back(w.id);
            }
            plan.worst_margin_mhz = plan_worst_collision_margin(state, constraints);
            return plan;
        }
    }

    const std::vector<int> colors = dsatur_coloring(state);
    const int n_colors = 1 + *std::max_element(colors.begin(), colors.end());

    auto level_for = [&](double base, int color) {
        if (!constraints.level_set_mhz.empty()) {
            std::vector<double> levels = constraints.level_set_mhz;
            std::sort(levels.rbegin(), levels.rend());
            return levels[color % levels.size()];
        }
        return base - 100.0 * color;
    };

    // Base scan: maximize the number of qubits whose assigned level is
    // reachable, preferring less total shift on ties.
    double min_ceil = kInf, max_ceil = -kInf;
    for (const auto& w : state.qubits)
        if (w.window_ok) {
            min_ceil = std::min(min_ceil, w.ceil_f);
            max_ceil = std::max(max_ceil, w.ceil_f);
        }
    if (!std::isfinite(min_ceil)) min_ceil = max_ceil = constraints.f_purcell_max_mhz;

    auto seeded = rng::engine(seed, 0);
    std::uniform_int_distribution<int> jitter(0, 9);

    SearchState best_state = state;
    double best_worst = -kInf;
    for (int restart = 0; restart < 3; ++restart) {
        double base_best = min_ceil;
        int reach_best = -1;
        const double offset = restart * 15.0 + jitter(seeded);
        for (double base = max_ceil - offset; base >= min_ceil - 120.0; base -= 5.0) {
            int reach = 0;
            for (std::size_t i = 0; i < state.qubits.size(); ++i) {
                const double lvl = level_for(base, colors[i]);
                if (lvl >= state.qubits[i].floor_f - 1e-9 &&
                    lvl <= state.qubits[i].ceil_f + 1e-9)
                    ++reach;
            }
            if (reach > reach_best) {
                reach_best = reach;
                base_best = base;
            }
        }

        SearchState trial = state;
        for (std::size_t i = 0; i < trial.qubits.size(); ++i) {
            WorkQubit& w = trial.qubits[i];
            if (!w.window_ok) continue;
            w.target = clamp(level_for(base_best, colors[i]), w.floor_f, w.ceil_f);
        }
        local_search(trial, model, constraints);
        const double worst = plan_worst_collision_margin(trial, constraints);
        if (worst > best_worst + 1e-9) {
            best_worst = worst;
            best_state = trial;
        }
        if (n_colors <= 1) break;
    }

    // Snap near-zero shifts to exactly untuned.
    for (auto& w : best_state.qubits)
        if (w.current_f - w.target < kSnapMhz) w.target = w.current_f;

    for (const auto& w : best_state.qubits) {
        plan.targets_f_mhz[w.id] = w.target;
        const double r_target =
            w.target == w.current_f ? w.r0 : predict_rn(model, w.target);
        plan.targets_r_ohm[w.id] = r_target;
        plan.shifts_f_mhz[w.id] = w.current_f - w.target;
        plan.shifts_r_rel[w.id] = r_target / w.r0 - 1.0;
        if (w.target == w.current_f) plan.skip_set.push_back(w.id);
    }
    plan.worst_margin_mhz = plan_worst_collision_margin(best_state, constraints);

    // Any remaining collision names its endpoints as blocking qubits.
    std::set<int> blocked;
    for (const auto& [u, v] : best_state.edges) {
        const auto margins = pair_collisions(best_state.qubits[u].target,
                                             best_state.qubits[v].target,
                                             best_state.qubits[u].delta,
                                             best_state.qubits[v].delta,
                                             constraints.bounds);
        for (const auto& pm : margins)
            if (pm.margin_mhz < 0) {
                blocked.insert(best_state.qubits[u].id);
                blocked.insert(best_state.qubits[v].id);
            }
    }
    for (int id : blocked)
        plan.infeasible.push_back({id, "no collision-free slot within the reachable window"});

    return plan;
}

PlanReport validate_plan(const ChipState& chip, const PowerLawModel& model,
                         const FrequencyPlan& plan, const PlanConstraints& constraints) {
    constraints.validate();
    PlanReport report;
    std::unordered_map<int, double> targets;
    for (const auto& [id, f] : plan.targets_f_mhz) {
        if (!chip.has_qubit(id))
            throw std::invalid_argument("plan references unknown qubit " +
                                        std::to_string(id));
        targets[id] = f;
    }
    for (const auto& q : chip.qubits)
        if (!targets.count(q.id))
            throw std::invalid_argument("plan is missing qubit " + std::to_string(q.id));

    constexpr double tol = 1e-6;
    for (const auto& q : chip.qubits) {
        const double current = predict_f01(model, q.r_n_ohm);
        const double target = targets.at(q.id);
        const double down_margin = current - target;
        if (down_margin < -tol)
            report.failures.push_back({"downshift", q.id, -1, false, down_margin});

        const double r_target = plan.targets_r_ohm.count(q.id)
                                    ? plan.targets_r_ohm.at(q.id)
                                    : predict_rn(model, target);
        const double dr = r_target / q.r_n_ohm - 1.0;
        const double dr_margin = constraints.max_dr_rel - dr;
        if (dr_margin < -tol)
            report.failures.push_back({"max_dr", q.id, -1, false, dr_margin});

        const double purcell_margin = constraints.f_purcell_max_mhz - target;
        if (purcell_margin < -tol)
            report.failures.push_back({"purcell", q.id, -1, false, purcell_margin});
    }
    report.downshift_pass = report.max_dr_pass = report.purcell_pass = true;
    for (const auto& f : report.failures) {
        if (f.name == "downshift") report.downshift_pass = false;
        if (f.name == "max_dr") report.max_dr_pass = false;
        if (f.name == "purcell") report.purcell_pass = false;
    }

    const CollisionReport collisions = chip_collisions(chip, targets, constraints.bounds);
    report.worst_collision_margin_mhz = collisions.worst_margin_mhz;
    report.collisions_pass = collisions.empty();
    for (const auto& v : collisions.violations)
        report.failures.push_back({"collision_type" + std::to_string(static_cast<int>(v.type)),
                                   v.control, v.target, false, v.margin_mhz});

    for (const auto& [c, t] : chip.edges) {
        const double spacing = std::abs(targets.at(c) - targets.at(t));
        const double margin = std::min(spacing - constraints.spacing_min_mhz,
                                       constraints.spacing_max_mhz - spacing);
        if (margin < -tol) {
            report.failures.push_back({"spacing_window", c, t, false, margin});
            report.spacing_pass = false;
        }
    }
    return report;
}

std::map<int, double> plan_to_resistance_targets(const FrequencyPlan& plan,
                                                 const PowerLawModel& model) {
    model.validate();
    std::map<int, double> targets_r;
    for (const auto& [id, target_f] : plan.targets_f_mhz) {
        if (!plan.shifts_f_mhz.count(id))
            throw std::invalid_argument("plan has no shift entry for qubit " +
                                        std::to_string(id));
        const double shift = plan.shifts_f_mhz.at(id);
        if (shift < -1e-9)
            throw std::invalid_argument(
                "qubit " + std::to_string(id) +
                ": frequency target above the current f01 implies a negative "
                "resistance shift");
        targets_r[id] = predict_rn(model, target_f);
    }
    return targets_r;
}

}  // namespace lasiq
