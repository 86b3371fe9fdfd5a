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

#include "lasiq/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <set>

#include <json.hpp>

#include "lasiq/io_util.hpp"
#include "lasiq/rng.hpp"

namespace lasiq {

using nlohmann::json;

const QubitRecord& ChipState::qubit(int id) const {
    for (const auto& q : qubits)
        if (q.id == id) return q;
    throw std::out_of_range("no qubit with id " + std::to_string(id));
}

QubitRecord& ChipState::qubit(int id) {
    for (auto& q : qubits)
        if (q.id == id) return q;
    throw std::out_of_range("no qubit with id " + std::to_string(id));
}

bool ChipState::has_qubit(int id) const {
    return std::any_of(qubits.begin(), qubits.end(),
                       [id](const QubitRecord& q) { return q.id == id; });
}

std::vector<int> ChipState::neighbors(int id) const {
    std::vector<int> out;
    for (const auto& [c, t] : edges) {
        if (c == id) out.push_back(t);
        if (t == id) out.push_back(c);
    }
    return out;
}

int ChipState::degree(int id) const { return static_cast<int>(neighbors(id).size()); }

int ChipState::max_degree() const {
    int m = 0;
    for (const auto& q : qubits) m = std::max(m, degree(q.id));
    return m;
}

bool ChipState::connected() const {
    if (qubits.empty()) return true;
    std::set<int> seen;
    std::queue<int> frontier;
    frontier.push(qubits.front().id);
    seen.insert(qubits.front().id);
    while (!frontier.empty()) {
        int cur = frontier.front();
        frontier.pop();
        for (int n : neighbors(cur))
            if (seen.insert(n).second) frontier.push(n);
    }
    return seen.size() == qubits.size();
}

void ChipState::validate(const ValidationLimits& limits) const {
    std::set<int> ids;
    for (const auto& q : qubits) {
        if (!ids.insert(q.id).second)
            throw ValidationError("duplicate qubit id " + std::to_string(q.id));
        if (!(q.r_n_ohm > 0))
            throw ValidationError("qubit " + std::to_string(q.id) +
                                  ": r_n must be positive, got " +
                                  format_double(q.r_n_ohm));
        if (!(q.anharmonicity_mhz < 0))
            throw ValidationError("qubit " + std::to_string(q.id) +
                                  ": anharmonicity must be negative");
        if (q.f01_mhz &&
            !(*q.f01_mhz > limits.f01_min_mhz && *q.f01_mhz < limits.f01_max_mhz))
            throw ValidationError("qubit " + std::to_string(q.id) + ": f01 " +
                                  format_double(*q.f01_mhz) +
                                  " MHz outside the sanity window");
    }
    std::set<std::pair<int, int>> undirected;
    for (const auto& [c, t] : edges) {
        if (c == t)
            throw ValidationError("self-loop on qubit " + std::to_string(c));
        if (!ids.count(c) || !ids.count(t))
            throw ValidationError("edge (" + std::to_string(c) + "," +
                                  std::to_string(t) + ") references a missing qubit");
        if (!undirected.insert({std::min(c, t), std::max(c, t)}).second)
            throw ValidationError("duplicate edge (" + std::to_string(c) + "," +
                                  std::to_string(t) + ")");
    }
}

namespace {

ChipState from_edges(std::string name, int n_qubits,
                     std::vector<std::pair<int, int>> edges) {
    ChipState chip;
    chip.name = std::move(name);
    chip.qubits.resize(n_qubits);
    for (int i = 0; i < n_qubits; ++i) {
        chip.qubits[i].id = i;
        chip.qubits[i].r_n_ohm = 9400.0;  // placeholder; see synthesize_records
    }
    chip.edges = std::move(edges);
    chip.validate();
    return chip;
}

// 27-qubit two-rail layout (rails of 10 and 9 qubits, 3 rungs, 5 pendants).
ChipState falcon27() {
    return from_edges(
        "falcon-27", 27,
        {{0, 1},   {1, 2},   {1, 4},   {2, 3},   {3, 5},   {4, 7},   {5, 8},
         {6, 7},   {7, 10},  {8, 9},   {8, 11},  {10, 12}, {11, 14}, {12, 13},
         {12, 15}, {13, 14}, {14, 16}, {15, 18}, {16, 19}, {17, 18}, {18, 21},
         {19, 20}, {19, 22}, {21, 23}, {22, 25}, {23, 24}, {24, 25}, {25, 26}});
}

// 65-qubit five-rail layout: rails of 10/11/11/11/10 with three rungs per
// gap, offset brick-style on alternating gaps.
ChipState hummingbird65() {
    std::vector<std::pair<int, int>> edges;
    auto rail = [&](int first, int count) {
        for (int i = 0; i < count - 1; ++i) edges.emplace_back(first + i, first + i + 1);
    };
    rail(0, 10);
    rail(13, 11);
    rail(27, 11);
    rail(41, 11);
    rail(55, 10);
    auto rung = [&](int top, int mid, int bottom) {
        edges.emplace_back(top, mid);
        edges.emplace_back(mid, bottom);
    };
    rung(0, 10, 13);
    rung(4, 11, 17);
    rung(8, 12, 21);
    rung(15, 24, 29);
    rung(19, 25, 33);
    rung(23, 26, 37);
    rung(27, 38, 41);
    rung(31, 39, 45);
    rung(35, 40, 49);
    rung(43, 52, 56);
    rung(47, 53, 60);
    rung(51, 54, 64);
    return from_edges("hummingbird-65", 65, std::move(edges));
}

}  // namespace

ChipState build_heavy_hex(int rows, int cols) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("heavy-hex dimensions must be >= 1");
    const int rail_len = 4 * cols + 3;
    const int n_rails = rows + 1;
    auto rail_id = [&](int r, int c) { return r * rail_len + c; };
    int next_id = n_rails * rail_len;

    std::vector<std::pair<int, int>> edges;
    for (int r = 0; r < n_rails; ++r)
        for (int c = 0; c + 1 < rail_len; ++c)
            edges.emplace_back(rail_id(r, c), rail_id(r, c + 1));
    for (int g = 0; g < rows; ++g) {
        int offset = (g % 2 == 0) ? 0 : 2;
        for (int c = offset; c < rail_len; c += 4) {
            int mid = next_id++;
            edges.emplace_back(rail_id(g, c), mid);
            edges.emplace_back(mid, rail_id(g + 1, c));
        }
    }
    ChipState chip = from_edges("heavy-hex-" + std::to_string(rows) + "x" +
                                    std::to_string(cols),
                                next_id, std::move(edges));
    return chip;
}

ChipState build_preset(std::string_view preset) {
    if (preset == "falcon") return falcon27();
    if (preset == "hummingbird") return hummingbird65();
    throw std::invalid_argument("unknown preset: " + std::string(preset) +
                                " (expected falcon or hummingbird)");
}

void synthesize_records(ChipState& chip, const SyntheticOptions& opts, std::uint64_t seed) {
    if (!(opts.rn_nominal_ohm > 0) || opts.rn_spread_rel < 0 || opts.f_sigma_mhz < 0)
        throw std::invalid_argument("bad synthetic options");
    for (std::size_t i = 0; i < chip.qubits.size(); ++i) {
        auto& q = chip.qubits[i];
        auto eng = rng::engine(seed, static_cast<std::uint64_t>(q.id));
        std::normal_distribution<double> normal(0.0, 1.0);
        q.r_n_ohm = opts.rn_nominal_ohm * std::exp(opts.rn_spread_rel * normal(eng));
        if (opts.set_f01) {
            double f = opts.a0 * std::pow(q.r_n_ohm, opts.p0) +
                       opts.f_sigma_mhz * normal(eng);
            q.f01_mhz = f;
        }
        q.tuned = false;
    }
    chip.validate();
}

ChipState chip_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("chip spec parse error: ") + e.what());
    }
    ChipState chip;
    try {
        chip.name = doc.at("name").get<std::string>();
        for (const auto& jq : doc.at("qubits")) {
            QubitRecord q;
            q.id = jq.at("id").get<int>();
            q.r_n_ohm = jq.at("r_n_ohm").get<double>();
            if (jq.contains("f01_ghz") && !jq.at("f01_ghz").is_null())
                q.f01_mhz = jq.at("f01_ghz").get<double>() * 1000.0;
            q.anharmonicity_mhz = jq.value("anharmonicity_mhz", -330.0);
            q.tuned = jq.value("tuned", false);
            chip.qubits.push_back(q);
        }
        for (const auto& je : doc.at("edges")) {
            if (!je.is_array() || je.size() != 2)
                throw SchemaError("edge entries must be [control, target]");
            chip.edges.emplace_back(je.at(0).get<int>(), je.at(1).get<int>());
        }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("chip spec schema mismatch: ") + e.what());
    }
    std::sort(chip.qubits.begin(), chip.qubits.end(),
              [](const QubitRecord& a, const QubitRecord& b) { return a.id < b.id; });
    chip.validate();
    return chip;
}

std::string chip_to_json_text(const ChipState& chip) {
    json doc;
    doc["name"] = chip.name;
    doc["qubits"] = json::array();
    for (const auto& q : chip.qubits) {
        json jq;
        jq["id"] = q.id;
        jq["r_n_ohm"] = q.r_n_ohm;
        jq["f01_ghz"] = q.f01_mhz ? json(*q.f01_mhz / 1000.0) : json(nullptr);
        jq["anharmonicity_mhz"] = q.anharmonicity_mhz;
        if (q.tuned) jq["tuned"] = true;
        doc["qubits"].push_back(jq);
    }
    doc["edges"] = json::array();
    for (const auto& [c, t] : chip.edges) doc["edges"].push_back(json::array({c, t}));
    return doc.dump(2) + "\n";
}

ChipState load_chip(const std::string& path) {
    return chip_from_json_text(read_text_file(path));
}

void save_chip(const ChipState& chip, const std::string& path) {
    write_text_file(path, chip_to_json_text(chip));
}

}  // namespace lasiq
