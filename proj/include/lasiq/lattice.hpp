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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lasiq {

/// Raised when a chip spec (file or in-memory) violates an invariant.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Per-qubit physical record. Frequencies in MHz, resistances in Ohm.
struct QubitRecord {
    int id = 0;
    double r_n_ohm = 0.0;                    // junction resistance, > 0
    std::optional<double> f01_mhz;           // measured/predicted transition
    double anharmonicity_mhz = -330.0;       // delta, < 0
    bool tuned = false;
};

/// Sanity window applied to measured frequencies at validation time.
struct ValidationLimits {
    double f01_min_mhz = 3000.0;
    double f01_max_mhz = 7000.0;
};

/// Chip topology plus per-qubit records. Edges are stored directed
/// (control -> target); collision checks that are symmetric iterate both
/// orientations themselves. Immutable by convention after construction.
struct ChipState {
    std::string name;
    std::vector<QubitRecord> qubits;              // sorted by id
    std::vector<std::pair<int, int>> edges;       // (control id, target id)

    const QubitRecord& qubit(int id) const;
    QubitRecord& qubit(int id);
    bool has_qubit(int id) const;
    std::vector<int> neighbors(int id) const;     // both orientations
    int degree(int id) const;
    bool connected() const;
    int max_degree() const;

    /// Enforces all invariants; throws ValidationError naming the offender.
    void validate(const ValidationLimits& limits = {}) const;
};

/// Heavy-hex lattice generator (brick-wall rule).
///
/// rows+1 horizontal rails of 4*cols+3 qubits each; vertical rung qubits
/// every 4 rail columns, offset by 2 columns on alternating gaps. The
/// result is connected with maximum degree 3 and is deterministic.
ChipState build_heavy_hex(int rows, int cols);

/// Canonical fixed-size layouts: "falcon" (27 qubits) and "hummingbird"
/// (65 qubits), wired in the two-rail / five-rail arrangements used by
/// the corresponding processor families.
ChipState build_preset(std::string_view preset);

/// Fills in synthetic junction resistances (and optionally scattered
/// measured frequencies) for a generated lattice: r_n is log-spread
/// around rn_nominal, f01 = a0*r_n^p0 + Normal(0, f_sigma). Deterministic
/// under seed.
struct SyntheticOptions {
    double rn_nominal_ohm = 9400.0;
    double rn_spread_rel = 0.04;      // ~2% frequency spread
    double f_sigma_mhz = 0.0;         // residual scatter of measured f01
    double a0 = 5.0e5;                // ground-truth power law
    double p0 = -0.5;
    bool set_f01 = true;
};
void synthesize_records(ChipState& chip, const SyntheticOptions& opts, std::uint64_t seed);

/// Chip-spec JSON I/O. Schema:
/// {"name": str,
///  "qubits": [{"id": int, "r_n_ohm": float, "f01_ghz": float|null,
///              "anharmonicity_mhz": float}],
///  "edges": [[control, target], ...]}
/// Frequencies are GHz on disk and MHz in memory.
ChipState load_chip(const std::string& path);
void save_chip(const ChipState& chip, const std::string& path);
ChipState chip_from_json_text(const std::string& text);
std::string chip_to_json_text(const ChipState& chip);

}  // namespace lasiq
