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

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lasiq {

class MissingInputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Shortest-round-trip decimal formatting; used for every numeric cell we
/// write so artifacts are byte-stable across runs.
std::string format_double(double v);

std::string read_text_file(const std::string& path);  // MissingInputError if absent
void write_text_file(const std::string& path, const std::string& content);

/// Minimal CSV: first row is a header, cells hold no quoting or embedded
/// commas (all our schemas are numeric plus bare identifiers).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
    int require_column(const std::string& name) const;  // SchemaError when absent
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);
std::string to_csv(const CsvTable& table);

/// Column helpers for the two-column (qubit_id, value) tables used across
/// the CLI.
std::unordered_map<int, double> read_id_value_csv(const std::string& path,
                                                  const std::string& value_column);

/// Parses "lo:hi:step" into an inclusive ascending grid.
std::vector<double> parse_grid(const std::string& grid_spec);

}  // namespace lasiq
