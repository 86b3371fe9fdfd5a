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

#include "lasiq/io_util.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lasiq {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    // Shortest representation that round-trips.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingInputError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("short write: " + path);
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

int CsvTable::require_column(const std::string& name) const {
    int c = column(name);
    if (c < 0) throw SchemaError("missing CSV column: " + name);
    return c;
}

static std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    cells.push_back(cell);
    return cells;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto cells = split_row(line);
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != table.header.size())
                throw SchemaError("CSV row width mismatch: " + line);
            table.rows.push_back(std::move(cells));
        }
    }
    if (first) throw SchemaError("empty CSV");
    return table;
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_text_file(path)); }

std::string to_csv(const CsvTable& table) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.header.size(); ++i)
        out << table.header[i] << (i + 1 < table.header.size() ? "," : "\n");
    for (const auto& row : table.rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
    return out.str();
}

std::unordered_map<int, double> read_id_value_csv(const std::string& path,
                                                  const std::string& value_column) {
    CsvTable table = read_csv(path);
    int id_col = table.require_column("qubit_id");
    int val_col = table.require_column(value_column);
    std::unordered_map<int, double> result;
    for (const auto& row : table.rows) {
        try {
            result[std::stoi(row[id_col])] = std::stod(row[val_col]);
        } catch (const std::exception&) {
            throw SchemaError("bad numeric cell in " + path);
        }
    }
    return result;
}

std::vector<double> parse_grid(const std::string& grid_spec) {
    double lo = 0, hi = 0, step = 0;
    if (std::sscanf(grid_spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
        throw std::invalid_argument("grid must be lo:hi:step, got: " + grid_spec);
    if (step <= 0 || hi < lo) throw std::invalid_argument("bad grid: " + grid_spec);
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        double v = lo + i * step;
        if (v > hi + 1e-9 * step) break;
        grid.push_back(v);
    }
    return grid;
}

}  // namespace lasiq
