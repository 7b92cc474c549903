#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace relutrain {

using CsvCell = std::variant<std::string, long, double>;

/// Doubles are rendered with 17 significant digits so re-runs compare
/// byte-identically.
inline std::string csv_format(const CsvCell& cell) {
    if (std::holds_alternative<std::string>(cell)) return std::get<std::string>(cell);
    if (std::holds_alternative<long>(cell)) return std::to_string(std::get<long>(cell));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(cell));
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<CsvCell>> rows;

    void add_row(std::vector<CsvCell> cells) {
        if (cells.size() != header.size())
            throw std::invalid_argument("csv: row width does not match header");
        rows.push_back(std::move(cells));
    }

    std::string to_string() const {
        std::ostringstream out;
        for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
        out << '\n';
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_format(row[i]);
            out << '\n';
        }
        return out.str();
    }

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("csv: cannot open " + path);
        f << to_string();
    }
};

inline std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace relutrain
