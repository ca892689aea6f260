#pragma once

#include "powfrac/error.hpp"
#include "powfrac/grid.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace powfrac::csv {

/// Shortest representation that parses back to the same double (at most 17
/// significant digits).
[[nodiscard]] inline std::string format(double x) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    (void)ec;
    return std::string(buf.data(), ptr);
}

[[nodiscard]] inline std::string format(const std::optional<double>& x) {
    return x ? format(*x) : std::string();
}

struct Table {
    std::vector<std::string> header;
    /// Empty cells are std::nullopt.
    std::vector<std::vector<std::optional<double>>> rows;
};

inline void write(std::ostream& out, const Table& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        out << (i ? "," : "") << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format(row[i]);
        }
        out << '\n';
    }
}

[[nodiscard]] inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) {
            return cells;
        }
        start = comma + 1;
    }
}

[[nodiscard]] inline Table read(std::istream& in) {
    Table table;
    std::string line;
    if (!std::getline(in, line)) {
        throw DomainError("csv: missing header row");
    }
    for (auto cell : split(line)) {
        table.header.emplace_back(cell);
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != table.header.size()) {
            throw DomainError("csv: line " + std::to_string(line_no) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(table.header.size()));
        }
        auto& row = table.rows.emplace_back();
        for (auto cell : cells) {
            if (cell.empty()) {
                row.emplace_back();
                continue;
            }
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size()) {
                throw DomainError("csv: line " + std::to_string(line_no) + ": bad number '" +
                                  std::string(cell) + "'");
            }
            row.emplace_back(v);
        }
    }
    return table;
}

/// Columns t,y and, when an exact solution is attached, exact,error.
[[nodiscard]] inline Table trajectory_table(const Trajectory& tr) {
    Table table;
    table.header = {"t", "y"};
    if (tr.exact) {
        table.header.insert(table.header.end(), {"exact", "error"});
    }
    for (std::size_t k = 0; k < tr.values.size(); ++k) {
        auto& row = table.rows.emplace_back();
        row.emplace_back(tr.grid.node(k));
        row.emplace_back(tr.values[k]);
        if (tr.exact) {
            row.emplace_back((*tr.exact)[k]);
            row.emplace_back((*tr.pointwise_error)[k]);
        }
    }
    return table;
}

}  // namespace powfrac::csv
