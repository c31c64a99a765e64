#pragma once

#include <optional>
#include <string>
#include <vector>

namespace imbtk::csv {

/// A CSV file as raw text: one header row plus data rows, all cells kept as
/// strings. Higher layers decide which columns are numeric.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t columns() const { return header.size(); }

    /// Index of a named column, or nullopt. Throws on duplicates.
    std::optional<std::size_t> find_column(const std::string& name) const;
};

Table read_file(const std::string& path);
Table read_string(const std::string& text);

void write_file(const std::string& path, const Table& table);
std::string write_string(const Table& table);

/// Shortest decimal form that round-trips the exact double value.
std::string format_double(double value);

/// Strict double parse of a whole cell (leading/trailing blanks allowed).
/// Returns nullopt for anything else, including empty cells.
std::optional<double> parse_double(const std::string& cell);

}  // namespace imbtk::csv
