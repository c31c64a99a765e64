#include "imbtk/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace imbtk::csv {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && (s[begin] == ' ' || s[begin] == '\t' || s[begin] == '\r')) ++begin;
    while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r')) --end;
    return s.substr(begin, end - begin);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

Table read_stream(std::istream& in) {
    Table table;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("CSV is empty (no header row)");
    }
    table.header = split_line(line);
    if (table.header.empty()) {
        throw std::runtime_error("CSV header row has no columns");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != table.header.size()) {
            throw std::runtime_error("CSV row " + std::to_string(table.rows.size() + 1) +
                                     " (line " + std::to_string(line_no) + ") has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

}  // namespace

std::optional<std::size_t> Table::find_column(const std::string& name) const {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            if (found) {
                throw std::runtime_error("duplicate column '" + name + "' in CSV header");
            }
            found = i;
        }
    }
    return found;
}

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open CSV file: " + path);
    }
    return read_stream(in);
}

Table read_string(const std::string& text) {
    std::istringstream in(text);
    return read_stream(in);
}

std::string write_string(const Table& table) {
    std::string out;
    auto append_row = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    append_row(table.header);
    for (const auto& row : table.rows) append_row(row);
    return out;
}

void write_file(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    out << write_string(table);
    if (!out) {
        throw std::runtime_error("failed writing output file: " + path);
    }
}

std::string format_double(double value) {
    char buf[64];
    auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

std::optional<double> parse_double(const std::string& cell) {
    const std::string t = trim(cell);
    if (t.empty()) return std::nullopt;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (*first == '+') ++first;  // from_chars rejects a leading plus
    double value = 0.0;
    auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc() || result.ptr != last) return std::nullopt;
    return value;
}

}  // namespace imbtk::csv
