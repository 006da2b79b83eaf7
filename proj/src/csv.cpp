#include "odmrsim/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace odmrsim {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != header.size())
        throw DimensionMismatch("row width does not match header");
    rows.push_back(cells);
}

std::string CsvTable::to_string() const {
    std::string out;
    auto append_line = [&out](const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    append_line(header);
    for (const auto& row : rows) append_line(row);
    return out;
}

void CsvTable::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << to_string();
}

int ParsedCsv::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    throw CsvError(1, "missing column '" + name + "'");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ParsedCsv read_numeric_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw CsvError(0, "cannot open " + path);

    ParsedCsv out;
    std::string line;
    int line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (line_no == 1 || out.header.empty()) {
            for (const auto& cell : split_line(stripped)) out.header.push_back(trim(cell));
            continue;
        }
        const auto cells = split_line(stripped);
        if (cells.size() != out.header.size())
            throw CsvError(line_no, "expected " + std::to_string(out.header.size()) +
                                        " cells, got " + std::to_string(cells.size()));
        std::vector<double> row;
        for (const auto& cell : cells) {
            const std::string t = trim(cell);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc() || ptr != t.data() + t.size())
                throw CsvError(line_no, "cannot parse number '" + t + "'");
            row.push_back(v);
        }
        out.rows.push_back(std::move(row));
    }
    if (out.header.empty()) throw CsvError(1, "empty file");
    return out;
}

}  // namespace odmrsim
