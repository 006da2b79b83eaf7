#pragma once

#include <string>
#include <vector>

#include "odmrsim/errors.hpp"

namespace odmrsim {

/// Canonical number formatting for all emitted tables: 9 significant digits,
/// period decimal separator, locale-independent.
std::string format_double(double v);

/// Comma-delimited table with a header row and LF line endings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(const std::vector<std::string>& cells);
    std::string to_string() const;
    void write(const std::string& path) const;
};

/// Numeric CSV reader. Throws CsvError with the 1-based line number on
/// malformed input. Cells are parsed as doubles except in `text_columns`.
struct ParsedCsv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a named column; throws CsvError(1, ...) if missing.
    int column(const std::string& name) const;
};

ParsedCsv read_numeric_csv(const std::string& path);

}  // namespace odmrsim
