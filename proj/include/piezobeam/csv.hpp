#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace piezobeam {

/// A numeric or text cell. Numbers are written with 17 significant digits,
/// so reading a written table back reproduces every double exactly.
using CsvCell = std::variant<double, std::string>;

struct CsvTable {
    std::vector<std::string> comments;  ///< written as leading "# ..." lines
    std::vector<std::string> header;
    std::vector<std::vector<CsvCell>> rows;

    bool operator==(const CsvTable&) const = default;

    /// Numeric column by header name; throws OutOfDomain if absent or textual.
    std::vector<double> column(std::string_view name) const;
};

/// Locale-independent, 17 significant digits ("nan", "inf", "-inf" for non-finite values).
std::string format_csv_number(double v);

std::string write_csv(const CsvTable& table);

/// Throws Error(ParseError) on ragged rows or a missing header. Cells that
/// parse completely as numbers become doubles, all others text.
CsvTable read_csv(std::string_view text);

}  // namespace piezobeam
