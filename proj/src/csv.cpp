#include "piezobeam/csv.hpp"

#include <charconv>
#include <cmath>

#include "piezobeam/errors.hpp"

namespace piezobeam {

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        out.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

CsvCell parse_cell(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (!s.empty() && res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
    return std::string(s);
}

}  // namespace

std::vector<double> CsvTable::column(std::string_view name) const {
    std::size_t index = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) index = i;
    }
    if (index == header.size()) throw Error(ErrorCode::OutOfDomain, "no CSV column " + std::string(name));
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        const double* v = std::get_if<double>(&row[index]);
        if (!v) throw Error(ErrorCode::OutOfDomain, "CSV column " + std::string(name) + " is not numeric");
        out.push_back(*v);
    }
    return out;
}

std::string format_csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string write_csv(const CsvTable& table) {
    std::string out;
    for (const auto& c : table.comments) out += "# " + c + '\n';
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i > 0) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            if (const double* v = std::get_if<double>(&row[i])) {
                out += format_csv_number(*v);
            } else {
                out += std::get<std::string>(row[i]);
            }
        }
        out += '\n';
    }
    return out;
}

CsvTable read_csv(std::string_view text) {
    CsvTable table;
    bool have_header = false;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (have_header) throw Error(ErrorCode::ParseError, "comment after the header, line " + std::to_string(line_no));
            line.remove_prefix(1);
            if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
            table.comments.emplace_back(line);
            continue;
        }
        const auto cells = split(line);
        if (!have_header) {
            for (auto c : cells) table.header.emplace_back(c);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw Error(ErrorCode::ParseError, "CSV line " + std::to_string(line_no) + " has " +
                                                   std::to_string(cells.size()) + " cells, expected " +
                                                   std::to_string(table.header.size()));
        }
        std::vector<CsvCell> row;
        row.reserve(cells.size());
        for (auto c : cells) row.push_back(parse_cell(c));
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw Error(ErrorCode::ParseError, "CSV has no header row");
    return table;
}

}  // namespace piezobeam
