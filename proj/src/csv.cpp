#include "flr/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "flr/errors.hpp"

namespace flr {

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double parse_cell(const std::string& cell, size_t row, size_t col, const std::string& file) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || begin == end) {
        throw ParseError(file + ": malformed numeric cell '" + cell + "' at row " +
                         std::to_string(row) + ", column " + std::to_string(col));
    }
    return value;
}

}  // namespace

std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    size_t row_idx = 0;
    while (std::getline(in, line)) {
        ++row_idx;
        if (row_idx == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);  // UTF-8 BOM
        line = strip_cr(line);
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        size_t col_idx = 0;
        while (std::getline(ss, cell, ',')) {
            ++col_idx;
            row.push_back(parse_cell(cell, row_idx, col_idx, path.filename().string()));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(path.filename().string() + ": ragged row " + std::to_string(row_idx) +
                             " has " + std::to_string(row.size()) + " cells, expected " +
                             std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path.filename().string() + ": no data rows");
    return rows;
}

std::vector<double> read_numeric_column(const std::filesystem::path& path) {
    auto rows = read_numeric_csv(path);
    std::vector<double> out;
    out.reserve(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != 1) {
            throw ParseError(path.filename().string() + ": expected one value per row, row " +
                             std::to_string(r + 1) + " has " + std::to_string(rows[r].size()));
        }
        out.push_back(rows[r][0]);
    }
    return out;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

void write_numeric_csv(const std::filesystem::path& path,
                       const std::vector<std::vector<double>>& rows, int significant_digits) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path.string());
    char buf[48];
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, row[c]);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace flr
