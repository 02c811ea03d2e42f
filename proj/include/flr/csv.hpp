#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace flr {

// Comma-separated numeric table, decimal point, LF or CRLF line ends.
// Parse failures throw ParseError naming the 1-based row/column.
std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path);

// One value per row.
std::vector<double> read_numeric_column(const std::filesystem::path& path);

// Report tables use the default 9 significant digits; data exports pass 17
// so values survive a round trip.
void write_numeric_csv(const std::filesystem::path& path,
                       const std::vector<std::vector<double>>& rows,
                       int significant_digits = 9);

// Formats with 9 significant digits, matching report output.
std::string format_double(double x);

}  // namespace flr
