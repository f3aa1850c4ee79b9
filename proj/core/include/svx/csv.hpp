#pragma once

#include <string>
#include <vector>

namespace svx {

/// Reads a one-column numeric CSV. An optional first line holding the
/// header `y` (bare or quoted) is skipped; every other line must parse as
/// one finite number. Malformed rows raise InputError naming the line.
std::vector<double> read_series_csv(const std::string& path);

/// Writes a numeric table with a header row. Values are formatted %.12g,
/// which keeps output byte-stable across platforms and thread counts.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// One CSV cell in the canonical %.12g format.
std::string csv_number(double v);

}  // namespace svx
