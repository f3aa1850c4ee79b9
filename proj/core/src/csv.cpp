#include "svx/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "svx/errors.hpp"

namespace svx {

namespace {

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double* out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    return false;
  *out = v;
  return true;
}

}  // namespace

std::vector<double> read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  std::vector<double> out;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip(raw);
    if (line.empty()) {
      if (in.peek() == EOF) break;  // trailing newline
      throw InputError(path + " line " + std::to_string(line_no) +
                       ": empty row");
    }
    if (line_no == 1 && (line == "y" || line == "\"y\"")) continue;
    double v = 0.0;
    if (!parse_number(line, &v))
      throw InputError(path + " line " + std::to_string(line_no) +
                       ": expected one number, got '" + line + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError(path + ": no data rows");
  return out;
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw NumericError("csv row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_number(row[i]);
    out << "\n";
  }
  if (!out) throw InputError("write failed: " + path);
}

}  // namespace svx
