#include "svx/toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "svx/errors.hpp"

namespace svx {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      return false;
  return true;
}

TomlValue parse_scalar(const std::string& raw, int line) {
  TomlValue v;
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    v.kind = TomlValue::Kind::kString;
    std::string body = raw.substr(1, raw.size() - 2);
    std::string out;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '\\' && i + 1 < body.size()) {
        char c = body[++i];
        switch (c) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(line, std::string("unknown escape \\") + c);
        }
      } else if (body[i] == '"') {
        fail(line, "unescaped quote in string");
      } else {
        out += body[i];
      }
    }
    v.str = out;
    return v;
  }
  if (raw == "true" || raw == "false") {
    v.kind = TomlValue::Kind::kBool;
    v.boolean = raw == "true";
    return v;
  }
  if (raw == "inf" || raw == "+inf" || raw == "-inf" || raw == "nan") {
    v.kind = TomlValue::Kind::kFloat;
    v.real = raw == "-inf" ? -std::numeric_limits<double>::infinity()
             : raw == "nan" ? std::numeric_limits<double>::quiet_NaN()
                            : std::numeric_limits<double>::infinity();
    return v;
  }
  bool int_like = !raw.empty();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (i == 0 && (c == '+' || c == '-')) continue;
    if (!std::isdigit(static_cast<unsigned char>(c))) int_like = false;
  }
  if (int_like && raw != "+" && raw != "-") {
    v.kind = TomlValue::Kind::kInt;
    errno = 0;
    char* end = nullptr;
    v.integer = std::strtoll(raw.c_str(), &end, 10);
    if (errno != 0 || end != raw.c_str() + raw.size())
      fail(line, "bad integer '" + raw + "'");
    return v;
  }
  char* end = nullptr;
  errno = 0;
  double d = std::strtod(raw.c_str(), &end);
  if (raw.empty() || end != raw.c_str() + raw.size() || errno == ERANGE)
    fail(line, "bad value '" + raw + "'");
  v.kind = TomlValue::Kind::kFloat;
  v.real = d;
  return v;
}

TomlValue parse_value(const std::string& raw, int line) {
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') fail(line, "unterminated array");
    TomlValue v;
    v.kind = TomlValue::Kind::kArray;
    std::string body = raw.substr(1, raw.size() - 2);
    std::string cur;
    bool in_str = false;
    auto flush = [&] {
      std::string item = trim(cur);
      if (!item.empty()) v.array.push_back(parse_scalar(item, line));
      cur.clear();
    };
    for (char c : body) {
      if (c == '"') in_str = !in_str;
      if (c == ',' && !in_str) {
        flush();
        continue;
      }
      cur += c;
    }
    if (in_str) fail(line, "unterminated string in array");
    flush();
    return v;
  }
  return parse_scalar(raw, line);
}

}  // namespace

double TomlValue::as_double() const {
  switch (kind) {
    case Kind::kInt: return static_cast<double>(integer);
    case Kind::kFloat: return real;
    default: throw ConfigError("config value is not numeric");
  }
}

TomlDoc TomlDoc::parse(const std::string& text) {
  TomlDoc doc;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) fail(line_no, "empty section name");
      section = name;
      continue;
    }
    std::size_t eq = std::string::npos;
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_str = !in_str;
      if (line[i] == '=' && !in_str) {
        eq = i;
        break;
      }
    }
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (!valid_key(key)) fail(line_no, "bad key '" + key + "'");
    if (val.empty()) fail(line_no, "missing value for '" + key + "'");
    std::string full = section.empty() ? key : section + "." + key;
    if (doc.values_.count(full)) fail(line_no, "duplicate key '" + full + "'");
    doc.values_[full] = parse_value(val, line_no);
    doc.order_.push_back(full);
  }
  return doc;
}

TomlDoc TomlDoc::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool TomlDoc::has(const std::string& key) const { return values_.count(key) > 0; }

const TomlValue& TomlDoc::at(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

std::string TomlDoc::get_string(const std::string& key,
                                const std::string& fallback) const {
  if (!has(key)) return fallback;
  const TomlValue& v = at(key);
  if (v.kind != TomlValue::Kind::kString)
    throw ConfigError("config key " + key + " must be a string");
  return v.str;
}

long long TomlDoc::get_int(const std::string& key, long long fallback) const {
  if (!has(key)) return fallback;
  const TomlValue& v = at(key);
  if (v.kind != TomlValue::Kind::kInt)
    throw ConfigError("config key " + key + " must be an integer");
  return v.integer;
}

double TomlDoc::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  return at(key).as_double();
}

bool TomlDoc::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const TomlValue& v = at(key);
  if (v.kind != TomlValue::Kind::kBool)
    throw ConfigError("config key " + key + " must be a boolean");
  return v.boolean;
}

std::vector<double> TomlDoc::get_double_array(const std::string& key) const {
  std::vector<double> out;
  if (!has(key)) return out;
  const TomlValue& v = at(key);
  if (v.kind != TomlValue::Kind::kArray)
    throw ConfigError("config key " + key + " must be an array");
  for (const auto& item : v.array) out.push_back(item.as_double());
  return out;
}

}  // namespace svx
