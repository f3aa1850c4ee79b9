#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace svx {

/// Minimal TOML subset sufficient for experiment configs: [section] tables,
/// key = value pairs with string/bool/integer/float/array values, and #
/// comments. Keys are exposed flattened as "section.key". Parse errors
/// raise ConfigError with the line number.
struct TomlValue {
  enum class Kind { kString, kBool, kInt, kFloat, kArray };
  Kind kind = Kind::kString;
  std::string str;
  bool boolean = false;
  long long integer = 0;
  double real = 0.0;
  std::vector<TomlValue> array;

  double as_double() const;  // promotes integers
};

class TomlDoc {
 public:
  static TomlDoc parse(const std::string& text);
  static TomlDoc parse_file(const std::string& path);

  bool has(const std::string& key) const;
  const TomlValue& at(const std::string& key) const;  // ConfigError if absent

  std::string get_string(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_array(const std::string& key) const;  // empty if absent

  /// All flattened keys, in file order (for unknown-key validation).
  const std::vector<std::string>& keys() const { return order_; }

 private:
  std::map<std::string, TomlValue> values_;
  std::vector<std::string> order_;
};

}  // namespace svx
