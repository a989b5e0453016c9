#pragma once

#include <map>
#include <string>
#include <vector>

#include "warplab/rational.hpp"

namespace warplab {

/// Scalar or list value of the nested key-value config format.
/// Numbers are kept exact: bare tokens like 3, 2.5 and 1/16 all parse to
/// rationals.
struct ConfigValue {
  enum class Kind { string, rational, boolean, list };
  Kind kind = Kind::string;
  std::string str;
  Rat rational;
  bool boolean = false;
  std::vector<ConfigValue> items;

  const std::string& as_string() const;
  const Rat& as_rational() const;
  long long as_integer() const;
  bool as_boolean() const;
  const std::vector<ConfigValue>& as_list() const;
};

struct ConfigTable {
  std::map<std::string, ConfigValue> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  const ConfigValue& at(const std::string& key) const;
  const ConfigValue* find(const std::string& key) const;
  long long integer_or(const std::string& key, long long fallback) const;
  Rat rational_or(const std::string& key, Rat fallback) const;
  std::string string_or(const std::string& key, std::string fallback) const;
  bool boolean_or(const std::string& key, bool fallback) const;
};

/// Parsed config: top-level keys, named [table] sections, and ordered
/// [[array]] sections.
struct Config {
  ConfigTable globals;
  std::map<std::string, ConfigTable> tables;
  std::vector<std::pair<std::string, ConfigTable>> array_tables;

  const ConfigTable& table(const std::string& name) const;
  std::vector<const ConfigTable*> array(const std::string& name) const;

  static Config parse(const std::string& text);
  static Config parse_file(const std::string& path);
};

struct ConfigError : std::runtime_error {
  ConfigError(int line, const std::string& what)
      : std::runtime_error("config line " + std::to_string(line) + ": " + what),
        line(line) {}
  int line;
};

}  // namespace warplab
