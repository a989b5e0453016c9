#include "warplab/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace warplab {

const std::string& ConfigValue::as_string() const {
  if (kind != Kind::string)
    throw std::runtime_error("config value is not a string");
  return str;
}

const Rat& ConfigValue::as_rational() const {
  if (kind == Kind::rational) return rational;
  if (kind == Kind::string) {
    // quoted rationals ("1/2") are accepted wherever numbers are expected
    auto* self = const_cast<ConfigValue*>(this);
    self->rational = parse_rat(str);
    self->kind = Kind::rational;
    return rational;
  }
  throw std::runtime_error("config value is not a number");
}

long long ConfigValue::as_integer() const {
  const Rat& r = as_rational();
  if (r.denominator() != 1)
    throw std::runtime_error("config value is not an integer");
  return to_ll(r.numerator());
}

bool ConfigValue::as_boolean() const {
  if (kind != Kind::boolean)
    throw std::runtime_error("config value is not a boolean");
  return boolean;
}

const std::vector<ConfigValue>& ConfigValue::as_list() const {
  if (kind != Kind::list)
    throw std::runtime_error("config value is not a list");
  return items;
}

const ConfigValue& ConfigTable::at(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end())
    throw std::runtime_error("config: missing key '" + key + "'");
  return it->second;
}

const ConfigValue* ConfigTable::find(const std::string& key) const {
  auto it = values.find(key);
  return it == values.end() ? nullptr : &it->second;
}

long long ConfigTable::integer_or(const std::string& key, long long fallback) const {
  auto* v = find(key);
  return v ? v->as_integer() : fallback;
}

Rat ConfigTable::rational_or(const std::string& key, Rat fallback) const {
  auto* v = find(key);
  return v ? v->as_rational() : fallback;
}

std::string ConfigTable::string_or(const std::string& key,
                                   std::string fallback) const {
  auto* v = find(key);
  return v ? v->as_string() : fallback;
}

bool ConfigTable::boolean_or(const std::string& key, bool fallback) const {
  auto* v = find(key);
  return v ? v->as_boolean() : fallback;
}

const ConfigTable& Config::table(const std::string& name) const {
  auto it = tables.find(name);
  if (it == tables.end())
    throw std::runtime_error("config: missing table [" + name + "]");
  return it->second;
}

std::vector<const ConfigTable*> Config::array(const std::string& name) const {
  std::vector<const ConfigTable*> out;
  for (const auto& [n, t] : array_tables)
    if (n == name) out.push_back(&t);
  return out;
}

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  char take() {
    char c = text[pos++];
    if (c == '\n') ++line;
    return c;
  }
  void skip_inline_ws() {
    while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
  }
};

bool is_bare_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.' || c == '/' || c == '+';
}

ConfigValue parse_scalar_token(const std::string& token, int line) {
  ConfigValue v;
  if (token == "true" || token == "false") {
    v.kind = ConfigValue::Kind::boolean;
    v.boolean = token == "true";
    return v;
  }
  // numeric forms: integer, decimal, p/q
  bool numeric = !token.empty();
  for (std::size_t i = 0; i < token.size() && numeric; ++i) {
    char c = token[i];
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
          c == '.' || c == '/'))
      numeric = false;
  }
  if (numeric && token.find_first_of("0123456789") != std::string::npos) {
    try {
      v.kind = ConfigValue::Kind::rational;
      v.rational = parse_rat(token);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(line, "cannot parse number '" + token + "'");
    }
  }
  throw ConfigError(line, "bare token '" + token + "' is not a value");
}

ConfigValue parse_value(Cursor& cur);

ConfigValue parse_list(Cursor& cur) {
  ConfigValue v;
  v.kind = ConfigValue::Kind::list;
  cur.take();  // '['
  for (;;) {
    cur.skip_inline_ws();
    while (!cur.done() && (cur.peek() == '\n' || cur.peek() == '\r')) {
      cur.take();
      cur.skip_inline_ws();
    }
    if (cur.done()) throw ConfigError(cur.line, "unterminated list");
    if (cur.peek() == ']') {
      cur.take();
      return v;
    }
    v.items.push_back(parse_value(cur));
    cur.skip_inline_ws();
    while (!cur.done() && (cur.peek() == '\n' || cur.peek() == '\r')) {
      cur.take();
      cur.skip_inline_ws();
    }
    if (!cur.done() && cur.peek() == ',') cur.take();
  }
}

ConfigValue parse_value(Cursor& cur) {
  cur.skip_inline_ws();
  if (cur.done()) throw ConfigError(cur.line, "expected a value");
  char c = cur.peek();
  if (c == '[') return parse_list(cur);
  if (c == '"') {
    cur.take();
    ConfigValue v;
    v.kind = ConfigValue::Kind::string;
    while (!cur.done() && cur.peek() != '"') {
      char ch = cur.take();
      if (ch == '\\' && !cur.done()) ch = cur.take();
      v.str += ch;
    }
    if (cur.done()) throw ConfigError(cur.line, "unterminated string");
    cur.take();
    return v;
  }
  std::string token;
  while (!cur.done() && is_bare_char(cur.peek())) token += cur.take();
  if (token.empty())
    throw ConfigError(cur.line, std::string("unexpected character '") + c + "'");
  return parse_scalar_token(token, cur.line);
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  Cursor cur{text};
  ConfigTable* target = &cfg.globals;
  while (!cur.done()) {
    cur.skip_inline_ws();
    if (cur.done()) break;
    char c = cur.peek();
    if (c == '\n' || c == '\r') {
      cur.take();
      continue;
    }
    if (c == '#') {
      while (!cur.done() && cur.peek() != '\n') cur.take();
      continue;
    }
    if (c == '[') {
      cur.take();
      bool array = !cur.done() && cur.peek() == '[';
      if (array) cur.take();
      std::string name;
      while (!cur.done() && cur.peek() != ']') name += cur.take();
      if (cur.done()) throw ConfigError(cur.line, "unterminated section header");
      cur.take();
      if (array) {
        if (cur.done() || cur.peek() != ']')
          throw ConfigError(cur.line, "array section needs ]]");
        cur.take();
        cfg.array_tables.emplace_back(name, ConfigTable{});
        target = &cfg.array_tables.back().second;
      } else {
        target = &cfg.tables[name];
      }
      continue;
    }
    // key = value
    std::string key;
    while (!cur.done() && is_bare_char(cur.peek())) key += cur.take();
    cur.skip_inline_ws();
    if (key.empty() || cur.done() || cur.peek() != '=')
      throw ConfigError(cur.line, "expected 'key = value'");
    cur.take();
    int line = cur.line;
    ConfigValue value = parse_value(cur);
    if (!target->values.emplace(key, std::move(value)).second)
      throw ConfigError(line, "duplicate key '" + key + "'");
    cur.skip_inline_ws();
    if (!cur.done() && cur.peek() == '#')
      while (!cur.done() && cur.peek() != '\n') cur.take();
    if (!cur.done() && cur.peek() != '\n' && cur.peek() != '\r')
      throw ConfigError(cur.line, "trailing content after value");
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace warplab
