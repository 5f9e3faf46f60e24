#pragma once

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "slitsim/errors.hpp"

namespace slitsim {

/// Flat key-value scenario file: one `section.key = value` per line,
/// `#` comments, blank lines ignored. Keys carry their unit as a suffix
/// (_m, _mps, _rad, _Jm3, _amu).
class FlatConfig {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static FlatConfig parse_stream(std::istream& in,
                                 const std::string& origin = "<config>") {
    FlatConfig cfg;
    cfg.origin_ = origin;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string s = strip(line);
      if (s.empty() || s[0] == '#') continue;
      const auto eq = s.find('=');
      if (eq == std::string::npos)
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": expected 'key = value'");
      const std::string key = strip(s.substr(0, eq));
      const std::string value = strip(s.substr(eq + 1));
      if (key.empty())
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": empty key");
      if (cfg.entries_.count(key))
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": duplicate key '" + key + "'");
      cfg.entries_[key] = Entry{value, line_no};
    }
    return cfg;
  }

  static FlatConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_stream(in, path);
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string get_string(const std::string& key) {
    const Entry& e = require(key);
    return e.value;
  }

  double get_double(const std::string& key) {
    const Entry& e = require(key);
    return parse_double(key, e);
  }

  double get_double_or(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return get_double(key);
  }

  long long get_int(const std::string& key) {
    const Entry& e = require(key);
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(e.value.c_str(), &end, 10);
    if (errno != 0 || end == e.value.c_str() || *end != '\0')
      throw ConfigError(where(key, e) + ": '" + e.value +
                        "' is not an integer");
    return v;
  }

  long long get_int_or(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    return get_int(key);
  }

  bool get_bool_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Entry& e = require(key);
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    throw ConfigError(where(key, e) + ": expected true/false");
  }

  std::string get_string_or(const std::string& key,
                            const std::string& fallback) {
    if (!has(key)) return fallback;
    return get_string(key);
  }

  std::vector<double> get_double_list(const std::string& key) {
    const Entry& e = require(key);
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = strip(tok);
      if (tok.empty())
        throw ConfigError(where(key, e) + ": empty list element");
      Entry tmp{tok, e.line};
      out.push_back(parse_double(key, tmp));
    }
    if (out.empty()) throw ConfigError(where(key, e) + ": empty list");
    return out;
  }

  /// Throws naming every key that was never consumed (typo protection).
  void reject_unconsumed() const {
    for (const auto& [key, e] : entries_) {
      if (!consumed_.count(key))
        throw ConfigError(where(key, e) + ": unknown key '" + key + "'");
    }
  }

  const std::map<std::string, Entry>& entries() const { return entries_; }
  const std::string& origin() const { return origin_; }

  /// Override or insert a value programmatically (CLI flags, manifests).
  void set(const std::string& key, const std::string& value) {
    entries_[key] = Entry{value, 0};
  }

 private:
  const Entry& require(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end())
      throw ConfigError(origin_ + ": missing required key '" + key + "'");
    consumed_.insert(key);
    return it->second;
  }

  double parse_double(const std::string& key, const Entry& e) const {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (errno != 0 || end == e.value.c_str() || *end != '\0')
      throw ConfigError(where(key, e) + ": '" + e.value + "' is not a number");
    return v;
  }

  std::string where(const std::string& key, const Entry& e) const {
    if (e.line > 0) return origin_ + ":" + std::to_string(e.line);
    return origin_ + " (key '" + key + "')";
  }

  static std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  std::string origin_;
  std::map<std::string, Entry> entries_;
  std::set<std::string> consumed_;
};

}  // namespace slitsim
