#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "quint/errors.hpp"
#include "quint/quaternion.hpp"

// Flat key-value experiment configs:
//
//   # comment
//   mode = simulate
//   scatterer1_magnitude_sqrt_barn = 1.0
//
// One "key = value" per line, '#' starts a comment, keys are unique.
// Every physical quantity carries an explicit unit suffix in its key
// (_barn, _deg, _inv_angstrom, ...); see docs/config.md for the full list.
// Lookups are tracked so a finished reader can reject unknown (misspelled)
// keys as schema errors.

namespace quint {

class Config {
public:
  Config() = default;

  static Config parse(std::istream& in) {
    Config cfg;
    std::string raw;
    long line = 0;
    while (std::getline(in, raw)) {
      ++line;
      std::string_view sv = raw;
      if (const auto hash = sv.find('#'); hash != std::string_view::npos)
        sv = sv.substr(0, hash);
      sv = trim(sv);
      if (sv.empty()) continue;
      const auto eq = sv.find('=');
      if (eq == std::string_view::npos)
        throw ParseError("expected 'key = value'", line);
      const std::string key{trim(sv.substr(0, eq))};
      const std::string value{trim(sv.substr(eq + 1))};
      if (key.empty()) throw ParseError("empty key", line);
      if (value.empty()) throw ParseError("empty value for '" + key + "'", line);
      if (!cfg.entries_.emplace(key, value).second)
        throw ParseError("duplicate key '" + key + "'", line);
    }
    return cfg;
  }

  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    Config cfg = parse(in);
    cfg.source_path_ = path;
    return cfg;
  }

  bool has(const std::string& key) const {
    return entries_.count(key) != 0;
  }

  std::string get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
      throw SchemaError("missing required config key '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  std::optional<std::string> opt_string(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return get_string(key);
  }

  double get_double(const std::string& key) const {
    return to_double(key, get_string(key));
  }

  std::optional<double> opt_double(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return get_double(key);
  }

  std::int64_t get_int(const std::string& key) const {
    const std::string v = get_string(key);
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
      throw SchemaError("config key '" + key + "' is not an integer: '" + v +
                        "'");
    return out;
  }

  std::optional<std::int64_t> opt_int(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return get_int(key);
  }

  bool get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw SchemaError("config key '" + key + "' is not a boolean: '" + v +
                      "'");
  }

  // "i", "j", "k", or a comma-separated triple, normalized.
  PureAxis get_axis(const std::string& key) const {
    const std::string v = get_string(key);
    if (v == "i") return axis_i;
    if (v == "j") return axis_j;
    if (v == "k") return axis_k;
    double comp[3] = {0.0, 0.0, 0.0};
    std::size_t start = 0, n = 0;
    for (std::size_t idx = 0; idx <= v.size(); ++idx) {
      if (idx == v.size() || v[idx] == ',') {
        if (n >= 3)
          throw SchemaError("axis '" + key + "' has more than 3 components");
        comp[n++] = to_double(key, std::string{trim(
            std::string_view(v).substr(start, idx - start))});
        start = idx + 1;
      }
    }
    if (n != 3)
      throw SchemaError("axis '" + key + "' must be i, j, k or 'x,y,z'");
    try {
      return make_axis(comp[0], comp[1], comp[2]);
    } catch (const ValueError&) {
      throw SchemaError("axis '" + key + "' has zero length");
    }
  }

  PureAxis get_axis_or(const std::string& key, const PureAxis& fallback) const {
    if (!has(key)) return fallback;
    return get_axis(key);
  }

  // Call once a mode has read everything it understands.
  void reject_unknown_keys() const {
    for (const auto& [key, value] : entries_)
      if (!used_.count(key))
        throw SchemaError("unknown config key '" + key + "'");
  }

  const std::string& source_path() const { return source_path_; }

private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                          s.front() == '\r'))
      s.remove_prefix(1);
    while (!s.empty() &&
           (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  }

  static double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
      throw SchemaError("config key '" + key + "' is not a number: '" + v +
                        "'");
    return out;
  }

  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> used_;
  std::string source_path_;
};

// Unit conversions applied at the config/CLI boundary; the library works
// in barn-derived units and radians throughout.
namespace units {

inline constexpr double deg_to_rad = 0.017453292519943295;

// 1 angstrom = 1e4 sqrt(barn), so k [1/sqrt(barn)] = 1e-4 k [1/angstrom].
inline constexpr double inv_angstrom_to_inv_sqrt_barn = 1e-4;

// 1 cm = 1e12 sqrt(barn).
inline constexpr double cm_to_sqrt_barn = 1e12;

// 1 cm^-3 = 1e-36 barn^(-3/2).
inline constexpr double per_cm3_to_per_barn32 = 1e-36;

}  // namespace units

}  // namespace quint
