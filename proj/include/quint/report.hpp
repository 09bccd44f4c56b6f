#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "quint/errors.hpp"
#include "quint/format.hpp"

// Run report with two renderings of the same entries: a human table and a
// flat machine form. Machine lines are "key = value" with the unit folded
// into the key suffix, so a report written to disk parses with the same
// reader as a run configuration.

namespace quint {

namespace detail {

inline std::string unit_suffix(std::string_view unit) {
  if (unit.empty()) return {};
  std::string s;
  s.reserve(unit.size() + 1);
  s.push_back('_');
  for (std::size_t i = 0; i < unit.size(); ++i) {
    const char c = unit[i];
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
        (c >= '0' && c <= '9')) {
      s.push_back(c);
    } else if (c == '/') {
      s += "_per_";
    } else if (c == '^') {
      // exponent digits follow directly: barn^2 -> _barn2
    } else if (!s.empty() && s.back() != '_') {
      s.push_back('_');
    }
  }
  while (!s.empty() && s.back() == '_') s.pop_back();
  return s == "_" ? std::string{} : s;
}

// FNV-1a, used to stamp reports with a digest of the inputs that made them.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

}  // namespace detail

enum class ReportFormat { Table, Machine };

inline ReportFormat parse_report_format(std::string_view name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "machine") return ReportFormat::Machine;
  throw ValueError("unknown report format: " + std::string(name));
}

class Report {
 public:
  explicit Report(std::string title) : title_(std::move(title)) {}

  void section(std::string name) {
    entries_.push_back({Kind::Section, std::move(name), {}, {}, 0.0, 0});
  }

  void add(std::string key, double value, std::string unit = {}) {
    entries_.push_back(
        {Kind::Number, std::move(key), {}, std::move(unit), value, 0});
  }

  void add_int(std::string key, std::int64_t value, std::string unit = {}) {
    entries_.push_back(
        {Kind::Integer, std::move(key), {}, std::move(unit), 0.0, value});
  }

  void add_text(std::string key, std::string value) {
    entries_.push_back(
        {Kind::Text, std::move(key), std::move(value), {}, 0.0, 0});
  }

  void write(std::ostream& out, ReportFormat format) const {
    format == ReportFormat::Table ? write_table(out) : write_machine(out);
  }

  void write_table(std::ostream& out) const {
    out << "# " << title_ << '\n';
    std::size_t width = 0;
    for (const Entry& e : entries_)
      if (e.kind != Kind::Section && e.key.size() > width)
        width = e.key.size();
    for (const Entry& e : entries_) {
      if (e.kind == Kind::Section) {
        out << '\n' << e.key << '\n';
        for (std::size_t i = 0; i < e.key.size(); ++i) out << '-';
        out << '\n';
        continue;
      }
      out << "  " << e.key << std::string(width - e.key.size() + 2, ' ');
      switch (e.kind) {
        case Kind::Number:
          out << detail::format17(e.number);
          break;
        case Kind::Integer:
          out << e.integer;
          break;
        default:
          out << e.text;
          break;
      }
      if (!e.unit.empty()) out << ' ' << e.unit;
      out << '\n';
    }
  }

  void write_machine(std::ostream& out) const {
    out << "# " << title_ << '\n';
    std::string section;
    for (const Entry& e : entries_) {
      if (e.kind == Kind::Section) {
        section = machine_token(e.key);
        if (!section.empty()) section.push_back('_');
        continue;
      }
      out << section << machine_token(e.key) << detail::unit_suffix(e.unit)
          << " = ";
      switch (e.kind) {
        case Kind::Number:
          out << detail::format17(e.number);
          break;
        case Kind::Integer:
          out << e.integer;
          break;
        default:
          out << e.text;
          break;
      }
      out << '\n';
    }
  }

 private:
  enum class Kind { Section, Number, Integer, Text };

  struct Entry {
    Kind kind;
    std::string key;
    std::string text;
    std::string unit;
    double number;
    std::int64_t integer;
  };

  static std::string machine_token(std::string_view key) {
    std::string s;
    s.reserve(key.size());
    for (const char c : key) {
      if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_') {
        s.push_back(c);
      } else if (c >= 'A' && c <= 'Z') {
        s.push_back(static_cast<char>(c - 'A' + 'a'));
      } else if (!s.empty() && s.back() != '_') {
        s.push_back('_');
      }
    }
    while (!s.empty() && s.back() == '_') s.pop_back();
    return s;
  }

  std::string title_;
  std::vector<Entry> entries_;
};

}  // namespace quint
