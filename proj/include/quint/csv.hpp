#pragma once

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "quint/errors.hpp"
#include "quint/format.hpp"
#include "quint/interference.hpp"

// Cross-section files: header "id,sigma,err" then one row per channel,
// id in {1,2,3,12,23,31,123}, sigma in barn, err optional. The 123 row is
// optional; everything else is required. Values are written with 17
// significant digits so emit/ingest round-trips are bit exact.

namespace quint {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view tok, long line) {
  tok = trim(tok);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("cannot parse number '" + std::string(tok) + "'", line);
  return v;
}

}  // namespace detail

inline CrossSectionSet ingest_cross_sections(std::istream& in) {
  static constexpr std::array<std::string_view, 7> ids{"1",  "2",  "3", "12",
                                                       "23", "31", "123"};
  std::array<std::optional<double>, 7> sigma;
  std::array<std::optional<double>, 7> err;

  std::string raw;
  long line = 0;
  bool saw_header = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view sv = detail::trim(raw);
    if (sv.empty()) continue;
    if (!saw_header) {
      std::string squeezed;
      for (char c : sv)
        if (c != ' ' && c != '\t') squeezed += c;
      if (squeezed != "id,sigma,err" && squeezed != "id,sigma")
        throw ParseError("expected header 'id,sigma,err'", line);
      saw_header = true;
      continue;
    }

    std::array<std::string_view, 3> field{};
    std::size_t nfields = 0, start = 0;
    for (std::size_t i = 0; i <= sv.size(); ++i) {
      if (i == sv.size() || sv[i] == ',') {
        if (nfields >= 3) throw ParseError("too many fields", line);
        field[nfields++] = sv.substr(start, i - start);
        start = i + 1;
      }
    }
    if (nfields < 2) throw ParseError("expected 'id,sigma[,err]'", line);

    const std::string_view id = detail::trim(field[0]);
    std::size_t slot = ids.size();
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (id == ids[i]) slot = i;
    if (slot == ids.size())
      throw SchemaError("unknown cross-section id '" + std::string(id) + "'");
    if (sigma[slot])
      throw SchemaError("duplicate cross-section id '" + std::string(id) +
                        "'");

    const double s = detail::parse_double(field[1], line);
    if (!std::isfinite(s) || s < 0.0)
      throw ValueError("cross section for id '" + std::string(id) +
                       "' must be finite and >= 0");
    sigma[slot] = s;

    if (nfields == 3 && !detail::trim(field[2]).empty()) {
      const double e = detail::parse_double(field[2], line);
      if (!std::isfinite(e) || e < 0.0)
        throw ValueError("standard error for id '" + std::string(id) +
                         "' must be finite and >= 0");
      err[slot] = e;
    }
  }
  if (!saw_header) throw ParseError("empty file, expected 'id,sigma,err'", 1);

  for (std::size_t i = 0; i < 6; ++i)
    if (!sigma[i])
      throw SchemaError("missing required cross-section id '" +
                        std::string(ids[i]) + "'");

  CrossSectionSet set;
  set.sigma1 = *sigma[0];
  set.sigma2 = *sigma[1];
  set.sigma3 = *sigma[2];
  set.sigma12 = *sigma[3];
  set.sigma23 = *sigma[4];
  set.sigma31 = *sigma[5];
  set.sigma123 = sigma[6];
  set.err1 = err[0];
  set.err2 = err[1];
  set.err3 = err[2];
  set.err12 = err[3];
  set.err23 = err[4];
  set.err31 = err[5];
  set.err123 = err[6];
  return set;
}

inline CrossSectionSet ingest_cross_sections(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return ingest_cross_sections(in);
}

inline void emit_cross_sections(std::ostream& out, const CrossSectionSet& s) {
  const auto row = [&out](std::string_view id, double sigma,
                          const std::optional<double>& err) {
    out << id << ',' << detail::format17(sigma) << ',';
    if (err) out << detail::format17(*err);
    out << '\n';
  };
  out << "id,sigma,err\n";
  row("1", s.sigma1, s.err1);
  row("2", s.sigma2, s.err2);
  row("3", s.sigma3, s.err3);
  row("12", s.sigma12, s.err12);
  row("23", s.sigma23, s.err23);
  row("31", s.sigma31, s.err31);
  if (s.sigma123) row("123", *s.sigma123, s.err123);
}

inline void emit_cross_sections(const std::string& path,
                                const CrossSectionSet& s) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  emit_cross_sections(out, s);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace quint
