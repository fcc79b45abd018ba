#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posetest/error.hpp"
#include "posetest/poset.hpp"

// Text format:
//
//   # comment
//   poset n=5
//   0 < 1
//   1 < 3
//
// The header must be the first non-comment line. Pairs are 0-based and
// may be any generating set; the closure is taken on load. Export writes
// the Hasse cover pairs in sorted order.

namespace posetest {

namespace io_detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::string_view strip_comment(std::string_view s) {
  auto hash = s.find('#');
  if (hash != std::string_view::npos) s = s.substr(0, hash);
  return trim(s);
}

inline bool parse_index(std::string_view s, std::size_t& out) {
  s = trim(s);
  if (s.empty() || s.size() > 18) return false;
  std::size_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  out = v;
  return true;
}

// Shared reader for "<keyword> n=<N>" followed by "a <sep> b" lines.
struct PairFile {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> lines;  // source line of each pair
  std::size_t header_line = 0;
};

inline PairFile read_pairs(
    std::istream& in, const std::string& source, std::string_view keyword, std::string_view sep) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  PairFile file;
  auto& n = file.n;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = strip_comment(line);
    if (body.empty()) continue;
    if (!have_header) {
      std::string prefix = std::string(keyword) + " n=";
      if (body.substr(0, prefix.size()) != prefix || !parse_index(body.substr(prefix.size()), n))
        throw ParseError(source, lineno, "expected header '" + std::string(keyword) + " n=<N>'");
      have_header = true;
      file.header_line = lineno;
      continue;
    }
    auto pos = body.find(sep);
    std::size_t a = 0, b = 0;
    if (pos == std::string_view::npos || !parse_index(body.substr(0, pos), a) ||
        !parse_index(body.substr(pos + sep.size()), b))
      throw ParseError(source, lineno, "expected 'a " + std::string(sep) + " b'");
    if (a >= n || b >= n)
      throw ParseError(source, lineno, "element index out of range for n=" + std::to_string(n));
    if (a == b) throw ParseError(source, lineno, "self-relation " + std::to_string(a));
    file.pairs.emplace_back(a, b);
    file.lines.push_back(lineno);
  }
  if (!have_header) throw ParseError(source, lineno == 0 ? 1 : lineno, "missing header");
  return file;
}

}  // namespace io_detail

inline Poset read_poset(std::istream& in, const std::string& source = "<input>") {
  auto file = io_detail::read_pairs(in, source, "poset", "<");
  try {
    return Poset::from_relations(file.n, file.pairs);
  } catch (const CycleError& e) {
    std::size_t line = file.header_line;
    for (std::size_t i = 0; i < file.pairs.size(); ++i)
      if (file.pairs[i].first == e.element() || file.pairs[i].second == e.element()) {
        line = file.lines[i];
        break;
      }
    throw ParseError(source, line, e.what());
  }
}

inline Poset parse_poset(const std::string& text, const std::string& source = "<string>") {
  std::istringstream in(text);
  return read_poset(in, source);
}

inline Poset load_poset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return read_poset(in, path);
}

inline void write_poset(std::ostream& out, const Poset& p) {
  out << "poset n=" << p.size() << '\n';
  for (auto e : p.hasse()) out << e.lo << " < " << e.hi << '\n';
}

inline std::string format_poset(const Poset& p) {
  std::ostringstream out;
  write_poset(out, p);
  return out.str();
}

/// Hasse diagram in DOT, bottom to top.
inline void write_dot(std::ostream& out, const Poset& p, std::string_view name = "P") {
  out << "digraph " << name << " {\n  rankdir=BT;\n";
  for (std::size_t x = 0; x < p.size(); ++x) out << "  " << x << ";\n";
  for (auto e : p.hasse()) out << "  " << e.lo << " -> " << e.hi << ";\n";
  out << "}\n";
}

}  // namespace posetest
