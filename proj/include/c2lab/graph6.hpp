#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "c2lab/graph.hpp"

namespace c2lab {

struct Graph6Error : std::runtime_error {
  explicit Graph6Error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
inline Graph6Error g6_error(const std::string& msg, size_t byte_offset) {
  return Graph6Error("graph6: " + msg + " at byte " + std::to_string(byte_offset));
}
}  // namespace detail

// graph6 for n <= 62: one length byte (n + 63), then the upper triangle of the
// adjacency matrix in column order (0,1),(0,2),(1,2),(0,3),... packed 6 bits per
// byte, most significant bit first, each byte offset by 63.
inline Graph parse_graph6(std::string_view s) {
  constexpr std::string_view header = ">>graph6<<";
  if (s.substr(0, header.size()) == header) s.remove_prefix(header.size());
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) throw detail::g6_error("empty input", 0);
  for (size_t i = 0; i < s.size(); ++i)
    if (s[i] < 63 || s[i] > 126) throw detail::g6_error("character out of range", i);
  int n = s[0] - 63;
  if (n == 63) throw detail::g6_error("multi-byte vertex counts (n > 62) unsupported", 0);
  size_t bits = static_cast<size_t>(n) * (n - 1) / 2;
  size_t need = 1 + (bits + 5) / 6;
  if (s.size() < need) throw detail::g6_error("truncated adjacency data", s.size());
  if (s.size() > need) throw detail::g6_error("unexpected extra data", need);
  std::vector<std::pair<int, int>> pairs;
  size_t bit = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i, ++bit)
      if ((s[1 + bit / 6] - 63) & (0x20 >> (bit % 6))) pairs.emplace_back(i, j);
  for (; bit % 6 != 0; ++bit)
    if ((s[1 + bit / 6] - 63) & (0x20 >> (bit % 6)))
      throw detail::g6_error("nonzero trailing padding bits", 1 + bit / 6);
  return Graph(n, pairs);
}

inline std::string encode_graph6(const Graph& g) {
  int n = g.vertex_count();
  if (n > 62) throw Graph6Error("graph6: more than 62 vertices unsupported");
  if (!g.simple()) throw Graph6Error("graph6: graph must be simple");
  std::string out(1 + (static_cast<size_t>(n) * (n - 1) / 2 + 5) / 6, 63);
  out[0] = static_cast<char>(n + 63);
  size_t bit = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i, ++bit)
      if (g.adjacent(i, j)) out[1 + bit / 6] += static_cast<char>(0x20 >> (bit % 6));
  return out;
}

inline std::vector<Graph> read_graph6_lines(std::istream& in) {
  std::vector<Graph> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    out.push_back(parse_graph6(line));
  }
  return out;
}

inline std::vector<Graph> read_graph6_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_graph6_lines(in);
}

}  // namespace c2lab
