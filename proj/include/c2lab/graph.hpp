#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace c2lab {

// Edges are stored with u <= v; parallel edges and (internally) loops are allowed.
struct Edge {
  int u = 0;
  int v = 0;
  bool loop() const { return u == v; }
};

inline bool operator==(const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }

class Graph {
public:
  Graph() = default;

  // Canonical edge order: lexicographic by (min endpoint, max endpoint),
  // parallel copies keeping their relative input order.
  Graph(int n, const std::vector<std::pair<int, int>>& pairs, bool allow_loops = false,
        std::vector<std::string> labels = {})
      : n_(n), labels_(std::move(labels)) {
    if (n < 0) throw std::invalid_argument("graph: negative vertex count");
    if (!labels_.empty() && static_cast<int>(labels_.size()) != n)
      throw std::invalid_argument("graph: label count does not match vertex count");
    edges_.reserve(pairs.size());
    for (auto [a, b] : pairs) {
      if (a < 0 || a >= n || b < 0 || b >= n)
        throw std::invalid_argument("graph: edge endpoint out of range");
      if (a == b && !allow_loops) throw std::invalid_argument("graph: self-loop not allowed here");
      edges_.push_back({std::min(a, b), std::max(a, b)});
    }
    std::stable_sort(edges_.begin(), edges_.end(),
                     [](const Edge& x, const Edge& y) { return x.u != y.u ? x.u < y.u : x.v < y.v; });
    if (edges_.size() > 64)
      throw std::invalid_argument("graph: more than 64 edges; edge masks are 64-bit");
  }

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::string vertex_name(int v) const {
    return labels_.empty() ? std::to_string(v) : labels_.at(v);
  }

  int degree(int v) const {
    int d = 0;
    for (const Edge& e : edges_) {
      if (e.u == v) ++d;
      if (e.v == v) ++d;  // a loop counts twice
    }
    return d;
  }

  std::vector<int> degree_sequence() const {
    std::vector<int> d(n_, 0);
    for (const Edge& e : edges_) {
      ++d[e.u];
      ++d[e.v];
    }
    return d;
  }

  bool regular(int k) const {
    auto d = degree_sequence();
    return std::all_of(d.begin(), d.end(), [k](int x) { return x == k; });
  }

  bool simple() const {
    for (size_t i = 0; i + 1 < edges_.size(); ++i)
      if (edges_[i] == edges_[i + 1]) return false;
    return std::none_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.loop(); });
  }

  bool adjacent(int a, int b) const {
    Edge want{std::min(a, b), std::max(a, b)};
    return std::any_of(edges_.begin(), edges_.end(), [&](const Edge& e) { return e == want; });
  }

  // Neighbors in increasing order, one entry per incident edge (multigraph aware).
  std::vector<int> neighbors(int v) const {
    std::vector<int> out;
    for (const Edge& e : edges_) {
      if (e.u == v) out.push_back(e.v);
      else if (e.v == v) out.push_back(e.u);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<int> incident_edges(int v) const {
    std::vector<int> out;
    for (int e = 0; e < edge_count(); ++e)
      if (edges_[e].u == v || edges_[e].v == v) out.push_back(e);
    return out;
  }

  bool connected() const {
    if (n_ <= 1) return true;
    std::vector<int> stack{0};
    std::vector<char> seen(n_, 0);
    seen[0] = 1;
    int found = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const Edge& e : edges_) {
        int w = -1;
        if (e.u == v) w = e.v;
        else if (e.v == v) w = e.u;
        if (w >= 0 && !seen[w]) {
          seen[w] = 1;
          ++found;
          stack.push_back(w);
        }
      }
    }
    return found == n_;
  }

private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
};

// Result of deleting vertices: the smaller graph plus index maps back and forth.
struct VertexDeletion {
  Graph g;
  std::vector<int> new_of_old;  // -1 for deleted vertices
  std::vector<int> old_of_new;
  std::vector<int> edge_origin;  // surviving edge -> edge index in the source graph
};

inline VertexDeletion remove_vertices(const Graph& g, std::vector<int> del) {
  std::sort(del.begin(), del.end());
  del.erase(std::unique(del.begin(), del.end()), del.end());
  for (int v : del)
    if (v < 0 || v >= g.vertex_count()) throw std::invalid_argument("remove_vertices: bad vertex");
  VertexDeletion out;
  out.new_of_old.assign(g.vertex_count(), -1);
  int next = 0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (std::binary_search(del.begin(), del.end(), v)) continue;
    out.new_of_old[v] = next++;
    out.old_of_new.push_back(v);
  }
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> origin;
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    int a = out.new_of_old[ed.u], b = out.new_of_old[ed.v];
    if (a < 0 || b < 0) continue;
    pairs.emplace_back(a, b);
    origin.push_back(e);
  }
  std::vector<std::string> labels;
  if (!g.labels().empty())
    for (int v : out.old_of_new) labels.push_back(g.labels()[v]);
  else
    for (int v : out.old_of_new) labels.push_back(std::to_string(v));
  Graph h(next, pairs, true, std::move(labels));
  // remap origins onto the canonical order of h
  std::vector<int> order(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    auto [xu, xv] = std::minmax(pairs[x].first, pairs[x].second);
    auto [yu, yv] = std::minmax(pairs[y].first, pairs[y].second);
    return xu != yu ? xu < yu : xv < yv;
  });
  out.edge_origin.resize(pairs.size());
  for (size_t i = 0; i < order.size(); ++i) out.edge_origin[i] = origin[order[i]];
  out.g = std::move(h);
  return out;
}

inline void require_four_regular(const Graph& k, const char* who) {
  if (!k.connected()) throw std::invalid_argument(std::string(who) + ": graph is not connected");
  if (!k.simple()) throw std::invalid_argument(std::string(who) + ": graph is not simple");
  if (!k.regular(4)) throw std::invalid_argument(std::string(who) + ": graph is not 4-regular");
}

inline Graph decomplete(const Graph& k, int v) {
  require_four_regular(k, "decomplete");
  if (v < 0 || v >= k.vertex_count()) throw std::invalid_argument("decomplete: bad vertex");
  return remove_vertices(k, {v}).g;
}

// Inverse of decompletion: add one vertex adjacent to every vertex of degree < 4.
inline Graph complete(const Graph& g, bool simple = true) {
  int deficiency = 0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    int d = g.degree(v);
    if (d > 4) throw std::invalid_argument("complete: vertex of degree > 4");
    deficiency += 4 - d;
  }
  if (deficiency != 4)
    throw std::invalid_argument("complete: degree deficiency is " + std::to_string(deficiency) +
                                ", need exactly 4");
  std::vector<std::pair<int, int>> pairs;
  for (const Edge& e : g.edges()) pairs.emplace_back(e.u, e.v);
  int nv = g.vertex_count();
  for (int v = 0; v < nv; ++v) {
    int mult = 4 - g.degree(v);
    if (mult > 1 && simple)
      throw std::invalid_argument("complete: completion creates a multi-edge at vertex " +
                                  std::to_string(v));
    for (int i = 0; i < mult; ++i) pairs.emplace_back(v, nv);
  }
  std::vector<std::string> labels;
  if (!g.labels().empty()) {
    labels = g.labels();
    labels.push_back("*");
  }
  return Graph(nv + 1, pairs, false, std::move(labels));
}

inline std::vector<int> common_neighbors(const Graph& g, int v, int w) {
  auto a = g.neighbors(v), b = g.neighbors(w);
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::remove_if(out.begin(), out.end(), [&](int x) { return x == v || x == w; }),
            out.end());
  return out;
}

inline Graph circulant(int n, std::vector<int> steps = {1, 2}) {
  if (n < 5) throw std::invalid_argument("circulant: need at least 5 vertices for steps {1,2}");
  std::vector<std::pair<int, int>> pairs;
  for (int s : steps) {
    if (s <= 0 || 2 * s >= n + 1)
      throw std::invalid_argument("circulant: step out of range");
    for (int i = 0; i < n; ++i) pairs.emplace_back(i, (i + s) % n);
  }
  std::sort(pairs.begin(), pairs.end(), [](auto x, auto y) {
    auto cx = std::minmax(x.first, x.second), cy = std::minmax(y.first, y.second);
    return cx < cy;
  });
  pairs.erase(std::unique(pairs.begin(), pairs.end(),
                          [](auto x, auto y) {
                            return std::minmax(x.first, x.second) == std::minmax(y.first, y.second);
                          }),
              pairs.end());
  return Graph(n, pairs);
}

// Configuration model with rejection; deterministic for a fixed (n, degree, seed).
inline Graph random_regular(int n, int degree, uint64_t seed, int max_attempts = 20000) {
  if (n * degree % 2 != 0) throw std::invalid_argument("random_regular: n*degree must be even");
  if (n <= degree) throw std::invalid_argument("random_regular: need n > degree");
  std::mt19937_64 rng(seed);
  std::vector<int> stubs(static_cast<size_t>(n) * degree);
  for (int a = 0; a < max_attempts; ++a) {
    for (size_t i = 0; i < stubs.size(); ++i) stubs[i] = static_cast<int>(i) / degree;
    for (size_t i = stubs.size() - 1; i > 0; --i)
      std::swap(stubs[i], stubs[rng() % (i + 1)]);
    std::vector<std::pair<int, int>> pairs;
    bool ok = true;
    for (size_t i = 0; i < stubs.size(); i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      if (u == v) { ok = false; break; }
      pairs.emplace_back(std::min(u, v), std::max(u, v));
    }
    if (!ok) continue;
    std::sort(pairs.begin(), pairs.end());
    if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end()) continue;
    Graph g(n, pairs);
    if (!g.connected()) continue;
    return g;
  }
  throw std::runtime_error("random_regular: no simple connected graph after " +
                           std::to_string(max_attempts) + " attempts");
}

// Signed vertex-edge incidence with one vertex row removed (default: highest index).
// Each non-loop edge column has +1 at its lower endpoint and -1 at its higher one.
struct SignedIncidence {
  int rows = 0;
  int cols = 0;
  int removed_vertex = 0;
  std::vector<int> row_of_vertex;  // -1 for the removed vertex
  std::vector<int8_t> m;           // row-major

  int8_t at(int r, int c) const { return m[static_cast<size_t>(r) * cols + c]; }
};

inline SignedIncidence incidence_matrix(const Graph& g, int removed_vertex = -1) {
  if (!g.connected()) throw std::invalid_argument("incidence_matrix: graph is not connected");
  if (removed_vertex < 0) removed_vertex = g.vertex_count() - 1;
  if (removed_vertex >= g.vertex_count())
    throw std::invalid_argument("incidence_matrix: bad removed vertex");
  SignedIncidence inc;
  inc.rows = g.vertex_count() - 1;
  inc.cols = g.edge_count();
  inc.removed_vertex = removed_vertex;
  inc.row_of_vertex.assign(g.vertex_count(), -1);
  int r = 0;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (v != removed_vertex) inc.row_of_vertex[v] = r++;
  inc.m.assign(static_cast<size_t>(inc.rows) * inc.cols, 0);
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.loop()) continue;
    int ru = inc.row_of_vertex[ed.u], rv = inc.row_of_vertex[ed.v];
    if (ru >= 0) inc.m[static_cast<size_t>(ru) * inc.cols + e] = 1;
    if (rv >= 0) inc.m[static_cast<size_t>(rv) * inc.cols + e] = -1;
  }
  return inc;
}

inline uint64_t edge_mask_at(const Graph& g, int v) {
  uint64_t m = 0;
  for (int e : g.incident_edges(v)) m |= uint64_t{1} << e;
  return m;
}

inline int first_vertex_of_degree(const Graph& g, int k) {
  auto d = g.degree_sequence();
  for (int v = 0; v < g.vertex_count(); ++v)
    if (d[v] == k) return v;
  return -1;
}

}  // namespace c2lab
