#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "c2lab/algebra.hpp"
#include "c2lab/gf2poly.hpp"
#include "c2lab/graph.hpp"

namespace c2lab {

namespace detail {

struct RollbackDsu {
  std::vector<int> parent, size;
  std::vector<int> trail;
  int comps = 0;

  explicit RollbackDsu(int n) : parent(n), size(n, 1), comps(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) const {
    while (parent[x] != x) x = parent[x];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    trail.push_back(b);
    --comps;
    return true;
  }
  size_t mark() const { return trail.size(); }
  void rollback(size_t m) {
    while (trail.size() > m) {
      int b = trail.back();
      trail.pop_back();
      size[parent[b]] -= size[b];
      parent[b] = b;
      ++comps;
    }
  }
};

}  // namespace detail

// Streams every spanning tree exactly once as an edge mask, in a deterministic
// order. Edges are decided in canonical order; the exclude branch is pruned when
// the rest of the graph can no longer connect the current components.
template <class Fn>
void for_each_spanning_tree(const Graph& g, Fn&& fn) {
  int n = g.vertex_count();
  int m = g.edge_count();
  if (n == 0) return;
  const auto& edges = g.edges();
  detail::RollbackDsu dsu(n);
  uint64_t chosen = 0;

  auto connectable = [&](int from) {
    if (dsu.comps == 1) return true;
    detail::RollbackDsu probe = dsu;
    for (int e = from; e < m; ++e) {
      if (edges[e].loop()) continue;
      probe.unite(edges[e].u, edges[e].v);
      if (probe.comps == 1) return true;
    }
    return false;
  };

  auto rec = [&](auto&& self, int i) -> void {
    if (dsu.comps == 1) {
      fn(static_cast<uint64_t>(chosen));
      return;
    }
    if (i == m) return;
    const Edge& e = edges[i];
    if (!e.loop() && dsu.find(e.u) != dsu.find(e.v)) {
      size_t mk = dsu.mark();
      dsu.unite(e.u, e.v);
      chosen |= uint64_t{1} << i;
      self(self, i + 1);
      chosen &= ~(uint64_t{1} << i);
      dsu.rollback(mk);
    }
    if (connectable(i + 1)) self(self, i + 1);
  };
  rec(rec, 0);
}

inline uint64_t count_spanning_trees(const Graph& g) {
  uint64_t c = 0;
  for_each_spanning_tree(g, [&](uint64_t) { ++c; });
  return c;
}

// Independent count via the matrix-tree theorem (integer determinant of a
// reduced Laplacian); used to cross-check the enumeration.
inline int64_t count_spanning_trees_matrixtree(const Graph& g) {
  int n = g.vertex_count();
  if (n == 0) return 0;
  if (n == 1) return 1;
  std::vector<std::vector<int64_t>> L(n - 1, std::vector<int64_t>(n - 1, 0));
  for (const Edge& e : g.edges()) {
    if (e.loop()) continue;
    if (e.u < n - 1) L[e.u][e.u] += 1;
    if (e.v < n - 1) L[e.v][e.v] += 1;
    if (e.u < n - 1 && e.v < n - 1) {
      L[e.u][e.v] -= 1;
      L[e.v][e.u] -= 1;
    }
  }
  return det_int64(std::move(L));
}

// Kirchhoff polynomial: sum over spanning trees of the product of the edge
// variables NOT in the tree.
inline Gf2Poly kirchhoff_poly(const Graph& g) {
  uint64_t full = g.edge_count() == 64 ? ~uint64_t{0} : (uint64_t{1} << g.edge_count()) - 1;
  Gf2Poly psi;
  for_each_spanning_tree(g, [&](uint64_t t) { psi.toggle(full & ~t); });
  psi.flush();
  return psi;
}

struct VertexPartition {
  std::vector<std::vector<int>> parts;

  void validate(int n) const {
    std::vector<char> seen(n, 0);
    if (parts.empty()) throw std::invalid_argument("partition: no parts");
    for (const auto& p : parts) {
      if (p.empty()) throw std::invalid_argument("partition: empty part");
      for (int v : p) {
        if (v < 0 || v >= n) throw std::invalid_argument("partition: vertex out of range");
        if (seen[v]) throw std::invalid_argument("partition: vertex repeated");
        seen[v] = 1;
      }
    }
  }

  bool operator==(const VertexPartition& o) const { return parts == o.parts; }
};

inline VertexPartition normalized_partition(std::vector<std::vector<int>> parts) {
  for (auto& p : parts) std::sort(p.begin(), p.end());
  std::sort(parts.begin(), parts.end());
  return VertexPartition{std::move(parts)};
}

// Streams spanning forests of g with exactly |parts| trees such that the trees
// and the parts correspond one to one, each part inside its tree.
template <class Fn>
void for_each_spanning_forest(const Graph& g, const VertexPartition& p, Fn&& fn) {
  int n = g.vertex_count();
  int m = g.edge_count();
  p.validate(n);
  int k = static_cast<int>(p.parts.size());
  if (n < k) return;
  int target = n - k;
  const auto& edges = g.edges();

  std::vector<int> part_of(n, -1);
  for (int i = 0; i < k; ++i)
    for (int v : p.parts[i]) part_of[v] = i;

  detail::RollbackDsu dsu(n);
  std::vector<int> comp_part(n, -1);  // valid at roots
  for (int v = 0; v < n; ++v) comp_part[v] = part_of[v];
  std::vector<std::pair<int, int>> part_trail;

  uint64_t chosen = 0;
  int chosen_count = 0;

  auto rec = [&](auto&& self, int i) -> void {
    if (chosen_count == target) {
      for (int pi = 0; pi < k; ++pi) {
        int root = dsu.find(p.parts[pi][0]);
        for (int v : p.parts[pi])
          if (dsu.find(v) != root) return;
      }
      fn(static_cast<uint64_t>(chosen));
      return;
    }
    if (m - i < target - chosen_count) return;
    const Edge& e = edges[i];
    int ru = dsu.find(e.u), rv = dsu.find(e.v);
    if (ru != rv && !(comp_part[ru] >= 0 && comp_part[rv] >= 0 && comp_part[ru] != comp_part[rv])) {
      size_t mk = dsu.mark();
      size_t pmk = part_trail.size();
      int np = std::max(comp_part[ru], comp_part[rv]);
      dsu.unite(e.u, e.v);
      int nr = dsu.find(e.u);
      part_trail.emplace_back(nr, comp_part[nr]);
      comp_part[nr] = np;
      chosen |= uint64_t{1} << i;
      ++chosen_count;
      self(self, i + 1);
      --chosen_count;
      chosen &= ~(uint64_t{1} << i);
      while (part_trail.size() > pmk) {
        comp_part[part_trail.back().first] = part_trail.back().second;
        part_trail.pop_back();
      }
      dsu.rollback(mk);
    }
    self(self, i + 1);
  };
  rec(rec, 0);
}

template <class Fn>
void for_each_spanning_2forest(const Graph& g, const std::vector<int>& part1,
                               const std::vector<int>& part2, Fn&& fn) {
  for_each_spanning_forest(g, VertexPartition{{part1, part2}}, fn);
}

// Spanning forest polynomial: sum over compatible spanning forests of the
// product of edge variables outside the forest.
inline Gf2Poly spanning_forest_poly(const Graph& g, const VertexPartition& p) {
  uint64_t full = g.edge_count() == 64 ? ~uint64_t{0} : (uint64_t{1} << g.edge_count()) - 1;
  Gf2Poly phi;
  for_each_spanning_forest(g, p, [&](uint64_t f) { phi.toggle(full & ~f); });
  phi.flush();
  return phi;
}

// Expanded Laplacian M = [[Lambda, E^T], [-E, 0]] with Lambda = diag(a_e) and E
// the signed incidence matrix missing its highest-index vertex row. det M is the
// Kirchhoff polynomial evaluated at a (up to the global sign convention fixed by
// this ordering, which is all that is ever used here).
inline FpMatrix expanded_laplacian(const Graph& g, const std::vector<int>& assignment, int p,
                                   int removed_vertex = -1) {
  int m = g.edge_count();
  if (static_cast<int>(assignment.size()) != m)
    throw std::invalid_argument("expanded_laplacian: assignment size != edge count");
  SignedIncidence inc = incidence_matrix(g, removed_vertex);
  int size = m + inc.rows;
  FpMatrix out(p, size);
  for (int e = 0; e < m; ++e) out.set(e, e, assignment[e]);
  for (int r = 0; r < inc.rows; ++r)
    for (int e = 0; e < m; ++e) {
      out.set(e, m + r, inc.at(r, e));        // E^T block
      out.set(m + r, e, -int(inc.at(r, e)));  // -E block
    }
  return out;
}

inline int expanded_laplacian_eval(const Graph& g, const std::vector<int>& assignment, int p) {
  return det_fp(expanded_laplacian(g, assignment, p));
}

// Dodgson specification: strike edge rows I and edge columns J of the expanded
// Laplacian and set the variables in K to zero.
struct DodgsonSpec {
  std::vector<int> I, J, K;

  void validate(const Graph& g) const {
    if (I.size() != J.size()) throw std::invalid_argument("dodgson: |I| != |J|");
    auto check = [&](const std::vector<int>& s, const char* name) {
      for (int e : s)
        if (e < 0 || e >= g.edge_count())
          throw std::invalid_argument(std::string("dodgson: ") + name + " has a bad edge index");
      auto c = s;
      std::sort(c.begin(), c.end());
      if (std::adjacent_find(c.begin(), c.end()) != c.end())
        throw std::invalid_argument(std::string("dodgson: ") + name + " has repeats");
    };
    check(I, "I");
    check(J, "J");
    check(K, "K");
    for (int e : K) {
      for (int x : I)
        if (x == e) throw std::invalid_argument("dodgson: K meets I");
      for (int x : J)
        if (x == e) throw std::invalid_argument("dodgson: K meets J");
    }
  }

  std::vector<int> struck_union() const {
    std::vector<int> all = I;
    all.insert(all.end(), J.begin(), J.end());
    all.insert(all.end(), K.begin(), K.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
  }
};

// Value of the Dodgson polynomial Psi^{I,J}_{G,K} at the given assignment, as a
// fixed minor determinant (one consistent sign convention across all points).
inline int dodgson_eval(const Graph& g, const DodgsonSpec& spec, const std::vector<int>& assignment,
                        int p) {
  spec.validate(g);
  int m = g.edge_count();
  if (static_cast<int>(assignment.size()) != m)
    throw std::invalid_argument("dodgson_eval: assignment size != edge count");
  std::vector<int> a = assignment;
  for (int e : spec.K) a[e] = 0;
  FpMatrix full = expanded_laplacian(g, a, p);
  std::vector<char> row_keep(full.n, 1), col_keep(full.n, 1);
  for (int e : spec.I) row_keep[e] = 0;
  for (int e : spec.J) col_keep[e] = 0;
  int size = full.n - static_cast<int>(spec.I.size());
  FpMatrix sub(p, size);
  int rr = 0;
  for (int r = 0; r < full.n; ++r) {
    if (!row_keep[r]) continue;
    int cc = 0;
    for (int c = 0; c < full.n; ++c) {
      if (!col_keep[c]) continue;
      sub.at(rr, cc) = full.at(r, c);
      ++cc;
    }
    ++rr;
  }
  return det_fp(std::move(sub));
}

struct EdgeDeletion {
  Graph g;
  std::vector<int> edge_origin;
};

inline EdgeDeletion delete_edges(const Graph& g, const std::vector<int>& edge_ids) {
  std::vector<char> drop(g.edge_count(), 0);
  for (int e : edge_ids) {
    if (e < 0 || e >= g.edge_count()) throw std::invalid_argument("delete_edges: bad edge id");
    drop[e] = 1;
  }
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> origin;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (drop[e]) continue;
    pairs.emplace_back(g.edge(e).u, g.edge(e).v);
    origin.push_back(e);
  }
  return {Graph(g.vertex_count(), pairs, true, g.labels()), std::move(origin)};
}

// Enumerate set partitions of `items` in restricted-growth-string order.
template <class Fn>
void for_each_set_partition(const std::vector<int>& items, Fn&& fn) {
  int n = static_cast<int>(items.size());
  std::vector<int> rgs(n, 0);
  auto rec = [&](auto&& self, int i, int maxseen) -> void {
    if (i == n) {
      int blocks = maxseen + 1;
      std::vector<std::vector<int>> parts(blocks);
      for (int j = 0; j < n; ++j) parts[rgs[j]].push_back(items[j]);
      fn(VertexPartition{std::move(parts)});
      return;
    }
    for (int b = 0; b <= maxseen + 1; ++b) {
      rgs[i] = b;
      self(self, i + 1, std::max(maxseen, b));
    }
  };
  if (n == 0) return;
  rec(rec, 0, -1);
}

// The set partitions P of the marked endpoints such that the P-compatible
// spanning forests of g minus (I u J u K) are exactly the forests that become
// spanning trees in both g\I/(JuK) and g\J/(IuK). Whether a compatible forest
// becomes a spanning tree depends only on P, which is asserted as it is used.
inline std::vector<VertexPartition> dodgson_forest_expansion(const Graph& g,
                                                             const DodgsonSpec& spec) {
  spec.validate(g);
  std::vector<int> sym;
  {
    std::vector<int> iandj;
    for (int e : spec.I)
      for (int x : spec.J)
        if (e == x) iandj.push_back(e);
    for (int e : spec.struck_union())
      if (std::find(iandj.begin(), iandj.end(), e) == iandj.end()) sym.push_back(e);
  }
  std::vector<int> marked;
  for (int e : sym) {
    marked.push_back(g.edge(e).u);
    marked.push_back(g.edge(e).v);
  }
  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
  if (marked.size() > 10)
    throw std::invalid_argument("dodgson_forest_expansion: too many marked endpoints");

  EdgeDeletion cut = delete_edges(g, spec.struck_union());
  // minor 1 deletes I and contracts (J u K) \ I; edges deleted on one side
  // cannot be contracted on the other
  auto minus = [](std::vector<int> s, const std::vector<int>& gone) {
    s.erase(std::remove_if(s.begin(), s.end(),
                           [&](int e) {
                             return std::find(gone.begin(), gone.end(), e) != gone.end();
                           }),
            s.end());
    return s;
  };
  std::vector<int> con1 = minus(spec.J, spec.I), con2 = minus(spec.I, spec.J);
  con1.insert(con1.end(), spec.K.begin(), spec.K.end());
  con2.insert(con2.end(), spec.K.begin(), spec.K.end());

  auto tree_in_minor = [&](uint64_t forest_in_cut, const std::vector<int>& contracted) {
    detail::RollbackDsu dsu(g.vertex_count());
    for (int e : contracted) dsu.unite(g.edge(e).u, g.edge(e).v);
    int classes = dsu.comps;
    int used = 0;
    for (int e = 0; e < cut.g.edge_count(); ++e) {
      if (!(forest_in_cut >> e & 1)) continue;
      int orig = cut.edge_origin[e];
      if (!dsu.unite(g.edge(orig).u, g.edge(orig).v)) return false;
      ++used;
    }
    return used == classes - 1;
  };

  std::vector<VertexPartition> accepted;
  for_each_set_partition(marked, [&](const VertexPartition& cand) {
    long total = 0, good = 0;
    for_each_spanning_forest(cut.g, cand, [&](uint64_t f) {
      ++total;
      if (tree_in_minor(f, con1) && tree_in_minor(f, con2)) ++good;
    });
    if (total == 0) return;
    if (good != 0 && good != total)
      throw std::logic_error("dodgson_forest_expansion: partition with mixed forests");
    if (good == total) accepted.push_back(normalized_partition(cand.parts));
  });
  return accepted;
}

}  // namespace c2lab
