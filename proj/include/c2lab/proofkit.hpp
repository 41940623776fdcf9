#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "c2lab/c2.hpp"
#include "c2lab/graph.hpp"
#include "c2lab/kirchhoff.hpp"

namespace c2lab {

enum class CaseTag { R, S, T, ISO };

inline const char* case_name(CaseTag t) {
  switch (t) {
    case CaseTag::R: return "R";
    case CaseTag::S: return "S";
    case CaseTag::T: return "T";
    case CaseTag::ISO: return "ISO";
  }
  return "?";
}

// A valid edge bipartition of H: a spanning tree plus a spanning 2-forest.
// class2_mask marks the vertices of the 2-forest tree not containing vertex 0.
struct EdgeBipartition {
  uint64_t tree_part = 0;
  uint64_t forest_part = 0;
  uint64_t class2_mask = 0;

  int vertex_class(int v) const { return static_cast<int>(class2_mask >> v & 1); }
  bool operator==(const EdgeBipartition& o) const { return tree_part == o.tree_part; }
};

namespace detail {

inline uint64_t all_edges_mask(const Graph& g) {
  int m = g.edge_count();
  return m >= 64 ? ~uint64_t{0} : (uint64_t{1} << m) - 1;
}

}  // namespace detail

// Rebuilds and fully validates a bipartition from its tree-part edge mask.
inline EdgeBipartition make_bipartition(const Graph& h, uint64_t tree_mask) {
  int n = h.vertex_count(), m = h.edge_count();
  EdgeBipartition b;
  b.tree_part = tree_mask;
  b.forest_part = detail::all_edges_mask(h) & ~tree_mask;
  if (std::popcount(tree_mask) != n - 1)
    throw std::logic_error("bipartition: tree part has the wrong number of edges");
  detail::RollbackDsu td(n);
  for (int e = 0; e < m; ++e)
    if (tree_mask >> e & 1)
      if (!td.unite(h.edge(e).u, h.edge(e).v))
        throw std::logic_error("bipartition: tree part contains a cycle");
  if (td.comps != 1) throw std::logic_error("bipartition: tree part is not spanning");
  detail::RollbackDsu fd(n);
  for (int e = 0; e < m; ++e)
    if (b.forest_part >> e & 1)
      if (!fd.unite(h.edge(e).u, h.edge(e).v))
        throw std::logic_error("bipartition: forest part contains a cycle");
  if (fd.comps != 2) throw std::logic_error("bipartition: forest part is not a 2-forest");
  int r0 = fd.find(0);
  for (int v = 1; v < n; ++v)
    if (fd.find(v) != r0) b.class2_mask |= uint64_t{1} << v;
  return b;
}

// All edge bipartitions of H into a spanning tree and a spanning 2-forest.
inline std::vector<EdgeBipartition> all_valid_bipartitions(const Graph& h) {
  std::vector<EdgeBipartition> out;
  int n = h.vertex_count(), m = h.edge_count();
  uint64_t full = detail::all_edges_mask(h);
  for_each_spanning_tree(h, [&](uint64_t tree) {
    uint64_t forest = full & ~tree;
    detail::RollbackDsu fd(n);
    for (int e = 0; e < m; ++e)
      if (forest >> e & 1)
        if (!fd.unite(h.edge(e).u, h.edge(e).v)) return;
    if (fd.comps != 2) return;
    EdgeBipartition b;
    b.tree_part = tree;
    b.forest_part = forest;
    int r0 = fd.find(0);
    for (int v = 1; v < n; ++v)
      if (fd.find(v) != r0) b.class2_mask |= uint64_t{1} << v;
    out.push_back(b);
  });
  return out;
}

// Bipartitions whose 2-forest separates the two given vertex groups.
inline std::vector<EdgeBipartition> bipartition_set(const Graph& h, const VertexPartition& p) {
  if (p.parts.size() != 2) throw std::invalid_argument("bipartition_set: need exactly two parts");
  p.validate(h.vertex_count());
  uint64_t am = 0, bm = 0;
  for (int v : p.parts[0]) am |= uint64_t{1} << v;
  for (int v : p.parts[1]) bm |= uint64_t{1} << v;
  if (am & bm) throw std::invalid_argument("bipartition_set: parts overlap");
  std::vector<EdgeBipartition> out;
  for (EdgeBipartition& b : all_valid_bipartitions(h)) {
    uint64_t a = b.class2_mask & am, bb = b.class2_mask & bm;
    if (am && a != 0 && a != am) continue;
    if (bm && bb != 0 && bb != bm) continue;
    if (am && bm && ((a != 0) == (bb != 0))) continue;
    out.push_back(b);
  }
  return out;
}

// Boundary configuration for an adjacent pair v, w of a 4-regular K.
// Letters live at fixed slots a..f; in the S case f shares c's vertex and in
// the T case e shares b's and f shares c's, so slot masks stay 6 bits wide.
struct BoundaryConfig {
  CaseTag tag = CaseTag::ISO;
  int v = -1, w = -1;
  int k_vertices = 0;
  Graph h{0, {}};
  std::vector<int> h_of_k, k_of_h;
  std::array<int, 6> letters{-1, -1, -1, -1, -1, -1};    // H indices
  std::array<int, 6> k_letters{-1, -1, -1, -1, -1, -1};  // K indices
};

inline BoundaryConfig classify_case(const Graph& k, int v, int w) {
  require_four_regular(k, "classify_case");
  if (!k.adjacent(v, w)) throw std::invalid_argument("classify_case: v and w are not adjacent");
  BoundaryConfig cfg;
  cfg.v = v;
  cfg.w = w;
  cfg.k_vertices = k.vertex_count();
  std::vector<int> common = common_neighbors(k, v, w);
  VertexDeletion del = remove_vertices(k, {v, w});
  cfg.h = del.g;
  cfg.h_of_k = del.new_of_old;
  cfg.k_of_h = del.old_of_new;

  auto others = [&](int center, int skip) {
    std::vector<int> r;
    for (int x : k.neighbors(center))
      if (x != skip) r.push_back(x);
    return r;
  };
  std::vector<int> nw = others(w, v), nv = others(v, w);

  if (common.size() == 3) {
    cfg.tag = CaseTag::ISO;
    return cfg;
  }
  if (common.size() == 0) {
    cfg.tag = CaseTag::R;
    cfg.k_letters = {nw[0], nw[1], nw[2], nv[0], nv[1], nv[2]};
  } else if (common.size() == 1) {
    cfg.tag = CaseTag::S;
    int c = common[0];
    std::vector<int> ab, de;
    for (int x : nw)
      if (x != c) ab.push_back(x);
    for (int x : nv)
      if (x != c) de.push_back(x);
    cfg.k_letters = {ab[0], ab[1], c, de[0], de[1], c};
  } else {
    cfg.tag = CaseTag::T;
    int b = common[0], c = common[1];
    int a = -1, d = -1;
    for (int x : nw)
      if (x != b && x != c) a = x;
    for (int x : nv)
      if (x != b && x != c) d = x;
    cfg.k_letters = {a, b, c, d, b, c};
  }
  for (int i = 0; i < 6; ++i) cfg.letters[i] = cfg.h_of_k[cfg.k_letters[i]];

  auto expect_degree = [&](int slot, int want) {
    if (cfg.h.degree(cfg.letters[slot]) != want)
      throw std::logic_error("classify_case: marked vertex degree is off in K - {v,w}");
  };
  if (cfg.tag == CaseTag::R)
    for (int i = 0; i < 6; ++i) expect_degree(i, 3);
  if (cfg.tag == CaseTag::S) {
    expect_degree(0, 3), expect_degree(1, 3), expect_degree(2, 2);
    expect_degree(3, 3), expect_degree(4, 3);
  }
  if (cfg.tag == CaseTag::T) {
    expect_degree(0, 3), expect_degree(1, 2), expect_degree(2, 2), expect_degree(3, 3);
  }
  return cfg;
}

// A two-sided constraint on the marked letters: all left slots in one 2-forest
// tree, all right slots in the other.
struct Split {
  uint32_t left = 0, right = 0;
};

inline bool split_matches(uint32_t letter_mask, Split s) {
  uint32_t l = letter_mask & s.left, r = letter_mask & s.right;
  if (l != 0 && l != s.left) return false;
  if (r != 0 && r != s.right) return false;
  return (l != 0) != (r != 0);
}

namespace detail {

// Letter slot bits: a=1, b=2, c=4, d=8, e=16, f=32.
inline constexpr Split kExpandR[12] = {
    {0x3B, 0x04}, {0x3D, 0x02}, {0x01, 0x3E}, {0x03, 0x3C}, {0x05, 0x3A}, {0x39, 0x06},
    {0x1F, 0x20}, {0x2F, 0x10}, {0x37, 0x08}, {0x27, 0x18}, {0x17, 0x28}, {0x0F, 0x30},
};
inline constexpr Split kExpandS[6] = {
    {0x0B, 0x34}, {0x13, 0x2C}, {0x03, 0x3C}, {0x19, 0x26}, {0x25, 0x1A}, {0x27, 0x18},
};
inline constexpr Split kExpandT[2] = {{0x01, 0x3E}, {0x37, 0x08}};

// Sets whose members carry a control vertex: one full trio plus one outsider
// on one side, the remaining pair of the other trio opposite.
inline constexpr Split kControlUnionR[6] = {
    {0x03, 0x3C}, {0x05, 0x3A}, {0x39, 0x06}, {0x27, 0x18}, {0x17, 0x28}, {0x0F, 0x30},
};

// Sets handled by the cycle-swap graph: single letters split off.
inline constexpr Split kSwapUnionR[6] = {
    {0x3B, 0x04}, {0x3D, 0x02}, {0x01, 0x3E}, {0x1F, 0x20}, {0x2F, 0x10}, {0x37, 0x08},
};
inline constexpr Split kSwapUnionS[4] = {{0x0B, 0x34}, {0x13, 0x2C}, {0x19, 0x26}, {0x25, 0x1A}};
inline constexpr Split kSwapUnionT[2] = {{0x01, 0x3E}, {0x37, 0x08}};

// Two-valent swap unions: S swaps around c; T swaps around b or around c.
inline constexpr Split kTwoValentS[2] = {{0x27, 0x18}, {0x03, 0x3C}};
inline constexpr Split kTwoValentTb[2] = {{0x01, 0x3E}, {0x13, 0x2C}};
inline constexpr Split kTwoValentTc[2] = {{0x37, 0x08}, {0x13, 0x2C}};

inline const Split* expansion_terms(CaseTag tag, int& count) {
  switch (tag) {
    case CaseTag::R: count = 12; return kExpandR;
    case CaseTag::S: count = 6; return kExpandS;
    case CaseTag::T: count = 2; return kExpandT;
    default: count = 0; return nullptr;
  }
}

inline const Split* swap_union(CaseTag tag, int& count) {
  switch (tag) {
    case CaseTag::R: count = 6; return kSwapUnionR;
    case CaseTag::S: count = 4; return kSwapUnionS;
    case CaseTag::T: count = 2; return kSwapUnionT;
    default: count = 0; return nullptr;
  }
}

}  // namespace detail

enum class Side { v, w };

// The per-decompletion parity terms: three splits of one trio in the R case,
// a single split pinning the shared letters in the S and T cases.
inline std::vector<Split> case_equation_terms(CaseTag tag, Side side) {
  bool vs = side == Side::v;
  switch (tag) {
    case CaseTag::R:
      return vs ? std::vector<Split>{{0x03, 0x04}, {0x05, 0x02}, {0x06, 0x01}}
                : std::vector<Split>{{0x18, 0x20}, {0x28, 0x10}, {0x30, 0x08}};
    case CaseTag::S:
      return vs ? std::vector<Split>{{0x03, 0x24}} : std::vector<Split>{{0x18, 0x24}};
    case CaseTag::T:
      return vs ? std::vector<Split>{{0x01, 0x36}} : std::vector<Split>{{0x08, 0x36}};
    default:
      throw std::invalid_argument("case_equation_terms: degenerate case");
  }
}

// All valid bipartitions of H with their 6-bit letter placements cached.
struct BipartitionSystem {
  CaseTag tag = CaseTag::ISO;
  Graph h{0, {}};
  std::array<int, 6> letters{};
  std::vector<EdgeBipartition> all;
  std::vector<uint8_t> letter_masks;

  uint64_t count_split(Split s) const {
    uint64_t c = 0;
    for (uint8_t lm : letter_masks) c += split_matches(lm, s);
    return c;
  }
  std::vector<int> members(const Split* splits, int nsplits) const {
    std::vector<int> out;
    for (size_t i = 0; i < all.size(); ++i)
      for (int j = 0; j < nsplits; ++j)
        if (split_matches(letter_masks[i], splits[j])) {
          out.push_back(static_cast<int>(i));
          break;
        }
    return out;
  }
};

inline uint8_t letter_mask_of(const std::array<int, 6>& letters, const EdgeBipartition& b) {
  uint8_t lm = 0;
  for (int i = 0; i < 6; ++i)
    if (b.vertex_class(letters[i])) lm |= uint8_t{1} << i;
  return lm;
}

inline BipartitionSystem build_bipartition_system(const BoundaryConfig& cfg) {
  if (cfg.tag == CaseTag::ISO)
    throw std::invalid_argument("build_bipartition_system: degenerate case has no letters");
  BipartitionSystem sys;
  sys.tag = cfg.tag;
  sys.h = cfg.h;
  sys.letters = cfg.letters;
  sys.all = all_valid_bipartitions(cfg.h);
  sys.letter_masks.reserve(sys.all.size());
  for (const EdgeBipartition& b : sys.all) sys.letter_masks.push_back(letter_mask_of(sys.letters, b));
  return sys;
}

inline int c2_from_bipartitions(const BipartitionSystem& sys, Side side) {
  uint64_t total = 0;
  for (Split s : case_equation_terms(sys.tag, side)) total += sys.count_split(s);
  return static_cast<int>(total & 1);
}

inline int c2_from_bipartitions(const BoundaryConfig& cfg, Side side) {
  return c2_from_bipartitions(build_bipartition_system(cfg), side);
}

// Parity of the full expansion: the sum of the case's 12, 6, or 2 terms.
inline int expansion_rhs_parity(const BipartitionSystem& sys) {
  int nterms = 0;
  const Split* terms = detail::expansion_terms(sys.tag, nterms);
  uint64_t total = 0;
  for (int i = 0; i < nterms; ++i) total += sys.count_split(terms[i]);
  return static_cast<int>(total & 1);
}

// Exchanges the two edges at a 2-valent vertex between the parts. Exactly one
// of them lies in each part whenever both parts must connect the vertex onward.
inline EdgeBipartition two_valent_swap(const Graph& h, const EdgeBipartition& b, int c) {
  if (h.degree(c) != 2) throw std::invalid_argument("two_valent_swap: vertex is not 2-valent");
  auto inc = h.incident_edges(c);
  bool in_tree0 = b.tree_part >> inc[0] & 1;
  bool in_tree1 = b.tree_part >> inc[1] & 1;
  if (in_tree0 == in_tree1)
    throw std::logic_error("two_valent_swap: edges at the vertex are not split between the parts");
  uint64_t tree = b.tree_part ^ (uint64_t{1} << inc[0]) ^ (uint64_t{1} << inc[1]);
  return make_bipartition(h, tree);
}

namespace detail {

struct TreeComponents {
  std::vector<int> comp;  // -1 for vertices outside the tree or the removed vertex
  int count = 0;
};

// Components of the subgraph given by edge mask, after removing one vertex.
inline TreeComponents components_without(const Graph& h, uint64_t edges, int removed) {
  int n = h.vertex_count();
  RollbackDsu dsu(n);
  for (int e = 0; e < h.edge_count(); ++e)
    if (edges >> e & 1) {
      auto [u, v] = std::pair(h.edge(e).u, h.edge(e).v);
      if (u == removed || v == removed) continue;
      dsu.unite(u, v);
    }
  TreeComponents tc;
  tc.comp.assign(n, -1);
  std::vector<char> touched(n, 0);
  for (int e = 0; e < h.edge_count(); ++e)
    if (edges >> e & 1) touched[h.edge(e).u] = touched[h.edge(e).v] = 1;
  std::vector<int> id(n, -1);
  for (int v = 0; v < n; ++v) {
    if (!touched[v] || v == removed) continue;
    int r = dsu.find(v);
    if (id[r] < 0) id[r] = tc.count++;
    tc.comp[v] = id[r];
  }
  return tc;
}

}  // namespace detail

// The unique organizing vertex of the 2-forest tree holding p1 = a trio plus
// the outsider x: a 2-valent member of p1 or a 3-valent non-member whose
// removal isolates x (or leaves x alongside no other p1 vertex).
inline int control_vertex(const Graph& h, uint64_t tree_edges, const std::vector<int>& p1, int x) {
  std::vector<char> in_tree(h.vertex_count(), 0);
  for (int e = 0; e < h.edge_count(); ++e)
    if (tree_edges >> e & 1) in_tree[h.edge(e).u] = in_tree[h.edge(e).v] = 1;
  for (int v : p1)
    if (!in_tree[v]) throw std::invalid_argument("control_vertex: p1 vertex outside the tree");
  if (std::find(p1.begin(), p1.end(), x) == p1.end())
    throw std::invalid_argument("control_vertex: outsider not in p1");

  int found = -1;
  for (int y = 0; y < h.vertex_count(); ++y) {
    if (!in_tree[y]) continue;
    int deg = 0;
    for (int e : h.incident_edges(y))
      if (tree_edges >> e & 1) ++deg;
    bool member = std::find(p1.begin(), p1.end(), y) != p1.end();
    if (!((member && deg == 2) || (!member && deg == 3))) continue;

    detail::TreeComponents tc = detail::components_without(h, tree_edges, y);
    if (tc.count != deg) continue;
    std::vector<int> p1_count(tc.count, 0);
    for (int v : p1)
      if (v != y) ++p1_count[tc.comp[v]];
    std::sort(p1_count.rbegin(), p1_count.rend());
    bool shape = p1_count[0] == 2;
    for (size_t i = 1; i < p1_count.size(); ++i) shape = shape && p1_count[i] == 1;
    if (!shape) continue;
    if (x != y) {
      int cnt = 0;
      for (int v : p1)
        if (v != y && tc.comp[v] == tc.comp[x]) ++cnt;
      if (cnt != 1) continue;
    }
    if (found >= 0) throw std::logic_error("control_vertex: more than one vertex qualifies");
    found = y;
  }
  if (found < 0) throw std::logic_error("control_vertex: no vertex qualifies");
  return found;
}

// The edge exchange around the control vertex. The tree-part edge at y moves
// into the 2-forest and a forest edge at y replaces it, chosen by where the
// far endpoint of the tree-part edge lives.
inline EdgeBipartition control_swap(const Graph& h, const std::array<int, 6>& letters,
                                    const EdgeBipartition& tau) {
  uint8_t lm = letter_mask_of(letters, tau);
  uint32_t side1 = (~lm) & 0x3F, side2 = lm;
  uint32_t four = std::popcount(side1) == 4 ? side1 : side2;
  uint32_t two = four == side1 ? side2 : side1;
  if (std::popcount(four) != 4 || std::popcount(two) != 2)
    throw std::invalid_argument("control_swap: letters do not split 4 against 2");
  bool trio_abc = (four & 0x07) == 0x07, trio_def = (four & 0x38) == 0x38;
  if (trio_abc == trio_def)
    throw std::invalid_argument("control_swap: the 4-letter side does not hold a full trio");
  uint32_t outsider_bits = four & (trio_abc ? 0x38 : 0x07);
  if (std::popcount(outsider_bits) != 1)
    throw std::invalid_argument("control_swap: no single outsider letter");
  int x = letters[std::countr_zero(outsider_bits)];

  std::vector<int> p1;
  for (int i = 0; i < 6; ++i)
    if (four >> i & 1) p1.push_back(letters[i]);
  std::sort(p1.begin(), p1.end());
  p1.erase(std::unique(p1.begin(), p1.end()), p1.end());

  int p1_class = tau.vertex_class(p1[0]);
  uint64_t t1_edges = 0;
  for (int e = 0; e < h.edge_count(); ++e)
    if (tau.forest_part >> e & 1 && tau.vertex_class(h.edge(e).u) == p1_class &&
        tau.vertex_class(h.edge(e).v) == p1_class)
      t1_edges |= uint64_t{1} << e;

  int y = control_vertex(h, t1_edges, p1, x);

  int eps = -1;
  for (int e : h.incident_edges(y))
    if (tau.tree_part >> e & 1) {
      if (eps >= 0) throw std::logic_error("control_swap: several spanning-tree edges at y");
      eps = e;
    }
  if (eps < 0) throw std::logic_error("control_swap: no spanning-tree edge at y");
  int z = h.edge(eps).u == y ? h.edge(eps).v : h.edge(eps).u;

  detail::TreeComponents tc = detail::components_without(h, t1_edges, y);
  std::vector<int> p1_count(tc.count, 0);
  for (int v : p1)
    if (v != y) ++p1_count[tc.comp[v]];

  int target_comp;
  if (tau.vertex_class(z) != p1_class) {
    target_comp = -1;
    for (int c = 0; c < tc.count; ++c)
      if (p1_count[c] == 2) target_comp = c;
    if (target_comp < 0) throw std::logic_error("control_swap: no two-letter component at y");
  } else {
    if (z == y) throw std::logic_error("control_swap: tree edge at y is a loop");
    target_comp = tc.comp[z];
    if (target_comp < 0) throw std::logic_error("control_swap: far endpoint outside the tree");
  }

  int eta = -1;
  for (int e : h.incident_edges(y)) {
    if (!(t1_edges >> e & 1)) continue;
    int far = h.edge(e).u == y ? h.edge(e).v : h.edge(e).u;
    if (tc.comp[far] == target_comp) eta = e;
  }
  if (eta < 0) throw std::logic_error("control_swap: no forest edge from y into the target component");

  uint64_t tree = tau.tree_part ^ (uint64_t{1} << eps) ^ (uint64_t{1} << eta);
  return make_bipartition(h, tree);
}

// One cycle through same-class vertices with exactly one tree-part edge.
struct CompatibleCycle {
  uint64_t edges = 0;
  int chord = -1;  // the unique tree-part edge on the cycle
  int cls = 0;
};

namespace detail {

// Edge mask of the path between two vertices inside the given edge set.
inline uint64_t path_within(const Graph& h, uint64_t allowed, int from, int to) {
  int n = h.vertex_count();
  std::vector<int> via(n, -1);
  std::vector<char> seen(n, 0);
  std::deque<int> q{from};
  seen[from] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (v == to) break;
    for (int e : h.incident_edges(v)) {
      if (!(allowed >> e & 1)) continue;
      int far = h.edge(e).u == v ? h.edge(e).v : h.edge(e).u;
      if (seen[far]) continue;
      seen[far] = 1;
      via[far] = e;
      q.push_back(far);
    }
  }
  if (!seen[to]) throw std::logic_error("path_within: endpoints not connected");
  uint64_t mask = 0;
  for (int v = to; v != from;) {
    int e = via[v];
    mask |= uint64_t{1} << e;
    v = h.edge(e).u == v ? h.edge(e).v : h.edge(e).u;
  }
  return mask;
}

}  // namespace detail

// Both counting routes: constructed cycles (tree-part edge closed up through
// the 2-forest) against the internal-edge count e1 + e2. Disagreement is a bug.
inline std::vector<CompatibleCycle> compatible_cycles(const Graph& h, const EdgeBipartition& b) {
  int internal = 0;
  std::vector<CompatibleCycle> out;
  for (int e = 0; e < h.edge_count(); ++e) {
    if (!(b.tree_part >> e & 1)) continue;
    int u = h.edge(e).u, v = h.edge(e).v;
    if (b.vertex_class(u) != b.vertex_class(v)) continue;
    ++internal;
    CompatibleCycle c;
    c.chord = e;
    c.cls = b.vertex_class(u);
    c.edges = detail::path_within(h, b.forest_part, u, v) | (uint64_t{1} << e);

    int tree_edges_on_c = 0;
    for (int x = 0; x < h.edge_count(); ++x)
      if (c.edges >> x & 1) {
        if (b.tree_part >> x & 1) ++tree_edges_on_c;
        if (b.vertex_class(h.edge(x).u) != c.cls || b.vertex_class(h.edge(x).v) != c.cls)
          throw std::logic_error("compatible_cycles: cycle leaves its vertex class");
      }
    if (tree_edges_on_c != 1)
      throw std::logic_error("compatible_cycles: cycle has several tree-part edges");
    out.push_back(c);
  }
  if (static_cast<int>(out.size()) != internal)
    throw std::logic_error("compatible_cycles: counting routes disagree");
  return out;
}

// Per-class edge counts feeding the degree identity.
struct ClassEdgeCounts {
  int e1 = 0, e2 = 0;     // tree-part edges internal to class 1 / class 2
  int crossing = 0;       // edges with endpoints in different classes
  int size1 = 0, size2 = 0;
  int degsum1 = 0, degsum2 = 0;
};

inline ClassEdgeCounts class_edge_counts(const Graph& h, const EdgeBipartition& b) {
  ClassEdgeCounts c;
  for (int v = 0; v < h.vertex_count(); ++v) {
    if (b.vertex_class(v)) {
      ++c.size2;
      c.degsum2 += h.degree(v);
    } else {
      ++c.size1;
      c.degsum1 += h.degree(v);
    }
  }
  for (int e = 0; e < h.edge_count(); ++e) {
    int cu = b.vertex_class(h.edge(e).u), cv = b.vertex_class(h.edge(e).v);
    if (cu != cv) {
      ++c.crossing;
      if (b.forest_part >> e & 1)
        throw std::logic_error("class_edge_counts: 2-forest edge crosses the vertex classes");
      continue;
    }
    if (b.tree_part >> e & 1) (cu ? c.e2 : c.e1)++;
  }
  return c;
}

// Σ deg − 2(|Vi|−1) − 2·e_i must equal the crossing-edge count on both sides.
inline bool degree_identity_holds(const Graph& h, const EdgeBipartition& b) {
  ClassEdgeCounts c = class_edge_counts(h, b);
  return c.degsum1 - 2 * (c.size1 - 1) - 2 * c.e1 == c.crossing &&
         c.degsum2 - 2 * (c.size2 - 1) - 2 * c.e2 == c.crossing;
}

// Edges of the cycle whose endpoints straddle the two components of
// tree_part − chord; always includes the chord itself.
inline std::vector<int> crossing_edges_on_cycle(const Graph& h, const EdgeBipartition& b,
                                                const CompatibleCycle& c) {
  uint64_t cut_tree = b.tree_part & ~(uint64_t{1} << c.chord);
  detail::RollbackDsu dsu(h.vertex_count());
  for (int e = 0; e < h.edge_count(); ++e)
    if (cut_tree >> e & 1) dsu.unite(h.edge(e).u, h.edge(e).v);
  std::vector<int> out;
  for (int e = 0; e < h.edge_count(); ++e)
    if (c.edges >> e & 1 && dsu.find(h.edge(e).u) != dsu.find(h.edge(e).v)) out.push_back(e);
  return out;
}

// Exchanges the chord with another crossing edge of the cycle; vertex classes
// are preserved.
inline EdgeBipartition cycle_swap(const Graph& h, const EdgeBipartition& b,
                                  const CompatibleCycle& c, int f_prime) {
  if (f_prime == c.chord || !(c.edges >> f_prime & 1))
    throw std::invalid_argument("cycle_swap: replacement edge is not on the cycle");
  uint64_t cut_tree = b.tree_part & ~(uint64_t{1} << c.chord);
  detail::RollbackDsu dsu(h.vertex_count());
  for (int e = 0; e < h.edge_count(); ++e)
    if (cut_tree >> e & 1) dsu.unite(h.edge(e).u, h.edge(e).v);
  if (dsu.find(h.edge(f_prime).u) == dsu.find(h.edge(f_prime).v))
    throw std::invalid_argument("cycle_swap: replacement edge does not cross the tree split");
  uint64_t tree = b.tree_part ^ (uint64_t{1} << c.chord) ^ (uint64_t{1} << f_prime);
  EdgeBipartition swapped = make_bipartition(h, tree);
  if (swapped.class2_mask != b.class2_mask)
    throw std::logic_error("cycle_swap: vertex classes changed");
  return swapped;
}

struct SwapGraph {
  std::vector<int> vert_ids;              // indices into the system's bipartition list
  std::vector<std::vector<int>> adj;      // local indices
  std::vector<int> degree;
};

// The auxiliary graph on the cycle-swap union: vertices are the bipartitions
// of the union, edges the cycle-swap moves.
inline SwapGraph build_swap_graph(const BipartitionSystem& sys) {
  int nsplits = 0;
  const Split* splits = detail::swap_union(sys.tag, nsplits);
  SwapGraph x;
  x.vert_ids = sys.members(splits, nsplits);
  std::unordered_map<uint64_t, int> local;
  local.reserve(x.vert_ids.size() * 2);
  for (size_t i = 0; i < x.vert_ids.size(); ++i)
    local[sys.all[x.vert_ids[i]].tree_part] = static_cast<int>(i);
  x.adj.resize(x.vert_ids.size());
  x.degree.assign(x.vert_ids.size(), 0);

  for (size_t i = 0; i < x.vert_ids.size(); ++i) {
    const EdgeBipartition& tau = sys.all[x.vert_ids[i]];
    std::vector<int>& nb = x.adj[i];
    for (const CompatibleCycle& c : compatible_cycles(sys.h, tau)) {
      std::vector<int> cross = crossing_edges_on_cycle(sys.h, tau, c);
      for (int fp : cross) {
        if (fp == c.chord) continue;
        EdgeBipartition next = cycle_swap(sys.h, tau, c, fp);
        auto it = local.find(next.tree_part);
        if (it == local.end())
          throw std::logic_error("swap_graph: a swap left the defining union");
        nb.push_back(it->second);
      }
    }
    std::vector<int> sorted = nb;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::logic_error("swap_graph: two distinct swaps reached the same neighbour");
    x.degree[i] = static_cast<int>(nb.size());
  }

  for (size_t i = 0; i < x.adj.size(); ++i)
    for (int j : x.adj[i]) {
      const std::vector<int>& back = x.adj[j];
      if (std::find(back.begin(), back.end(), static_cast<int>(i)) == back.end())
        throw std::logic_error("swap_graph: adjacency is not symmetric");
    }
  return x;
}

// ---------------------------------------------------------------------------
// Verification suites. Guarantee failures surface as counted violations with
// notes; the callers decide process exit codes.

struct LemmaResult {
  std::string lemma;
  uint64_t instances_checked = 0;
  uint64_t violations = 0;
  double millis = 0;
  std::vector<std::string> notes;

  LemmaResult() = default;
  explicit LemmaResult(std::string name) : lemma(std::move(name)) {}

  void violation(const std::string& note) {
    ++violations;
    if (notes.size() < 5) notes.push_back(note);
  }
};

struct PairReport {
  int v = -1, w = -1;
  CaseTag tag = CaseTag::ISO;
  std::vector<LemmaResult> lemmas;
};

struct SuiteOptions {
  bool inject_fault = false;  // test hook: deliberately misreports one expansion parity
};

namespace detail {

class Stopwatch {
 public:
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline void suite_case_parity(const BipartitionSystem& sys, int c2v, int c2w, LemmaResult& r) {
  r.instances_checked += 2;
  if (c2_from_bipartitions(sys, Side::v) != c2v)
    r.violation("decompletion at v: split-count parity differs from c2");
  if (c2_from_bipartitions(sys, Side::w) != c2w)
    r.violation("decompletion at w: split-count parity differs from c2");
}

inline void suite_expansion(const BipartitionSystem& sys, int c2v, int c2w, bool odd_k,
                            bool inject_fault, LemmaResult& r) {
  int rhs = expansion_rhs_parity(sys);
  if (inject_fault) rhs ^= 1;
  ++r.instances_checked;
  if (rhs != ((c2v + c2w) & 1))
    r.violation("expansion parity differs from c2 difference");
  if (odd_k || sys.tag == CaseTag::T) {
    ++r.instances_checked;
    if (rhs != 0) r.violation("expansion parity is nonzero");
  }
}

inline void run_two_valent_union(const BipartitionSystem& sys, int pivot_vertex,
                                 const Split* splits, LemmaResult& r) {
  std::vector<int> ids = sys.members(splits, 2);
  for (int id : ids) {
    ++r.instances_checked;
    const EdgeBipartition& b = sys.all[id];
    try {
      EdgeBipartition image = two_valent_swap(sys.h, b, pivot_vertex);
      uint8_t lm = letter_mask_of(sys.letters, image);
      if (!split_matches(lm, splits[0]) && !split_matches(lm, splits[1])) {
        r.violation("swap image left the union");
        continue;
      }
      if (image == b) {
        r.violation("swap has a fixed point");
        continue;
      }
      if (!(two_valent_swap(sys.h, image, pivot_vertex) == b))
        r.violation("swap twice is not the identity");
    } catch (const std::exception& e) {
      r.violation(std::string("swap failed: ") + e.what());
    }
  }
  ++r.instances_checked;
  if ((sys.count_split(splits[0]) + sys.count_split(splits[1])) % 2 != 0)
    r.violation("union of the two split counts is odd");
}

inline void suite_two_valent(const BipartitionSystem& sys, LemmaResult& r) {
  if (sys.tag == CaseTag::S) {
    run_two_valent_union(sys, sys.letters[2], kTwoValentS, r);
  } else if (sys.tag == CaseTag::T) {
    run_two_valent_union(sys, sys.letters[1], kTwoValentTb, r);
    run_two_valent_union(sys, sys.letters[2], kTwoValentTc, r);
  }
}

inline void suite_control(const BipartitionSystem& sys, LemmaResult& unique_r,
                          LemmaResult& swap_r) {
  std::vector<int> ids = sys.members(kControlUnionR, 6);
  for (int id : ids) {
    const EdgeBipartition& tau = sys.all[id];
    ++unique_r.instances_checked;
    ++swap_r.instances_checked;
    try {
      EdgeBipartition image = control_swap(sys.h, sys.letters, tau);
      uint8_t lm = letter_mask_of(sys.letters, image);
      bool in_union = false;
      for (const Split& s : kControlUnionR) in_union = in_union || split_matches(lm, s);
      if (!in_union) {
        swap_r.violation("swap image left the six-set union");
        continue;
      }
      if (image == tau) {
        swap_r.violation("swap has a fixed point");
        continue;
      }
      if (!(control_swap(sys.h, sys.letters, image) == tau))
        swap_r.violation("swap twice is not the identity");
    } catch (const std::exception& e) {
      // control_vertex uniqueness failures surface here as well
      std::string what = e.what();
      if (what.find("control_vertex") != std::string::npos)
        unique_r.violation(what);
      else
        swap_r.violation(what);
    }
  }
  ++swap_r.instances_checked;
  uint64_t total = 0;
  for (const Split& s : kControlUnionR) total += sys.count_split(s);
  if (total % 2 != 0) swap_r.violation("six-set union has odd size");
}

inline void suite_cycles(const BipartitionSystem& sys, bool odd_k, LemmaResult& count_r,
                         LemmaResult& odd_r, LemmaResult& swap_r) {
  int nsplits = 0;
  const Split* splits = swap_union(sys.tag, nsplits);
  std::vector<char> in_union(sys.all.size(), 0);
  for (int id : sys.members(splits, nsplits)) in_union[id] = 1;

  for (size_t i = 0; i < sys.all.size(); ++i) {
    const EdgeBipartition& b = sys.all[i];
    ++count_r.instances_checked;
    std::vector<CompatibleCycle> cycles;
    try {
      cycles = compatible_cycles(sys.h, b);
      if (!degree_identity_holds(sys.h, b)) count_r.violation("degree identity fails");
    } catch (const std::exception& e) {
      count_r.violation(e.what());
      continue;
    }
    if (odd_k && in_union[i]) {
      ++odd_r.instances_checked;
      if (cycles.size() % 2 == 0) odd_r.violation("compatible cycle count is even");
    }
    if (!in_union[i]) continue;
    for (const CompatibleCycle& c : cycles) {
      std::vector<int> cross = crossing_edges_on_cycle(sys.h, b, c);
      ++swap_r.instances_checked;
      if (cross.size() % 2 != 0 || cross.size() < 2) {
        swap_r.violation("crossing edge count is not even and positive");
        continue;
      }
      if (std::find(cross.begin(), cross.end(), c.chord) == cross.end()) {
        swap_r.violation("chord does not cross its own tree split");
        continue;
      }
      for (int fp : cross) {
        if (fp == c.chord) continue;
        ++swap_r.instances_checked;
        try {
          EdgeBipartition next = cycle_swap(sys.h, b, c, fp);
          CompatibleCycle back = c;
          back.chord = fp;
          EdgeBipartition again = cycle_swap(sys.h, next, back, c.chord);
          if (!(again == b)) swap_r.violation("swapping back does not return the original");
        } catch (const std::exception& e) {
          swap_r.violation(e.what());
        }
      }
    }
  }
}

inline void suite_swap_graph(const BipartitionSystem& sys, LemmaResult& r) {
  try {
    SwapGraph x = build_swap_graph(sys);
    for (size_t i = 0; i < x.degree.size(); ++i) {
      ++r.instances_checked;
      if (x.degree[i] % 2 == 0)
        r.violation("vertex " + std::to_string(i) + " of the swap graph has even degree");
    }
    ++r.instances_checked;
    if (x.vert_ids.size() % 2 != 0) r.violation("swap graph has odd order");
    int nsplits = 0;
    const Split* splits = swap_union(sys.tag, nsplits);
    uint64_t total = 0;
    for (int i = 0; i < nsplits; ++i) total += sys.count_split(splits[i]);
    ++r.instances_checked;
    if (total != x.vert_ids.size()) r.violation("swap graph order differs from the union size");
    if (total % 2 != 0) r.violation("union parity sum is odd");
  } catch (const std::exception& e) {
    ++r.instances_checked;
    r.violation(e.what());
  }
}

}  // namespace detail

inline PairReport run_pair_suites(const Graph& k, int v, int w, int c2v, int c2w,
                                  const SuiteOptions& opt = {}) {
  PairReport rep;
  rep.v = v;
  rep.w = w;
  BoundaryConfig cfg = classify_case(k, v, w);
  rep.tag = cfg.tag;
  if (cfg.tag == CaseTag::ISO) return rep;

  bool odd_k = k.vertex_count() % 2 == 1;
  BipartitionSystem sys = build_bipartition_system(cfg);
  detail::Stopwatch watch;
  auto close = [&](LemmaResult r) {
    r.millis = watch.lap();
    rep.lemmas.push_back(std::move(r));
  };

  {
    LemmaResult r{"case_parity"};
    detail::suite_case_parity(sys, c2v, c2w, r);
    close(std::move(r));
  }
  {
    LemmaResult r{"expansion_parity"};
    detail::suite_expansion(sys, c2v, c2w, odd_k, opt.inject_fault, r);
    close(std::move(r));
  }
  {
    LemmaResult r{"two_valent_swap"};
    detail::suite_two_valent(sys, r);
    close(std::move(r));
  }
  if (cfg.tag == CaseTag::R) {
    LemmaResult unique_r{"control_vertex"};
    LemmaResult swap_r{"control_swap"};
    detail::suite_control(sys, unique_r, swap_r);
    close(std::move(unique_r));
    close(std::move(swap_r));
  }
  {
    LemmaResult count_r{"compatible_cycles"};
    LemmaResult odd_r{"odd_cycle_parity"};
    LemmaResult swap_r{"cycle_swap"};
    detail::suite_cycles(sys, odd_k, count_r, odd_r, swap_r);
    close(std::move(count_r));
    if (odd_k) close(std::move(odd_r));
    close(std::move(swap_r));
  }
  if (odd_k) {
    LemmaResult r{"swap_graph"};
    detail::suite_swap_graph(sys, r);
    close(std::move(r));
  }
  return rep;
}

inline PairReport run_pair_suites(const Graph& k, int v, int w, const SuiteOptions& opt = {}) {
  int c2v = c2_bipartition_p2(remove_vertices(k, {v}).g);
  int c2w = c2_bipartition_p2(remove_vertices(k, {w}).g);
  return run_pair_suites(k, v, w, c2v, c2w, opt);
}

// Runs every suite over every adjacent pair of K; c2 per decompletion is
// computed once up front.
inline std::vector<PairReport> run_all_pair_suites(const Graph& k, const SuiteOptions& opt = {}) {
  require_four_regular(k, "run_all_pair_suites");
  std::vector<int> c2_of(k.vertex_count());
  for (int v = 0; v < k.vertex_count(); ++v)
    c2_of[v] = c2_bipartition_p2(remove_vertices(k, {v}).g);
  std::vector<PairReport> out;
  for (const Edge& e : k.edges())
    out.push_back(run_pair_suites(k, e.u, e.v, c2_of[e.u], c2_of[e.v], opt));
  return out;
}

}  // namespace c2lab
