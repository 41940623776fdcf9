#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "c2lab/algebra.hpp"
#include "c2lab/graph.hpp"
#include "c2lab/kirchhoff.hpp"

namespace c2lab {

struct Budget {
  uint64_t max_points = uint64_t{1} << 26;
};

struct BudgetExceeded : std::runtime_error {
  uint64_t required;
  explicit BudgetExceeded(uint64_t req, uint64_t allowed)
      : std::runtime_error("point space of " + std::to_string(req) +
                           " exceeds budget of " + std::to_string(allowed) +
                           "; raise --budget (or C2LAB_BUDGET) to at least " + std::to_string(req)),
        required(req) {}
};

namespace detail {

inline uint64_t checked_pow(uint64_t base, int exp, const Budget& budget) {
  uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > ~uint64_t{0} / base) throw BudgetExceeded(~uint64_t{0}, budget.max_points);
    v *= base;
  }
  if (v > budget.max_points) throw BudgetExceeded(v, budget.max_points);
  return v;
}

inline bool small_prime(int p) {
  for (int q : {2, 3, 5, 7, 11, 13})
    if (p == q) return true;
  return false;
}

inline void require_prime(int p) {
  if (!small_prime(p)) throw std::invalid_argument("p must be a small prime (2,3,5,7,11,13)");
}

// Deterministic block-parallel sum: partial results are combined in block order
// regardless of how many worker threads ran, so totals are bit-identical.
template <class Fn>
uint64_t sum_over_blocks(uint64_t nblocks, int jobs, Fn&& fn) {
  if (jobs < 1) jobs = 1;
  std::vector<uint64_t> partial(nblocks, 0);
  if (jobs == 1 || nblocks <= 1) {
    for (uint64_t b = 0; b < nblocks; ++b) partial[b] = fn(b);
  } else {
    std::atomic<uint64_t> next{0};
    auto work = [&] {
      for (;;) {
        uint64_t b = next.fetch_add(1);
        if (b >= nblocks) return;
        partial[b] = fn(b);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  uint64_t total = 0;
  for (uint64_t b = 0; b < nblocks; ++b) total += partial[b];
  return total;
}

// Weighted reduced Laplacian determinant over F_2, rows bit-packed.
inline int det_laplacian_gf2(const std::vector<std::pair<int, int>>& cell_edges, int dim) {
  if (dim == 0) return 1;
  std::array<uint64_t, 64> rows{};
  for (auto [cu, cv] : cell_edges) {
    // weight is 1 mod 2; loop pairs were filtered out by the caller
    if (cu < dim) rows[cu] ^= uint64_t{1} << cu;
    if (cv < dim) rows[cv] ^= uint64_t{1} << cv;
    if (cu < dim && cv < dim) {
      rows[cu] ^= uint64_t{1} << cv;
      rows[cv] ^= uint64_t{1} << cu;
    }
  }
  for (int c = 0; c < dim; ++c) {
    uint64_t bit = uint64_t{1} << c;
    int pivot = -1;
    for (int r = c; r < dim; ++r)
      if (rows[r] & bit) { pivot = r; break; }
    if (pivot < 0) return 0;
    std::swap(rows[c], rows[pivot]);
    for (int r = c + 1; r < dim; ++r)
      if (rows[r] & bit) rows[r] ^= rows[c];
  }
  return 1;
}

// Determinant of a small byte matrix mod odd prime p; destroys its scratch input.
inline int det_small_fp(uint8_t* a, int dim, int p) {
  int64_t det = 1;
  for (int c = 0; c < dim; ++c) {
    int pivot = -1;
    for (int r = c; r < dim; ++r)
      if (a[r * dim + c]) { pivot = r; break; }
    if (pivot < 0) return 0;
    if (pivot != c) {
      for (int k = c; k < dim; ++k) std::swap(a[c * dim + k], a[pivot * dim + k]);
      det = -det;
    }
    uint32_t inv = inv_mod(a[c * dim + c], p);
    det = det * a[c * dim + c] % p;
    for (int r = c + 1; r < dim; ++r) {
      uint32_t x = a[r * dim + c];
      if (!x) continue;
      uint32_t f = x * inv % p;
      for (int k = c; k < dim; ++k)
        a[r * dim + k] = static_cast<uint8_t>((a[r * dim + k] + (p - f) * a[c * dim + k]) % p);
    }
  }
  det %= p;
  return static_cast<int>(det < 0 ? det + p : det);
}

}  // namespace c2lab detail

// |{a in F_p^|E| : Psi_G(a) = 0}| by determinant evaluation at every point.
// Points are grouped by their zero set S: if S contains a cycle no spanning tree
// survives and every such point is a zero; otherwise S is contracted and the
// determinant reduces (Schur complement of the expanded Laplacian) to the
// weighted reduced Laplacian of G/S at the nonzero weights.
inline uint64_t point_count(const Graph& g, int p, const Budget& budget = {}, int jobs = 1) {
  detail::require_prime(p);
  int m = g.edge_count();
  int n = g.vertex_count();
  if (n == 0) return 0;
  detail::checked_pow(p, m, budget);

  uint64_t subsets = uint64_t{1} << m;
  uint64_t nblocks = std::min<uint64_t>(subsets, jobs > 1 ? uint64_t{64} * jobs : 1);
  uint64_t per = subsets / nblocks;

  auto count_block = [&](uint64_t b) -> uint64_t {
    uint64_t lo = b * per;
    uint64_t hi = (b + 1 == nblocks) ? subsets : lo + per;
    uint64_t zeros = 0;
    std::vector<int> cls(n);
    std::vector<int> root(n);
    for (uint64_t s = lo; s < hi; ++s) {
      // forest test and contraction classes for the zero set s
      detail::RollbackDsu dsu(n);
      bool forest = true;
      for (int e = 0; e < m && forest; ++e)
        if (s >> e & 1) forest = dsu.unite(g.edge(e).u, g.edge(e).v);
      int free_edges = m - std::popcount(s);
      if (!forest) {
        uint64_t pts = 1;
        for (int i = 0; i < free_edges; ++i) pts *= p - 1;
        zeros += pts;
        continue;
      }
      int classes = 0;
      for (int v = 0; v < n; ++v) {
        int r = dsu.find(v);
        if (r == v) root[v] = classes++;
        cls[v] = 0;
      }
      for (int v = 0; v < n; ++v) cls[v] = root[dsu.find(v)];
      int dim = classes - 1;

      std::vector<std::pair<int, int>> cell;  // non-loop contracted endpoints per free edge
      std::vector<int> var_edge;
      cell.reserve(free_edges);
      for (int e = 0; e < m; ++e) {
        if (s >> e & 1) continue;
        int cu = cls[g.edge(e).u], cv = cls[g.edge(e).v];
        var_edge.push_back(e);
        cell.emplace_back(cu, cv);
      }

      if (p == 2) {
        std::vector<std::pair<int, int>> live;
        for (auto [cu, cv] : cell)
          if (cu != cv) live.emplace_back(cu, cv);
        if (detail::det_laplacian_gf2(live, dim) == 0) ++zeros;
        continue;
      }

      // odd p: walk all nonzero weight vectors with an odometer, maintaining L
      int f = static_cast<int>(cell.size());
      std::vector<uint8_t> L(static_cast<size_t>(dim) * dim, 0);
      std::vector<uint8_t> scratch(L.size());
      std::vector<int> w(f, 1);
      auto bump = [&](int idx, int delta) {
        auto [cu, cv] = cell[idx];
        if (cu == cv) return;
        int d = ((delta % p) + p) % p;
        if (cu < dim) L[cu * dim + cu] = static_cast<uint8_t>((L[cu * dim + cu] + d) % p);
        if (cv < dim) L[cv * dim + cv] = static_cast<uint8_t>((L[cv * dim + cv] + d) % p);
        if (cu < dim && cv < dim) {
          L[cu * dim + cv] = static_cast<uint8_t>((L[cu * dim + cv] + p - d % p) % p);
          L[cv * dim + cu] = static_cast<uint8_t>((L[cv * dim + cu] + p - d % p) % p);
        }
      };
      for (int i = 0; i < f; ++i) bump(i, 1);
      for (;;) {
        scratch = L;
        if (detail::det_small_fp(scratch.data(), dim, p) == 0) ++zeros;
        int i = 0;
        while (i < f && w[i] == p - 1) {
          bump(i, 2 - p);  // reset weight from p-1 back to 1
          w[i] = 1;
          ++i;
        }
        if (i == f) break;
        ++w[i];
        bump(i, 1);
      }
    }
    return zeros;
  };

  return detail::sum_over_blocks(nblocks, jobs, count_block);
}

inline int c2_from_count(uint64_t zeros, int p) {
  uint64_t p2 = static_cast<uint64_t>(p) * p;
  if (zeros % p2 != 0)
    throw std::logic_error("point count " + std::to_string(zeros) + " is not divisible by p^2 = " +
                           std::to_string(p2) + "; c2 is undefined here");
  return static_cast<int>(zeros / p2 % p);
}

struct C2Result {
  uint64_t raw_count = 0;
  int c2 = 0;
};

inline C2Result c2_definition_report(const Graph& g, int p, const Budget& budget = {},
                                     int jobs = 1) {
  if (g.vertex_count() < 3)
    throw std::invalid_argument("c2_definition: need at least 3 vertices");
  if (!g.connected()) throw std::invalid_argument("c2_definition: graph is not connected");
  uint64_t zeros = point_count(g, p, budget, jobs);
  return {zeros, c2_from_count(zeros, p)};
}

inline int c2_definition(const Graph& g, int p, const Budget& budget = {}, int jobs = 1) {
  return c2_definition_report(g, p, budget, jobs).c2;
}

struct EdgeTriple {
  int i, j, k;
};

// Three edges meeting at the first 3-valent vertex; k is the lowest-index one.
inline EdgeTriple default_dodgson_triple(const Graph& g) {
  int u = first_vertex_of_degree(g, 3);
  if (u < 0)
    throw std::invalid_argument(
        "c2_dodgson: no 3-valent vertex; pass an explicit edge triple (i,j,k)");
  auto at = g.incident_edges(u);
  return {at[1], at[2], at[0]};
}

namespace detail {

// Evaluates one Dodgson minor determinant at 0/1 diagonal assignments, with the
// struck rows/columns and the incidence blocks prepared once.
struct DodgsonEvaluator {
  int p = 2;
  int dim = 0;
  std::vector<uint64_t> base_rows;              // p = 2
  std::vector<uint8_t> base_bytes;              // odd p
  std::vector<std::pair<int, int>> diag_cells;  // (row, col) per variable slot

  DodgsonEvaluator(const Graph& g, const std::vector<int>& vars, const std::vector<int>& I,
                   const std::vector<int>& J, const std::vector<int>& K, int prime)
      : p(prime) {
    int m = g.edge_count();
    int n = g.vertex_count();
    int full = m + n - 1;
    std::vector<int> row_of(full, -1), col_of(full, -1);
    std::vector<char> row_cut(full, 0), col_cut(full, 0);
    for (int e : I) row_cut[e] = 1;
    for (int e : J) col_cut[e] = 1;
    int r = 0, c = 0;
    for (int x = 0; x < full; ++x) {
      if (!row_cut[x]) row_of[x] = r++;
      if (!col_cut[x]) col_of[x] = c++;
    }
    dim = r;
    if (r != c) throw std::logic_error("dodgson evaluator: non-square minor");

    std::vector<int> a(m, 0);
    FpMatrix mat = expanded_laplacian(g, a, p == 2 ? 2 : p);
    (void)K;  // K variables simply stay zero on the diagonal
    if (p == 2) {
      if (dim > 64) throw std::invalid_argument("dodgson evaluator: minor larger than 64 columns");
      base_rows.assign(dim, 0);
      for (int x = 0; x < full; ++x) {
        if (row_of[x] < 0) continue;
        for (int y = 0; y < full; ++y)
          if (col_of[y] >= 0 && mat.at(x, y)) base_rows[row_of[x]] |= uint64_t{1} << col_of[y];
      }
    } else {
      base_bytes.assign(static_cast<size_t>(dim) * dim, 0);
      for (int x = 0; x < full; ++x) {
        if (row_of[x] < 0) continue;
        for (int y = 0; y < full; ++y)
          if (col_of[y] >= 0) base_bytes[static_cast<size_t>(row_of[x]) * dim + col_of[y]] = mat.at(x, y);
      }
    }
    for (int e : vars) {
      if (row_of[e] < 0 || col_of[e] < 0)
        throw std::logic_error("dodgson evaluator: variable edge struck from the minor");
      diag_cells.emplace_back(row_of[e], col_of[e]);
    }
  }

  int eval_mask(uint64_t ones) const {
    if (p == 2) {
      std::vector<uint64_t> rows = base_rows;
      for (size_t i = 0; i < diag_cells.size(); ++i)
        if (ones >> i & 1) rows[diag_cells[i].first] ^= uint64_t{1} << diag_cells[i].second;
      return det_gf2(std::move(rows));
    }
    std::vector<uint8_t> a = base_bytes;
    for (size_t i = 0; i < diag_cells.size(); ++i)
      if (ones >> i & 1) {
        auto [r, c] = diag_cells[i];
        a[static_cast<size_t>(r) * dim + c] = static_cast<uint8_t>((a[static_cast<size_t>(r) * dim + c] + 1) % p);
      }
    return det_small_fp(a.data(), dim, p);
  }
};

// In-place multilinear interpolation from values on {0,1}^N to coefficients.
inline void moebius_coeffs(std::vector<uint8_t>& f, int nvars, int p) {
  for (int i = 0; i < nvars; ++i) {
    uint64_t bit = uint64_t{1} << i;
    for (uint64_t msk = 0; msk < f.size(); ++msk)
      if (msk & bit) f[msk] = static_cast<uint8_t>((f[msk] + p - f[msk ^ bit]) % p);
  }
}

// Value table of a multilinear polynomial on all of F_p^N from its coefficients.
inline std::vector<uint8_t> expand_table(const std::vector<uint8_t>& coeffs, int nvars, int p,
                                         uint64_t table_size) {
  std::vector<uint8_t> v(table_size, 0);
  for (uint64_t msk = 0; msk < coeffs.size(); ++msk) {
    // embed subset mask into base-p digits {0,1}
    uint64_t idx = 0, scale = 1;
    for (int i = 0; i < nvars; ++i, scale *= p)
      if (msk >> i & 1) idx += scale;
    v[idx] = coeffs[msk];
  }
  uint64_t stride = 1;
  for (int d = 0; d < nvars; ++d, stride *= p) {
    for (uint64_t base = 0; base < table_size; base += stride * p)
      for (uint64_t off = 0; off < stride; ++off) {
        uint64_t i0 = base + off;
        uint8_t c0 = v[i0], c1 = v[i0 + stride];
        for (int val = 0; val < p; ++val)
          v[i0 + static_cast<uint64_t>(val) * stride] =
              static_cast<uint8_t>((c0 + val * c1) % p);
      }
  }
  return v;
}

}  // namespace detail

enum class DodgsonStrategy { tables, per_point };

struct DodgsonReport {
  EdgeTriple triple;
  uint64_t raw_count = 0;  // zeros of the product of the two Dodgson factors over F_p^(|E|-3)
  int c2 = 0;
};

// c2 via the two Dodgson factors Psi^{ik,jk} and Psi^{i,j}_k: minus the number
// of common-space points where their product vanishes, mod p.
inline DodgsonReport c2_dodgson_report(const Graph& g, int p,
                                       std::optional<EdgeTriple> triple = std::nullopt,
                                       const Budget& budget = {}, int jobs = 1,
                                       DodgsonStrategy strategy = DodgsonStrategy::tables) {
  detail::require_prime(p);
  int m = g.edge_count();
  int n = g.vertex_count();
  if (2 + m > 2 * n)
    throw std::invalid_argument("c2_dodgson: hypothesis 2+|E| <= 2|V| fails (" +
                                std::to_string(2 + m) + " > " + std::to_string(2 * n) + ")");
  EdgeTriple t = triple ? *triple : default_dodgson_triple(g);
  if (t.i == t.j || t.i == t.k || t.j == t.k || t.i < 0 || t.j < 0 || t.k < 0 || t.i >= m ||
      t.j >= m || t.k >= m)
    throw std::invalid_argument("c2_dodgson: need three distinct edge indices");
  int nvars = m - 3;
  if (nvars < 1) throw std::invalid_argument("c2_dodgson: too few edges");
  uint64_t space = detail::checked_pow(p, nvars, budget);

  std::vector<int> vars;
  for (int e = 0; e < m; ++e)
    if (e != t.i && e != t.j && e != t.k) vars.push_back(e);

  uint64_t zero_count = 0;
  if (strategy == DodgsonStrategy::per_point) {
    DodgsonSpec d1{{t.i, t.k}, {t.j, t.k}, {}};
    DodgsonSpec d2{{t.i}, {t.j}, {t.k}};
    std::vector<int> a(m, 0);
    std::vector<int> digits(nvars, 0);
    for (uint64_t it = 0;; ++it) {
      for (int v = 0; v < nvars; ++v) a[vars[v]] = digits[v];
      if (dodgson_eval(g, d1, a, p) == 0 || dodgson_eval(g, d2, a, p) == 0) ++zero_count;
      int idx = 0;
      while (idx < nvars && digits[idx] == p - 1) digits[idx++] = 0;
      if (idx == nvars) break;
      ++digits[idx];
    }
  } else {
    detail::DodgsonEvaluator f1(g, vars, {t.i, t.k}, {t.j, t.k}, {}, p);
    detail::DodgsonEvaluator f2(g, vars, {t.i}, {t.j}, {t.k}, p);
    uint64_t cube = uint64_t{1} << nvars;
    std::vector<uint8_t> v1(cube), v2(cube);
    uint64_t nblocks = std::min<uint64_t>(cube, jobs > 1 ? uint64_t{16} * jobs : 1);
    uint64_t per = cube / nblocks;
    detail::sum_over_blocks(nblocks, jobs, [&](uint64_t b) -> uint64_t {
      uint64_t hi = (b + 1 == nblocks) ? cube : (b + 1) * per;
      for (uint64_t y = b * per; y < hi; ++y) {
        v1[y] = static_cast<uint8_t>(f1.eval_mask(y));
        v2[y] = static_cast<uint8_t>(f2.eval_mask(y));
      }
      return 0;
    });
    if (p == 2) {
      for (uint64_t y = 0; y < cube; ++y) zero_count += (v1[y] == 0 || v2[y] == 0);
    } else {
      detail::moebius_coeffs(v1, nvars, p);
      detail::moebius_coeffs(v2, nvars, p);
      std::vector<uint8_t> t1 = detail::expand_table(v1, nvars, p, space);
      std::vector<uint8_t> t2 = detail::expand_table(v2, nvars, p, space);
      uint64_t nb = std::min<uint64_t>(space, jobs > 1 ? uint64_t{16} * jobs : 1);
      uint64_t per2 = space / nb;
      zero_count = detail::sum_over_blocks(nb, jobs, [&](uint64_t b) -> uint64_t {
        uint64_t hi = (b + 1 == nb) ? space : (b + 1) * per2;
        uint64_t z = 0;
        for (uint64_t y = b * per2; y < hi; ++y) z += (t1[y] == 0 || t2[y] == 0);
        return z;
      });
    }
  }
  return {t, zero_count, static_cast<int>((p - static_cast<int>(zero_count % p)) % p)};
}

inline int c2_dodgson(const Graph& g, int p, std::optional<EdgeTriple> triple = std::nullopt,
                      const Budget& budget = {}, int jobs = 1,
                      DodgsonStrategy strategy = DodgsonStrategy::tables) {
  return c2_dodgson_report(g, p, triple, budget, jobs, strategy).c2;
}

struct BipartitionCount {
  uint64_t raw_count = 0;
  int c2 = 0;
  int u = -1, v1 = -1;
};

// p = 2 only: c2 equals the parity of the number of ways to split the edges of
// G - u into a spanning tree and a spanning 2-forest separating v1 from v2, v3,
// where u is 3-valent with neighbors v1, v2, v3.
inline BipartitionCount c2_bipartition_p2_report(const Graph& g, int u = -1, int v1 = -1) {
  if (u < 0) {
    u = first_vertex_of_degree(g, 3);
    if (u < 0)
      throw std::invalid_argument("c2_bipartition: no 3-valent vertex in the graph");
  }
  if (g.degree(u) != 3) throw std::invalid_argument("c2_bipartition: chosen vertex is not 3-valent");
  auto nb = g.neighbors(u);
  if (nb[0] == nb[1] || nb[1] == nb[2])
    throw std::invalid_argument("c2_bipartition: neighbors of u are not distinct");
  if (v1 < 0) v1 = nb[0];
  if (v1 != nb[0] && v1 != nb[1] && v1 != nb[2])
    throw std::invalid_argument("c2_bipartition: v1 is not a neighbor of u");

  VertexDeletion del = remove_vertices(g, {u});
  const Graph& h = del.g;
  int hv1 = del.new_of_old[v1];
  std::vector<int> others;
  for (int x : nb)
    if (x != v1) others.push_back(del.new_of_old[x]);

  int mh = h.edge_count();
  uint64_t full = mh == 64 ? ~uint64_t{0} : (uint64_t{1} << mh) - 1;
  uint64_t count = 0;
  for_each_spanning_tree(h, [&](uint64_t tree) {
    uint64_t forest = full & ~tree;
    detail::RollbackDsu dsu(h.vertex_count());
    for (int e = 0; e < mh; ++e)
      if (forest >> e & 1)
        if (!dsu.unite(h.edge(e).u, h.edge(e).v)) return;  // complement has a cycle
    if (dsu.comps != 2) return;
    int c1 = dsu.find(hv1);
    if (dsu.find(others[0]) == c1 || dsu.find(others[1]) == c1) return;
    ++count;
  });
  return {count, static_cast<int>(count & 1), u, v1};
}

inline int c2_bipartition_p2(const Graph& g, int u = -1, int v1 = -1) {
  return c2_bipartition_p2_report(g, u, v1).raw_count & 1;
}

enum class C2Method { definition, dodgson, bipartition };

inline const char* method_name(C2Method m) {
  switch (m) {
    case C2Method::definition: return "definition";
    case C2Method::dodgson: return "dodgson";
    case C2Method::bipartition: return "bipartition";
  }
  return "?";
}

inline C2Result c2_by_method(const Graph& g, int p, C2Method method, const Budget& budget = {},
                             int jobs = 1) {
  switch (method) {
    case C2Method::definition:
      return c2_definition_report(g, p, budget, jobs);
    case C2Method::dodgson: {
      DodgsonReport r = c2_dodgson_report(g, p, std::nullopt, budget, jobs);
      return {r.raw_count, r.c2};
    }
    case C2Method::bipartition: {
      if (p != 2)
        throw std::invalid_argument("bipartition method is a p = 2 identity; use p = 2");
      BipartitionCount r = c2_bipartition_p2_report(g);
      return {r.raw_count, r.c2};
    }
  }
  throw std::logic_error("unknown method");
}

struct InvarianceEntry {
  int vertex;
  uint64_t raw_count;
  int c2;
};

struct InvarianceReport {
  int p;
  C2Method method;
  std::vector<InvarianceEntry> values;
  bool all_equal = true;
  int first = -1, second = -1;  // witness decompletion vertices when not all equal
};

// c2 of every decompletion of a 4-regular graph; flags any disagreeing pair.
inline InvarianceReport verify_completion_invariance(const Graph& k, int p, C2Method method,
                                                     const Budget& budget = {}, int jobs = 1) {
  require_four_regular(k, "verify_completion_invariance");
  InvarianceReport rep;
  rep.p = p;
  rep.method = method;
  for (int v = 0; v < k.vertex_count(); ++v) {
    Graph dec = remove_vertices(k, {v}).g;
    C2Result r = c2_by_method(dec, p, method, budget, jobs);
    rep.values.push_back({v, r.raw_count, r.c2});
  }
  for (size_t i = 1; i < rep.values.size(); ++i)
    if (rep.values[i].c2 != rep.values[0].c2) {
      rep.all_equal = false;
      rep.first = rep.values[0].vertex;
      rep.second = rep.values[i].vertex;
      break;
    }
  return rep;
}

}  // namespace c2lab
