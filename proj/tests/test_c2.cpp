#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "c2lab/c2.hpp"
#include "c2lab/graph.hpp"
#include "c2lab/kirchhoff.hpp"

using namespace c2lab;

namespace {

Graph k4() { return Graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }

// [Psi]_p by walking every point of F_p^E and evaluating the spanning tree sum;
// independent of the zero-set decomposition inside point_count.
uint64_t zeros_brute(const Graph& g, int p) {
  int m = g.edge_count();
  std::vector<uint64_t> trees;
  for_each_spanning_tree(g, [&](uint64_t t) { trees.push_back(t); });
  std::vector<int> a(m, 0);
  uint64_t zeros = 0;
  for (;;) {
    int64_t psi = 0;
    for (uint64_t t : trees) {
      int64_t prod = 1;
      for (int e = 0; e < m; ++e)
        if (!(t >> e & 1)) prod = prod * a[e] % p;
      psi = (psi + prod) % p;
    }
    if (psi == 0) ++zeros;
    int i = 0;
    while (i < m && a[i] == p - 1) a[i++] = 0;
    if (i == m) break;
    ++a[i];
  }
  return zeros;
}

}  // namespace

TEST_CASE("point_count matches brute-force zero counting") {
  Graph c3(3, {{0, 1}, {0, 2}, {1, 2}});
  Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  Graph two_triangles(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
  std::vector<Graph> graphs = {c3, c4, k4(), two_triangles, decomplete(circulant(6), 0)};
  for (const Graph& g : graphs)
    for (int p : {2, 3}) REQUIRE(point_count(g, p) == zeros_brute(g, p));
  // one bigger sample at p = 2 only
  Graph c7dec = decomplete(circulant(7), 0);
  CHECK(point_count(c7dec, 2) == zeros_brute(c7dec, 2));
}

TEST_CASE("point_count of a disconnected graph covers the whole space") {
  Graph two_triangles(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
  CHECK(point_count(two_triangles, 2) == 64);
  CHECK(point_count(two_triangles, 3) == 729);
}

TEST_CASE("point_count is identical across worker counts") {
  Graph g = decomplete(circulant(7), 0);
  for (int p : {2, 3}) {
    uint64_t base = point_count(g, p, {}, 1);
    CHECK(point_count(g, p, {}, 2) == base);
    CHECK(point_count(g, p, {}, 8) == base);
  }
}

TEST_CASE("point_count rejects non-primes and enforces the budget") {
  Graph g = k4();
  CHECK_THROWS_AS(point_count(g, 4), std::invalid_argument);
  CHECK_THROWS_AS(point_count(g, 1), std::invalid_argument);
  Budget tiny{32};
  CHECK_THROWS_AS(point_count(g, 2, tiny), BudgetExceeded);
  CHECK_THROWS_WITH(point_count(g, 2, tiny), Catch::Matchers::ContainsSubstring("--budget"));
}

TEST_CASE("c2_from_count divides out p squared") {
  CHECK(c2_from_count(36, 2) == 1);
  CHECK(c2_from_count(0, 5) == 0);
  CHECK(c2_from_count(261, 3) == 2);
  CHECK_THROWS_AS(c2_from_count(5, 2), std::logic_error);
}

TEST_CASE("definition method on known decompletions") {
  struct Row {
    int n;  // completion vertex count, circulant steps {1,2}
    int p;
    uint64_t raw;
    int c2;
  };
  // values cross-checked against the Dodgson and bipartition methods
  const Row rows[] = {
      {6, 2, 156, 1},  {6, 3, 2529, 2},   {7, 2, 692, 1},    {7, 3, 24777, 2},
      {8, 2, 2988, 1}, {8, 3, 240777, 2}, {9, 2, 12756, 1},  {9, 3, 2325609, 2},
  };
  for (const Row& r : rows) {
    C2Result got = c2_definition_report(decomplete(circulant(r.n), 0), r.p);
    CHECK(got.raw_count == r.raw);
    CHECK(got.c2 == r.c2);
  }
  CHECK(c2_definition_report(k4(), 2).raw_count == 36);
  CHECK(c2_definition(k4(), 2) == 1);
  CHECK(c2_definition(k4(), 3) == 2);
}

TEST_CASE("c2_definition preconditions") {
  CHECK_THROWS_AS(c2_definition(Graph(4, {{0, 1}, {2, 3}}), 2), std::invalid_argument);
  CHECK_THROWS_AS(c2_definition(Graph(2, {{0, 1}}), 2), std::invalid_argument);
}

TEST_CASE("default Dodgson triple sits at the first 3-valent vertex") {
  Graph g = decomplete(circulant(7), 0);
  int u = first_vertex_of_degree(g, 3);
  auto inc = g.incident_edges(u);
  EdgeTriple t = default_dodgson_triple(g);
  CHECK(t.i == inc[1]);
  CHECK(t.j == inc[2]);
  CHECK(t.k == inc[0]);
  CHECK_THROWS_AS(default_dodgson_triple(circulant(6)), std::invalid_argument);
}

TEST_CASE("Dodgson method agrees with the definition") {
  for (int n : {5, 6, 7, 8}) {
    Graph g = decomplete(circulant(n), 0);
    for (int p : {2, 3}) CHECK(c2_dodgson(g, p) == c2_definition(g, p));
  }
}

TEST_CASE("Dodgson value is independent of the edge triple") {
  Graph g = decomplete(circulant(7), 0);
  int expect = c2_dodgson(g, 2);
  int m = g.edge_count();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        if (i == j || i == k || j == k) continue;
        REQUIRE(c2_dodgson(g, 2, EdgeTriple{i, j, k}) == expect);
      }
  Graph h = k4();
  int expect3 = c2_dodgson(h, 3);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) {
        if (i == j || i == k || j == k) continue;
        REQUIRE(c2_dodgson(h, 3, EdgeTriple{i, j, k}) == expect3);
      }
}

TEST_CASE("Dodgson strategies produce identical reports") {
  for (Graph g : {k4(), decomplete(circulant(6), 0), decomplete(circulant(7), 0)}) {
    for (int p : {2, 3}) {
      DodgsonReport a = c2_dodgson_report(g, p, std::nullopt, {}, 1, DodgsonStrategy::tables);
      DodgsonReport b = c2_dodgson_report(g, p, std::nullopt, {}, 1, DodgsonStrategy::per_point);
      CHECK(a.raw_count == b.raw_count);
      CHECK(a.c2 == b.c2);
    }
  }
}

TEST_CASE("Dodgson frozen counts on the K5 decompletion") {
  DodgsonReport r2 = c2_dodgson_report(k4(), 2);
  CHECK(r2.raw_count == 7);
  CHECK(r2.c2 == 1);
  DodgsonReport r3 = c2_dodgson_report(k4(), 3);
  CHECK(r3.raw_count == 19);
  CHECK(r3.c2 == 2);
}

TEST_CASE("Dodgson method rejects unsuitable input") {
  CHECK_THROWS_WITH(c2_dodgson(circulant(5), 2), Catch::Matchers::ContainsSubstring("2+|E|"));
  Graph c3(3, {{0, 1}, {0, 2}, {1, 2}});
  CHECK_THROWS_AS(c2_dodgson(c3, 2), std::invalid_argument);
  CHECK_THROWS_AS(c2_dodgson(k4(), 2, EdgeTriple{0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(c2_dodgson(k4(), 2, EdgeTriple{0, 1, 9}), std::invalid_argument);
}

TEST_CASE("bipartition method on the K5 decompletion counts exactly one split") {
  BipartitionCount r = c2_bipartition_p2_report(k4());
  CHECK(r.raw_count == 1);
  CHECK(r.c2 == 1);
  CHECK(r.u == 0);
}

TEST_CASE("bipartition method agrees with the definition at p = 2") {
  for (int n : {6, 7, 8, 9}) {
    Graph k = circulant(n);
    for (int v = 0; v < n; ++v) {
      Graph g = decomplete(k, v);
      CHECK(c2_bipartition_p2(g) == c2_definition(g, 2));
    }
  }
}

TEST_CASE("bipartition method does not depend on the vertex choices") {
  Graph g = decomplete(circulant(9), 4);
  int expect = c2_bipartition_p2(g);
  for (int u = 0; u < g.vertex_count(); ++u) {
    if (g.degree(u) != 3) continue;
    for (int v1 : g.neighbors(u)) REQUIRE(c2_bipartition_p2(g, u, v1) == expect);
  }
}

TEST_CASE("bipartition method input checks") {
  Graph g = decomplete(circulant(7), 0);
  int four_valent = first_vertex_of_degree(g, 4);
  REQUIRE(four_valent >= 0);
  CHECK_THROWS_AS(c2_bipartition_p2(g, four_valent), std::invalid_argument);
  CHECK_THROWS_AS(c2_bipartition_p2(g, 0, 99), std::invalid_argument);
  CHECK_THROWS_AS(c2_bipartition_p2(circulant(6)), std::invalid_argument);
}

TEST_CASE("c2_by_method dispatch") {
  Graph g = k4();
  CHECK(c2_by_method(g, 2, C2Method::definition).c2 == 1);
  CHECK(c2_by_method(g, 2, C2Method::dodgson).c2 == 1);
  CHECK(c2_by_method(g, 2, C2Method::bipartition).c2 == 1);
  CHECK_THROWS_AS(c2_by_method(g, 3, C2Method::bipartition), std::invalid_argument);
  CHECK(std::string(method_name(C2Method::definition)) == "definition");
  CHECK(std::string(method_name(C2Method::dodgson)) == "dodgson");
  CHECK(std::string(method_name(C2Method::bipartition)) == "bipartition");
}

TEST_CASE("completion invariance reports") {
  for (C2Method m : {C2Method::definition, C2Method::dodgson, C2Method::bipartition}) {
    InvarianceReport rep = verify_completion_invariance(circulant(7), 2, m);
    CHECK(rep.all_equal);
    CHECK(rep.first == -1);
    REQUIRE(rep.values.size() == 7);
    for (const InvarianceEntry& e : rep.values) CHECK(e.c2 == rep.values[0].c2);
  }
  CHECK_THROWS_AS(verify_completion_invariance(k4(), 2, C2Method::definition),
                  std::invalid_argument);
}
