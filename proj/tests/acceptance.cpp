// Acceptance gate: runs every advertised guarantee end to end and prints one
// PASS/FAIL line per criterion. Exits nonzero if anything fails.
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "c2lab/c2.hpp"
#include "c2lab/gf2poly.hpp"
#include "c2lab/graph.hpp"
#include "c2lab/graph6.hpp"
#include "c2lab/kirchhoff.hpp"
#include "c2lab/proofkit.hpp"

using namespace c2lab;

namespace {

int failures = 0;

void report(const std::string& criterion, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << detail << "\n";
  if (!ok) ++failures;
}

struct CorpusEntry {
  std::string file;
  Graph k;
};

std::vector<CorpusEntry> load_corpus() {
  const char* dir = std::getenv("C2LAB_CORPUS");
  if (!dir) throw std::runtime_error("C2LAB_CORPUS is not set");
  std::vector<CorpusEntry> out;
  std::vector<std::string> files = {"k5.g6",           "circulant_6.g6",  "circulant_7.g6",
                                    "circulant_8.g6",  "circulant_9.g6",  "circulant_10.g6",
                                    "circulant_11.g6", "circulant_12.g6", "random_7.g6",
                                    "random_9.g6"};
  for (const std::string& f : files)
    for (const Graph& g : read_graph6_file(std::string(dir) + "/" + f)) out.push_back({f, g});
  return out;
}

// ---------------------------------------------------------------- criterion 1

void criterion_examples() {
  Graph c3(3, {{0, 1}, {0, 2}, {1, 2}});
  bool ok = kirchhoff_poly(c3).terms() == std::vector<uint64_t>{1, 2, 4};

  // three hubs joined to marked vertices; letter bits follow the edge order
  Graph fig(6, {{0, 3}, {0, 4}, {0, 5}, {1, 3}, {1, 5}, {2, 3}, {2, 4}});
  uint64_t a = 1 << 0, d = 1 << 1, f = 1 << 2, c = 1 << 3, g = 1 << 4, b = 1 << 5, e = 1 << 6;
  Gf2Poly target = Gf2Poly({e, d}) * Gf2Poly({c | a, c | b, a | b, f | b, g | b});
  ok = ok && spanning_forest_poly(fig, VertexPartition{{{0, 1}, {2}}}) == target;
  ok = ok && target.terms().size() == 10;

  Graph k33(6, {{0, 3}, {0, 4}, {0, 5}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5}});
  size_t r = bipartition_set(k33, VertexPartition{{{0, 1}, {2}}}).size();
  ok = ok && r == 18;

  report("1", ok, "triangle Kirchhoff polynomial, marked forest product, r_{{a,b},{c}} = " +
                      std::to_string(r));
}

// ---------------------------------------------------------------- criterion 2

void criterion_method_agreement(const std::vector<CorpusEntry>& corpus) {
  bool ok = true;
  int at_p2 = 0, at_p3 = 0;
  for (const CorpusEntry& entry : corpus) {
    for (int v = 0; v < entry.k.vertex_count(); ++v) {
      Graph dec = remove_vertices(entry.k, {v}).g;
      if (dec.edge_count() > 18) continue;
      int def2 = c2_definition(dec, 2);
      ok = ok && c2_dodgson(dec, 2) == def2 && c2_bipartition_p2(dec) == def2;
      ++at_p2;
      if (dec.edge_count() <= 14) {
        ok = ok && c2_definition(dec, 3) == c2_dodgson(dec, 3);
        ++at_p3;
      }
    }
  }
  report("2", ok, "methods agree on " + std::to_string(at_p2) + " decompletions at p=2, " +
                      std::to_string(at_p3) + " at p=3");
}

// ---------------------------------------------------------------- criterion 3

void criterion_invariance(const std::vector<CorpusEntry>& corpus) {
  bool ok = true;
  int graphs = 0;
  for (const CorpusEntry& entry : corpus) {
    if (entry.k.vertex_count() % 2 == 0) continue;
    ++graphs;
    for (C2Method m : {C2Method::definition, C2Method::dodgson, C2Method::bipartition})
      ok = ok && verify_completion_invariance(entry.k, 2, m).all_equal;
  }
  report("3", ok, "all decompletion c2 values equal at p=2 by every method on " +
                      std::to_string(graphs) + " odd completions");
}

// ---------------------------------------------------------------- criterion 4

void criterion_lemma_suites(const std::vector<CorpusEntry>& corpus) {
  std::map<std::string, std::pair<uint64_t, uint64_t>> tally;  // lemma -> {instances, violations}
  for (const CorpusEntry& entry : corpus)
    for (const PairReport& rep : run_all_pair_suites(entry.k))
      for (const LemmaResult& r : rep.lemmas) {
        tally[r.lemma].first += r.instances_checked;
        tally[r.lemma].second += r.violations;
      }

  auto letter = [&](const std::string& name, const std::vector<std::string>& lemmas,
                    const std::string& what) {
    uint64_t instances = 0, violations = 0;
    for (const std::string& l : lemmas) {
      instances += tally[l].first;
      violations += tally[l].second;
    }
    report(name, instances > 0 && violations == 0,
           what + " (" + std::to_string(instances) + " instances, " +
               std::to_string(violations) + " violations)");
  };
  letter("4a", {"two_valent_swap"}, "2-valent swaps are fixed-point-free involutions on their unions");
  letter("4b", {"control_vertex"}, "control vertex is unique on every R-case bipartition");
  letter("4c", {"control_swap"}, "control swaps are involutions and the six-set parity vanishes");
  letter("4d", {"compatible_cycles", "odd_cycle_parity"},
         "compatible-cycle counting routes agree and odd unions have odd counts");
  letter("4e", {"swap_graph"}, "swap graphs have all-odd degrees and even order");
  letter("4f", {"case_parity", "expansion_parity"},
         "expansion parity equals the c2 difference on every adjacent pair");
}

// ---------------------------------------------------------------- criterion 5

void criterion_even_circulants() {
  bool ok = true;
  int pairs = 0;
  for (int n : {6, 8, 10}) {
    Graph k = circulant(n);
    for (const Edge& edge : k.edges()) {
      if (classify_case(k, edge.u, edge.v).tag != CaseTag::T) continue;
      ++pairs;
      PairReport rep = run_pair_suites(k, edge.u, edge.v);
      for (const LemmaResult& r : rep.lemmas)
        if (r.lemma == "two_valent_swap" || r.lemma == "expansion_parity")
          ok = ok && r.violations == 0 && r.instances_checked > 0;
      int cv = c2_bipartition_p2(remove_vertices(k, {edge.u}).g);
      int cw = c2_bipartition_p2(remove_vertices(k, {edge.v}).g);
      ok = ok && cv == cw;
    }
  }
  report("5", ok, "swap identities and c2 equality hold for " + std::to_string(pairs) +
                      " double-triangle pairs on even circulants");
}

// ---------------------------------------------------------------- criterion 6

// multilinear polynomial on nvars variables as a bitmask over monomials
bool cw_holds_p2(uint64_t poly, int nvars) {
  int zeros = 0;
  for (uint32_t x = 0; x < (uint32_t{1} << nvars); ++x) {
    int value = 0;
    for (uint32_t m = 0; m < (uint32_t{1} << nvars); ++m)
      if ((poly >> m & 1) && (m & x) == m) value ^= 1;
    zeros += value == 0;
  }
  uint32_t full = (uint32_t{1} << nvars) - 1;
  return (zeros & 1) == (poly >> full & 1);
}

bool cw_suite_p2() {
  for (int nvars = 1; nvars <= 4; ++nvars) {
    uint64_t limit = uint64_t{1} << (1 << nvars);
    for (uint64_t poly = 0; poly < limit; ++poly)
      if (!cw_holds_p2(poly, nvars)) return false;
  }
  std::mt19937_64 rng(20260814);
  for (int nvars = 5; nvars <= 10; ++nvars)
    for (int trial = 0; trial < 20; ++trial) {
      int bits = 1 << nvars;
      std::vector<uint64_t> poly((bits + 63) / 64, 0);
      for (int m = 0; m < bits; ++m)
        if (rng() & 1) poly[m / 64] |= uint64_t{1} << (m % 64);
      int zeros = 0;
      for (uint32_t x = 0; x < (uint32_t{1} << nvars); ++x) {
        int value = 0;
        for (uint32_t m = 0; m < (uint32_t{1} << nvars); ++m)
          if ((poly[m / 64] >> (m % 64) & 1) && (m & x) == m) value ^= 1;
        zeros += value == 0;
      }
      uint32_t full = (uint32_t{1} << nvars) - 1;
      if ((zeros & 1) != int(poly[full / 64] >> (full % 64) & 1)) return false;
    }
  return true;
}

// sparse integer polynomial keyed by per-variable exponents
using IntPoly = std::map<std::vector<int>, int64_t>;

bool cw_spot_p3(int nvars, std::mt19937_64& rng) {
  IntPoly f;
  std::uniform_int_distribution<int> expo(0, 2), coeff(1, 2), count(1, 8);
  int terms = count(rng);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> mono(nvars);
    int deg = 0;
    for (int& e : mono) deg += e = expo(rng);
    if (deg > nvars) continue;  // keep total degree within the variable count
    f[mono] += coeff(rng);
  }
  int64_t zeros = 0;
  std::vector<int> x(nvars, 0);
  for (;;) {
    int64_t value = 0;
    for (const auto& [mono, c] : f) {
      int64_t term = c;
      for (int i = 0; i < nvars; ++i)
        for (int e = 0; e < mono[i]; ++e) term = term * x[i] % 3;
      value = (value + term) % 3;
    }
    zeros += value == 0;
    int i = 0;
    while (i < nvars && x[i] == 2) x[i++] = 0;
    if (i == nvars) break;
    ++x[i];
  }
  // coefficient of the all-squares monomial in f^2
  std::vector<int> target(nvars, 2);
  int64_t c_target = 0;
  for (const auto& [m1, c1] : f)
    for (const auto& [m2, c2] : f) {
      bool hit = true;
      for (int i = 0; i < nvars; ++i) hit = hit && m1[i] + m2[i] == 2;
      if (hit) c_target += c1 * c2;
    }
  return zeros % 3 == ((c_target % 3) + 3) % 3;
}

void criterion_infrastructure(const std::vector<CorpusEntry>& corpus) {
  bool ok = cw_suite_p2();

  std::mt19937_64 rng(20260814);
  for (int nvars : {1, 3, 5})
    for (int trial = 0; trial < 15; ++trial) ok = ok && cw_spot_p3(nvars, rng);

  for (const char* g6 : {"@", "A_", "Bw", "D~{"})
    ok = ok && encode_graph6(parse_graph6(g6)) == g6;
  for (const CorpusEntry& entry : corpus) ok = ok && parse_graph6(encode_graph6(entry.k)).edges() == entry.k.edges();
  std::mt19937_64 grng(7);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = random_regular(5 + int(grng() % 6), 4, int(grng() % 1000) + 1);
    ok = ok && parse_graph6(encode_graph6(g)).edges() == g.edges();
  }

  Graph dec = remove_vertices(circulant(9), {0}).g;
  for (int p : {2, 3}) ok = ok && point_count(dec, p, {}, 1) == point_count(dec, p, {}, 4);
  DodgsonReport one = c2_dodgson_report(dec, 2, std::nullopt, {}, 1, DodgsonStrategy::tables);
  DodgsonReport four = c2_dodgson_report(dec, 2, std::nullopt, {}, 4, DodgsonStrategy::tables);
  ok = ok && one.raw_count == four.raw_count && one.c2 == four.c2;

  report("6", ok, "coefficient counting suite, graph6 round-trips, worker-count determinism");
}

}  // namespace

int main() {
  try {
    std::vector<CorpusEntry> corpus = load_corpus();
    criterion_examples();
    criterion_method_agreement(corpus);
    criterion_invariance(corpus);
    criterion_lemma_suites(corpus);
    criterion_even_circulants();
    criterion_infrastructure(corpus);
  } catch (const std::exception& e) {
    std::cout << "FAIL criterion -: unexpected error: " << e.what() << "\n";
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
