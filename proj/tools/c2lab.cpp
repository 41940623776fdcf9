#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "c2lab/c2.hpp"
#include "c2lab/gf2poly.hpp"
#include "c2lab/graph.hpp"
#include "c2lab/graph6.hpp"
#include "c2lab/kirchhoff.hpp"
#include "c2lab/proofkit.hpp"

using json = nlohmann::ordered_json;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

double round_ms(double ms) { return std::round(ms * 1000.0) / 1000.0; }

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  return out;
}

std::vector<c2lab::C2Method> parse_methods(const std::string& s) {
  std::vector<c2lab::C2Method> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if (tok == "all") {
      return {c2lab::C2Method::definition, c2lab::C2Method::dodgson,
              c2lab::C2Method::bipartition};
    } else if (tok == "definition") {
      out.push_back(c2lab::C2Method::definition);
    } else if (tok == "dodgson") {
      out.push_back(c2lab::C2Method::dodgson);
    } else if (tok == "bipartition") {
      out.push_back(c2lab::C2Method::bipartition);
    } else {
      throw CLI::ValidationError("--method", "unknown method '" + tok + "'");
    }
  }
  return out;
}

c2lab::Budget resolve_budget(uint64_t cli_value) {
  c2lab::Budget b;
  if (const char* env = std::getenv("C2LAB_BUDGET")) {
    char* end = nullptr;
    uint64_t v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) b.max_points = v;
  }
  if (cli_value > 0) b.max_points = cli_value;
  return b;
}

struct Sink {
  std::ofstream file;
  std::ostream* out = &std::cout;
  bool csv = false;
  bool wrote_csv_header = false;

  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw CLI::ValidationError("--out", "cannot open '" + path + "'");
    out = &file;
  }

  void emit(const json& record) {
    if (!csv) {
      *out << record.dump() << "\n";
      return;
    }
    if (!wrote_csv_header) {
      bool first = true;
      for (auto& [key, value] : record.items()) {
        (void)value;
        *out << (first ? "" : ",") << key;
        first = false;
      }
      *out << "\n";
      wrote_csv_header = true;
    }
    bool first = true;
    for (auto& [key, value] : record.items()) {
      (void)key;
      *out << (first ? "" : ",");
      first = false;
      if (value.is_string())
        *out << value.get<std::string>();
      else
        *out << value.dump();
    }
    *out << "\n";
  }
};

std::vector<c2lab::Graph> load_inputs(const std::vector<std::string>& paths) {
  std::vector<c2lab::Graph> graphs;
  for (const std::string& path : paths) {
    if (path == "-") {
      for (c2lab::Graph& g : c2lab::read_graph6_lines(std::cin)) graphs.push_back(std::move(g));
      continue;
    }
    for (c2lab::Graph& g : c2lab::read_graph6_file(path)) graphs.push_back(std::move(g));
  }
  return graphs;
}

int run_c2(const std::vector<std::string>& inputs, const std::string& primes_csv,
           const std::string& methods_csv, uint64_t budget_flag, int jobs, Sink& sink) {
  std::vector<int> primes = parse_int_list(primes_csv);
  std::vector<c2lab::C2Method> methods = parse_methods(methods_csv);
  c2lab::Budget budget = resolve_budget(budget_flag);
  bool had_error = false;

  for (const c2lab::Graph& k : load_inputs(inputs)) {
    std::string g6 = c2lab::encode_graph6(k);
    try {
      c2lab::require_four_regular(k, "c2");
    } catch (const std::exception& e) {
      std::cerr << "c2lab: skipping " << g6 << ": " << e.what() << "\n";
      had_error = true;
      continue;
    }
    for (int v = 0; v < k.vertex_count(); ++v) {
      c2lab::Graph dec = c2lab::remove_vertices(k, {v}).g;
      for (int p : primes) {
        for (c2lab::C2Method method : methods) {
          if (method == c2lab::C2Method::bipartition && p != 2) continue;
          Timer t;
          try {
            c2lab::C2Result r = c2lab::c2_by_method(dec, p, method, budget, jobs);
            sink.emit(json{{"graph", g6},
                           {"n", v},
                           {"p", p},
                           {"method", c2lab::method_name(method)},
                           {"raw_count", r.raw_count},
                           {"c2", r.c2},
                           {"millis", round_ms(t.ms())}});
          } catch (const std::exception& e) {
            std::cerr << "c2lab: " << g6 << " vertex " << v << " p=" << p << " "
                      << c2lab::method_name(method) << ": " << e.what() << "\n";
            had_error = true;
          }
        }
      }
    }
  }
  return had_error ? 1 : 0;
}

int run_verify(const std::vector<std::string>& inputs, const std::string& primes_csv,
               const std::string& methods_csv, uint64_t budget_flag, int jobs, bool lemmas,
               bool inject_fault, Sink& sink) {
  std::vector<int> primes = parse_int_list(primes_csv);
  std::vector<c2lab::C2Method> methods = parse_methods(methods_csv);
  c2lab::Budget budget = resolve_budget(budget_flag);
  bool violations_found = false;
  bool had_error = false;

  for (const c2lab::Graph& k : load_inputs(inputs)) {
    std::string g6 = c2lab::encode_graph6(k);
    try {
      c2lab::require_four_regular(k, "verify");
    } catch (const std::exception& e) {
      std::cerr << "c2lab: skipping " << g6 << ": " << e.what() << "\n";
      continue;
    }

    for (int p : primes) {
      for (c2lab::C2Method method : methods) {
        if (method == c2lab::C2Method::bipartition && p != 2) continue;
        Timer t;
        try {
          c2lab::InvarianceReport rep =
              c2lab::verify_completion_invariance(k, p, method, budget, jobs);
          json values = json::array();
          for (const c2lab::InvarianceEntry& e : rep.values) values.push_back(e.c2);
          sink.emit(json{{"graph", g6},
                         {"p", p},
                         {"method", c2lab::method_name(method)},
                         {"c2_by_vertex", values},
                         {"all_equal", rep.all_equal},
                         {"millis", round_ms(t.ms())}});
          if (!rep.all_equal) violations_found = true;
        } catch (const std::exception& e) {
          std::cerr << "c2lab: " << g6 << " p=" << p << " " << c2lab::method_name(method)
                    << ": " << e.what() << "\n";
          had_error = true;
        }
      }
    }

    if (lemmas) {
      c2lab::SuiteOptions opt;
      opt.inject_fault = inject_fault;
      try {
        std::vector<c2lab::PairReport> reports = c2lab::run_all_pair_suites(k, opt);
        // aggregate by (case, lemma), preserving first-seen order
        std::vector<std::pair<std::string, std::string>> order;
        std::map<std::pair<std::string, std::string>, std::pair<uint64_t, uint64_t>> agg;
        std::map<std::pair<std::string, std::string>, double> agg_ms;
        for (const c2lab::PairReport& pr : reports) {
          for (const c2lab::LemmaResult& lr : pr.lemmas) {
            auto key = std::make_pair(std::string(c2lab::case_name(pr.tag)), lr.lemma);
            if (!agg.count(key)) order.push_back(key);
            agg[key].first += lr.instances_checked;
            agg[key].second += lr.violations;
            agg_ms[key] += lr.millis;
            for (const std::string& note : lr.notes)
              std::cerr << "c2lab: " << g6 << " [" << key.first << "/" << key.second
                        << "]: " << note << "\n";
          }
        }
        for (const auto& key : order) {
          auto [checked, bad] = agg[key];
          sink.emit(json{{"graph", g6},
                         {"case", key.first},
                         {"lemma", key.second},
                         {"instances_checked", checked},
                         {"violations", bad},
                         {"millis", round_ms(agg_ms[key])}});
          if (bad > 0) violations_found = true;
        }
      } catch (const std::exception& e) {
        std::cerr << "c2lab: " << g6 << " lemma suites: " << e.what() << "\n";
        had_error = true;
      }
    }
  }
  if (had_error) return 1;
  return violations_found ? 1 : 0;
}

int run_gen_circulant(int n, const std::string& steps_csv, Sink& sink) {
  std::vector<int> steps = parse_int_list(steps_csv);
  c2lab::Graph g = c2lab::circulant(n, steps);
  *sink.out << c2lab::encode_graph6(g) << "\n";
  return 0;
}

int run_gen_random(int n, int degree, int count, uint64_t seed, Sink& sink) {
  for (int i = 0; i < count; ++i) {
    c2lab::Graph g = c2lab::random_regular(n, degree, seed + static_cast<uint64_t>(i));
    *sink.out << c2lab::encode_graph6(g) << "\n";
  }
  return 0;
}

void dump_remapped(const c2lab::Gf2Poly& poly, const std::vector<int>& edge_origin,
                   std::ostream& out) {
  std::vector<std::vector<int>> rows;
  for (uint64_t term : poly.terms()) {
    std::vector<int> idx;
    for (int b = 0; b < 64; ++b)
      if (term >> b & 1) idx.push_back(edge_origin.empty() ? b : edge_origin[b]);
    std::sort(idx.begin(), idx.end());
    rows.push_back(std::move(idx));
  }
  std::sort(rows.begin(), rows.end());
  for (const std::vector<int>& idx : rows) {
    if (idx.empty()) {
      out << "1\n";
      continue;
    }
    for (size_t i = 0; i < idx.size(); ++i) out << (i ? " " : "") << idx[i];
    out << "\n";
  }
}

int run_expand(const std::vector<std::string>& inputs, const std::string& i_csv,
               const std::string& j_csv, const std::string& k_csv, Sink& sink) {
  std::vector<int> I = parse_int_list(i_csv), J = parse_int_list(j_csv),
                   K = parse_int_list(k_csv);
  std::ostream& out = *sink.out;
  for (const c2lab::Graph& g : load_inputs(inputs)) {
    out << "graph " << c2lab::encode_graph6(g) << "\n";
    if (I.empty() && J.empty() && K.empty()) {
      out << "kirchhoff:\n";
      dump_remapped(c2lab::kirchhoff_poly(g), {}, out);
      continue;
    }
    c2lab::DodgsonSpec spec{I, J, K};
    spec.validate(g);
    std::vector<c2lab::VertexPartition> parts = c2lab::dodgson_forest_expansion(g, spec);
    c2lab::EdgeDeletion cut = c2lab::delete_edges(g, spec.struck_union());
    c2lab::Gf2Poly total;
    for (const c2lab::VertexPartition& p : parts) {
      out << "partition:";
      for (const std::vector<int>& part : p.parts) {
        out << " {";
        for (size_t i = 0; i < part.size(); ++i) out << (i ? " " : "") << part[i];
        out << "}";
      }
      out << "\n";
      total = total + c2lab::spanning_forest_poly(cut.g, p);
    }
    out << "forest_sum_mod2:\n";
    dump_remapped(total, cut.edge_origin, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"c2 invariants of 4-regular graph decompletions: compute and verify"};
  app.require_subcommand(1);

  std::vector<std::string> inputs;
  std::string primes = "2";
  std::string methods = "all";
  uint64_t budget_flag = 0;
  int jobs = 1;
  std::string out_path;
  bool csv = false;

  auto add_common = [&](CLI::App* cmd, bool with_engine_flags) {
    cmd->add_option("inputs", inputs, "graph6 files ('-' for stdin)");
    if (with_engine_flags) {
      cmd->add_option("--p", primes, "comma-separated primes (default 2)");
      cmd->add_option("--budget", budget_flag, "max p^|E| points (env C2LAB_BUDGET)");
      cmd->add_option("--jobs", jobs, "worker threads");
    }
    cmd->add_option("--out", out_path, "output path (default stdout)");
    cmd->add_flag("--csv", csv, "flatten records to CSV");
  };

  CLI::App* c2_cmd = app.add_subcommand("c2", "c2 of every decompletion of each input graph");
  add_common(c2_cmd, true);
  c2_cmd->add_option("--method", methods, "definition,dodgson,bipartition or all");

  bool lemmas = false, inject_fault = false;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "check completion invariance; --lemmas runs the proof suites");
  add_common(verify_cmd, true);
  std::string verify_methods = "bipartition";
  verify_cmd->add_option("--method", verify_methods, "definition,dodgson,bipartition or all");
  verify_cmd->add_flag("--lemmas", lemmas, "verify every proof suite on all adjacent pairs");
  verify_cmd->add_flag("--inject-fault", inject_fault,
                       "test hook: misreport one expansion parity");

  CLI::App* gen_cmd = app.add_subcommand("gen", "emit graph6 corpora");
  gen_cmd->require_subcommand(1);
  int gen_n = 0, gen_count = 1, gen_degree = 4;
  uint64_t gen_seed = 1;
  std::string gen_steps = "1,2";
  CLI::App* gen_circ = gen_cmd->add_subcommand("circulant", "circulant graph on given steps");
  gen_circ->add_option("--n", gen_n, "vertex count")->required();
  gen_circ->add_option("--steps", gen_steps, "comma-separated steps (default 1,2)");
  gen_circ->add_option("--out", out_path, "output path (default stdout)");
  CLI::App* gen_rand = gen_cmd->add_subcommand("random", "seeded random regular graphs");
  gen_rand->add_option("--n", gen_n, "vertex count")->required();
  gen_rand->add_option("--degree", gen_degree, "vertex degree (default 4)");
  gen_rand->add_option("--count", gen_count, "number of graphs");
  gen_rand->add_option("--seed", gen_seed, "seed of the first graph; successors increment");
  gen_rand->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* expand_cmd =
      app.add_subcommand("expand", "dump the Kirchhoff polynomial or a Dodgson forest expansion");
  std::string i_csv, j_csv, k_csv;
  add_common(expand_cmd, false);
  expand_cmd->add_option("--I", i_csv, "row strike set (comma-separated edge indices)");
  expand_cmd->add_option("--J", j_csv, "column strike set");
  expand_cmd->add_option("--K", k_csv, "edge set forced to zero");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Sink sink;
    sink.csv = csv;
    sink.open(out_path);
    if (c2_cmd->parsed()) return run_c2(inputs, primes, methods, budget_flag, jobs, sink);
    if (verify_cmd->parsed())
      return run_verify(inputs, primes, verify_methods, budget_flag, jobs, lemmas, inject_fault,
                        sink);
    if (gen_cmd->parsed()) {
      if (gen_circ->parsed()) return run_gen_circulant(gen_n, gen_steps, sink);
      return run_gen_random(gen_n, gen_degree, gen_count, gen_seed, sink);
    }
    if (expand_cmd->parsed()) return run_expand(inputs, i_csv, j_csv, k_csv, sink);
  } catch (const CLI::Error& e) {
    std::cerr << "c2lab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "c2lab: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
