#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <unistd.h>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <nlohmann/json.hpp>

using json = nlohmann::json;

namespace {

struct CliResult {
  std::string out;
  int code = -1;
};

std::string bin_path() {
  const char* bin = std::getenv("C2LAB_BIN");
  REQUIRE(bin != nullptr);
  return bin;
}

std::string corpus(const std::string& file) {
  const char* dir = std::getenv("C2LAB_CORPUS");
  REQUIRE(dir != nullptr);
  return std::string(dir) + "/" + file;
}

CliResult run_shell(const std::string& cmd) {
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  CliResult r;
  r.out = std::move(out);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

CliResult run_cli(const std::string& args, bool merge_stderr = false) {
  return run_shell(bin_path() + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null"));
}

std::vector<json> parse_records(const std::string& out) {
  std::vector<json> records;
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) records.push_back(json::parse(line));
  return records;
}

std::string strip_millis(const std::string& out) {
  std::string flat;
  for (json rec : parse_records(out)) {
    rec.erase("millis");
    flat += rec.dump() + "\n";
  }
  return flat;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

std::string temp_path(const std::string& tag) {
  return "/tmp/c2lab_cli_" + std::to_string(getpid()) + "_" + tag;
}

}  // namespace

TEST_CASE("c2 emits one record per vertex, prime, and method") {
  CliResult r = run_cli("c2 " + corpus("k5.g6") + " --p 2,3");
  REQUIRE(r.code == 0);
  std::vector<json> records = parse_records(r.out);
  REQUIRE(records.size() == 25);  // 5 vertices x (3 methods at p=2, 2 at p=3)
  for (const json& rec : records) {
    CHECK(rec.at("graph") == "D~{");
    int v = rec.at("n");
    CHECK(v >= 0);
    CHECK(v < 5);
    int p = rec.at("p");
    CHECK(rec.at("c2") == (p == 2 ? 1 : 2));
    CHECK(rec.at("millis").is_number());
    std::string method = rec.at("method");
    uint64_t raw = rec.at("raw_count");
    if (method == "definition") CHECK(raw == (p == 2 ? 36u : 261u));
    if (method == "dodgson") CHECK(raw == (p == 2 ? 7u : 19u));
    if (method == "bipartition") {
      CHECK(p == 2);
      CHECK(raw == 1);
    }
  }
}

TEST_CASE("c2 output is deterministic and unaffected by the worker count") {
  std::string args = "c2 " + corpus("k5.g6") + " --p 2,3";
  std::string first = strip_millis(run_cli(args + " --jobs 1").out);
  CHECK(strip_millis(run_cli(args + " --jobs 1").out) == first);
  CHECK(strip_millis(run_cli(args + " --jobs 4").out) == first);
}

TEST_CASE("verify reports invariance across decompletions") {
  CliResult r = run_cli("verify " + corpus("k5.g6") + " --p 2 --method all");
  REQUIRE(r.code == 0);
  std::vector<json> records = parse_records(r.out);
  REQUIRE(records.size() == 3);
  std::set<std::string> methods;
  for (const json& rec : records) {
    methods.insert(rec.at("method").get<std::string>());
    CHECK(rec.at("all_equal") == true);
    CHECK(rec.at("c2_by_vertex") == json::array({1, 1, 1, 1, 1}));
  }
  CHECK(methods == std::set<std::string>{"definition", "dodgson", "bipartition"});

  CliResult one = run_cli("verify " + corpus("k5.g6") + " --p 2");
  CHECK(parse_records(one.out).size() == 1);
  CHECK(parse_records(one.out).front().at("method") == "bipartition");
}

TEST_CASE("lemma sweep aggregates by case and passes on a bundled graph") {
  CliResult r = run_cli("verify " + corpus("circulant_7.g6") + " --lemmas");
  REQUIRE(r.code == 0);
  std::vector<json> all = parse_records(r.out);
  REQUIRE(!all.empty());
  CHECK(all.front().at("all_equal") == true);  // invariance record comes first
  std::vector<json> records;
  for (const json& rec : all)
    if (rec.contains("lemma")) records.push_back(rec);
  REQUIRE(records.size() == 14);  // 7 lemmas for each of the S and T cases
  std::set<std::string> cases, lemmas;
  for (const json& rec : records) {
    cases.insert(rec.at("case").get<std::string>());
    lemmas.insert(rec.at("lemma").get<std::string>());
    CHECK(rec.at("violations") == 0);
    CHECK(rec.at("instances_checked").get<uint64_t>() > 0);
  }
  CHECK(cases == std::set<std::string>{"S", "T"});
  CHECK(lemmas == std::set<std::string>{"case_parity", "expansion_parity", "two_valent_swap",
                                        "compatible_cycles", "odd_cycle_parity", "cycle_swap",
                                        "swap_graph"});
}

TEST_CASE("an injected fault flips the sweep to failure") {
  CliResult r = run_cli("verify " + corpus("circulant_7.g6") + " --lemmas --inject-fault");
  CHECK(r.code == 1);
  uint64_t total = 0;
  for (const json& rec : parse_records(r.out)) {
    if (!rec.contains("violations")) continue;
    uint64_t v = rec.at("violations");
    if (v > 0) CHECK(rec.at("lemma") == "expansion_parity");
    total += v;
  }
  CHECK(total > 0);
}

TEST_CASE("exit codes distinguish usage errors from verification failures") {
  CHECK(run_cli("c2 --bogus-flag x.g6").code == 2);
  CHECK(run_cli("c2 /nonexistent/missing.g6").code == 2);
  CHECK(run_cli("c2 - --method nonsense < /dev/null").code == 2);
  CHECK(run_cli("gen circulant --n 4").code == 2);

  std::string empty = temp_path("empty.g6");
  std::ofstream(empty).close();
  CliResult r = run_cli("c2 " + empty + " --p 2");
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::remove(empty.c_str());
}

TEST_CASE("c2 flags non-regular input while verify skips it") {
  CliResult compute = run_shell("echo Bw | " + bin_path() + " c2 - 2>&1");
  CHECK(compute.code == 1);
  CHECK(compute.out.find("skipping") != std::string::npos);

  CliResult skip = run_shell("echo Bw | " + bin_path() + " verify - 2>/dev/null");
  CHECK(skip.code == 0);
  CHECK(skip.out.empty());
}

TEST_CASE("csv output carries a header and the same fields") {
  CliResult r = run_cli("c2 " + corpus("k5.g6") + " --p 2 --method definition --csv");
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "graph,n,p,method,raw_count,c2,millis");
  CHECK(lines[1].rfind("D~{,0,2,definition,36,1,", 0) == 0);
}

TEST_CASE("records can be routed to a file") {
  std::string path = temp_path("records.jsonl");
  CliResult r = run_cli("c2 " + corpus("k5.g6") + " --p 2 --method bipartition --out " + path);
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(parse_records(slurp(path)).size() == 5);
  std::remove(path.c_str());
}

TEST_CASE("gen regenerates the bundled corpus byte for byte") {
  CHECK(run_cli("gen circulant --n 7").out == slurp(corpus("circulant_7.g6")));
  CHECK(run_cli("gen circulant --n 12").out == slurp(corpus("circulant_12.g6")));
  CHECK(run_cli("gen random --n 9 --degree 4 --count 20 --seed 1").out ==
        slurp(corpus("random_9.g6")));
  CHECK(run_cli("gen random --n 7 --degree 4 --count 20 --seed 1").out ==
        slurp(corpus("random_7.g6")));
}

TEST_CASE("expand prints the spanning tree polynomial and forest expansions") {
  std::string tri = temp_path("triangle.g6");
  std::ofstream(tri) << "Bw\n";
  CliResult plain = run_cli("expand " + tri);
  CHECK(plain.code == 0);
  CHECK(plain.out == "graph Bw\nkirchhoff:\n0\n1\n2\n");
  CliResult dodgson = run_cli("expand " + tri + " --I 0 --J 1");
  CHECK(dodgson.code == 0);
  CHECK(dodgson.out == "graph Bw\npartition: {0} {1 2}\nforest_sum_mod2:\n1\n");
  std::remove(tri.c_str());
}

TEST_CASE("graphs can be piped through stdin") {
  CliResult r =
      run_shell("echo D~{ | " + bin_path() + " c2 - --p 2 --method bipartition 2>/dev/null");
  CHECK(r.code == 0);
  CHECK(parse_records(r.out).size() == 5);
}
