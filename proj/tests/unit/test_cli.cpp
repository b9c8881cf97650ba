#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "vcforge/complicate.hpp"
#include "vcforge/harness.hpp"
#include "vcforge/subprocess.hpp"

// End-to-end runs of the installed binary: every subcommand, the documented
// exit code families, and byte-stable output trees.

namespace fs = std::filesystem;
using namespace vcforge;

namespace {

const std::string kBin = std::string(VCFORGE_BUILD_DIR) + "/vcforge";
const std::string kRepo = VCFORGE_SOURCE_DIR;

RunResult cli(const std::string& args, double timeout = 60) {
  return run_command(kBin + " " + args, timeout);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Scratch {
  fs::path dir;
  Scratch() {
    std::string tmpl =
        (fs::temp_directory_path() / "vcforge-cli-XXXXXX").string();
    char* made = mkdtemp(tmpl.data());
    REQUIRE(made != nullptr);
    dir = made;
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  std::string path(const std::string& name) const {
    return (dir / name).string();
  }
  std::string file(const std::string& name, const std::string& content) const {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    return (dir / name).string();
  }
};

// relative path -> bytes, for whole-tree comparisons
std::map<std::string, std::string> tree_snapshot(const std::string& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file())
      out[fs::relative(entry.path(), root).generic_string()] =
          slurp(entry.path().string());
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("cli: help text lists subcommands and exit codes") {
  RunResult help = cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(contains(help.output, "translate"));
  CHECK(contains(help.output, "complicate"));
  CHECK(contains(help.output, "stats"));
  CHECK(contains(help.output, "verify"));
  CHECK(contains(help.output, "report"));
  CHECK(contains(help.output, "Exit status"));

  RunResult bare = cli("");
  CHECK(bare.exit_code != 0);
}

TEST_CASE("cli: stats measures the binary search step condition") {
  Scratch s;
  RunResult r = cli("stats " + kRepo + "/fixtures/binary_search.xml -o " +
                    s.path("stats.json"));
  REQUIRE(r.exit_code == 0);

  auto doc = nlohmann::json::parse(slurp(s.path("stats.json")));
  REQUIRE(doc["goals"].size() == 1);
  const auto& g = doc["goals"][0];
  CHECK(g["goal_id"] == "BinarySearch.binary_search_vc");
  CHECK(g["size"] == 129);
  CHECK(g["depth"] == 17);
  CHECK(g["quantifier_count"] == 4);
  REQUIRE(g["per_category"].size() == 2);
  CHECK(g["per_category"]["IntegerArith"]["op_occurrences"] == 30);
  CHECK(g["per_category"]["IntegerArith"]["distinct_ops"] == 5);
  CHECK(g["per_category"]["ListSequence"]["op_occurrences"] == 18);
  CHECK(g["per_category"]["ListSequence"]["distinct_ops"] == 4);

  REQUIRE(doc["categories"].size() == 3);
  CHECK(doc["categories"][0]["id"] == "IntegerArith");
  CHECK(doc["categories"][1]["id"] == "ListSequence");
  CHECK(doc["categories"][2]["id"] == "All");
  for (const auto& row : doc["categories"]) CHECK(row["cases"] == 1);
  CHECK(doc["categories"][2]["size"]["average"] == 129.0);
  CHECK(doc["categories"][2]["quantifiers"]["p75"] == 4.0);
}

TEST_CASE("cli: the shipped taxonomy file matches the builtin tables") {
  Scratch s;
  RunResult builtin = cli("stats " + kRepo + "/fixtures/binary_search.xml -o " +
                          s.path("a.json"));
  RunResult from_file = cli("stats " + kRepo +
                            "/fixtures/binary_search.xml --taxonomy " + kRepo +
                            "/data/taxonomy.json -o " + s.path("b.json"));
  REQUIRE(builtin.exit_code == 0);
  REQUIRE(from_file.exit_code == 0);
  CHECK(slurp(s.path("a.json")) == slurp(s.path("b.json")));
}

TEST_CASE("cli: translate reproduces the checked-in rendering byte for byte") {
  Scratch s;
  RunResult r = cli("translate " + kRepo +
                    "/fixtures/demo_corpus.xml --target all -o " +
                    s.path("out"));
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.output,
                 "isabelle: 8 goals emitted, 0 circumvented, 3 library files"));
  CHECK(contains(r.output,
                 "lean: 8 goals emitted, 0 circumvented, 3 library files"));
  CHECK(contains(r.output,
                 "rocq: 8 goals emitted, 0 circumvented, 3 library files"));

  auto golden = tree_snapshot(kRepo + "/fixtures/golden");
  auto fresh = tree_snapshot(s.path("out"));
  REQUIRE(golden.size() == fresh.size());
  for (const auto& [rel, bytes] : golden) {
    REQUIRE_MESSAGE(fresh.count(rel) == 1, rel);
    CHECK_MESSAGE(fresh[rel] == bytes, rel);
  }

  // a second run lands on the same bytes
  RunResult again = cli("translate " + kRepo +
                        "/fixtures/demo_corpus.xml --target all -o " +
                        s.path("out2"));
  REQUIRE(again.exit_code == 0);
  CHECK(tree_snapshot(s.path("out2")) == fresh);
}

TEST_CASE("cli: dump-sexp prints one tab separated line per goal") {
  Scratch s;
  RunResult r = cli("translate " + kRepo +
                    "/fixtures/demo_corpus.xml --target lean --dump-sexp -o " +
                    s.path("out"));
  REQUIRE(r.exit_code == 0);
  size_t tabbed = 0;
  bool saw_size_nil = false;
  for (const auto& line : lines_of(r.output)) {
    if (!contains(line, "\t")) continue;
    ++tabbed;
    if (line.rfind("Base.size_nil\t(", 0) == 0) saw_size_nil = true;
  }
  CHECK(tabbed == 8);
  CHECK(saw_size_nil);
}

TEST_CASE("cli: rewrite rules swap the rendered vocabulary") {
  Scratch s;
  RunResult r = cli("translate " + kRepo +
                    "/fixtures/demo_corpus.xml --target lean --rules " + kRepo +
                    "/data/rules/demo50.json -o " + s.path("out"));
  REQUIRE(r.exit_code == 0);
  std::string goal = slurp(s.path("out/lean/goals/Main__stdlib_bridge.lean"));
  CHECK(contains(goal, "Isabelle.length l"));
  CHECK(!contains(goal, "Why3.length"));
}

TEST_CASE("cli: unsupported non-uniform datatypes are circumvented") {
  Scratch s;
  RunResult r = cli("translate " + kRepo +
                    "/fixtures/nonuniform.xml --target all -o " +
                    s.path("out"));
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.output, "isabelle: 1 goals emitted, 1 circumvented"));
  CHECK(contains(r.output, "lean: 2 goals emitted, 0 circumvented"));

  std::string isa_manifest = slurp(s.path("out/isabelle/manifest.jsonl"));
  bool circumvented_row = false;
  for (const auto& line : lines_of(isa_manifest))
    if (contains(line, "NonUniform.uses_nest") &&
        contains(line, "\"circumvented\""))
      circumvented_row = true;
  CHECK(circumvented_row);
  CHECK(!contains(slurp(s.path("out/lean/manifest.jsonl")), "circumvented"));

  CHECK(!fs::exists(s.path("out/isabelle/goals/NonUniform__uses_nest.thy")));
  CHECK(fs::exists(s.path("out/isabelle/goals/NonUniform__plain_add.thy")));
  CHECK(fs::exists(s.path("out/lean/goals/NonUniform__uses_nest.lean")));
}

TEST_CASE("cli: a profile file extends a builtin target") {
  Scratch s;
  RunResult r = cli("translate " + kRepo +
                    "/fixtures/binary_search.xml --profile " + kRepo +
                    "/data/profiles/lean_mathlib.json -o " + s.path("out"));
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.output, "lean-mathlib: 1 goals emitted"));
  std::string custom = slurp(
      s.path("out/lean-mathlib/goals/BinarySearch__binary_search_vc.lean"));
  CHECK(contains(custom, "Int.ediv"));
  CHECK(!contains(custom, " / "));

  RunResult plain = cli("translate " + kRepo +
                        "/fixtures/binary_search.xml --target lean -o " +
                        s.path("plain"));
  REQUIRE(plain.exit_code == 0);
  std::string stock =
      slurp(s.path("plain/lean/goals/BinarySearch__binary_search_vc.lean"));
  CHECK(contains(stock, " / 2"));
  CHECK(!contains(stock, "Int.ediv"));

  RunResult mismatch = cli("translate " + kRepo +
                           "/fixtures/binary_search.xml --profile " + kRepo +
                           "/data/profiles/lean_mathlib.json --target "
                           "isabelle -o " +
                           s.path("x"));
  CHECK(mismatch.exit_code == 3);
  RunResult with_all = cli("translate " + kRepo +
                           "/fixtures/binary_search.xml --profile " + kRepo +
                           "/data/profiles/lean_mathlib.json --target all -o " +
                           s.path("y"));
  CHECK(with_all.exit_code == 3);
}

TEST_CASE("cli: complicate strips annotations and is idempotent") {
  Scratch s;
  std::string src = slurp(kRepo + "/fixtures/binary_search.mlw");
  std::string expected = vcforge::erase(src, find_annotations(src));
  REQUIRE(expected != src);
  REQUIRE(contains(src, "assert {"));
  REQUIRE(!contains(expected, "assert {"));

  RunResult r = cli("complicate " + kRepo + "/fixtures/binary_search.mlw -o " +
                    s.path("once.mlw"));
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.output, "erased 1 annotation"));
  CHECK(slurp(s.path("once.mlw")) == expected);

  RunResult again =
      cli("complicate " + s.path("once.mlw") + " -o " + s.path("twice.mlw"));
  REQUIRE(again.exit_code == 0);
  CHECK(contains(again.output, "erased 0 annotations"));
  CHECK(slurp(s.path("twice.mlw")) == expected);
}

TEST_CASE("cli: complicate lists spans as JSON lines") {
  std::string src = slurp(kRepo + "/fixtures/binary_search.mlw");
  RunResult r =
      cli("complicate " + kRepo + "/fixtures/binary_search.mlw --list-spans");
  REQUIRE(r.exit_code == 0);
  auto rows = lines_of(r.output);
  REQUIRE(rows.size() == 1);
  auto j = nlohmann::json::parse(rows[0]);
  CHECK(j["kind"] == "assert");
  size_t start = j["start_byte"].get<size_t>();
  size_t end = j["end_byte"].get<size_t>();
  CHECK(start < end);
  CHECK(end <= src.size());
  CHECK(contains(src.substr(start, end - start), "assert {"));

  // the fixture holds no lemmas or proof hints, so a narrowed kind list
  // leaves the source alone
  RunResult narrowed = cli("complicate " + kRepo +
                           "/fixtures/binary_search.mlw --list-spans "
                           "--kinds lemma,apply");
  REQUIRE(narrowed.exit_code == 0);
  CHECK(narrowed.output.empty());

  RunResult bogus = cli("complicate " + kRepo +
                        "/fixtures/binary_search.mlw --kinds bogus");
  CHECK(bogus.exit_code == 3);
}

TEST_CASE("cli: exit codes follow the documented families") {
  Scratch s;

  RunResult missing = cli("stats " + s.path("absent.xml"));
  CHECK(missing.exit_code == 5);
  CHECK(contains(missing.output, "error"));

  std::string truncated = s.file("broken.xml", "<corpus><theory name='T'>");
  CHECK(cli("translate " + truncated).exit_code == 2);

  std::string tiny = s.file("tiny.xml",
                            "<corpus><theory name=\"T\">"
                            "<goal name=\"g\"><const name=\"true\"/></goal>"
                            "</theory></corpus>");
  CHECK(cli("translate " + tiny + " --target agda").exit_code == 3);

  std::string bad_rules = s.file("rules.json", "[1, 2]");
  CHECK(cli("translate " + tiny + " --rules " + bad_rules + " -o " +
            s.path("o1"))
            .exit_code == 3);

  // a self-feeding contractum blows the firing budget
  std::string looping = s.file(
      "loop.json",
      R"({"rules": [{"head": "f", "arity": 1, "contractum": ["f", ["f", "$0"]]}]})");
  std::string f_goal = s.file("fgoal.xml",
                              "<corpus><theory name=\"T\"><goal name=\"g\">"
                              "<app><const name=\"f\"/><num value=\"1\"/></app>"
                              "</goal></theory></corpus>");
  RunResult blown = cli("translate " + f_goal + " --lax-unknowns --rules " +
                        looping + " --budget 10 -o " + s.path("o2"));
  CHECK(blown.exit_code == 3);
  CHECK(contains(blown.output, "budget"));

  // unknown constants: fatal when strict, demoted by --lax-unknowns, and
  // caught again at emission under --strict-unmapped
  CHECK(cli("translate " + f_goal + " -o " + s.path("o3")).exit_code == 2);
  RunResult unmapped = cli("translate " + f_goal +
                           " --lax-unknowns --strict-unmapped -o " +
                           s.path("o4"));
  CHECK(unmapped.exit_code == 4);

  std::string cyclic = s.file("cycle.xml",
                              "<corpus>"
                              "<theory name=\"A\"><import name=\"B\"/>"
                              "<goal name=\"g\"><const name=\"true\"/></goal>"
                              "</theory>"
                              "<theory name=\"B\"><import name=\"A\"/>"
                              "<goal name=\"h\"><const name=\"true\"/></goal>"
                              "</theory></corpus>");
  CHECK(cli("translate " + cyclic + " -o " + s.path("o5")).exit_code == 2);
}

TEST_CASE("cli: verify scores attempts against a stub checker") {
  Scratch s;
  RunResult emitted = cli("translate " + kRepo +
                          "/fixtures/demo_corpus.xml --target lean -o " +
                          s.path("out"));
  REQUIRE(emitted.exit_code == 0);

  std::string adapter = s.file(
      "adapter.json",
      R"({"target": "lean", "command": "grep -q trivial {file}", "timeout_seconds": 30})");
  std::vector<ProofAttempt> attempts = {
      {"Base.size_nil", "lean", 1, "exact trivial"},
      {"Base.size_nil", "lean", 2, "sorry"},
      {"Base.total_pair", "lean", 1, "apply missing_lemma"},
      {"Base.total_pair", "lean", 2, "exact trivial"},
  };
  std::string attempts_path =
      s.file("attempts.jsonl", attempts_to_jsonl(attempts));

  RunResult r = cli("verify --adapter " + adapter + " --attempts " +
                    attempts_path + " --goals-dir " + s.path("out/lean/goals") +
                    " --jobs 2 -o " + s.path("results.jsonl"));
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.output, "2 proved, 1 fake, 1 failed, 0 timed out"));

  std::vector<Verdict> results =
      parse_results_jsonl(slurp(s.path("results.jsonl")));
  REQUIRE(results.size() == 4);
  CHECK(results[0].status == Status::Proved);
  CHECK(results[1].status == Status::Fake);
  CHECK(contains(results[1].log, "fake proof token 'sorry'"));
  CHECK(results[2].status == Status::Failed);
  REQUIRE(results[2].failure_class.has_value());
  CHECK(*results[2].failure_class == FailureClass::Other);
  CHECK(results[3].status == Status::Proved);
  for (size_t i = 0; i < results.size(); ++i) {
    CHECK(results[i].goal_id == attempts[i].goal_id);
    CHECK(results[i].attempt_index == attempts[i].attempt_index);
  }

  RunResult report =
      cli("report " + s.path("results.jsonl") + " --pass-at 1,2");
  REQUIRE(report.exit_code == 0);
  auto rows = lines_of(report.output);
  REQUIRE(rows.size() == 3);  // header, Base, Total
  CHECK(contains(rows[0], "pass@1"));
  CHECK(contains(rows[0], "pass@2"));
  CHECK(rows[1].rfind("Base", 0) == 0);
  CHECK(contains(rows[1], "2 / 2"));
  CHECK(contains(rows[1], "50.00%"));
  CHECK(contains(rows[1], "100.00%"));
  CHECK(rows[2].rfind("Total", 0) == 0);

  std::string cats = s.file(
      "cats.json",
      R"({"Base.size_nil": "alpha", "Base.total_pair": "beta"})");
  RunResult split = cli("report " + s.path("results.jsonl") + " --categories " +
                        cats + " --pass-at 1");
  REQUIRE(split.exit_code == 0);
  auto split_rows = lines_of(split.output);
  REQUIRE(split_rows.size() == 4);
  CHECK(split_rows[1].rfind("alpha", 0) == 0);
  CHECK(contains(split_rows[1], "1 / 1"));
  CHECK(contains(split_rows[1], "100.00%"));
  CHECK(split_rows[2].rfind("beta", 0) == 0);
  CHECK(contains(split_rows[2], "0.00%"));
  CHECK(split_rows[3].rfind("Total", 0) == 0);
  CHECK(contains(split_rows[3], "2 / 2"));
}

TEST_CASE("cli: verify and report reject malformed inputs by family") {
  Scratch s;
  RunResult emitted = cli("translate " + kRepo +
                          "/fixtures/demo_corpus.xml --target lean -o " +
                          s.path("out"));
  REQUIRE(emitted.exit_code == 0);

  std::string adapter = s.file(
      "adapter.json",
      R"({"target": "lean", "command": "true # {file}", "timeout_seconds": 30})");
  std::string good_attempts = s.file(
      "attempts.jsonl",
      attempts_to_jsonl({{"Base.size_nil", "lean", 1, "exact trivial"}}));

  std::string no_slot = s.file(
      "noslot.json", R"({"target": "lean", "command": "true"})");
  CHECK(cli("verify --adapter " + no_slot + " --attempts " + good_attempts +
            " --goals-dir " + s.path("out/lean/goals"))
            .exit_code == 3);

  std::string duplicated = s.file(
      "dup.jsonl", attempts_to_jsonl({
                       {"Base.size_nil", "lean", 1, "exact trivial"},
                       {"Base.size_nil", "lean", 1, "rfl"},
                   }));
  CHECK(cli("verify --adapter " + adapter + " --attempts " + duplicated +
            " --goals-dir " + s.path("out/lean/goals"))
            .exit_code == 2);

  CHECK(cli("verify --adapter " + adapter + " --attempts " + good_attempts +
            " --goals-dir " + s.path("missing-dir"))
            .exit_code == 5);

  RunResult ok = cli("verify --adapter " + adapter + " --attempts " +
                     good_attempts + " --goals-dir " +
                     s.path("out/lean/goals") + " -o " +
                     s.path("results.jsonl"));
  REQUIRE(ok.exit_code == 0);
  CHECK(cli("report " + s.path("results.jsonl") + " --pass-at 0")
            .exit_code == 3);
  CHECK(cli("report " + s.path("results.jsonl") + " --pass-at x")
            .exit_code == 3);
  CHECK(cli("report " + s.path("results.jsonl") + " --pass-at 2")
            .exit_code == 2);  // only one attempt recorded

  std::string partial = s.file("partial.json", R"({"Other.goal": "alpha"})");
  CHECK(cli("report " + s.path("results.jsonl") + " --categories " + partial)
            .exit_code == 2);
}

TEST_CASE("cli: verify times out slow checkers") {
  Scratch s;
  RunResult emitted = cli("translate " + kRepo +
                          "/fixtures/demo_corpus.xml --target lean -o " +
                          s.path("out"));
  REQUIRE(emitted.exit_code == 0);

  std::string adapter = s.file(
      "adapter.json",
      R"({"target": "lean", "command": "sleep 5 # {file}", "timeout_seconds": 0.3})");
  std::string attempts = s.file(
      "attempts.jsonl",
      attempts_to_jsonl({{"Base.size_nil", "lean", 1, "exact trivial"}}));

  RunResult r = cli("verify --adapter " + adapter + " --attempts " + attempts +
                    " --goals-dir " + s.path("out/lean/goals") + " -o " +
                    s.path("results.jsonl"));
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.output, "0 proved, 0 fake, 0 failed, 1 timed out"));

  std::vector<Verdict> results =
      parse_results_jsonl(slurp(s.path("results.jsonl")));
  REQUIRE(results.size() == 1);
  CHECK(results[0].status == Status::Timeout);
  REQUIRE(results[0].failure_class.has_value());
  CHECK(results[0].wall_seconds < 3.0);
}

TEST_CASE("cli: named transformers run after the rule pass") {
  Scratch s;
  std::string doubled = s.file(
      "dn.xml",
      "<corpus><theory name=\"T\"><goal name=\"g\">"
      "<app><const name=\"not\"/>"
      "<app><const name=\"not\"/>"
      "<app><app><const name=\"lt\"/><num value=\"0\"/></app>"
      "<num value=\"1\"/></app>"
      "</app></app>"
      "</goal></theory></corpus>");

  RunResult stock = cli("translate " + doubled + " --target lean --dump-sexp "
                        "-o " + s.path("a"));
  REQUIRE(stock.exit_code == 0);
  CHECK(contains(stock.output, "(const not)"));

  RunResult collapsed = cli("translate " + doubled +
                            " --target lean --dump-sexp "
                            "--transform double_negation -o " +
                            s.path("b"));
  REQUIRE(collapsed.exit_code == 0);
  CHECK(!contains(collapsed.output, "not"));

  CHECK(cli("translate " + doubled + " --transform bogus -o " + s.path("c"))
            .exit_code == 3);
}
