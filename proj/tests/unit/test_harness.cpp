#include <doctest.h>
#include <stdlib.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "vcforge/errors.hpp"
#include "vcforge/harness.hpp"
#include "vcforge/subprocess.hpp"

using namespace vcforge;
namespace fs = std::filesystem;

namespace {

// Per-test scratch directory for goal files and spawn counters.
struct Scratch {
  fs::path dir;
  Scratch() {
    std::string tmpl =
        (fs::temp_directory_path() / "vcforge-test-XXXXXX").string();
    REQUIRE(mkdtemp(tmpl.data()) != nullptr);
    dir = tmpl;
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string file(const std::string& name, const std::string& content) {
    fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    REQUIRE(out.good());
    return p.string();
  }
};

CheckerAdapter lean_adapter(const std::string& command,
                            double timeout = 10.0) {
  CheckerAdapter a = default_adapter("lean");
  a.command_template = command;
  a.timeout_seconds = timeout;
  return a;
}

ProofAttempt attempt(const std::string& goal, size_t index,
                     const std::string& proof,
                     const std::string& target = "lean") {
  ProofAttempt a;
  a.goal_id = goal;
  a.target = target;
  a.attempt_index = index;
  a.proof_text = proof;
  return a;
}

Verdict verdict(const std::string& goal, size_t index, Status status,
                const std::string& target = "lean") {
  Verdict v;
  v.goal_id = goal;
  v.target = target;
  v.attempt_index = index;
  v.status = status;
  if (status == Status::Failed || status == Status::Timeout)
    v.failure_class = FailureClass::Other;
  return v;
}

const std::string kGoalFile = "theorem t : True := by\n  sorry\n";

}  // namespace

TEST_CASE("run_command captures combined output and exit codes") {
  RunResult ok = run_command("echo out; echo err >&2", 10.0);
  CHECK(ok.exit_code == 0);
  CHECK_FALSE(ok.timed_out);
  CHECK(ok.output.find("out") != std::string::npos);
  CHECK(ok.output.find("err") != std::string::npos);

  RunResult three = run_command("exit 3", 10.0);
  CHECK(three.exit_code == 3);
  CHECK_FALSE(three.timed_out);
}

TEST_CASE("run_command kills a command that outlives its timeout") {
  auto start = std::chrono::steady_clock::now();
  RunResult r = run_command("sleep 30", 0.4);
  double waited = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  CHECK(r.timed_out);
  CHECK(r.exit_code == -1);
  CHECK(waited < 5.0);
  CHECK(r.wall_seconds >= 0.3);
}

TEST_CASE("default adapters carry the per-target lexical facts") {
  CheckerAdapter isa = default_adapter("isabelle");
  CHECK(isa.placeholder == "sorry");
  CHECK(isa.fake_tokens == std::vector<std::string>{"sorry", "oops"});
  CHECK(isa.block_comment_open == "(*");
  CHECK(isa.line_comment.empty());

  CheckerAdapter lean = default_adapter("lean");
  CHECK(lean.placeholder == "sorry");
  CHECK(lean.fake_tokens == std::vector<std::string>{"sorry", "admit"});
  CHECK(lean.line_comment == "--");
  CHECK(lean.block_comment_open == "/-");

  CheckerAdapter rocq = default_adapter("rocq");
  CHECK(rocq.placeholder == "Admitted.");
  CHECK(rocq.fake_tokens ==
        std::vector<std::string>{"Admitted", "admit", "Abort"});

  for (const auto& a : {isa, lean, rocq}) {
    CHECK(a.timeout_seconds == 600);
    bool has_fact = false, has_const = false;
    for (const auto& m : a.undefined_entity_markers) {
      if (m == "Undefined fact") has_fact = true;
      if (m == "Undefined constant") has_const = true;
    }
    CHECK(has_fact);
    CHECK(has_const);
  }

  CHECK_THROWS_AS(default_adapter("metamath"), RuleFormatError);
}

TEST_CASE("parse_adapter overrides defaults and validates the template") {
  CheckerAdapter a = parse_adapter(R"({
    "target": "lean",
    "command": "lean --make {file}",
    "timeout_seconds": 120,
    "fake_tokens": ["sorry"],
    "syntax_error_markers": ["boom"]
  })");
  CHECK(a.target == "lean");
  CHECK(a.command_template == "lean --make {file}");
  CHECK(a.timeout_seconds == 120);
  CHECK(a.fake_tokens == std::vector<std::string>{"sorry"});
  CHECK(a.syntax_error_markers == std::vector<std::string>{"boom"});
  CHECK(a.line_comment == "--");  // untouched default

  CheckerAdapter custom = parse_adapter(
      R"({"target": "zeta", "command": "zeta {file}", "placeholder": "HOLE"})");
  CHECK(custom.placeholder == "HOLE");
  CHECK_FALSE(custom.undefined_entity_markers.empty());

  CHECK_THROWS_AS(parse_adapter("not json"), RuleFormatError);
  CHECK_THROWS_AS(parse_adapter("[1, 2]"), RuleFormatError);
  CHECK_THROWS_AS(parse_adapter(R"({"target": "lean"})"), RuleFormatError);
  CHECK_THROWS_AS(parse_adapter(R"({"command": "x {file}"})"),
                  RuleFormatError);
  CHECK_THROWS_AS(
      parse_adapter(R"({"target": "lean", "command": "lean goal.lean"})"),
      RuleFormatError);
  CHECK_THROWS_AS(
      parse_adapter(R"({"target": "lean", "command": "{file} {file}"})"),
      RuleFormatError);
  CHECK_THROWS_AS(
      parse_adapter(
          R"({"target": "lean", "command": "l {file}", "timeout_seconds": 0})"),
      RuleFormatError);
  CHECK_THROWS_AS(
      parse_adapter(
          R"({"target": "lean", "command": "l {file}", "timeout_seconds": -4})"),
      RuleFormatError);
  CHECK_THROWS_AS(
      parse_adapter(
          R"({"target": "lean", "command": "l {file}", "placeholder": ""})"),
      RuleFormatError);
  CHECK_THROWS_AS(
      parse_adapter(
          R"({"target": "lean", "command": "l {file}", "block_comment_open": ""})"),
      RuleFormatError);
}

TEST_CASE("load_adapter_file reads a config from disk") {
  Scratch s;
  std::string path = s.file(
      "adapter.json", R"({"target": "rocq", "command": "coqc {file}"})");
  CheckerAdapter a = load_adapter_file(path);
  CHECK(a.target == "rocq");
  CHECK(a.placeholder == "Admitted.");
  CHECK_THROWS_AS(load_adapter_file((s.dir / "absent.json").string()),
                  IoError);
}

TEST_CASE("detect_fake respects comments, strings and token boundaries") {
  CheckerAdapter lean = default_adapter("lean");
  CHECK_FALSE(detect_fake("intro h\nexact h", lean).has_value());
  CHECK(detect_fake("sorry", lean) == std::string("sorry"));
  CHECK(detect_fake("  intro h\n  admit", lean) == std::string("admit"));
  CHECK(detect_fake("admit\nsorry", lean) == std::string("admit"));
  CHECK_FALSE(detect_fake("apply sorry_free_lemma", lean).has_value());
  CHECK_FALSE(detect_fake("exact sorry'", lean).has_value());
  CHECK_FALSE(detect_fake("-- sorry\nexact h", lean).has_value());
  CHECK_FALSE(detect_fake("/- sorry -/ exact h", lean).has_value());
  CHECK(detect_fake("/- /- sorry -/ note -/ admit", lean) ==
        std::string("admit"));
  CHECK_FALSE(detect_fake("exact \"sorry\"", lean).has_value());
  CHECK_FALSE(detect_fake("exact \"a \\\" sorry\"", lean).has_value());

  CheckerAdapter isa = default_adapter("isabelle");
  CHECK(detect_fake("  apply auto\n  oops", isa) == std::string("oops"));
  CHECK_FALSE(detect_fake("(* sorry *) by simp", isa).has_value());
  CHECK_FALSE(detect_fake("(* (* sorry *) still out *) by simp", isa)
                  .has_value());

  CheckerAdapter rocq = default_adapter("rocq");
  CHECK(detect_fake("Admitted.", rocq) == std::string("Admitted"));
  CHECK(detect_fake("intros.\nAbort.", rocq) == std::string("Abort"));
  CHECK_FALSE(detect_fake("auto.\nQed.", rocq).has_value());
}

TEST_CASE("detect_degeneration wants three consecutive renaming lines") {
  CHECK(detect_degeneration(
      "have h2 := h1\nhave h3 := h2\nhave h4 := h3\n"));
  CHECK(detect_degeneration(
      "intro x\nhave a := b\n  have c := d\nhave e := f\nexact e\n"));
  CHECK(detect_degeneration("have a:=b\nhave c := d\nhave e := f"));
  CHECK_FALSE(detect_degeneration("have h2 := h1\nhave h3 := h2\n"));
  CHECK_FALSE(detect_degeneration(
      "have a := b\nhave c := d\nintro x\nhave e := f\nhave g := h\n"));
  CHECK_FALSE(detect_degeneration(
      "have a := foo bar\nhave c := foo baz\nhave e := foo qux\n"));
  CHECK_FALSE(detect_degeneration(
      "haveh := x\nhaveh2 := x\nhaveh3 := x\n"));
  CHECK_FALSE(detect_degeneration(""));
}

TEST_CASE("classify_failure ranks syntax over hallucination over other") {
  CheckerAdapter isa = default_adapter("isabelle");
  FailureDiagnosis d = classify_failure(
      "by simp", "*** Inner syntax error\n*** Undefined fact: foo", isa);
  CHECK(d.cls == FailureClass::Syntax);
  d = classify_failure("by simp", "*** Undefined fact: lem_frame", isa);
  CHECK(d.cls == FailureClass::Hallucination);
  d = classify_failure("by simp", "Failed to finish proof", isa);
  CHECK(d.cls == FailureClass::Other);
  CHECK_FALSE(d.degeneration);

  std::string renames = "have a := b\nhave c := d\nhave e := f\n";
  d = classify_failure(renames, "*** Undefined fact: x", isa);
  CHECK(d.cls == FailureClass::Hallucination);
  CHECK(d.degeneration);
}

TEST_CASE("splice_proof replaces the first placeholder only") {
  CHECK(splice_proof("lemma l: P\n  sorry\n", "sorry", "by auto") ==
        "lemma l: P\n  by auto\n");
  CHECK(splice_proof("a sorry b sorry", "sorry", "X") == "a X b sorry");
  CHECK_THROWS_AS(splice_proof("lemma l: P\n  by auto\n", "sorry", "X"),
                  PlaceholderMissing);
}

TEST_CASE("run_attempt proves on exit zero and feeds the spliced file") {
  Scratch s;
  std::string goal = s.file("goal.lean", kGoalFile);
  Verdict v = run_attempt(attempt("g1", 1, "exact trivial"),
                          goal, lean_adapter("cat {file}"));
  CHECK(v.status == Status::Proved);
  CHECK(v.goal_id == "g1");
  CHECK(v.attempt_index == 1);
  CHECK_FALSE(v.failure_class.has_value());
  CHECK(v.log.find("exact trivial") != std::string::npos);
  CHECK(v.log.find("sorry") == std::string::npos);
  CHECK(v.wall_seconds >= 0.0);
}

TEST_CASE("run_attempt classifies checker failures from the log") {
  Scratch s;
  std::string goal = s.file("goal.lean", kGoalFile);

  Verdict v = run_attempt(
      attempt("g1", 1, "exact lem_ghost"),
      goal, lean_adapter("echo 'unknown identifier lem_ghost'; exit 1"
                         " # {file}"));
  CHECK(v.status == Status::Failed);
  REQUIRE(v.failure_class.has_value());
  CHECK(*v.failure_class == FailureClass::Hallucination);

  v = run_attempt(
      attempt("g1", 2, "exact h"),
      goal,
      lean_adapter("echo 'unexpected token'; echo 'unknown identifier';"
                   " exit 1 # {file}"));
  CHECK(v.status == Status::Failed);
  REQUIRE(v.failure_class.has_value());
  CHECK(*v.failure_class == FailureClass::Syntax);

  v = run_attempt(attempt("g1", 3, "exact h"), goal,
                  lean_adapter("echo mystery; exit 2 # {file}"));
  CHECK(v.status == Status::Failed);
  REQUIRE(v.failure_class.has_value());
  CHECK(*v.failure_class == FailureClass::Other);
  CHECK(v.log.find("mystery") != std::string::npos);
}

TEST_CASE("run_attempt times out and still classifies") {
  Scratch s;
  std::string goal = s.file("goal.lean", kGoalFile);
  Verdict v = run_attempt(attempt("g1", 1, "exact h"), goal,
                          lean_adapter("sleep 30 # {file}", 0.4));
  CHECK(v.status == Status::Timeout);
  REQUIRE(v.failure_class.has_value());
  CHECK(*v.failure_class == FailureClass::Other);
  CHECK(v.wall_seconds < 5.0);
}

TEST_CASE("a fake proof never reaches the checker") {
  Scratch s;
  std::string goal = s.file("goal.lean", kGoalFile);
  std::string counter = (s.dir / "spawned").string();
  CheckerAdapter a = lean_adapter("echo ran >> " + counter + " # {file}");

  Verdict v = run_attempt(attempt("g1", 1, "  intro h\n  sorry"), goal, a);
  CHECK(v.status == Status::Fake);
  CHECK(v.log.find("sorry") != std::string::npos);
  CHECK_FALSE(v.failure_class.has_value());
  CHECK_FALSE(fs::exists(counter));

  // the same command does spawn for an honest proof
  v = run_attempt(attempt("g1", 2, "exact trivial"), goal, a);
  CHECK(v.status == Status::Proved);
  CHECK(fs::exists(counter));
}

TEST_CASE("run_attempt surfaces file problems as library errors") {
  Scratch s;
  CheckerAdapter a = lean_adapter("cat {file}");
  CHECK_THROWS_AS(
      run_attempt(attempt("g1", 1, "exact h"),
                  (s.dir / "absent.lean").string(), a),
      IoError);
  std::string no_hole = s.file("done.lean", "theorem t : True := trivial\n");
  CHECK_THROWS_AS(run_attempt(attempt("g1", 1, "exact h"), no_hole, a),
                  PlaceholderMissing);
}

TEST_CASE("degeneration is flagged on any verdict") {
  Scratch s;
  std::string goal = s.file("goal.lean", kGoalFile);
  std::string renames = "have a := b\nhave c := d\nhave e := f\nexact f";
  Verdict v = run_attempt(attempt("g1", 1, renames), goal,
                          lean_adapter("exit 1 # {file}"));
  CHECK(v.status == Status::Failed);
  CHECK(v.degeneration);

  v = run_attempt(attempt("g1", 2, renames + "\nsorry"), goal,
                  lean_adapter("exit 1 # {file}"));
  CHECK(v.status == Status::Fake);
  CHECK(v.degeneration);
}

TEST_CASE("run_attempts keeps input order and isolates attempts") {
  Scratch s;
  std::string goal = s.file("goal.lean", kGoalFile);
  std::vector<ProofAttempt> attempts;
  for (size_t i = 1; i <= 4; ++i)
    attempts.push_back(attempt("g1", i, "exact proof_" + std::to_string(i)));

  auto resolve = [&](const ProofAttempt&) { return goal; };
  std::vector<Verdict> out =
      run_attempts(attempts, resolve, lean_adapter("cat {file}"), 2);
  REQUIRE(out.size() == 4);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(out[i].attempt_index == i + 1);
    CHECK(out[i].status == Status::Proved);
    CHECK(out[i].log.find("proof_" + std::to_string(i + 1)) !=
          std::string::npos);
  }
}

TEST_CASE("run_attempts overlaps checker runs") {
  Scratch s;
  std::string goal = s.file("goal.lean", kGoalFile);
  std::vector<ProofAttempt> attempts;
  for (size_t i = 1; i <= 6; ++i)
    attempts.push_back(attempt("g" + std::to_string(i), 1, "exact h"));

  auto resolve = [&](const ProofAttempt&) { return goal; };
  auto start = std::chrono::steady_clock::now();
  std::vector<Verdict> out =
      run_attempts(attempts, resolve, lean_adapter("sleep 0.3 # {file}"), 6);
  double took = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  REQUIRE(out.size() == 6);
  for (const auto& v : out) CHECK(v.status == Status::Proved);
  CHECK(took < 1.2);  // serial would need 1.8s
}

TEST_CASE("run_attempts rethrows the first worker error") {
  Scratch s;
  std::string goal = s.file("goal.lean", kGoalFile);
  std::vector<ProofAttempt> attempts{attempt("g1", 1, "exact h"),
                                     attempt("g2", 1, "exact h")};
  auto resolve = [&](const ProofAttempt& a) -> std::string {
    if (a.goal_id == "g2") throw IoError("no goal file for g2");
    return goal;
  };
  CHECK_THROWS_AS(
      run_attempts(attempts, resolve, lean_adapter("true # {file}"), 1),
      IoError);
}

TEST_CASE("pass@n follows attempt order, counting fakes as misses") {
  std::vector<Verdict> r{verdict("g1", 1, Status::Failed),
                         verdict("g1", 2, Status::Proved)};
  CHECK(pass_at_n(r, 1) == doctest::Approx(0.0));
  CHECK(pass_at_n(r, 2) == doctest::Approx(100.0));

  std::vector<Verdict> fake_first{verdict("g1", 1, Status::Fake),
                                  verdict("g1", 2, Status::Proved)};
  CHECK(pass_at_n(fake_first, 1) == doctest::Approx(0.0));
  CHECK(pass_at_n(fake_first, 2) == doctest::Approx(100.0));

  // input order is irrelevant; attempt_index decides
  std::vector<Verdict> reversed{verdict("g1", 2, Status::Failed),
                                verdict("g1", 1, Status::Proved)};
  CHECK(pass_at_n(reversed, 1) == doctest::Approx(100.0));

  CHECK_THROWS_AS(pass_at_n(r, 3), InsufficientAttempts);
  CHECK_THROWS_AS(pass_at_n(r, 0), ValidationError);
  CHECK(pass_at_n({}, 1) == doctest::Approx(0.0));
}

TEST_CASE("pass@n is monotone in n") {
  std::mt19937 rng(20260816);
  std::bernoulli_distribution proved(0.15);
  std::vector<Verdict> results;
  for (size_t g = 0; g < 50; ++g)
    for (size_t i = 1; i <= 8; ++i)
      results.push_back(verdict("g" + std::to_string(g), i,
                                proved(rng) ? Status::Proved
                                            : Status::Failed));
  double prev = 0.0;
  for (size_t n = 1; n <= 8; ++n) {
    double cur = pass_at_n(results, n);
    CHECK(cur >= prev);
    prev = cur;
  }

  std::shuffle(results.begin(), results.end(), rng);
  CHECK(pass_at_n(results, 8) == doctest::Approx(prev));
}

TEST_CASE("pass@8 over 600 goals with 125 hits prints 20.83%") {
  std::vector<Verdict> results;
  for (size_t g = 0; g < 600; ++g) {
    size_t hit = g < 125 ? (g % 8) + 1 : 0;
    for (size_t i = 1; i <= 8; ++i)
      results.push_back(verdict("g" + std::to_string(g), i,
                                i == hit ? Status::Proved : Status::Failed));
  }
  double p8 = pass_at_n(results, 8);
  CHECK(p8 == doctest::Approx(100.0 * 125 / 600));
  CHECK(format_percent(p8) == "20.83%");
  CHECK(pass_at_n(results, 1) <= p8);
}

TEST_CASE("report formats match the documented style") {
  CHECK(format_fraction(6, 81) == "6 / 81");
  CHECK(format_percent(100.0 * 6 / 81) == "7.41%");
  CHECK(format_percent(0.0) == "0.00%");
  CHECK(format_percent(100.0) == "100.00%");
}

TEST_CASE("make_report buckets goals and closes with a Total row") {
  std::vector<Verdict> results;
  std::map<std::string, std::string> categories;
  for (size_t g = 0; g < 81; ++g) {
    std::string id = "int_" + std::to_string(g);
    categories[id] = "IntegerArith";
    results.push_back(verdict(id, 1, g < 6 ? Status::Proved : Status::Failed));
    results.push_back(verdict(id, 2, Status::Failed));
  }
  for (size_t g = 0; g < 19; ++g) {
    std::string id = "mem_" + std::to_string(g);
    categories[id] = "Memory";
    results.push_back(verdict(id, 1, g < 4 ? Status::Proved : Status::Failed));
    results.push_back(verdict(id, 2, Status::Failed));
  }

  std::vector<ReportRow> rows = make_report(results, categories, {1, 2});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].category == "IntegerArith");
  CHECK(rows[0].total == 81);
  CHECK(rows[0].solved == 6);
  CHECK(format_percent(rows[0].rate) == "7.41%");
  CHECK(rows[0].pass_at.at(1) == doctest::Approx(100.0 * 6 / 81));
  CHECK(rows[1].category == "Memory");
  CHECK(rows[1].total == 19);
  CHECK(rows[1].solved == 4);
  CHECK(rows[2].category == "Total");
  CHECK(rows[2].total == 100);
  CHECK(rows[2].solved == 10);
  CHECK(rows[0].total + rows[1].total == rows[2].total);
  CHECK(rows[0].solved + rows[1].solved == rows[2].solved);

  std::string text = render_report(rows);
  CHECK(text.find("pass@1") != std::string::npos);
  CHECK(text.find("6 / 81") != std::string::npos);
  CHECK(text.find("7.41%") != std::string::npos);
  CHECK(text.find("Total") != std::string::npos);

  std::map<std::string, std::string> missing = categories;
  missing.erase("mem_0");
  CHECK_THROWS_AS(make_report(results, missing, {}), UnmappedGoal);

  std::vector<ReportRow> empty = make_report({}, categories, {1});
  REQUIRE(empty.size() == 1);
  CHECK(empty[0].category == "Total");
  CHECK(empty[0].total == 0);
  CHECK(empty[0].rate == doctest::Approx(0.0));
  CHECK(empty[0].pass_at.at(1) == doctest::Approx(0.0));
}

TEST_CASE("attempts survive a jsonl round trip") {
  std::vector<ProofAttempt> attempts{
      attempt("Theory.goal1", 1, "  intro h\n  exact \"quoted\"\n"),
      attempt("Theory.goal1", 2, "sorry"),
      attempt("Other.goal", 1, "auto.", "rocq")};
  std::string text = attempts_to_jsonl(attempts);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);

  std::vector<ProofAttempt> back = parse_attempts_jsonl(text);
  REQUIRE(back.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(back[i].goal_id == attempts[i].goal_id);
    CHECK(back[i].target == attempts[i].target);
    CHECK(back[i].attempt_index == attempts[i].attempt_index);
    CHECK(back[i].proof_text == attempts[i].proof_text);
  }
}

TEST_CASE("attempt parsing reports the offending line") {
  std::string good =
      R"({"goal_id":"g","target":"lean","attempt_index":1,"proof_text":"p"})";
  try {
    parse_attempts_jsonl(good + "\nnot json\n");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.where().line == 2);
  }
  CHECK_THROWS_AS(
      parse_attempts_jsonl(R"({"goal_id":"g","target":"lean"})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_attempts_jsonl(
          R"({"goal_id":"g","target":"lean","attempt_index":0,"proof_text":"p"})"),
      ParseError);
  CHECK_THROWS_AS(parse_attempts_jsonl(good + "\n" + good + "\n"),
                  ValidationError);
  CHECK(parse_attempts_jsonl("\n  \n").empty());
  CHECK(parse_attempts_jsonl(good + "\n\n" + R"({"goal_id":"g","target":"lean","attempt_index":2,"proof_text":"q"})").size() == 2);
}

TEST_CASE("verdicts survive a jsonl round trip") {
  Verdict proved = verdict("g1", 1, Status::Proved);
  proved.wall_seconds = 1.25;
  proved.log = "checked\n";
  Verdict failed = verdict("g1", 2, Status::Failed);
  failed.failure_class = FailureClass::Syntax;
  failed.log = "unexpected token";
  Verdict timeout = verdict("g2", 1, Status::Timeout);
  timeout.failure_class = FailureClass::Other;
  timeout.degeneration = true;
  Verdict fake = verdict("g2", 2, Status::Fake);
  fake.log = "fake proof token 'sorry'";

  std::string text = results_to_jsonl({proved, failed, timeout, fake});
  std::vector<Verdict> back = parse_results_jsonl(text);
  REQUIRE(back.size() == 4);
  CHECK(back[0].status == Status::Proved);
  CHECK(back[0].wall_seconds == doctest::Approx(1.25));
  CHECK_FALSE(back[0].failure_class.has_value());
  CHECK(back[1].status == Status::Failed);
  REQUIRE(back[1].failure_class.has_value());
  CHECK(*back[1].failure_class == FailureClass::Syntax);
  CHECK(back[2].status == Status::Timeout);
  CHECK(back[2].degeneration);
  CHECK(back[3].status == Status::Fake);
  CHECK(back[3].log == fake.log);
}

TEST_CASE("result parsing enforces the failure_class invariant") {
  std::string proved_with_class =
      R"({"goal_id":"g","target":"lean","attempt_index":1,"status":"proved",)"
      R"("wall_seconds":1.0,"log":"","failure_class":"other","degeneration":false})";
  CHECK_THROWS_AS(parse_results_jsonl(proved_with_class), ParseError);

  std::string failed_without_class =
      R"({"goal_id":"g","target":"lean","attempt_index":1,"status":"failed",)"
      R"("wall_seconds":1.0,"log":"","degeneration":false})";
  CHECK_THROWS_AS(parse_results_jsonl(failed_without_class), ParseError);

  std::string bad_status =
      R"({"goal_id":"g","target":"lean","attempt_index":1,"status":"maybe",)"
      R"("wall_seconds":1.0,"log":"","degeneration":false})";
  CHECK_THROWS_AS(parse_results_jsonl(bad_status), ParseError);
}

TEST_CASE("status and failure class names round trip") {
  for (Status s : {Status::Proved, Status::Fake, Status::Failed,
                   Status::Timeout})
    CHECK(status_from_name(status_name(s)) == s);
  for (FailureClass c :
       {FailureClass::Syntax, FailureClass::Hallucination,
        FailureClass::Degeneration, FailureClass::Other})
    CHECK(failure_class_from_name(failure_class_name(c)) == c);
  CHECK_THROWS_AS(status_from_name("unknown"), ValidationError);
  CHECK_THROWS_AS(failure_class_from_name("unknown"), ValidationError);
}
