#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vcforge {

// Driving external proof checkers over machine-generated proof attempts
// and summarising the verdicts.

struct CheckerAdapter {
  std::string target;
  std::string command_template;  // must contain {file} exactly once
  double timeout_seconds = 600;
  std::string placeholder;  // proof slot text inside emitted goal files
  std::vector<std::string> syntax_error_markers;
  std::vector<std::string> undefined_entity_markers;
  std::vector<std::string> fake_tokens;
  // Comment syntax of the target, used when scanning proofs for fake
  // tokens. line_comment may be empty.
  std::string line_comment;
  std::string block_comment_open;
  std::string block_comment_close;
  bool nested_comments = true;
};

// Lexical defaults (fake tokens, error markers, placeholder, comment
// syntax) for "isabelle", "lean" or "rocq". command_template is left
// empty; callers supply it. Throws RuleFormatError for other names.
CheckerAdapter default_adapter(const std::string& target);

// JSON object with at least {"target", "command"}. Optional keys
// override the target defaults: timeout_seconds, placeholder,
// syntax_error_markers, undefined_entity_markers, fake_tokens,
// line_comment, block_comment_open, block_comment_close,
// nested_comments. Unknown targets start from a bare-bones base.
// Throws RuleFormatError on malformed input, a command without exactly
// one {file}, or a non-positive timeout.
CheckerAdapter parse_adapter(const std::string& json_text);
CheckerAdapter load_adapter_file(const std::string& path);

enum class Status { Proved, Fake, Failed, Timeout };
enum class FailureClass { Syntax, Hallucination, Degeneration, Other };

const char* status_name(Status s);
const char* failure_class_name(FailureClass c);
Status status_from_name(const std::string& name);
FailureClass failure_class_from_name(const std::string& name);

struct ProofAttempt {
  std::string goal_id;
  std::string target;
  size_t attempt_index = 1;  // 1-based, unique per (goal_id, target)
  std::string proof_text;
};

struct Verdict {
  std::string goal_id;
  std::string target;
  size_t attempt_index = 1;
  Status status = Status::Failed;
  double wall_seconds = 0;
  std::string log;
  // Present exactly when status is Failed or Timeout.
  std::optional<FailureClass> failure_class;
  bool degeneration = false;
};

// First fake token appearing in proof_text outside the target's comments
// and string literals, with identifier boundaries respected (so
// "sorry_free_lemma" never matches "sorry").
std::optional<std::string> detect_fake(const std::string& proof_text,
                                       const CheckerAdapter& adapter);

// True when proof_text contains three or more consecutive lines of the
// shape `have <ident> := <ident>`, the signature of a generator stuck
// renaming one hypothesis into another.
bool detect_degeneration(const std::string& proof_text);

// Buckets a failed run by its checker log: syntax markers beat undefined-
// entity markers, everything else is Other. Degeneration is reported as
// an orthogonal flag since a degenerate proof also fails for a concrete
// lexical reason.
struct FailureDiagnosis {
  FailureClass cls = FailureClass::Other;
  bool degeneration = false;
};
FailureDiagnosis classify_failure(const std::string& proof_text,
                                  const std::string& log,
                                  const CheckerAdapter& adapter);

// goal_file_text with the first occurrence of the placeholder replaced by
// proof_text. Throws PlaceholderMissing when the placeholder is absent.
std::string splice_proof(const std::string& goal_file_text,
                         const std::string& placeholder,
                         const std::string& proof_text);

// Judges one attempt against the goal file at goal_file_path. A fake
// proof short-circuits: no file is written and no checker is spawned.
// Otherwise the spliced file lands in a fresh temporary directory under
// its original basename and the adapter command runs on it.
Verdict run_attempt(const ProofAttempt& attempt,
                    const std::string& goal_file_path,
                    const CheckerAdapter& adapter);

// Runs every attempt, at most `jobs` checkers at a time, each in its own
// scratch directory. jobs == 0 reads VCFORGE_JOBS, falling back to the
// hardware thread count. Results come back in input order; the first
// exception from any worker is rethrown after the pool drains.
std::vector<Verdict> run_attempts(
    const std::vector<ProofAttempt>& attempts,
    const std::function<std::string(const ProofAttempt&)>& goal_file_for,
    const CheckerAdapter& adapter, size_t jobs = 0);

// Percentage (0..100) of (goal_id, target) groups whose first n attempts
// in attempt_index order include a Proved verdict. Fake verdicts consume
// an attempt like any other non-proof. Throws InsufficientAttempts when a
// group holds fewer than n attempts; returns 0 for an empty result set.
double pass_at_n(const std::vector<Verdict>& results, size_t n);

std::string format_percent(double pct);               // 7.4074 -> "7.41%"
std::string format_fraction(size_t num, size_t den);  // "6 / 81"

struct ReportRow {
  std::string category;  // "Total" on the closing row
  size_t total = 0;      // goals judged in this category
  size_t solved = 0;     // goals with at least one Proved attempt
  double rate = 0;       // solved / total as a percentage
  std::map<size_t, double> pass_at;  // n -> pass@n within the category
};

// One row per category in name order plus a Total row; category totals
// sum to the Total row exactly. Every goal_id present in results must be
// a key of category_map (UnmappedGoal otherwise). Empty results produce
// a lone all-zero Total row.
std::vector<ReportRow> make_report(
    const std::vector<Verdict>& results,
    const std::map<std::string, std::string>& category_map,
    const std::vector<size_t>& pass_ns = {});

std::string render_report(const std::vector<ReportRow>& rows);

// JSON-lines codecs. Attempts: {"goal_id", "target", "attempt_index",
// "proof_text"}. Results additionally carry status, wall_seconds, log,
// degeneration and, on failures, failure_class. Parsers throw ParseError
// with the offending line number and ValidationError on a duplicate
// attempt_index within one (goal_id, target).
std::vector<ProofAttempt> parse_attempts_jsonl(const std::string& text);
std::string attempts_to_jsonl(const std::vector<ProofAttempt>& attempts);
std::vector<Verdict> parse_results_jsonl(const std::string& text);
std::string results_to_jsonl(const std::vector<Verdict>& results);

}  // namespace vcforge
