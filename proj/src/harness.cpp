#include "vcforge/harness.hpp"

#include <json.hpp>
#include <stdlib.h>
#include <string.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "vcforge/errors.hpp"
#include "vcforge/subprocess.hpp"

namespace fs = std::filesystem;

namespace vcforge {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
}

// Scratch directory that disappears with the object. One per running
// attempt, so concurrent checkers never see each other's files.
class TempDir {
public:
  TempDir() {
    std::string tmpl =
        (fs::temp_directory_path() / "vcforge-attempt-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr)
      throw IoError(std::string("cannot create scratch directory: ") +
                    strerror(errno));
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

private:
  fs::path path_;
};

}  // namespace

// --- adapters ------------------------------------------------------------

CheckerAdapter default_adapter(const std::string& target) {
  CheckerAdapter a;
  a.target = target;
  if (target == "isabelle") {
    a.placeholder = "sorry";
    a.fake_tokens = {"sorry", "oops"};
    a.syntax_error_markers = {"Inner syntax error", "Outer syntax error",
                              "Malformed command syntax"};
    a.undefined_entity_markers = {"Undefined fact", "Undefined constant",
                                  "Undefined type name"};
    a.line_comment = "";
    a.block_comment_open = "(*";
    a.block_comment_close = "*)";
    a.nested_comments = true;
  } else if (target == "lean") {
    a.placeholder = "sorry";
    a.fake_tokens = {"sorry", "admit"};
    a.syntax_error_markers = {"unexpected token", "unexpected character",
                              "unterminated comment"};
    a.undefined_entity_markers = {"unknown identifier", "unknown constant",
                                  "Undefined fact", "Undefined constant"};
    a.line_comment = "--";
    a.block_comment_open = "/-";
    a.block_comment_close = "-/";
    a.nested_comments = true;
  } else if (target == "rocq") {
    a.placeholder = "Admitted.";
    a.fake_tokens = {"Admitted", "admit", "Abort"};
    a.syntax_error_markers = {"Syntax error"};
    a.undefined_entity_markers = {"was not found in the current environment",
                                  "Undefined fact", "Undefined constant"};
    a.line_comment = "";
    a.block_comment_open = "(*";
    a.block_comment_close = "*)";
    a.nested_comments = true;
  } else {
    throw RuleFormatError("no default adapter for target '" + target + "'");
  }
  return a;
}

namespace {

size_t count_occurrences(const std::string& haystack, const std::string& pin) {
  size_t count = 0;
  for (size_t at = haystack.find(pin); at != std::string::npos;
       at = haystack.find(pin, at + pin.size()))
    ++count;
  return count;
}

std::vector<std::string> string_list(const nlohmann::json& j,
                                     const std::string& key) {
  if (!j.is_array())
    throw RuleFormatError("adapter key '" + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string())
      throw RuleFormatError("adapter key '" + key +
                            "' must hold only strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

CheckerAdapter parse_adapter(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw RuleFormatError(std::string("adapter config is not valid JSON: ") +
                          e.what());
  }
  if (!doc.is_object())
    throw RuleFormatError("adapter config must be a JSON object");
  if (!doc.contains("target") || !doc["target"].is_string())
    throw RuleFormatError("adapter config needs a string 'target'");
  if (!doc.contains("command") || !doc["command"].is_string())
    throw RuleFormatError("adapter config needs a string 'command'");

  std::string target = doc["target"].get<std::string>();
  CheckerAdapter a;
  if (target == "isabelle" || target == "lean" || target == "rocq") {
    a = default_adapter(target);
  } else {
    // Unknown checkers start from a bare base; the config is expected to
    // spell out whatever lexical facts matter for it.
    a.target = target;
    a.placeholder = "sorry";
    a.fake_tokens = {"sorry", "admit"};
    a.undefined_entity_markers = {"Undefined fact", "Undefined constant"};
    a.block_comment_open = "(*";
    a.block_comment_close = "*)";
  }

  a.command_template = doc["command"].get<std::string>();
  if (count_occurrences(a.command_template, "{file}") != 1)
    throw RuleFormatError(
        "adapter command must contain '{file}' exactly once");

  if (doc.contains("timeout_seconds")) {
    if (!doc["timeout_seconds"].is_number())
      throw RuleFormatError("adapter 'timeout_seconds' must be a number");
    a.timeout_seconds = doc["timeout_seconds"].get<double>();
  }
  if (a.timeout_seconds <= 0)
    throw RuleFormatError("adapter timeout must be positive");

  if (doc.contains("placeholder")) {
    if (!doc["placeholder"].is_string() ||
        doc["placeholder"].get<std::string>().empty())
      throw RuleFormatError("adapter 'placeholder' must be a non-empty string");
    a.placeholder = doc["placeholder"].get<std::string>();
  }
  if (doc.contains("syntax_error_markers"))
    a.syntax_error_markers =
        string_list(doc["syntax_error_markers"], "syntax_error_markers");
  if (doc.contains("undefined_entity_markers"))
    a.undefined_entity_markers = string_list(doc["undefined_entity_markers"],
                                             "undefined_entity_markers");
  if (doc.contains("fake_tokens"))
    a.fake_tokens = string_list(doc["fake_tokens"], "fake_tokens");
  if (doc.contains("line_comment")) {
    if (!doc["line_comment"].is_string())
      throw RuleFormatError("adapter 'line_comment' must be a string");
    a.line_comment = doc["line_comment"].get<std::string>();
  }
  if (doc.contains("block_comment_open")) {
    if (!doc["block_comment_open"].is_string())
      throw RuleFormatError("adapter 'block_comment_open' must be a string");
    a.block_comment_open = doc["block_comment_open"].get<std::string>();
  }
  if (doc.contains("block_comment_close")) {
    if (!doc["block_comment_close"].is_string())
      throw RuleFormatError("adapter 'block_comment_close' must be a string");
    a.block_comment_close = doc["block_comment_close"].get<std::string>();
  }
  if (doc.contains("nested_comments")) {
    if (!doc["nested_comments"].is_boolean())
      throw RuleFormatError("adapter 'nested_comments' must be a boolean");
    a.nested_comments = doc["nested_comments"].get<bool>();
  }
  if (a.block_comment_open.empty() != a.block_comment_close.empty())
    throw RuleFormatError(
        "adapter block comment delimiters must be given together");
  return a;
}

CheckerAdapter load_adapter_file(const std::string& path) {
  return parse_adapter(slurp(path));
}

// --- names ---------------------------------------------------------------

const char* status_name(Status s) {
  switch (s) {
    case Status::Proved: return "proved";
    case Status::Fake: return "fake";
    case Status::Failed: return "failed";
    case Status::Timeout: return "timeout";
  }
  return "failed";
}

const char* failure_class_name(FailureClass c) {
  switch (c) {
    case FailureClass::Syntax: return "syntax";
    case FailureClass::Hallucination: return "hallucination";
    case FailureClass::Degeneration: return "degeneration";
    case FailureClass::Other: return "other";
  }
  return "other";
}

Status status_from_name(const std::string& name) {
  if (name == "proved") return Status::Proved;
  if (name == "fake") return Status::Fake;
  if (name == "failed") return Status::Failed;
  if (name == "timeout") return Status::Timeout;
  throw ValidationError("unknown verdict status '" + name + "'");
}

FailureClass failure_class_from_name(const std::string& name) {
  if (name == "syntax") return FailureClass::Syntax;
  if (name == "hallucination") return FailureClass::Hallucination;
  if (name == "degeneration") return FailureClass::Degeneration;
  if (name == "other") return FailureClass::Other;
  throw ValidationError("unknown failure class '" + name + "'");
}

// --- proof text scanning ---------------------------------------------------

std::optional<std::string> detect_fake(const std::string& proof_text,
                                       const CheckerAdapter& adapter) {
  std::set<std::string> tokens(adapter.fake_tokens.begin(),
                               adapter.fake_tokens.end());
  const std::string& s = proof_text;
  size_t i = 0;
  const size_t n = s.size();
  auto at = [&](const std::string& mark) {
    return !mark.empty() && s.compare(i, mark.size(), mark) == 0;
  };
  while (i < n) {
    if (at(adapter.line_comment)) {
      while (i < n && s[i] != '\n') ++i;
    } else if (at(adapter.block_comment_open)) {
      i += adapter.block_comment_open.size();
      size_t depth = 1;
      while (i < n && depth > 0) {
        if (at(adapter.block_comment_close)) {
          --depth;
          i += adapter.block_comment_close.size();
        } else if (adapter.nested_comments && at(adapter.block_comment_open)) {
          ++depth;
          i += adapter.block_comment_open.size();
        } else {
          ++i;
        }
      }
    } else if (s[i] == '"') {
      ++i;
      while (i < n && s[i] != '"') {
        if (s[i] == '\\' && i + 1 < n) ++i;
        ++i;
      }
      if (i < n) ++i;
    } else if (is_ident_start(s[i])) {
      size_t begin = i;
      while (i < n && is_ident_char(s[i])) ++i;
      std::string word = s.substr(begin, i - begin);
      if (tokens.count(word)) return word;
    } else {
      ++i;
    }
  }
  return std::nullopt;
}

namespace {

// `have <ident> := <ident>` and nothing else on the line.
bool is_renaming_line(const std::string& line) {
  size_t i = 0;
  const size_t n = line.size();
  auto skip_ws = [&] {
    while (i < n && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
  };
  auto ident = [&] {
    if (i >= n || !is_ident_start(line[i])) return false;
    while (i < n && is_ident_char(line[i])) ++i;
    return true;
  };
  skip_ws();
  if (line.compare(i, 4, "have") != 0) return false;
  i += 4;
  if (i < n && is_ident_char(line[i])) return false;
  skip_ws();
  if (!ident()) return false;
  skip_ws();
  if (line.compare(i, 2, ":=") != 0) return false;
  i += 2;
  skip_ws();
  if (!ident()) return false;
  skip_ws();
  return i == n;
}

}  // namespace

bool detect_degeneration(const std::string& proof_text) {
  size_t streak = 0;
  size_t pos = 0;
  while (pos <= proof_text.size()) {
    size_t nl = proof_text.find('\n', pos);
    size_t end = nl == std::string::npos ? proof_text.size() : nl;
    if (is_renaming_line(proof_text.substr(pos, end - pos))) {
      if (++streak >= 3) return true;
    } else {
      streak = 0;
    }
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return false;
}

FailureDiagnosis classify_failure(const std::string& proof_text,
                                  const std::string& log,
                                  const CheckerAdapter& adapter) {
  FailureDiagnosis d;
  d.degeneration = detect_degeneration(proof_text);
  for (const auto& m : adapter.syntax_error_markers)
    if (!m.empty() && log.find(m) != std::string::npos) {
      d.cls = FailureClass::Syntax;
      return d;
    }
  for (const auto& m : adapter.undefined_entity_markers)
    if (!m.empty() && log.find(m) != std::string::npos) {
      d.cls = FailureClass::Hallucination;
      return d;
    }
  d.cls = FailureClass::Other;
  return d;
}

// --- running one attempt -----------------------------------------------------

std::string splice_proof(const std::string& goal_file_text,
                         const std::string& placeholder,
                         const std::string& proof_text) {
  if (placeholder.empty()) throw PlaceholderMissing("placeholder is empty");
  size_t at = goal_file_text.find(placeholder);
  if (at == std::string::npos)
    throw PlaceholderMissing("placeholder '" + placeholder +
                             "' does not occur in the goal file");
  std::string out = goal_file_text;
  out.replace(at, placeholder.size(), proof_text);
  return out;
}

Verdict run_attempt(const ProofAttempt& attempt,
                    const std::string& goal_file_path,
                    const CheckerAdapter& adapter) {
  Verdict v;
  v.goal_id = attempt.goal_id;
  v.target = attempt.target;
  v.attempt_index = attempt.attempt_index;
  v.degeneration = detect_degeneration(attempt.proof_text);

  if (auto token = detect_fake(attempt.proof_text, adapter)) {
    v.status = Status::Fake;
    v.log = "fake proof token '" + *token + "'";
    return v;
  }

  std::string spliced = splice_proof(slurp(goal_file_path),
                                     adapter.placeholder, attempt.proof_text);

  // Keep the original basename: some checkers insist the file name match
  // the theory or module it declares.
  TempDir scratch;
  fs::path dst = scratch.path() / fs::path(goal_file_path).filename();
  {
    std::ofstream out(dst, std::ios::binary);
    out << spliced;
    if (!out.good()) throw IoError("cannot write '" + dst.string() + "'");
  }

  std::string cmd = adapter.command_template;
  size_t hole = cmd.find("{file}");
  if (hole == std::string::npos)
    throw RuleFormatError("adapter command must contain '{file}' exactly once");
  cmd.replace(hole, 6, dst.string());

  RunResult run = run_command(cmd, adapter.timeout_seconds);
  v.wall_seconds = run.wall_seconds;
  v.log = run.output;
  if (run.timed_out) {
    v.status = Status::Timeout;
  } else if (run.exit_code == 0) {
    v.status = Status::Proved;
    return v;
  } else {
    v.status = Status::Failed;
  }
  FailureDiagnosis d = classify_failure(attempt.proof_text, v.log, adapter);
  v.failure_class = d.cls;
  v.degeneration = d.degeneration;
  return v;
}

std::vector<Verdict> run_attempts(
    const std::vector<ProofAttempt>& attempts,
    const std::function<std::string(const ProofAttempt&)>& goal_file_for,
    const CheckerAdapter& adapter, size_t jobs) {
  if (attempts.empty()) return {};
  if (jobs == 0) {
    if (const char* env = getenv("VCFORGE_JOBS")) {
      char* end = nullptr;
      long parsed = strtol(env, &end, 10);
      if (end != nullptr && *end == '\0' && parsed > 0)
        jobs = static_cast<size_t>(parsed);
    }
    if (jobs == 0)
      jobs = std::max(1u, std::thread::hardware_concurrency());
  }
  jobs = std::min(jobs, attempts.size());

  std::vector<Verdict> results(attempts.size());
  std::atomic<size_t> cursor{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      size_t i = cursor.fetch_add(1);
      if (i >= attempts.size()) return;
      try {
        results[i] =
            run_attempt(attempts[i], goal_file_for(attempts[i]), adapter);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

// --- aggregation -----------------------------------------------------------

namespace {

using GroupKey = std::pair<std::string, std::string>;

std::map<GroupKey, std::vector<const Verdict*>> group_attempts(
    const std::vector<Verdict>& results) {
  std::map<GroupKey, std::vector<const Verdict*>> groups;
  for (const auto& v : results) groups[{v.goal_id, v.target}].push_back(&v);
  for (auto& [key, vs] : groups)
    std::sort(vs.begin(), vs.end(), [](const Verdict* a, const Verdict* b) {
      return a->attempt_index < b->attempt_index;
    });
  return groups;
}

}  // namespace

double pass_at_n(const std::vector<Verdict>& results, size_t n) {
  if (n == 0) throw ValidationError("pass@n needs n >= 1");
  if (results.empty()) return 0.0;
  auto groups = group_attempts(results);
  size_t solved = 0;
  for (const auto& [key, vs] : groups) {
    if (vs.size() < n) throw InsufficientAttempts(key.first, vs.size(), n);
    for (size_t i = 0; i < n; ++i)
      if (vs[i]->status == Status::Proved) {
        ++solved;
        break;
      }
  }
  return 100.0 * static_cast<double>(solved) /
         static_cast<double>(groups.size());
}

std::string format_percent(double pct) {
  char buf[64];
  snprintf(buf, sizeof buf, "%.2f%%", pct);
  return buf;
}

std::string format_fraction(size_t num, size_t den) {
  return std::to_string(num) + " / " + std::to_string(den);
}

namespace {

ReportRow build_row(const std::string& name, const std::vector<Verdict>& vs,
                    const std::vector<size_t>& pass_ns) {
  ReportRow row;
  row.category = name;
  auto groups = group_attempts(vs);
  row.total = groups.size();
  for (const auto& [key, attempts] : groups)
    for (const Verdict* v : attempts)
      if (v->status == Status::Proved) {
        ++row.solved;
        break;
      }
  row.rate = row.total == 0 ? 0.0
                            : 100.0 * static_cast<double>(row.solved) /
                                  static_cast<double>(row.total);
  for (size_t n : pass_ns) row.pass_at[n] = pass_at_n(vs, n);
  return row;
}

}  // namespace

std::vector<ReportRow> make_report(
    const std::vector<Verdict>& results,
    const std::map<std::string, std::string>& category_map,
    const std::vector<size_t>& pass_ns) {
  std::map<std::string, std::vector<Verdict>> by_category;
  for (const auto& v : results) {
    auto it = category_map.find(v.goal_id);
    if (it == category_map.end()) throw UnmappedGoal(v.goal_id);
    by_category[it->second].push_back(v);
  }
  std::vector<ReportRow> rows;
  for (const auto& [category, vs] : by_category)
    rows.push_back(build_row(category, vs, pass_ns));
  rows.push_back(build_row("Total", results, pass_ns));
  return rows;
}

std::string render_report(const std::vector<ReportRow>& rows) {
  std::vector<std::string> header{"category", "proved", "rate"};
  if (!rows.empty())
    for (const auto& [n, pct] : rows.front().pass_at)
      header.push_back("pass@" + std::to_string(n));

  std::vector<std::vector<std::string>> cells;
  cells.push_back(header);
  for (const auto& row : rows) {
    std::vector<std::string> line{row.category,
                                  format_fraction(row.solved, row.total),
                                  format_percent(row.rate)};
    for (const auto& [n, pct] : row.pass_at)
      line.push_back(format_percent(pct));
    cells.push_back(line);
  }

  std::vector<size_t> widths(header.size(), 0);
  for (const auto& line : cells)
    for (size_t c = 0; c < line.size(); ++c)
      widths[c] = std::max(widths[c], line[c].size());

  std::string out;
  for (const auto& line : cells) {
    for (size_t c = 0; c < line.size(); ++c) {
      if (c > 0) out += "  ";
      if (c == 0) {
        out += line[c];
        out.append(widths[c] - line[c].size(), ' ');
      } else {
        out.append(widths[c] - line[c].size(), ' ');
        out += line[c];
      }
    }
    out += '\n';
  }
  return out;
}

// --- jsonl codecs ------------------------------------------------------------

namespace {

std::vector<std::string> split_jsonl(const std::string& text) {
  std::vector<std::string> lines;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    size_t end = nl == std::string::npos ? text.size() : nl;
    lines.push_back(text.substr(pos, end - pos));
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return lines;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

nlohmann::json parse_record(const std::string& line, size_t lineno) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError({lineno, 1}, std::string("bad JSON record: ") + e.what());
  }
  if (!j.is_object())
    throw ParseError({lineno, 1}, "record must be a JSON object");
  return j;
}

std::string field_str(const nlohmann::json& j, const char* key,
                      size_t lineno) {
  if (!j.contains(key) || !j[key].is_string())
    throw ParseError({lineno, 1},
                     std::string("record needs a string '") + key + "'");
  return j[key].get<std::string>();
}

size_t field_index(const nlohmann::json& j, size_t lineno) {
  if (!j.contains("attempt_index") ||
      !j["attempt_index"].is_number_unsigned() ||
      j["attempt_index"].get<size_t>() == 0)
    throw ParseError({lineno, 1},
                     "record needs a positive integer 'attempt_index'");
  return j["attempt_index"].get<size_t>();
}

struct SeenIndex {
  std::set<std::tuple<std::string, std::string, size_t>> seen;
  void insert(const std::string& goal, const std::string& target,
              size_t index) {
    if (!seen.emplace(goal, target, index).second)
      throw ValidationError("duplicate attempt " + std::to_string(index) +
                            " for goal '" + goal + "' target '" + target +
                            "'");
  }
};

}  // namespace

std::vector<ProofAttempt> parse_attempts_jsonl(const std::string& text) {
  std::vector<ProofAttempt> attempts;
  SeenIndex dup;
  size_t lineno = 0;
  for (const auto& line : split_jsonl(text)) {
    ++lineno;
    if (blank(line)) continue;
    nlohmann::json j = parse_record(line, lineno);
    ProofAttempt a;
    a.goal_id = field_str(j, "goal_id", lineno);
    a.target = field_str(j, "target", lineno);
    a.attempt_index = field_index(j, lineno);
    a.proof_text = field_str(j, "proof_text", lineno);
    dup.insert(a.goal_id, a.target, a.attempt_index);
    attempts.push_back(std::move(a));
  }
  return attempts;
}

std::string attempts_to_jsonl(const std::vector<ProofAttempt>& attempts) {
  std::string out;
  for (const auto& a : attempts) {
    nlohmann::ordered_json j;
    j["goal_id"] = a.goal_id;
    j["target"] = a.target;
    j["attempt_index"] = a.attempt_index;
    j["proof_text"] = a.proof_text;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<Verdict> parse_results_jsonl(const std::string& text) {
  std::vector<Verdict> results;
  SeenIndex dup;
  size_t lineno = 0;
  for (const auto& line : split_jsonl(text)) {
    ++lineno;
    if (blank(line)) continue;
    nlohmann::json j = parse_record(line, lineno);
    Verdict v;
    v.goal_id = field_str(j, "goal_id", lineno);
    v.target = field_str(j, "target", lineno);
    v.attempt_index = field_index(j, lineno);
    try {
      v.status = status_from_name(field_str(j, "status", lineno));
    } catch (const ValidationError& e) {
      throw ParseError({lineno, 1}, e.what());
    }
    if (!j.contains("wall_seconds") || !j["wall_seconds"].is_number())
      throw ParseError({lineno, 1}, "record needs a number 'wall_seconds'");
    v.wall_seconds = j["wall_seconds"].get<double>();
    v.log = field_str(j, "log", lineno);
    if (!j.contains("degeneration") || !j["degeneration"].is_boolean())
      throw ParseError({lineno, 1}, "record needs a boolean 'degeneration'");
    v.degeneration = j["degeneration"].get<bool>();
    bool failing =
        v.status == Status::Failed || v.status == Status::Timeout;
    if (j.contains("failure_class")) {
      if (!failing)
        throw ParseError({lineno, 1},
                         "failure_class is only valid on failed or timed-out "
                         "verdicts");
      try {
        v.failure_class =
            failure_class_from_name(field_str(j, "failure_class", lineno));
      } catch (const ValidationError& e) {
        throw ParseError({lineno, 1}, e.what());
      }
    } else if (failing) {
      throw ParseError({lineno, 1},
                       "failed and timed-out verdicts need a failure_class");
    }
    dup.insert(v.goal_id, v.target, v.attempt_index);
    results.push_back(std::move(v));
  }
  return results;
}

std::string results_to_jsonl(const std::vector<Verdict>& results) {
  std::string out;
  for (const auto& v : results) {
    nlohmann::ordered_json j;
    j["goal_id"] = v.goal_id;
    j["target"] = v.target;
    j["attempt_index"] = v.attempt_index;
    j["status"] = status_name(v.status);
    j["wall_seconds"] = v.wall_seconds;
    j["log"] = v.log;
    if (v.failure_class) j["failure_class"] = failure_class_name(*v.failure_class);
    j["degeneration"] = v.degeneration;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace vcforge
