#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "vcforge/complicate.hpp"
#include "vcforge/corpus.hpp"
#include "vcforge/emit.hpp"
#include "vcforge/errors.hpp"
#include "vcforge/harness.hpp"
#include "vcforge/metrics.hpp"
#include "vcforge/profile.hpp"
#include "vcforge/rewrite.hpp"
#include "vcforge/sexp.hpp"
#include "vcforge/term.hpp"

namespace fs = std::filesystem;
using namespace vcforge;

namespace {

// Stable exit codes, also listed in --help. Everything unexpected is 1.
constexpr int kOk = 0;
constexpr int kParseExit = 2;
constexpr int kRewriteExit = 3;
constexpr int kEmitExit = 4;
constexpr int kIoExit = 5;

int exit_code_for(const Error& e) {
  if (dynamic_cast<const IoError*>(&e) ||
      dynamic_cast<const AdapterSpawnError*>(&e))
    return kIoExit;
  if (dynamic_cast<const UnmappedConstant*>(&e) ||
      dynamic_cast<const NonUniformUnsupported*>(&e))
    return kEmitExit;
  if (dynamic_cast<const RuleFormatError*>(&e) ||
      dynamic_cast<const IllegalContractum*>(&e) ||
      dynamic_cast<const RewriteBudgetExceeded*>(&e))
    return kRewriteExit;
  if (dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const SchemaError*>(&e) ||
      dynamic_cast<const ValidationError*>(&e) ||
      dynamic_cast<const CycleError*>(&e) ||
      dynamic_cast<const EmptyInput*>(&e) ||
      dynamic_cast<const MalformedPattern*>(&e) ||
      dynamic_cast<const LexError*>(&e) ||
      dynamic_cast<const SpanMismatch*>(&e) ||
      dynamic_cast<const UnmappedGoal*>(&e) ||
      dynamic_cast<const PlaceholderMissing*>(&e) ||
      dynamic_cast<const InsufficientAttempts*>(&e))
    return kParseExit;
  return 1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spew(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out.good()) throw IoError("cannot write '" + path + "'");
}

void warn_all(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "vcforge: warning: " << w << "\n";
}

// --- translate ---------------------------------------------------------------

struct TranslateOpts {
  std::string corpus_path;
  std::string target;  // empty: profile's id, or isabelle
  std::string out_dir = "out";
  std::string rules_path;
  std::string profile_path;
  size_t budget = kDefaultRewriteBudget;
  std::vector<std::string> transforms;
  bool lax = false;
  bool inline_deps = false;
  bool strict_unmapped = false;
  bool dump_sexp = false;
};

// deconflict -> optional as-elimination -> rules -> named transformers,
// applied to every term the emitter will render.
TermPtr term_pipeline(const TermPtr& t, const TargetProfile& profile,
                      const RuleSet& rules, const TranslateOpts& o) {
  TermPtr r = deconflict(t);
  if (profile.requires_as_elimination) r = eliminate_as_bindings(r);
  if (rules.size() > 0) r = rewrite_term(r, rules, o.budget);
  for (const auto& name : o.transforms) r = apply_transformer(name, r);
  return r;
}

void run_translate(const TranslateOpts& o) {
  ParseOptions popts;
  popts.strict_unknowns = !o.lax;
  ParseResult parsed = parse_corpus(slurp(o.corpus_path), popts);
  warn_all(parsed.warnings);

  RuleSet rules;
  if (!o.rules_path.empty()) {
    rules = RuleSet::from_json(slurp(o.rules_path));
    warn_all(rules.warnings());
  }
  for (const auto& name : o.transforms) {
    const auto& known = transformer_names();
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw RuleFormatError("unknown transformer '" + name + "'");
  }

  std::vector<TargetProfile> profiles;
  if (!o.profile_path.empty()) {
    TargetProfile p = load_profile(slurp(o.profile_path));
    if (o.target == "all")
      throw RuleFormatError("--profile needs a single target");
    if (!o.target.empty() && o.target != p.id)
      throw RuleFormatError("--target '" + o.target +
                            "' does not match profile id '" + p.id + "'");
    profiles.push_back(std::move(p));
  } else if (o.target == "all") {
    for (const auto& id : builtin_profile_ids())
      profiles.push_back(builtin_profile(id));
  } else {
    std::string target = o.target.empty() ? "isabelle" : o.target;
    const auto& ids = builtin_profile_ids();
    if (std::find(ids.begin(), ids.end(), target) == ids.end())
      throw RuleFormatError("unknown target '" + target +
                            "' (use one of isabelle, lean, rocq, all)");
    profiles.push_back(builtin_profile(target));
  }

  EmitOptions eopts;
  eopts.inline_dependencies = o.inline_deps;
  eopts.print.strict_unmapped = o.strict_unmapped;

  for (const auto& profile : profiles) {
    Corpus work = parsed.corpus;
    for (auto& theory : work.theories) {
      for (auto& decl : theory.decls) {
        if (auto* f = std::get_if<FunDef>(&decl.node)) {
          if (f->body) f->body = term_pipeline(f->body, profile, rules, o);
        } else if (auto* a = std::get_if<Axiom>(&decl.node)) {
          a->statement = term_pipeline(a->statement, profile, rules, o);
        } else if (auto* g = std::get_if<Goal>(&decl.node)) {
          g->statement = term_pipeline(g->statement, profile, rules, o);
          if (o.dump_sexp)
            std::cout << theory.name << "." << g->name << "\t"
                      << term_to_sexp(g->statement) << "\n";
        }
      }
    }

    EmitResult res = emit_corpus(work, profile, o.out_dir, eopts);
    warn_all(res.warnings);
    size_t emitted = 0, circumvented = 0, libraries = 0;
    for (const auto& row : res.rows) {
      if (row.status == "emitted") ++emitted;
      if (row.status == "circumvented") ++circumvented;
      if (row.status == "library") ++libraries;
    }
    std::cout << profile.id << ": " << emitted << " goals emitted, "
              << circumvented << " circumvented, " << libraries
              << " library files -> " << o.out_dir << "/" << profile.id
              << "\n";
  }
}

// --- complicate ----------------------------------------------------------------

struct ComplicateOpts {
  std::string in_path;
  std::string out_path;
  std::string kinds = "assert,lemma,apply";
  bool splice_only = false;
  bool list_spans = false;
};

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void run_complicate(const ComplicateOpts& o) {
  std::string src = slurp(o.in_path);
  std::set<AnnotationKind> wanted;
  for (const auto& name : split_csv(o.kinds)) {
    auto kind = annotation_kind_from_name(name);
    if (!kind) throw RuleFormatError("unknown annotation kind '" + name +
                                     "' (use assert, lemma, apply)");
    wanted.insert(*kind);
  }

  std::vector<SourceSpan> spans;
  for (const auto& s : find_annotations(src))
    if (wanted.count(s.kind)) spans.push_back(s);

  if (o.list_spans) {
    for (const auto& s : spans) {
      nlohmann::ordered_json j;
      j["start_byte"] = s.start_byte;
      j["end_byte"] = s.end_byte;
      j["kind"] = annotation_kind_name(s.kind);
      std::cout << j.dump() << "\n";
    }
    return;
  }

  EraseOptions eo;
  eo.splice_only = o.splice_only;
  std::string result = vcforge::erase(src, spans, eo);
  if (o.out_path.empty())
    std::cout << result;
  else
    spew(o.out_path, result);
  std::cerr << "vcforge: erased " << spans.size() << " annotation"
            << (spans.size() == 1 ? "" : "s") << "\n";
}

// --- stats ---------------------------------------------------------------------

struct StatsOpts {
  std::string corpus_path;
  std::string taxonomy_path;
  std::string out_path;
  bool lax = false;
};

nlohmann::ordered_json stat_line_json(const StatLine& s) {
  nlohmann::ordered_json j;
  j["average"] = s.average;
  j["p25"] = s.p25;
  j["p75"] = s.p75;
  return j;
}

void run_stats(const StatsOpts& o) {
  ParseOptions popts;
  popts.strict_unknowns = !o.lax;
  ParseResult parsed = parse_corpus(slurp(o.corpus_path), popts);
  warn_all(parsed.warnings);

  Taxonomy tax = o.taxonomy_path.empty() ? builtin_taxonomy()
                                         : load_taxonomy_file(o.taxonomy_path);
  std::vector<GoalMetrics> per_goal = corpus_metrics(parsed.corpus, tax);
  std::vector<CategoryRow> rows = aggregate(per_goal, tax);

  nlohmann::ordered_json doc;
  doc["goals"] = nlohmann::ordered_json::array();
  for (const auto& g : per_goal) {
    nlohmann::ordered_json j;
    j["goal_id"] = g.goal_id;
    j["size"] = g.size;
    j["depth"] = g.depth;
    j["quantifier_count"] = g.quantifier_count;
    nlohmann::ordered_json cats;
    for (const auto& [cat, usage] : g.per_category) {
      cats[cat] = {{"op_occurrences", usage.op_occurrences},
                   {"distinct_ops", usage.distinct_ops}};
    }
    j["per_category"] = std::move(cats);
    doc["goals"].push_back(std::move(j));
  }
  doc["categories"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json j;
    j["id"] = row.id;
    j["cases"] = row.cases;
    j["op_occurrences"] = stat_line_json(row.op_occurrences);
    j["distinct_ops"] = stat_line_json(row.distinct_ops);
    j["size"] = stat_line_json(row.size);
    j["depth"] = stat_line_json(row.depth);
    j["quantifiers"] = stat_line_json(row.quantifiers);
    doc["categories"].push_back(std::move(j));
  }

  std::string text = doc.dump(2) + "\n";
  if (o.out_path.empty())
    std::cout << text;
  else
    spew(o.out_path, text);
}

// --- verify ----------------------------------------------------------------------

struct VerifyOpts {
  std::string adapter_path;
  std::string attempts_path;
  std::string goals_dir;
  std::string out_path;
  size_t jobs = 0;
};

std::string find_goal_file(const std::string& goals_dir,
                           const ProofAttempt& a) {
  std::string stem = sanitize_file_stem(a.goal_id);
  const auto& ids = builtin_profile_ids();
  if (std::find(ids.begin(), ids.end(), a.target) != ids.end()) {
    fs::path exact =
        fs::path(goals_dir) / (stem + "." + builtin_profile(a.target).file_ext);
    if (fs::exists(exact)) return exact.string();
  }
  // fall back to any extension, smallest name first for determinism
  std::vector<std::string> hits;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(goals_dir, ec))
    if (entry.path().stem() == stem) hits.push_back(entry.path().string());
  if (ec)
    throw IoError("cannot list goal directory '" + goals_dir + "'");
  std::sort(hits.begin(), hits.end());
  if (hits.empty())
    throw IoError("no goal file for '" + a.goal_id + "' under '" + goals_dir +
                  "'");
  return hits.front();
}

void run_verify(const VerifyOpts& o) {
  CheckerAdapter adapter = load_adapter_file(o.adapter_path);
  std::vector<ProofAttempt> attempts =
      parse_attempts_jsonl(slurp(o.attempts_path));

  std::vector<Verdict> results = run_attempts(
      attempts,
      [&](const ProofAttempt& a) { return find_goal_file(o.goals_dir, a); },
      adapter, o.jobs);

  std::string text = results_to_jsonl(results);
  if (o.out_path.empty())
    std::cout << text;
  else
    spew(o.out_path, text);

  std::map<Status, size_t> counts;
  for (const auto& v : results) ++counts[v.status];
  std::cerr << "vcforge: " << counts[Status::Proved] << " proved, "
            << counts[Status::Fake] << " fake, " << counts[Status::Failed]
            << " failed, " << counts[Status::Timeout] << " timed out\n";
}

// --- report ----------------------------------------------------------------------

struct ReportOpts {
  std::string results_path;
  std::string categories_path;
  std::string pass_at;
};

void run_report(const ReportOpts& o) {
  std::vector<Verdict> results = parse_results_jsonl(slurp(o.results_path));

  std::map<std::string, std::string> category_map;
  if (!o.categories_path.empty()) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(slurp(o.categories_path));
    } catch (const nlohmann::json::exception& e) {
      throw RuleFormatError(std::string("category map is not valid JSON: ") +
                            e.what());
    }
    if (!doc.is_object())
      throw RuleFormatError("category map must be a JSON object");
    for (const auto& [goal, cat] : doc.items()) {
      if (!cat.is_string())
        throw RuleFormatError("category for '" + goal + "' must be a string");
      category_map[goal] = cat.get<std::string>();
    }
  } else {
    // no map given: bucket goals by their theory prefix
    for (const auto& v : results) {
      size_t dot = v.goal_id.find('.');
      category_map[v.goal_id] =
          dot == std::string::npos ? v.goal_id : v.goal_id.substr(0, dot);
    }
  }

  std::vector<size_t> ns;
  for (const auto& item : split_csv(o.pass_at)) {
    size_t parsed = 0;
    try {
      size_t used = 0;
      parsed = std::stoul(item, &used);
      if (used != item.size()) parsed = 0;
    } catch (const std::exception&) {
      parsed = 0;
    }
    if (parsed == 0)
      throw RuleFormatError("--pass-at wants positive integers, got '" + item +
                            "'");
    ns.push_back(parsed);
  }

  std::cout << render_report(make_report(results, category_map, ns));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"translate dumped verification conditions into proof-assistant "
               "syntaxes, harden sources, measure goals, and score machine "
               "proofs"};
  app.require_subcommand(1);
  app.footer("Exit status: 0 success, 2 input parsing or validation, 3 rule "
             "and config problems or rewrite limits, 4 emission, 5 i/o.");

  TranslateOpts topts;
  CLI::App* translate = app.add_subcommand(
      "translate", "render a condition corpus as proof-assistant files");
  translate->add_option("corpus", topts.corpus_path, "corpus XML dump")
      ->required();
  translate->add_option("--target", topts.target,
                        "isabelle, lean, rocq, or all (default isabelle, "
                        "or the --profile id)");
  translate->add_option("-o,--out", topts.out_dir,
                        "output root (default out/)");
  translate->add_option("--rules", topts.rules_path,
                        "rewrite rules JSON applied before emission");
  translate->add_option("--profile", topts.profile_path,
                        "target profile JSON overriding the builtin");
  translate->add_option("--budget", topts.budget,
                        "rewrite firing budget per term");
  translate->add_option("--transform", topts.transforms,
                        "named structural pass, repeatable");
  translate->add_flag("--lax-unknowns", topts.lax,
                      "demote unknown constants and imports to warnings");
  translate->add_flag("--inline-deps", topts.inline_deps,
                      "inline dependencies into each goal file");
  translate->add_flag("--strict-unmapped", topts.strict_unmapped,
                      "fail on constants without a target mapping");
  translate->add_flag("--dump-sexp", topts.dump_sexp,
                      "print each rewritten goal as an s-expression");

  ComplicateOpts copts;
  CLI::App* complicate = app.add_subcommand(
      "complicate", "erase proof-simplifying annotations from source");
  complicate->add_option("input", copts.in_path, "annotated source file")
      ->required();
  complicate->add_option("-o,--out", copts.out_path,
                         "output file (default stdout)");
  complicate->add_option("--kinds", copts.kinds,
                         "comma list of assert, lemma, apply");
  complicate->add_flag("--splice-only", copts.splice_only,
                       "keep leftovers of partially erased lines");
  complicate->add_flag("--list-spans", copts.list_spans,
                       "print span records as JSON lines instead of erasing");

  StatsOpts sopts;
  CLI::App* stats = app.add_subcommand(
      "stats", "per-goal measures and category aggregates as JSON");
  stats->add_option("corpus", sopts.corpus_path, "corpus XML dump")
      ->required();
  stats->add_option("--taxonomy", sopts.taxonomy_path,
                    "taxonomy JSON (default builtin tables)");
  stats->add_option("-o,--out", sopts.out_path, "report file (default stdout)");
  stats->add_flag("--lax-unknowns", sopts.lax,
                  "demote unknown constants and imports to warnings");

  VerifyOpts vopts;
  CLI::App* verify = app.add_subcommand(
      "verify", "run proof attempts through an external checker");
  verify->add_option("--adapter", vopts.adapter_path, "checker adapter JSON")
      ->required();
  verify->add_option("--attempts", vopts.attempts_path,
                     "proof attempts JSON lines")
      ->required();
  verify->add_option("--goals-dir", vopts.goals_dir,
                     "directory of emitted goal files")
      ->required();
  verify->add_option("-o,--out", vopts.out_path,
                     "verdict JSON lines (default stdout)");
  verify->add_option("--jobs", vopts.jobs,
                     "concurrent checkers (default VCFORGE_JOBS or cores)");

  ReportOpts ropts;
  CLI::App* report = app.add_subcommand(
      "report", "summarise verdicts per category with pass@n columns");
  report->add_option("results", ropts.results_path, "verdict JSON lines")
      ->required();
  report->add_option("--categories", ropts.categories_path,
                     "goal-to-category JSON map (default: theory prefix)");
  report->add_option("--pass-at", ropts.pass_at,
                     "comma list of n values for pass@n columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (translate->parsed()) run_translate(topts);
    if (complicate->parsed()) run_complicate(copts);
    if (stats->parsed()) run_stats(sopts);
    if (verify->parsed()) run_verify(vopts);
    if (report->parsed()) run_report(ropts);
  } catch (const Error& e) {
    std::cerr << "vcforge: error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "vcforge: unexpected error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
