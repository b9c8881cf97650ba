#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "vcforge/corpus.hpp"
#include "vcforge/profile.hpp"
#include "vcforge/term.hpp"

namespace vcforge {

// Precedence levels used by the printers and mirrored by the reference
// parsers in the test suite. Binder forms sit at the bottom so they extend
// as far right as the surrounding construct allows; application binds
// tightest below atoms. Infix operators fill the middle of the range.
namespace prec {
constexpr int kBinder = 0;
constexpr int kImplies = 20;
constexpr int kIff = 21;
constexpr int kOr = 30;
constexpr int kAnd = 35;
constexpr int kNot = 40;
constexpr int kCompare = 50;
constexpr int kAdd = 65;
constexpr int kAppend = 66;
constexpr int kCons = 67;
constexpr int kMul = 70;
constexpr int kPow = 75;
constexpr int kNegLit = 80;
constexpr int kIndex = 90;
constexpr int kApp = 95;
constexpr int kArg = 96;
constexpr int kAtom = 100;
}  // namespace prec

// Rewrites names that collide with a target's reserved vocabulary
// (keywords, builtin spellings, mapped type constructors). The mapping is
// memoized per output file and injective: distinct inputs never merge, and
// an escaped name never collides with one that passed through untouched.
class NameEscaper {
public:
  explicit NameEscaper(const TargetProfile& profile);
  std::string escape(const std::string& name);

private:
  std::map<std::string, std::string> memo_;
  std::set<std::string> reserved_;
  std::set<std::string> used_;
};

struct PrintOptions {
  // Throw UnmappedConstant for constants that are neither builtin-mapped
  // nor declared by the corpus, instead of printing them verbatim.
  bool strict_unmapped = false;
};

// One rendered subterm. open_match is true when the right edge of the text
// ends inside a bar-delimited match whose branch list is still accepting
// alternatives; a non-final case branch with an open right edge must be
// parenthesized or the next bar would attach to the inner match.
struct Rendered {
  std::string text;
  int prec = prec::kAtom;
  bool open_match = false;
};

class Printer {
public:
  Printer(const TargetProfile& profile, NameEscaper& names,
          std::set<std::string> declared_consts = {},
          std::set<std::string> declared_tycons = {}, PrintOptions opts = {});

  std::string term(const TermPtr& t) { return render(t, prec::kBinder).text; }
  std::string type(const TyPtr& ty) { return render_type(ty, prec::kBinder); }
  std::string pattern(const PatternPtr& p) { return render_pattern(p, false); }

  Rendered render(const TermPtr& t, int min_prec);
  std::string render_type(const TyPtr& ty, int min_prec);
  std::string render_pattern(const PatternPtr& p, bool atomic);

private:
  struct Spelling {
    std::string text;
    const NotationRule* notation = nullptr;  // null for plain names
  };
  Spelling const_spelling(const std::string& name);
  Rendered finish(std::string text, int p, bool open, int min_prec) const;
  Rendered render_application(const TermPtr& head, const std::vector<TermPtr>& args,
                              int min_prec);
  Rendered render_binder(const BinderSyntax& syntax, const std::string& binder,
                         const TyPtr& ty, const TermPtr& body, int min_prec);

  const TargetProfile* profile_;
  NameEscaper* names_;
  std::set<std::string> declared_consts_;
  std::set<std::string> declared_tycons_;
  PrintOptions opts_;
};

// Quotes and escapes a string literal body: backslash, double quote,
// newline, and tab are escaped; everything else passes through.
std::string quote_string_literal(const std::string& s);

struct EmitOptions {
  // Inline every visible declaration into each goal file instead of
  // emitting per-theory library files and import lines.
  bool inline_dependencies = false;
  PrintOptions print;
};

struct ManifestRow {
  std::string goal_id;  // empty for library rows
  std::string path;     // relative to the output root; empty when circumvented
  std::string status;   // "emitted", "circumvented", or "library"
};

struct EmitResult {
  std::vector<ManifestRow> rows;
  std::vector<std::string> warnings;
};

// Renders one declaration in the target's declaration syntax.
std::string render_declaration(const Declaration& decl, const TargetProfile& profile,
                               Printer& printer, NameEscaper& names);

// The full text of the library file for one theory, and of the proof file
// for one goal. Both respect EmitOptions.inline_dependencies.
std::string render_library_file(const Corpus& corpus, size_t theory_index,
                                const TargetProfile& profile, const EmitOptions& opts);
std::string render_goal_file(const Corpus& corpus, size_t theory_index,
                             const Goal& goal, const TargetProfile& profile,
                             const EmitOptions& opts);

// Translates the whole corpus for one target under out_dir/<target id>/:
// goals/<Theory>__<goal>.<ext>, lib/<Theory>.<ext>, and manifest.jsonl.
// Output is deterministic, so re-running over the same input produces
// byte-identical files. Goals whose dependency closure reaches a
// non-uniform datatype are circumvented for targets that cannot express
// one, and declarations tainted by such a datatype are dropped from that
// target's library files.
EmitResult emit_corpus(const Corpus& corpus, const TargetProfile& profile,
                       const std::string& out_dir, const EmitOptions& opts = {});

std::string manifest_to_jsonl(const std::vector<ManifestRow>& rows);

// Theory names become file stems; dots are not portable in every target's
// file or module names, so they are rewritten to a double underscore.
// Throws ValidationError when two theories collide after rewriting.
std::string sanitize_file_stem(const std::string& name);

}  // namespace vcforge
