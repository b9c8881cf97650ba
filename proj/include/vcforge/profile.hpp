#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vcforge/term.hpp"

namespace vcforge {

enum class Assoc { Left, Right, None };

// How a builtin constant renders when its spine has exactly the arity the
// notation expects. Partial and over-applications fall back to the plain
// target name in application position.
struct NotationRule {
  enum class Kind { Atom, Prefix, Infix, Mixfix };
  Kind kind = Kind::Atom;
  std::string text;  // symbol, atom spelling, or $-slot template
  int prec = 100;
  Assoc assoc = Assoc::None;
  size_t arity = 0;
};

struct BuiltinEntry {
  std::string name;  // prefix-callable target spelling
  std::optional<NotationRule> notation;
};

// Binder-headed forms: lambda and the two quantifiers.
struct BinderSyntax {
  std::string intro;     // text before the bound name ("λ", "∀ (", ...)
  std::string type_sep;  // between name and type ("::", " : ")
  std::string close;     // after the type, before the body (". ", "), ", ", ")
};

struct LetSyntax {
  std::string assign;  // " = " or " := "
  std::string in_kw;   // " in " or "; "
};

struct CaseSyntax {
  std::string kw;           // "case" or "match"
  std::string of_kw;        // " of" or " with"
  std::string arrow;        // " ⇒ " or " => "
  std::string bar = " | ";  // branch separator
  bool bar_before_first = false;
  std::string end_kw;  // " end" when the construct is closed, else empty
};

struct TypeSyntax {
  std::string arrow;        // "⇒", "→", "->"
  std::string product;      // "×" or "*"
  std::string tyvar_prefix; // "'" for Isabelle, empty otherwise
  bool postfix_app = false; // 'a list vs List a
};

// Which family of declaration templates the emitter uses for theory files.
enum class DeclStyle { Isabelle, Lean, Rocq };

struct TargetProfile {
  std::string id;
  std::string file_ext;
  std::string placeholder;  // inserted where a machine proof will go
  bool requires_as_elimination = false;
  bool supports_non_uniform = true;

  DeclStyle style = DeclStyle::Isabelle;
  BinderSyntax lambda, forall_q, exists_q;
  LetSyntax let_syntax;
  CaseSyntax case_syntax;
  TypeSyntax type_syntax;
  bool pattern_as_supported = false;  // renders PAs as "p as x"

  std::map<std::string, BuiltinEntry> builtin_map;  // corpus constant -> target
  std::map<std::string, std::string> tycon_map;     // corpus tycon -> target
  std::set<std::string> keywords;

  const BuiltinEntry* builtin(const std::string& corpus_name) const;
};

// Compiled-in defaults. Valid ids: "isabelle", "lean", "rocq".
const TargetProfile& builtin_profile(const std::string& id);
const std::vector<std::string>& builtin_profile_ids();

// Loads a profile from JSON. The object may name a compiled-in base via
// "extends"; remaining keys override or extend it. Builtin overrides are
// merged per constant. Throws RuleFormatError on malformed input and
// ValidationError when the resulting prefix-name map is not injective.
TargetProfile load_profile(const std::string& json_text);

// Every profile must keep target spellings distinct so printed terms can
// be read back unambiguously; throws ValidationError otherwise.
void check_profile_injective(const TargetProfile& p);

}  // namespace vcforge
