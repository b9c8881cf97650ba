#include "vcforge/profile.hpp"

#include <json.hpp>

#include "vcforge/errors.hpp"

namespace vcforge {

const BuiltinEntry* TargetProfile::builtin(const std::string& corpus_name) const {
  auto it = builtin_map.find(corpus_name);
  return it == builtin_map.end() ? nullptr : &it->second;
}

namespace {

BuiltinEntry plain(const char* name) { return {name, std::nullopt}; }

BuiltinEntry infix(const char* name, const char* sym, int prec, Assoc assoc) {
  return {name, NotationRule{NotationRule::Kind::Infix, sym, prec, assoc, 2}};
}

BuiltinEntry prefix(const char* name, const char* sym, int prec) {
  return {name, NotationRule{NotationRule::Kind::Prefix, sym, prec, Assoc::None, 1}};
}

BuiltinEntry atom(const char* name, const char* spelling) {
  return {name, NotationRule{NotationRule::Kind::Atom, spelling, 100, Assoc::None, 0}};
}

BuiltinEntry mixfix(const char* name, const char* tmpl, int prec, size_t arity) {
  return {name, NotationRule{NotationRule::Kind::Mixfix, tmpl, prec, Assoc::None, arity}};
}

// Entries shared by every profile: obscure or container operations keep
// their corpus spelling and render in application position.
void add_identity_entries(TargetProfile& p) {
  for (const char* n :
       {"Map.get", "Map.set", "Map.domain", "Bag.count", "Bag.add", "Bag.union",
        "Float.add", "Float.sub", "Float.mul", "Float.div", "Float.neg", "Float.lt",
        "Float.le", "Float.eq", "Float.of_int", "Float.is_finite", "String.length",
        "String.concat", "String.sub", "Matrix.get", "Matrix.set", "Matrix.rows",
        "Matrix.cols", "Memory.valid_rd", "Memory.valid_rw", "Memory.load",
        "Memory.store", "Memory.shift", "Memory.base_addr", "Seq.get", "Seq.length",
        "Seq.concat", "List.get"})
    p.builtin_map.emplace(n, plain(n));
}

TargetProfile make_isabelle() {
  TargetProfile p;
  p.id = "isabelle";
  p.file_ext = "thy";
  p.placeholder = "sorry";
  p.requires_as_elimination = true;
  p.supports_non_uniform = false;
  p.style = DeclStyle::Isabelle;
  p.lambda = {"λ", "::", ". "};
  p.forall_q = {"∀", "::", ". "};
  p.exists_q = {"∃", "::", ". "};
  p.let_syntax = {" = ", " in "};
  p.case_syntax = {"case", " of", " ⇒ ", " | ", false, ""};
  p.type_syntax = {"⇒", "×", "'", true};
  p.pattern_as_supported = false;

  auto& b = p.builtin_map;
  b["eq"] = infix("eq", "=", 50, Assoc::None);
  b["ne"] = infix("ne", "≠", 50, Assoc::None);
  b["lt"] = infix("lt", "<", 50, Assoc::None);
  b["le"] = infix("le", "≤", 50, Assoc::None);
  b["gt"] = infix("gt", ">", 50, Assoc::None);
  b["ge"] = infix("ge", "≥", 50, Assoc::None);
  b["and"] = infix("conj", "∧", 35, Assoc::Right);
  b["or"] = infix("disj", "∨", 30, Assoc::Right);
  b["implies"] = infix("implies", "⟶", 20, Assoc::Right);
  b["iff"] = infix("iff", "⟷", 21, Assoc::None);
  b["not"] = prefix("Not", "¬", 40);
  b["ite"] = mixfix("If", "if $0 then $1 else $2", 0, 3);
  b["true"] = atom("True", "True");
  b["false"] = atom("False", "False");
  b["forall"] = plain("All");
  b["exists"] = plain("Ex");
  b["Int.add"] = infix("Int.add", "+", 65, Assoc::Left);
  b["Int.sub"] = infix("Int.sub", "-", 65, Assoc::Left);
  b["Int.mul"] = infix("Int.mul", "*", 70, Assoc::Left);
  b["Int.div"] = infix("Int.div", "div", 70, Assoc::Left);
  b["Int.mod"] = infix("Int.mod", "mod", 70, Assoc::Left);
  b["Int.pow"] = infix("Int.pow", "^", 75, Assoc::Right);
  b["Int.neg"] = plain("uminus");
  b["Int.min"] = plain("min");
  b["Int.max"] = plain("max");
  b["Int.abs"] = plain("abs");
  b["Int.int"] = plain("int");
  b["Nat.of_int"] = plain("nat");
  b["List.cons"] = infix("List.cons", "#", 67, Assoc::Right);
  b["List.nil"] = atom("List.nil", "[]");
  b["List.append"] = infix("List.append", "@", 66, Assoc::Right);
  b["List.length"] = plain("length");
  b["List.mem"] = plain("List.member");
  b["Array.get"] = infix("Array.get", "!", 90, Assoc::Left);
  b["Array.set"] = plain("Array.set");
  b["Array.length"] = plain("Array.length");
  b["Array.make"] = plain("Array.make");
  b["Set.mem"] = infix("Set.member", "∈", 50, Assoc::None);
  b["Set.add"] = plain("insert");
  b["Set.union"] = infix("Set.union", "∪", 65, Assoc::Left);
  b["Set.inter"] = infix("Set.inter", "∩", 70, Assoc::Left);
  b["Set.empty"] = atom("Set.empty", "{}");
  add_identity_entries(p);

  p.tycon_map = {{"int", "int"},       {"bool", "bool"},     {"nat", "nat"},
                 {"real", "real"},     {"float", "float"},   {"string", "string"},
                 {"unit", "unit"},     {"list", "list"},     {"array", "array"},
                 {"set", "set"},       {"bag", "multiset"},  {"seq", "seq"},
                 {"matrix", "matrix"}, {"map", "map"},       {"memory", "memory"},
                 {"pointer", "pointer"}};

  p.keywords = {"theory",   "imports",    "begin",  "end",     "datatype", "fun",
                "function", "definition", "consts", "lemma",   "theorem",  "where",
                "case",     "of",         "let",    "in",      "if",       "then",
                "else",     "and",        "div",    "mod",     "assumes",  "shows",
                "fixes",    "axiomatization",       "abbreviation",        "sorry"};
  return p;
}

TargetProfile make_lean() {
  TargetProfile p;
  p.id = "lean";
  p.file_ext = "lean";
  p.placeholder = "sorry";
  p.requires_as_elimination = true;
  p.supports_non_uniform = true;
  p.style = DeclStyle::Lean;
  p.lambda = {"fun (", " : ", ") => "};
  p.forall_q = {"∀ (", " : ", "), "};
  p.exists_q = {"∃ (", " : ", "), "};
  p.let_syntax = {" := ", "; "};
  p.case_syntax = {"match", " with", " => ", " | ", true, ""};
  p.type_syntax = {"→", "×", "", false};
  p.pattern_as_supported = false;

  auto& b = p.builtin_map;
  b["eq"] = infix("Eq", "=", 50, Assoc::None);
  b["ne"] = infix("Ne", "≠", 50, Assoc::None);
  b["lt"] = infix("lt", "<", 50, Assoc::None);
  b["le"] = infix("le", "≤", 50, Assoc::None);
  b["gt"] = infix("gt", ">", 50, Assoc::None);
  b["ge"] = infix("ge", "≥", 50, Assoc::None);
  b["and"] = infix("And", "∧", 35, Assoc::Right);
  b["or"] = infix("Or", "∨", 30, Assoc::Right);
  b["implies"] = infix("implies", "→", 20, Assoc::Right);
  b["iff"] = infix("Iff", "↔", 21, Assoc::None);
  b["not"] = prefix("Not", "¬", 40);
  b["ite"] = mixfix("ite", "if $0 then $1 else $2", 0, 3);
  b["true"] = atom("True", "True");
  b["false"] = atom("False", "False");
  b["forall"] = plain("Forall");
  b["exists"] = plain("Exists");
  b["Int.add"] = infix("Int.add", "+", 65, Assoc::Left);
  b["Int.sub"] = infix("Int.sub", "-", 65, Assoc::Left);
  b["Int.mul"] = infix("Int.mul", "*", 70, Assoc::Left);
  b["Int.div"] = infix("Int.div", "/", 70, Assoc::Left);
  b["Int.mod"] = infix("Int.mod", "%", 70, Assoc::Left);
  b["Int.pow"] = infix("Int.pow", "^", 75, Assoc::Right);
  b["Int.neg"] = plain("Int.neg");
  b["Int.min"] = plain("min");
  b["Int.max"] = plain("max");
  b["Int.abs"] = plain("abs");
  b["Int.int"] = plain("Int.ofNat");
  b["Nat.of_int"] = plain("Int.toNat");
  b["List.cons"] = infix("List.cons", "::", 67, Assoc::Right);
  b["List.nil"] = atom("List.nil", "[]");
  b["List.append"] = infix("List.append", "++", 66, Assoc::Right);
  b["List.length"] = plain("List.length");
  b["List.mem"] = plain("List.Mem");
  b["Array.get"] = mixfix("Array.get", "$0[$1]", 90, 2);
  b["Array.set"] = plain("Array.set");
  b["Array.length"] = plain("Array.size");
  b["Array.make"] = plain("Array.mkArray");
  b["Set.mem"] = infix("Set.mem", "∈", 50, Assoc::None);
  b["Set.add"] = plain("Set.insert");
  b["Set.union"] = infix("Set.union", "∪", 65, Assoc::Left);
  b["Set.inter"] = infix("Set.inter", "∩", 70, Assoc::Left);
  b["Set.empty"] = atom("Set.empty", "∅");
  add_identity_entries(p);

  p.tycon_map = {{"int", "Int"},       {"bool", "Bool"},     {"nat", "Nat"},
                 {"real", "Real"},     {"float", "Float"},   {"string", "String"},
                 {"unit", "Unit"},     {"list", "List"},     {"array", "Array"},
                 {"set", "Set"},       {"bag", "Multiset"},  {"seq", "Seq"},
                 {"matrix", "Matrix"}, {"map", "Map"},       {"memory", "Memory"},
                 {"pointer", "Pointer"}};

  p.keywords = {"theorem", "def",   "axiom", "inductive", "match", "with",
                "let",     "in",    "fun",   "if",        "then",  "else",
                "import",  "namespace",      "end",       "by",    "sorry",
                "have",    "show",  "from",  "do",        "where", "deriving"};
  return p;
}

TargetProfile make_rocq() {
  TargetProfile p;
  p.id = "rocq";
  p.file_ext = "v";
  p.placeholder = "Admitted.";
  p.requires_as_elimination = false;
  p.supports_non_uniform = true;
  p.style = DeclStyle::Rocq;
  p.lambda = {"fun (", " : ", ") => "};
  p.forall_q = {"forall (", " : ", "), "};
  p.exists_q = {"exists ", " : ", ", "};
  p.let_syntax = {" := ", " in "};
  p.case_syntax = {"match", " with", " => ", " | ", true, " end"};
  p.type_syntax = {"->", "*", "", false};
  p.pattern_as_supported = true;

  auto& b = p.builtin_map;
  b["eq"] = infix("eq", "=", 50, Assoc::None);
  b["ne"] = infix("ne", "<>", 50, Assoc::None);
  b["lt"] = infix("lt", "<", 50, Assoc::None);
  b["le"] = infix("le", "<=", 50, Assoc::None);
  b["gt"] = infix("gt", ">", 50, Assoc::None);
  b["ge"] = infix("ge", ">=", 50, Assoc::None);
  b["and"] = infix("and", "/\\", 35, Assoc::Right);
  b["or"] = infix("or", "\\/", 30, Assoc::Right);
  b["implies"] = infix("implies", "->", 20, Assoc::Right);
  b["iff"] = infix("iff", "<->", 21, Assoc::None);
  b["not"] = prefix("not", "~", 40);
  b["ite"] = mixfix("ite", "if $0 then $1 else $2", 0, 3);
  b["true"] = atom("True", "True");
  b["false"] = atom("False", "False");
  b["forall"] = plain("all");
  b["exists"] = plain("ex");
  b["Int.add"] = infix("Z.add", "+", 65, Assoc::Left);
  b["Int.sub"] = infix("Z.sub", "-", 65, Assoc::Left);
  b["Int.mul"] = infix("Z.mul", "*", 70, Assoc::Left);
  b["Int.div"] = infix("Z.div", "/", 70, Assoc::Left);
  b["Int.mod"] = infix("Z.modulo", "mod", 70, Assoc::Left);
  b["Int.pow"] = infix("Z.pow", "^", 75, Assoc::Right);
  b["Int.neg"] = plain("Z.opp");
  b["Int.min"] = plain("Z.min");
  b["Int.max"] = plain("Z.max");
  b["Int.abs"] = plain("Z.abs");
  b["Int.int"] = plain("Z.of_nat");
  b["Nat.of_int"] = plain("Z.to_nat");
  b["List.cons"] = infix("cons", "::", 67, Assoc::Right);
  b["List.nil"] = atom("nil", "nil");
  b["List.append"] = infix("List.app", "++", 66, Assoc::Right);
  b["List.length"] = plain("List.length");
  b["List.mem"] = plain("List.In");
  b["Array.get"] = plain("Array.get");
  b["Array.set"] = plain("Array.set");
  b["Array.length"] = plain("Array.length");
  b["Array.make"] = plain("Array.make");
  b["Set.mem"] = plain("Set.mem");
  b["Set.add"] = plain("Set.add");
  b["Set.union"] = plain("Set.union");
  b["Set.inter"] = plain("Set.inter");
  b["Set.empty"] = plain("Set.empty");
  add_identity_entries(p);

  p.tycon_map = {{"int", "Z"},         {"bool", "bool"},     {"nat", "nat"},
                 {"real", "R"},        {"float", "float"},   {"string", "string"},
                 {"unit", "unit"},     {"list", "list"},     {"array", "array"},
                 {"set", "set"},       {"bag", "bag"},       {"seq", "seq"},
                 {"matrix", "matrix"}, {"map", "map"},       {"memory", "memory"},
                 {"pointer", "pointer"}};

  p.keywords = {"Definition", "Lemma",  "Theorem", "Axiom", "Parameter", "Inductive",
                "Fixpoint",   "match",  "with",    "end",   "let",       "in",
                "fun",        "forall", "exists",  "if",    "then",      "else",
                "fix",        "Prop",   "Type",    "Set",   "mod",       "as",
                "return",     "Require","Import",  "Proof", "Qed",       "Admitted"};
  return p;
}

const std::map<std::string, TargetProfile>& builtin_profiles() {
  static const std::map<std::string, TargetProfile> profiles = [] {
    std::map<std::string, TargetProfile> out;
    for (auto& p : {make_isabelle(), make_lean(), make_rocq()}) {
      check_profile_injective(p);
      out.emplace(p.id, p);
    }
    return out;
  }();
  return profiles;
}

NotationRule notation_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw RuleFormatError("notation must be an object");
  NotationRule n;
  std::string kind = j.value("kind", "");
  if (kind == "atom")
    n.kind = NotationRule::Kind::Atom;
  else if (kind == "prefix")
    n.kind = NotationRule::Kind::Prefix;
  else if (kind == "infix")
    n.kind = NotationRule::Kind::Infix;
  else if (kind == "mixfix")
    n.kind = NotationRule::Kind::Mixfix;
  else
    throw RuleFormatError("notation kind must be atom, prefix, infix, or mixfix");
  if (!j.contains("text") || !j["text"].is_string())
    throw RuleFormatError("notation needs a 'text' string");
  n.text = j["text"].get<std::string>();
  n.prec = j.value("prec", 100);
  if (n.prec < 0 || n.prec > 100)
    throw RuleFormatError("notation precedence must be between 0 and 100");
  std::string assoc = j.value("assoc", "none");
  if (assoc == "left")
    n.assoc = Assoc::Left;
  else if (assoc == "right")
    n.assoc = Assoc::Right;
  else if (assoc == "none")
    n.assoc = Assoc::None;
  else
    throw RuleFormatError("notation assoc must be left, right, or none");
  switch (n.kind) {
    case NotationRule::Kind::Atom: n.arity = 0; break;
    case NotationRule::Kind::Prefix: n.arity = 1; break;
    case NotationRule::Kind::Infix: n.arity = 2; break;
    case NotationRule::Kind::Mixfix: {
      if (!j.contains("arity") || !j["arity"].is_number_unsigned())
        throw RuleFormatError("mixfix notation needs an unsigned 'arity'");
      n.arity = j["arity"].get<size_t>();
      break;
    }
  }
  return n;
}

}  // namespace

const TargetProfile& builtin_profile(const std::string& id) {
  const auto& profiles = builtin_profiles();
  auto it = profiles.find(id);
  if (it == profiles.end()) throw Error("unknown target profile '" + id + "'");
  return it->second;
}

const std::vector<std::string>& builtin_profile_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, p] : builtin_profiles()) {
      (void)p;
      out.push_back(id);
    }
    return out;
  }();
  return ids;
}

void check_profile_injective(const TargetProfile& p) {
  std::map<std::string, std::string> names;    // target spelling -> corpus name
  std::map<std::string, std::string> symbols;  // operator text -> corpus name
  auto claim = [&](std::map<std::string, std::string>& table, const std::string& key,
                   const std::string& owner, const char* what) {
    auto [it, fresh] = table.emplace(key, owner);
    if (!fresh && it->second != owner)
      throw ValidationError("profile '" + p.id + "': " + what + " '" + key +
                            "' is claimed by both '" + it->second + "' and '" + owner +
                            "'");
  };
  for (const auto& [corpus_name, entry] : p.builtin_map) {
    claim(names, entry.name, corpus_name, "target name");
    if (entry.notation) {
      if (entry.notation->kind == NotationRule::Kind::Atom)
        claim(names, entry.notation->text, corpus_name, "atom spelling");
      else
        claim(symbols, entry.notation->text, corpus_name, "notation");
    }
  }
  std::map<std::string, std::string> tynames;
  for (const auto& [corpus_name, target] : p.tycon_map)
    claim(tynames, target, corpus_name, "type constructor spelling");
}

TargetProfile load_profile(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw RuleFormatError(std::string("profile file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw RuleFormatError("profile file must be a JSON object");
  if (!doc.contains("extends") || !doc["extends"].is_string())
    throw RuleFormatError("profile file needs an 'extends' key naming a base profile");

  TargetProfile p = builtin_profile(doc["extends"].get<std::string>());
  if (doc.contains("id")) p.id = doc["id"].get<std::string>();
  if (doc.contains("file_ext")) p.file_ext = doc["file_ext"].get<std::string>();
  if (doc.contains("placeholder")) p.placeholder = doc["placeholder"].get<std::string>();
  if (doc.contains("requires_as_elimination"))
    p.requires_as_elimination = doc["requires_as_elimination"].get<bool>();
  if (doc.contains("supports_non_uniform"))
    p.supports_non_uniform = doc["supports_non_uniform"].get<bool>();

  if (doc.contains("builtins")) {
    if (!doc["builtins"].is_object())
      throw RuleFormatError("'builtins' must map corpus names to entries");
    for (const auto& [corpus_name, spec] : doc["builtins"].items()) {
      if (spec.is_null()) {
        p.builtin_map.erase(corpus_name);
        continue;
      }
      if (!spec.is_object())
        throw RuleFormatError("builtin entry for '" + corpus_name +
                              "' must be an object or null");
      BuiltinEntry entry;
      const auto* existing = p.builtin(corpus_name);
      if (existing) entry = *existing;
      if (spec.contains("name")) entry.name = spec["name"].get<std::string>();
      if (entry.name.empty()) entry.name = corpus_name;
      if (spec.contains("notation")) {
        if (spec["notation"].is_null())
          entry.notation.reset();
        else
          entry.notation = notation_from_json(spec["notation"]);
      }
      p.builtin_map[corpus_name] = std::move(entry);
    }
  }
  if (doc.contains("tycons")) {
    if (!doc["tycons"].is_object())
      throw RuleFormatError("'tycons' must map corpus tycons to spellings");
    for (const auto& [corpus_name, target] : doc["tycons"].items())
      p.tycon_map[corpus_name] = target.get<std::string>();
  }
  if (doc.contains("keywords")) {
    for (const auto& kw : doc["keywords"]) p.keywords.insert(kw.get<std::string>());
  }
  check_profile_injective(p);
  return p;
}

}  // namespace vcforge
