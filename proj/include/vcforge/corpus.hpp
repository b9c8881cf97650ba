#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "vcforge/term.hpp"

namespace vcforge {

// Dumped verification-condition corpus: a set of theories, each a sequence
// of datatype declarations, function definitions, axioms, and goals, plus
// imports of other theories in the same corpus.

struct DatatypeCtor {
  std::string name;
  std::vector<TyPtr> args;
};

struct Datatype {
  std::string name;
  std::vector<std::string> ty_params;
  std::vector<DatatypeCtor> constructors;
};

struct FunDef {
  std::string name;
  std::vector<std::string> ty_params;
  std::vector<std::pair<std::string, TyPtr>> params;
  TyPtr ret;
  TermPtr body;
  bool recursive = false;
  bool termination_trusted = false;
};

struct Axiom {
  std::string name;
  TermPtr statement;
};

struct Goal {
  std::string name;
  TermPtr statement;
};

struct Declaration {
  std::variant<Datatype, FunDef, Axiom, Goal> node;
  const std::string& name() const;
};

struct Theory {
  std::string name;
  std::vector<std::string> imports;
  std::vector<Declaration> decls;
};

struct Corpus {
  std::vector<Theory> theories;
};

// Constants and type constructors the interchange dumps may reference
// without declaring them (logical connectives, arithmetic, containers,
// and the dump-side stdlib names the demo rule sets rewrite away).
const std::set<std::string>& builtin_constants();
const std::map<std::string, size_t>& builtin_tycon_arities();

struct ParseOptions {
  // When false, unresolvable constants/imports become warnings instead of
  // ValidationError.
  bool strict_unknowns = true;
  std::set<std::string> extra_builtins;
};

struct ParseResult {
  Corpus corpus;
  std::vector<std::string> warnings;
};

// Parses and validates the XML interchange format. Throws ParseError on
// malformed XML, SchemaError on unknown/missing elements or attributes,
// ValidationError on semantic violations, CycleError on import cycles.
ParseResult parse_corpus(const std::string& xml_text, const ParseOptions& opts = {});

// Deterministic serializer; parse_corpus(corpus_to_xml(c)) reproduces c.
std::string corpus_to_xml(const Corpus& c);

// Indices into c.theories such that every theory appears after all its
// imports; ties broken by theory name ascending. Throws CycleError.
std::vector<size_t> topo_order(const Corpus& c);

// True when some constructor argument mentions the datatype applied to
// type arguments other than its declared parameters.
bool detect_non_uniform(const Datatype& d);

// --- name resolution ---------------------------------------------------------

enum class NameKind { DatatypeName, Constructor, Function, AxiomName, GoalName };

struct NameEntry {
  NameKind kind;
  size_t theory;  // index into corpus.theories
  size_t decl;    // index into theory.decls
};

// Corpus-wide map of declared names (datatypes, constructors, functions,
// axioms, goals). Names are unique per theory; the multimap keeps one
// entry per declaring theory.
using NameIndex = std::multimap<std::string, NameEntry>;

NameIndex build_name_index(const Corpus& c);

// Theories visible from `theory` (itself plus transitive imports).
std::set<size_t> visible_theories(const Corpus& c, size_t theory);

// Names of every declaration the goal statement depends on, transitively:
// constants and type constructors referenced from the statement, chased
// through function bodies, signatures, and datatype constructor types.
std::set<std::string> goal_dependency_names(const Corpus& c, size_t theory,
                                            const Goal& goal);

// Datatype names in the goal's dependency set that are non-uniform.
std::set<std::string> non_uniform_dependencies(const Corpus& c, size_t theory,
                                               const Goal& goal);

}  // namespace vcforge
