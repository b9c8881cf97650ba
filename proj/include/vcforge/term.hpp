#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "vcforge/numeral.hpp"

namespace vcforge {

// Extended simply typed lambda calculus. Nodes are immutable and shared;
// every operation below returns fresh structure where it rewrites and
// reuses subtrees where it does not. Quantifiers have no dedicated node:
// a universal is Const "forall" applied to an Abs, likewise "exists".

class Ty;
class Term;
class Pattern;
using TyPtr = std::shared_ptr<const Ty>;
using TermPtr = std::shared_ptr<const Term>;
using PatternPtr = std::shared_ptr<const Pattern>;

// --- types -----------------------------------------------------------------

struct TyVar {
  std::string name;
};
struct TyCon {
  std::string name;
  std::vector<TyPtr> args;
};
struct TyArrow {
  TyPtr dom, cod;
};
struct TyTuple {
  std::vector<TyPtr> elems;  // always two or more
};

class Ty {
public:
  using Node = std::variant<TyVar, TyCon, TyArrow, TyTuple>;
  explicit Ty(Node n) : node_(std::move(n)) {}
  const Node& node() const { return node_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }

private:
  Node node_;
};

TyPtr ty_var(std::string name);
TyPtr ty_con(std::string name, std::vector<TyPtr> args = {});
TyPtr ty_arrow(TyPtr dom, TyPtr cod);
TyPtr ty_tuple(std::vector<TyPtr> elems);

bool ty_equal(const TyPtr& a, const TyPtr& b);

// --- patterns -----------------------------------------------------------------

struct PVar {
  std::string name;
};
struct PWild {};
struct PCon {
  std::string ctor;
  std::vector<PatternPtr> args;
};
struct PTuple {
  std::vector<PatternPtr> elems;  // two or more
};
struct PAs {
  std::string name;
  PatternPtr inner;
};

class Pattern {
public:
  using Node = std::variant<PVar, PWild, PCon, PTuple, PAs>;
  explicit Pattern(Node n) : node_(std::move(n)) {}
  const Node& node() const { return node_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }

private:
  Node node_;
};

PatternPtr p_var(std::string name);
PatternPtr p_wild();
PatternPtr p_con(std::string ctor, std::vector<PatternPtr> args = {});
PatternPtr p_tuple(std::vector<PatternPtr> elems);
PatternPtr p_as(std::string name, PatternPtr inner);

// Binder names introduced by a pattern, in left-to-right traversal order.
std::vector<std::string> pattern_vars(const PatternPtr& p);
// A pattern is linear when no name is bound twice within it.
bool pattern_linear(const PatternPtr& p);

// --- terms ------------------------------------------------------------------

struct Var {
  std::string name;
};
struct Const {
  std::string name;  // possibly dot-qualified
};
struct App {
  TermPtr fn, arg;
};
struct Abs {
  std::string binder;
  TyPtr binder_ty;
  TermPtr body;
};
struct Let {
  std::string binder;
  TermPtr value, body;
};
struct CaseBranch {
  PatternPtr pat;
  TermPtr body;
};
struct Case {
  TermPtr scrutinee;
  std::vector<CaseBranch> branches;  // nonempty
};
struct Tuple {
  std::vector<TermPtr> elems;  // two or more
};
struct NumLit {
  Numeral value;
};
struct StrLit {
  std::string value;
};

class Term {
public:
  using Node = std::variant<Var, Const, App, Abs, Let, Case, Tuple, NumLit, StrLit>;
  explicit Term(Node n) : node_(std::move(n)) {}
  const Node& node() const { return node_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }

private:
  Node node_;
};

TermPtr mk_var(std::string name);
TermPtr mk_const(std::string name);
TermPtr mk_app(TermPtr fn, TermPtr arg);
TermPtr mk_abs(std::string binder, TyPtr ty, TermPtr body);
TermPtr mk_let(std::string binder, TermPtr value, TermPtr body);
TermPtr mk_case(TermPtr scrutinee, std::vector<CaseBranch> branches);
TermPtr mk_tuple(std::vector<TermPtr> elems);
TermPtr mk_num(Numeral value);
TermPtr mk_num(long long value);
TermPtr mk_str(std::string value);

// Application spine helpers: spine(App(App(f,a),b)) = (f, [a, b]).
std::pair<TermPtr, std::vector<TermPtr>> app_spine(const TermPtr& t);
TermPtr build_app(TermPtr head, const std::vector<TermPtr>& args);

// --- operations ------------------------------------------------------------

std::set<std::string> free_vars(const TermPtr& t);

// Capture-avoiding substitution of r for free occurrences of x in t.
// Binders in t are renamed (smallest unused positive integer suffix)
// exactly when they would capture a free variable of r.
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& r);

// Renames binders so all bound names are pairwise distinct and disjoint
// from reserved and from free_vars(t). Free variables are never renamed.
TermPtr deconflict(const TermPtr& t, const std::set<std::string>& reserved = {});

// Visits every atom occurrence (Var, Const, NumLit, StrLit) in
// deterministic pre-order. Binder names and patterns are not atoms.
void fold_atoms(const TermPtr& t, const std::function<void(const Term&)>& visit);

// Replaces every as-pattern by an equivalent Let binding the reconstructed
// fragment; wildcards under an as-binder are promoted to fresh pattern
// variables so the reconstruction is expressible. Expects a deconflicted
// term; throws MalformedPattern when a fragment cannot be rebuilt.
TermPtr eliminate_as_bindings(const TermPtr& t);

// Structural equality, binder names included.
bool term_equal(const TermPtr& a, const TermPtr& b);
bool pattern_equal(const PatternPtr& a, const PatternPtr& b);

// Canonical positional renaming of binders; alpha_equal compares the
// renamed trees structurally. Canonical names use '#', which cannot occur
// in source identifiers, so free variables can never collide with them.
TermPtr alpha_normalize(const TermPtr& t);
bool alpha_equal(const TermPtr& a, const TermPtr& b);

// Smallest candidate in base, base1, base2, ... not contained in used.
std::string fresh_name(const std::string& base, const std::set<std::string>& used);

// Every identifier appearing anywhere in t: variables, constants, binders,
// pattern variables. Used to seed fresh-name pools.
std::set<std::string> collect_names(const TermPtr& t);

size_t node_count(const TermPtr& t);

// Identifier grammar shared by the interchange format, rule files, and
// profile tables: dot-separated segments of [A-Za-z_][A-Za-z0-9_']*.
// Qualified names (with dots) are only legal where allow_qualified holds.
bool valid_identifier(const std::string& s, bool allow_qualified);

}  // namespace vcforge
