#include "vcforge/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <queue>

#include "vcforge/errors.hpp"
#include "vcforge/xml.hpp"

namespace vcforge {

const std::string& Declaration::name() const {
  return std::visit([](const auto& d) -> const std::string& { return d.name; }, node);
}

// --- builtin vocabulary ----------------------------------------------------

const std::set<std::string>& builtin_constants() {
  static const std::set<std::string> names = {
      // logic
      "forall", "exists", "and", "or", "not", "implies", "iff", "ite", "true", "false",
      // comparison
      "eq", "ne", "lt", "le", "gt", "ge",
      // integer arithmetic
      "Int.add", "Int.sub", "Int.mul", "Int.div", "Int.mod", "Int.neg", "Int.pow",
      "Int.min", "Int.max", "Int.abs",
      // naturals and conversions
      "Nat.of_int", "Int.int",
      // floating point
      "Float.add", "Float.sub", "Float.mul", "Float.div", "Float.neg", "Float.lt",
      "Float.le", "Float.eq", "Float.of_int", "Float.is_finite",
      // lists and sequences
      "List.cons", "List.nil", "List.length", "List.append", "List.mem", "List.get",
      "Seq.get", "Seq.length", "Seq.concat",
      // arrays
      "Array.get", "Array.set", "Array.length", "Array.make",
      // sets, maps, bags
      "Set.mem", "Set.add", "Set.union", "Set.inter", "Set.empty", "Map.get",
      "Map.set", "Map.domain", "Bag.count", "Bag.add", "Bag.union",
      // strings, trees, matrices
      "String.length", "String.concat", "String.sub", "Matrix.get", "Matrix.set",
      "Matrix.rows", "Matrix.cols",
      // memory encodings produced by C frontends
      "Memory.valid_rd", "Memory.valid_rw", "Memory.load", "Memory.store",
      "Memory.shift", "Memory.base_addr",
      // dump-side stdlib names the demo rule sets retarget
      "Why3.length", "Why3.mem", "Why3.get", "Why3.set", "Why3.abs", "Why3.old"};
  return names;
}

const std::map<std::string, size_t>& builtin_tycon_arities() {
  static const std::map<std::string, size_t> arities = {
      {"int", 0},   {"bool", 0},  {"nat", 0},    {"real", 0},  {"float", 0},
      {"string", 0}, {"unit", 0},  {"list", 1},   {"array", 1}, {"set", 1},
      {"bag", 1},   {"seq", 1},   {"matrix", 1}, {"map", 2},   {"memory", 0},
      {"pointer", 0}};
  return arities;
}

// --- identifier shapes ----------------------------------------------------------

namespace {

void check_ident(const XmlNode& n, const std::string& s, bool qualified) {
  if (!valid_identifier(s, qualified))
    throw SchemaError(n.loc, "<" + n.tag + ">: '" + s + "' is not a valid " +
                                 (qualified ? "qualified " : "") + "identifier");
}

bool parse_bool_attr(const XmlNode& n, const std::string& name) {
  const std::string& v = n.required_attr(name);
  if (v == "true") return true;
  if (v == "false") return false;
  throw SchemaError(n.loc, "<" + n.tag + "> attribute '" + name +
                               "' must be true or false, got '" + v + "'");
}

// --- XML -> AST -------------------------------------------------------------

bool is_pattern_tag(const std::string& t) {
  return t == "pvar" || t == "pwild" || t == "pcon" || t == "ptuple" || t == "pas";
}

TyPtr read_type(const XmlNode& n) {
  if (n.tag == "tyvar") {
    const auto& name = n.required_attr("name");
    check_ident(n, name, false);
    if (!n.children.empty()) throw SchemaError(n.loc, "<tyvar> takes no children");
    return ty_var(name);
  }
  if (n.tag == "tycon") {
    const auto& name = n.required_attr("name");
    check_ident(n, name, true);
    std::vector<TyPtr> args;
    for (const auto& c : n.children) args.push_back(read_type(c));
    return ty_con(name, std::move(args));
  }
  if (n.tag == "tyarrow") {
    if (n.children.size() != 2)
      throw SchemaError(n.loc, "<tyarrow> needs exactly two children");
    return ty_arrow(read_type(n.children[0]), read_type(n.children[1]));
  }
  if (n.tag == "tytuple") {
    if (n.children.size() < 2)
      throw SchemaError(n.loc, "<tytuple> needs at least two children");
    std::vector<TyPtr> elems;
    for (const auto& c : n.children) elems.push_back(read_type(c));
    return ty_tuple(std::move(elems));
  }
  throw SchemaError(n.loc, "expected a type element, got <" + n.tag + ">");
}

// Raw pattern reading; as-normalization happens at the branch level.
PatternPtr read_pattern(const XmlNode& n) {
  if (n.tag == "pvar") {
    const auto& name = n.required_attr("name");
    check_ident(n, name, false);
    return p_var(name);
  }
  if (n.tag == "pwild") {
    if (!n.children.empty()) throw SchemaError(n.loc, "<pwild> takes no children");
    return p_wild();
  }
  if (n.tag == "pcon") {
    const auto& name = n.required_attr("name");
    check_ident(n, name, true);
    std::vector<PatternPtr> args;
    for (const auto& c : n.children) args.push_back(read_pattern(c));
    return p_con(name, std::move(args));
  }
  if (n.tag == "ptuple") {
    if (n.children.size() < 2)
      throw SchemaError(n.loc, "<ptuple> needs at least two children");
    std::vector<PatternPtr> elems;
    for (const auto& c : n.children) elems.push_back(read_pattern(c));
    return p_tuple(std::move(elems));
  }
  if (n.tag == "pas") {
    const auto& name = n.required_attr("name");
    check_ident(n, name, false);
    if (n.children.size() != 1) throw SchemaError(n.loc, "<pas> needs exactly one child");
    return p_as(name, read_pattern(n.children[0]));
  }
  throw SchemaError(n.loc, "expected a pattern element, got <" + n.tag + ">");
}

// Degenerate as-binders are normalized away at ingest: PAs over a bare
// variable keeps the variable and Let-binds the as-name to it in the
// branch body; PAs over a wildcard becomes a plain variable.
PatternPtr normalize_pattern(const PatternPtr& p,
                             std::vector<std::pair<std::string, std::string>>& wraps) {
  if (const auto* as = p->as<PAs>()) {
    auto inner = normalize_pattern(as->inner, wraps);
    if (const auto* v = inner->as<PVar>()) {
      wraps.emplace_back(as->name, v->name);
      return inner;
    }
    if (inner->as<PWild>()) return p_var(as->name);
    return p_as(as->name, inner);
  }
  if (const auto* c = p->as<PCon>()) {
    std::vector<PatternPtr> args;
    args.reserve(c->args.size());
    for (const auto& a : c->args) args.push_back(normalize_pattern(a, wraps));
    return p_con(c->ctor, std::move(args));
  }
  if (const auto* t = p->as<PTuple>()) {
    std::vector<PatternPtr> elems;
    elems.reserve(t->elems.size());
    for (const auto& e : t->elems) elems.push_back(normalize_pattern(e, wraps));
    return p_tuple(std::move(elems));
  }
  return p;
}

TermPtr read_term(const XmlNode& n) {
  if (n.tag == "var") {
    const auto& name = n.required_attr("name");
    check_ident(n, name, false);
    return mk_var(name);
  }
  if (n.tag == "const") {
    const auto& name = n.required_attr("name");
    check_ident(n, name, true);
    return mk_const(name);
  }
  if (n.tag == "app") {
    if (n.children.size() != 2)
      throw SchemaError(n.loc, "<app> needs exactly two children");
    return mk_app(read_term(n.children[0]), read_term(n.children[1]));
  }
  if (n.tag == "abs") {
    const auto& name = n.required_attr("name");
    check_ident(n, name, false);
    if (n.children.size() != 2)
      throw SchemaError(n.loc, "<abs> needs a type child and a body child");
    return mk_abs(name, read_type(n.children[0]), read_term(n.children[1]));
  }
  if (n.tag == "let") {
    const auto& name = n.required_attr("name");
    check_ident(n, name, false);
    if (n.children.size() != 2)
      throw SchemaError(n.loc, "<let> needs a value child and a body child");
    return mk_let(name, read_term(n.children[0]), read_term(n.children[1]));
  }
  if (n.tag == "case") {
    if (n.children.size() < 3 || n.children.size() % 2 == 0)
      throw SchemaError(n.loc,
                        "<case> needs a scrutinee followed by pattern/body pairs");
    auto scrut = read_term(n.children[0]);
    std::vector<CaseBranch> branches;
    for (size_t i = 1; i < n.children.size(); i += 2) {
      if (!is_pattern_tag(n.children[i].tag))
        throw SchemaError(n.children[i].loc, "expected a pattern element, got <" +
                                                 n.children[i].tag + ">");
      auto raw = read_pattern(n.children[i]);
      if (!pattern_linear(raw))
        throw ValidationError("nonlinear pattern: a name is bound twice");
      std::vector<std::pair<std::string, std::string>> wraps;
      auto pat = normalize_pattern(raw, wraps);
      auto body = read_term(n.children[i + 1]);
      for (const auto& [as_name, var_name] : wraps)
        body = mk_let(as_name, mk_var(var_name), body);
      branches.push_back({pat, body});
    }
    return mk_case(scrut, std::move(branches));
  }
  if (n.tag == "tuple") {
    if (n.children.size() < 2)
      throw SchemaError(n.loc, "<tuple> needs at least two children");
    std::vector<TermPtr> elems;
    for (const auto& c : n.children) elems.push_back(read_term(c));
    return mk_tuple(std::move(elems));
  }
  if (n.tag == "num") {
    try {
      return mk_num(Numeral::parse(n.required_attr("value")));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(n.loc, e.what());
    }
  }
  if (n.tag == "str") {
    return mk_str(n.required_attr("value"));
  }
  throw SchemaError(n.loc, "expected a term element, got <" + n.tag + ">");
}

std::vector<std::string> read_ty_params(const XmlNode& n, size_t& i) {
  std::vector<std::string> out;
  while (i < n.children.size() && n.children[i].tag == "typaram") {
    const auto& tp = n.children[i];
    const auto& name = tp.required_attr("name");
    check_ident(tp, name, false);
    out.push_back(name);
    ++i;
  }
  return out;
}

Declaration read_declaration(const XmlNode& n) {
  if (n.tag == "datatype") {
    Datatype d;
    d.name = n.required_attr("name");
    check_ident(n, d.name, true);
    size_t i = 0;
    d.ty_params = read_ty_params(n, i);
    for (; i < n.children.size(); ++i) {
      const auto& c = n.children[i];
      if (c.tag != "constructor")
        throw SchemaError(c.loc, "expected <constructor>, got <" + c.tag + ">");
      DatatypeCtor ctor;
      ctor.name = c.required_attr("name");
      check_ident(c, ctor.name, true);
      for (const auto& a : c.children) ctor.args.push_back(read_type(a));
      d.constructors.push_back(std::move(ctor));
    }
    if (d.constructors.empty())
      throw SchemaError(n.loc, "<datatype> needs at least one constructor");
    return Declaration{std::move(d)};
  }
  if (n.tag == "fundef") {
    FunDef f;
    f.name = n.required_attr("name");
    check_ident(n, f.name, true);
    f.recursive = parse_bool_attr(n, "recursive");
    f.termination_trusted = parse_bool_attr(n, "termination_trusted");
    size_t i = 0;
    f.ty_params = read_ty_params(n, i);
    while (i < n.children.size() && n.children[i].tag == "param") {
      const auto& p = n.children[i];
      const auto& pname = p.required_attr("name");
      check_ident(p, pname, false);
      if (p.children.size() != 1)
        throw SchemaError(p.loc, "<param> needs exactly one type child");
      f.params.emplace_back(pname, read_type(p.children[0]));
      ++i;
    }
    if (i >= n.children.size() || n.children[i].tag != "ret")
      throw SchemaError(n.loc, "<fundef> needs a <ret> element after its params");
    if (n.children[i].children.size() != 1)
      throw SchemaError(n.children[i].loc, "<ret> needs exactly one type child");
    f.ret = read_type(n.children[i].children[0]);
    ++i;
    if (i >= n.children.size() || n.children[i].tag != "body")
      throw SchemaError(n.loc, "<fundef> needs a <body> element after <ret>");
    if (n.children[i].children.size() != 1)
      throw SchemaError(n.children[i].loc, "<body> needs exactly one term child");
    f.body = read_term(n.children[i].children[0]);
    ++i;
    if (i != n.children.size())
      throw SchemaError(n.children[i].loc, "unexpected element after <body>");
    return Declaration{std::move(f)};
  }
  if (n.tag == "axiom" || n.tag == "goal") {
    const auto& name = n.required_attr("name");
    check_ident(n, name, true);
    if (n.children.size() != 1)
      throw SchemaError(n.loc, "<" + n.tag + "> needs exactly one term child");
    auto stmt = read_term(n.children[0]);
    if (n.tag == "axiom") return Declaration{Axiom{name, stmt}};
    return Declaration{Goal{name, stmt}};
  }
  throw SchemaError(n.loc, "expected a declaration element, got <" + n.tag + ">");
}

Theory read_theory(const XmlNode& n) {
  if (n.tag != "theory")
    throw SchemaError(n.loc, "expected <theory>, got <" + n.tag + ">");
  Theory t;
  t.name = n.required_attr("name");
  check_ident(n, t.name, true);
  size_t i = 0;
  while (i < n.children.size() && n.children[i].tag == "import") {
    const auto& imp = n.children[i];
    const auto& name = imp.required_attr("name");
    check_ident(imp, name, true);
    t.imports.push_back(name);
    ++i;
  }
  for (; i < n.children.size(); ++i) {
    if (n.children[i].tag == "import")
      throw SchemaError(n.children[i].loc,
                        "<import> elements must precede all declarations");
    t.decls.push_back(read_declaration(n.children[i]));
  }
  return t;
}

// --- type walking -------------------------------------------------------------

void walk_type(const TyPtr& t, const std::function<void(const Ty&)>& fn) {
  fn(*t);
  if (const auto* c = t->as<TyCon>())
    for (const auto& a : c->args) walk_type(a, fn);
  if (const auto* a = t->as<TyArrow>()) {
    walk_type(a->dom, fn);
    walk_type(a->cod, fn);
  }
  if (const auto* tt = t->as<TyTuple>())
    for (const auto& e : tt->elems) walk_type(e, fn);
}

void walk_term_types(const TermPtr& t, const std::function<void(const Ty&)>& fn) {
  if (const auto* a = t->as<App>()) {
    walk_term_types(a->fn, fn);
    walk_term_types(a->arg, fn);
  } else if (const auto* ab = t->as<Abs>()) {
    walk_type(ab->binder_ty, fn);
    walk_term_types(ab->body, fn);
  } else if (const auto* l = t->as<Let>()) {
    walk_term_types(l->value, fn);
    walk_term_types(l->body, fn);
  } else if (const auto* c = t->as<Case>()) {
    walk_term_types(c->scrutinee, fn);
    for (const auto& br : c->branches) walk_term_types(br.body, fn);
  } else if (const auto* tp = t->as<Tuple>()) {
    for (const auto& e : tp->elems) walk_term_types(e, fn);
  }
}

void walk_pattern_ctors(const PatternPtr& p, const std::function<void(const std::string&)>& fn) {
  if (const auto* c = p->as<PCon>()) {
    fn(c->ctor);
    for (const auto& a : c->args) walk_pattern_ctors(a, fn);
  } else if (const auto* t = p->as<PTuple>()) {
    for (const auto& e : t->elems) walk_pattern_ctors(e, fn);
  } else if (const auto* as = p->as<PAs>()) {
    walk_pattern_ctors(as->inner, fn);
  }
}

void walk_term_consts_and_ctors(const TermPtr& t,
                                const std::function<void(const std::string&)>& fn) {
  fold_atoms(t, [&](const Term& atom) {
    if (const auto* c = atom.as<Const>()) fn(c->name);
  });
  std::function<void(const TermPtr&)> walk = [&](const TermPtr& u) {
    if (const auto* a = u->as<App>()) {
      walk(a->fn);
      walk(a->arg);
    } else if (const auto* ab = u->as<Abs>()) {
      walk(ab->body);
    } else if (const auto* l = u->as<Let>()) {
      walk(l->value);
      walk(l->body);
    } else if (const auto* c = u->as<Case>()) {
      walk(c->scrutinee);
      for (const auto& br : c->branches) {
        walk_pattern_ctors(br.pat, fn);
        walk(br.body);
      }
    } else if (const auto* tp = u->as<Tuple>()) {
      for (const auto& e : tp->elems) walk(e);
    }
  };
  walk(t);
}

}  // namespace

// --- public helpers -----------------------------------------------------------

NameIndex build_name_index(const Corpus& c) {
  NameIndex idx;
  for (size_t ti = 0; ti < c.theories.size(); ++ti) {
    const auto& th = c.theories[ti];
    for (size_t di = 0; di < th.decls.size(); ++di) {
      const auto& d = th.decls[di];
      if (const auto* dt = std::get_if<Datatype>(&d.node)) {
        idx.insert({dt->name, {NameKind::DatatypeName, ti, di}});
        for (const auto& ctor : dt->constructors)
          idx.insert({ctor.name, {NameKind::Constructor, ti, di}});
      } else if (std::get_if<FunDef>(&d.node)) {
        idx.insert({d.name(), {NameKind::Function, ti, di}});
      } else if (std::get_if<Axiom>(&d.node)) {
        idx.insert({d.name(), {NameKind::AxiomName, ti, di}});
      } else {
        idx.insert({d.name(), {NameKind::GoalName, ti, di}});
      }
    }
  }
  return idx;
}

std::set<size_t> visible_theories(const Corpus& c, size_t theory) {
  std::map<std::string, size_t> by_name;
  for (size_t i = 0; i < c.theories.size(); ++i) by_name[c.theories[i].name] = i;
  std::set<size_t> seen;
  std::queue<size_t> work;
  work.push(theory);
  seen.insert(theory);
  while (!work.empty()) {
    size_t cur = work.front();
    work.pop();
    for (const auto& imp : c.theories[cur].imports) {
      auto it = by_name.find(imp);
      if (it == by_name.end()) continue;  // unresolved imports caught elsewhere
      if (seen.insert(it->second).second) work.push(it->second);
    }
  }
  return seen;
}

std::vector<size_t> topo_order(const Corpus& c) {
  std::map<std::string, size_t> by_name;
  for (size_t i = 0; i < c.theories.size(); ++i) by_name[c.theories[i].name] = i;

  std::vector<std::set<size_t>> deps(c.theories.size());
  std::vector<std::vector<size_t>> dependents(c.theories.size());
  for (size_t i = 0; i < c.theories.size(); ++i) {
    for (const auto& imp : c.theories[i].imports) {
      auto it = by_name.find(imp);
      if (it == by_name.end() || it->second == i) continue;
      if (deps[i].insert(it->second).second) dependents[it->second].push_back(i);
    }
  }

  // Kahn's algorithm; the ready set is keyed by theory name so ties break
  // ascending by name.
  std::set<std::pair<std::string, size_t>> ready;
  std::vector<size_t> remaining(c.theories.size());
  for (size_t i = 0; i < c.theories.size(); ++i) {
    remaining[i] = deps[i].size();
    if (remaining[i] == 0) ready.insert({c.theories[i].name, i});
  }
  std::vector<size_t> order;
  while (!ready.empty()) {
    auto [name, i] = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(i);
    for (size_t d : dependents[i]) {
      if (--remaining[d] == 0) ready.insert({c.theories[d].name, d});
    }
  }
  if (order.size() == c.theories.size()) return order;

  // A cycle remains. Walk imports from the lexicographically smallest
  // stuck theory until a repeat shows up.
  std::set<size_t> stuck;
  for (size_t i = 0; i < c.theories.size(); ++i)
    if (remaining[i] > 0) stuck.insert(i);
  size_t start = *std::min_element(stuck.begin(), stuck.end(), [&](size_t a, size_t b) {
    return c.theories[a].name < c.theories[b].name;
  });
  std::vector<size_t> path;
  std::set<size_t> on_path;
  size_t cur = start;
  while (!on_path.count(cur)) {
    path.push_back(cur);
    on_path.insert(cur);
    size_t next = cur;
    for (size_t d : deps[cur]) {
      if (stuck.count(d)) {
        next = d;
        break;
      }
    }
    cur = next;
  }
  std::vector<std::string> cycle;
  bool in_cycle = false;
  for (size_t i : path) {
    if (i == cur) in_cycle = true;
    if (in_cycle) cycle.push_back(c.theories[i].name);
  }
  throw CycleError(std::move(cycle));
}

bool detect_non_uniform(const Datatype& d) {
  bool found = false;
  std::function<void(const TyPtr&)> walk = [&](const TyPtr& t) {
    if (const auto* c = t->as<TyCon>()) {
      if (c->name == d.name) {
        bool uniform = c->args.size() == d.ty_params.size();
        if (uniform) {
          for (size_t i = 0; i < c->args.size(); ++i) {
            const auto* v = c->args[i]->as<TyVar>();
            if (!v || v->name != d.ty_params[i]) {
              uniform = false;
              break;
            }
          }
        }
        if (!uniform) found = true;
      }
      for (const auto& a : c->args) walk(a);
    } else if (const auto* a = t->as<TyArrow>()) {
      walk(a->dom);
      walk(a->cod);
    } else if (const auto* tt = t->as<TyTuple>()) {
      for (const auto& e : tt->elems) walk(e);
    }
  };
  for (const auto& ctor : d.constructors)
    for (const auto& arg : ctor.args) walk(arg);
  return found;
}

// --- validation -----------------------------------------------------------------

namespace {

struct Validator {
  const Corpus& corpus;
  const ParseOptions& opts;
  std::vector<std::string>& warnings;

  std::set<std::string> known_consts;           // builtins + extra
  std::map<std::string, size_t> tycon_arities;  // builtin + declared + inferred

  Validator(const Corpus& c, const ParseOptions& o, std::vector<std::string>& w)
      : corpus(c), opts(o), warnings(w) {
    known_consts = builtin_constants();
    known_consts.insert(opts.extra_builtins.begin(), opts.extra_builtins.end());
    tycon_arities = builtin_tycon_arities();
  }

  void problem(const std::string& msg) {
    if (opts.strict_unknowns)
      throw ValidationError(msg);
    warnings.push_back(msg);
  }

  void check_tycon_use(const std::string& context, const std::string& name, size_t arity,
                       const std::set<std::string>& visible_tycons) {
    auto it = tycon_arities.find(name);
    if (it == tycon_arities.end()) {
      problem(context + ": unknown type constructor '" + name + "'");
      tycon_arities.emplace(name, arity);  // keep later uses consistent
      return;
    }
    if (it->second != arity)
      throw ValidationError(context + ": type constructor '" + name + "' used with " +
                            std::to_string(arity) + " arguments but fixed at " +
                            std::to_string(it->second));
    if (!builtin_tycon_arities().count(name) && !visible_tycons.count(name))
      problem(context + ": type constructor '" + name + "' is not visible here");
  }

  void check_type(const std::string& context, const TyPtr& t,
                  const std::set<std::string>* allowed_tyvars,
                  const std::set<std::string>& visible_tycons) {
    walk_type(t, [&](const Ty& node) {
      if (const auto* v = node.as<TyVar>()) {
        if (allowed_tyvars && !allowed_tyvars->count(v->name))
          throw ValidationError(context + ": type variable '" + v->name +
                                "' is not a declared type parameter");
      } else if (const auto* c = node.as<TyCon>()) {
        check_tycon_use(context, c->name, c->args.size(), visible_tycons);
      }
    });
  }

  void check_term_types(const std::string& context, const TermPtr& t,
                        const std::set<std::string>& visible_tycons) {
    walk_term_types(t, [&](const Ty& node) {
      if (const auto* c = node.as<TyCon>())
        check_tycon_use(context, c->name, c->args.size(), visible_tycons);
    });
  }

  void check_consts(const std::string& context, const TermPtr& t,
                    const std::set<std::string>& scope) {
    walk_term_consts_and_ctors(t, [&](const std::string& name) {
      if (!scope.count(name) && !known_consts.count(name))
        problem(context + ": unresolved constant '" + name + "'");
    });
  }

  void check_patterns_wellformed(const std::string& context, const TermPtr& t) {
    std::function<void(const TermPtr&)> walk = [&](const TermPtr& u) {
      if (const auto* a = u->as<App>()) {
        walk(a->fn);
        walk(a->arg);
      } else if (const auto* ab = u->as<Abs>()) {
        walk(ab->body);
      } else if (const auto* l = u->as<Let>()) {
        walk(l->value);
        walk(l->body);
      } else if (const auto* c = u->as<Case>()) {
        walk(c->scrutinee);
        for (const auto& br : c->branches) {
          if (!pattern_linear(br.pat))
            throw ValidationError(context + ": nonlinear pattern");
          walk(br.body);
        }
      } else if (const auto* tp = u->as<Tuple>()) {
        for (const auto& e : tp->elems) walk(e);
      }
    };
    walk(t);
  }

  void run() {
    // theory name uniqueness
    std::set<std::string> theory_names;
    for (const auto& th : corpus.theories)
      if (!theory_names.insert(th.name).second)
        throw ValidationError("duplicate theory name '" + th.name + "'");

    // import resolvability
    for (const auto& th : corpus.theories)
      for (const auto& imp : th.imports) {
        if (imp == th.name)
          throw ValidationError("theory '" + th.name + "' imports itself");
        if (!theory_names.count(imp))
          problem("theory '" + th.name + "' imports unknown theory '" + imp + "'");
      }

    topo_order(corpus);  // raises CycleError on cyclic imports

    // declared datatype arities, corpus-wide, before any type checking
    for (const auto& th : corpus.theories)
      for (const auto& d : th.decls)
        if (const auto* dt = std::get_if<Datatype>(&d.node)) {
          auto [it, fresh] = tycon_arities.emplace(dt->name, dt->ty_params.size());
          if (!fresh && it->second != dt->ty_params.size())
            throw ValidationError("datatype '" + dt->name +
                                  "' redeclared with a different arity");
        }

    for (size_t ti = 0; ti < corpus.theories.size(); ++ti) validate_theory(ti);
  }

  void validate_theory(size_t ti) {
    const Theory& th = corpus.theories[ti];

    std::set<std::string> imported_consts, imported_tycons;
    for (size_t vi : visible_theories(corpus, ti)) {
      if (vi == ti) continue;
      for (const auto& d : corpus.theories[vi].decls) {
        if (const auto* dt = std::get_if<Datatype>(&d.node)) {
          imported_tycons.insert(dt->name);
          for (const auto& ctor : dt->constructors) imported_consts.insert(ctor.name);
        } else if (std::get_if<FunDef>(&d.node)) {
          imported_consts.insert(d.name());
        }
      }
    }

    // uniqueness of declared names within the theory (constructors included)
    std::set<std::string> declared;
    auto declare = [&](const std::string& n) {
      if (!declared.insert(n).second)
        throw ValidationError("theory '" + th.name + "': duplicate declaration name '" +
                              n + "'");
    };

    std::set<std::string> running_consts = imported_consts;
    std::set<std::string> running_tycons = imported_tycons;
    std::set<std::string> all_consts = imported_consts;
    std::set<std::string> all_tycons = imported_tycons;
    for (const auto& d : th.decls) {
      if (const auto* dt = std::get_if<Datatype>(&d.node)) {
        all_tycons.insert(dt->name);
        for (const auto& ctor : dt->constructors) all_consts.insert(ctor.name);
      } else if (std::get_if<FunDef>(&d.node)) {
        all_consts.insert(d.name());
      }
    }

    for (const auto& d : th.decls) {
      std::string context = "theory '" + th.name + "', declaration '" + d.name() + "'";
      if (const auto* dt = std::get_if<Datatype>(&d.node)) {
        declare(dt->name);
        std::set<std::string> typarams(dt->ty_params.begin(), dt->ty_params.end());
        if (typarams.size() != dt->ty_params.size())
          throw ValidationError(context + ": duplicate type parameter");
        auto visible = running_tycons;
        visible.insert(dt->name);  // recursive datatypes
        for (const auto& ctor : dt->constructors) {
          declare(ctor.name);
          for (const auto& arg : ctor.args)
            check_type(context, arg, &typarams, visible);
        }
        running_tycons.insert(dt->name);
        for (const auto& ctor : dt->constructors) running_consts.insert(ctor.name);
      } else if (const auto* f = std::get_if<FunDef>(&d.node)) {
        declare(f->name);
        std::set<std::string> typarams(f->ty_params.begin(), f->ty_params.end());
        std::set<std::string> param_names;
        for (const auto& [pname, pty] : f->params) {
          if (!param_names.insert(pname).second)
            throw ValidationError(context + ": duplicate parameter '" + pname + "'");
          check_type(context, pty, &typarams, running_tycons);
        }
        check_type(context, f->ret, &typarams, running_tycons);

        for (const auto& fv : free_vars(f->body))
          if (!param_names.count(fv))
            throw ValidationError(context + ": body has free variable '" + fv +
                                  "' outside the parameter list");

        auto scope = running_consts;
        if (f->recursive) {
          scope.insert(f->name);
        } else {
          bool self = false;
          walk_term_consts_and_ctors(f->body, [&](const std::string& n) {
            if (n == f->name) self = true;
          });
          if (self)
            throw ValidationError(context +
                                  ": body references itself but recursive=\"false\"");
        }
        check_consts(context, f->body, scope);
        check_term_types(context, f->body, running_tycons);
        check_patterns_wellformed(context, f->body);
        running_consts.insert(f->name);
      } else if (const auto* a = std::get_if<Axiom>(&d.node)) {
        declare(a->name);
        validate_statement(context, a->statement, all_consts, all_tycons);
      } else {
        const auto* g = std::get_if<Goal>(&d.node);
        declare(g->name);
        validate_statement(context, g->statement, all_consts, all_tycons);
      }
    }
  }

  // Axioms and goals: closed statements resolved against the whole theory.
  void validate_statement(const std::string& context, const TermPtr& stmt,
                          const std::set<std::string>& consts,
                          const std::set<std::string>& tycons) {
    auto fvs = free_vars(stmt);
    if (!fvs.empty())
      throw ValidationError(context + ": statement has free variable '" + *fvs.begin() +
                            "'");
    check_consts(context, stmt, consts);
    check_term_types(context, stmt, tycons);
    check_patterns_wellformed(context, stmt);
  }
};

}  // namespace

ParseResult parse_corpus(const std::string& xml_text, const ParseOptions& opts) {
  XmlNode root = parse_xml(xml_text);
  if (root.tag != "corpus")
    throw SchemaError(root.loc, "root element must be <corpus>, got <" + root.tag + ">");
  ParseResult result;
  for (const auto& c : root.children) result.corpus.theories.push_back(read_theory(c));
  Validator v(result.corpus, opts, result.warnings);
  v.run();
  return result;
}

// --- serialization ---------------------------------------------------------------

namespace {

XmlNode type_node(const TyPtr& t);
XmlNode pattern_node(const PatternPtr& p);
XmlNode term_node(const TermPtr& t);

XmlNode type_node(const TyPtr& t) {
  XmlNode n;
  if (const auto* v = t->as<TyVar>()) {
    n.tag = "tyvar";
    n.attrs.emplace_back("name", v->name);
  } else if (const auto* c = t->as<TyCon>()) {
    n.tag = "tycon";
    n.attrs.emplace_back("name", c->name);
    for (const auto& a : c->args) n.children.push_back(type_node(a));
  } else if (const auto* a = t->as<TyArrow>()) {
    n.tag = "tyarrow";
    n.children.push_back(type_node(a->dom));
    n.children.push_back(type_node(a->cod));
  } else {
    n.tag = "tytuple";
    for (const auto& e : t->as<TyTuple>()->elems) n.children.push_back(type_node(e));
  }
  return n;
}

XmlNode pattern_node(const PatternPtr& p) {
  XmlNode n;
  if (const auto* v = p->as<PVar>()) {
    n.tag = "pvar";
    n.attrs.emplace_back("name", v->name);
  } else if (p->as<PWild>()) {
    n.tag = "pwild";
  } else if (const auto* c = p->as<PCon>()) {
    n.tag = "pcon";
    n.attrs.emplace_back("name", c->ctor);
    for (const auto& a : c->args) n.children.push_back(pattern_node(a));
  } else if (const auto* t = p->as<PTuple>()) {
    n.tag = "ptuple";
    for (const auto& e : t->elems) n.children.push_back(pattern_node(e));
  } else {
    const auto* as = p->as<PAs>();
    n.tag = "pas";
    n.attrs.emplace_back("name", as->name);
    n.children.push_back(pattern_node(as->inner));
  }
  return n;
}

XmlNode term_node(const TermPtr& t) {
  XmlNode n;
  if (const auto* v = t->as<Var>()) {
    n.tag = "var";
    n.attrs.emplace_back("name", v->name);
  } else if (const auto* c = t->as<Const>()) {
    n.tag = "const";
    n.attrs.emplace_back("name", c->name);
  } else if (const auto* a = t->as<App>()) {
    n.tag = "app";
    n.children.push_back(term_node(a->fn));
    n.children.push_back(term_node(a->arg));
  } else if (const auto* ab = t->as<Abs>()) {
    n.tag = "abs";
    n.attrs.emplace_back("name", ab->binder);
    n.children.push_back(type_node(ab->binder_ty));
    n.children.push_back(term_node(ab->body));
  } else if (const auto* l = t->as<Let>()) {
    n.tag = "let";
    n.attrs.emplace_back("name", l->binder);
    n.children.push_back(term_node(l->value));
    n.children.push_back(term_node(l->body));
  } else if (const auto* c2 = t->as<Case>()) {
    n.tag = "case";
    n.children.push_back(term_node(c2->scrutinee));
    for (const auto& br : c2->branches) {
      n.children.push_back(pattern_node(br.pat));
      n.children.push_back(term_node(br.body));
    }
  } else if (const auto* tp = t->as<Tuple>()) {
    n.tag = "tuple";
    for (const auto& e : tp->elems) n.children.push_back(term_node(e));
  } else if (const auto* num = t->as<NumLit>()) {
    n.tag = "num";
    n.attrs.emplace_back("value", num->value.str());
  } else {
    n.tag = "str";
    n.attrs.emplace_back("value", t->as<StrLit>()->value);
  }
  return n;
}

}  // namespace

std::string corpus_to_xml(const Corpus& c) {
  XmlNode root;
  root.tag = "corpus";
  for (const auto& th : c.theories) {
    XmlNode tn;
    tn.tag = "theory";
    tn.attrs.emplace_back("name", th.name);
    for (const auto& imp : th.imports) {
      XmlNode in;
      in.tag = "import";
      in.attrs.emplace_back("name", imp);
      tn.children.push_back(std::move(in));
    }
    for (const auto& d : th.decls) {
      if (const auto* dt = std::get_if<Datatype>(&d.node)) {
        XmlNode dn;
        dn.tag = "datatype";
        dn.attrs.emplace_back("name", dt->name);
        for (const auto& tp : dt->ty_params) {
          XmlNode pn;
          pn.tag = "typaram";
          pn.attrs.emplace_back("name", tp);
          dn.children.push_back(std::move(pn));
        }
        for (const auto& ctor : dt->constructors) {
          XmlNode cn;
          cn.tag = "constructor";
          cn.attrs.emplace_back("name", ctor.name);
          for (const auto& a : ctor.args) cn.children.push_back(type_node(a));
          dn.children.push_back(std::move(cn));
        }
        tn.children.push_back(std::move(dn));
      } else if (const auto* f = std::get_if<FunDef>(&d.node)) {
        XmlNode fn;
        fn.tag = "fundef";
        fn.attrs.emplace_back("name", f->name);
        fn.attrs.emplace_back("recursive", f->recursive ? "true" : "false");
        fn.attrs.emplace_back("termination_trusted",
                              f->termination_trusted ? "true" : "false");
        for (const auto& tp : f->ty_params) {
          XmlNode pn;
          pn.tag = "typaram";
          pn.attrs.emplace_back("name", tp);
          fn.children.push_back(std::move(pn));
        }
        for (const auto& [pname, pty] : f->params) {
          XmlNode pn;
          pn.tag = "param";
          pn.attrs.emplace_back("name", pname);
          pn.children.push_back(type_node(pty));
          fn.children.push_back(std::move(pn));
        }
        XmlNode rn;
        rn.tag = "ret";
        rn.children.push_back(type_node(f->ret));
        fn.children.push_back(std::move(rn));
        XmlNode bn;
        bn.tag = "body";
        bn.children.push_back(term_node(f->body));
        fn.children.push_back(std::move(bn));
        tn.children.push_back(std::move(fn));
      } else if (const auto* a = std::get_if<Axiom>(&d.node)) {
        XmlNode an;
        an.tag = "axiom";
        an.attrs.emplace_back("name", a->name);
        an.children.push_back(term_node(a->statement));
        tn.children.push_back(std::move(an));
      } else {
        const auto* g = std::get_if<Goal>(&d.node);
        XmlNode gn;
        gn.tag = "goal";
        gn.attrs.emplace_back("name", g->name);
        gn.children.push_back(term_node(g->statement));
        tn.children.push_back(std::move(gn));
      }
    }
    root.children.push_back(std::move(tn));
  }
  return write_xml(root);
}

// --- dependency closure ------------------------------------------------------------

std::set<std::string> goal_dependency_names(const Corpus& c, size_t theory,
                                            const Goal& goal) {
  auto idx = build_name_index(c);
  auto visible = visible_theories(c, theory);

  auto resolve = [&](const std::string& name) -> const NameEntry* {
    auto [lo, hi] = idx.equal_range(name);
    for (auto it = lo; it != hi; ++it)
      if (visible.count(it->second.theory)) return &it->second;
    return nullptr;
  };

  std::set<std::string> seen;
  std::set<std::string> closure;
  std::queue<std::string> work;

  auto push_name = [&](const std::string& n) {
    if (seen.insert(n).second) work.push(n);
  };
  auto scan_term = [&](const TermPtr& t) {
    walk_term_consts_and_ctors(t, push_name);
    walk_term_types(t, [&](const Ty& node) {
      if (const auto* tc = node.as<TyCon>()) push_name(tc->name);
    });
  };
  auto scan_type = [&](const TyPtr& t) {
    walk_type(t, [&](const Ty& node) {
      if (const auto* tc = node.as<TyCon>()) push_name(tc->name);
    });
  };

  scan_term(goal.statement);
  while (!work.empty()) {
    std::string name = work.front();
    work.pop();
    const NameEntry* e = resolve(name);
    if (!e) continue;  // builtin or unresolved
    closure.insert(name);
    const Declaration& d = c.theories[e->theory].decls[e->decl];
    if (const auto* dt = std::get_if<Datatype>(&d.node)) {
      push_name(dt->name);
      for (const auto& ctor : dt->constructors) {
        push_name(ctor.name);
        for (const auto& arg : ctor.args) scan_type(arg);
      }
    } else if (const auto* f = std::get_if<FunDef>(&d.node)) {
      for (const auto& [pname, pty] : f->params) {
        (void)pname;
        scan_type(pty);
      }
      scan_type(f->ret);
      scan_term(f->body);
    }
  }
  return closure;
}

std::set<std::string> non_uniform_dependencies(const Corpus& c, size_t theory,
                                               const Goal& goal) {
  auto deps = goal_dependency_names(c, theory, goal);
  auto idx = build_name_index(c);
  auto visible = visible_theories(c, theory);
  std::set<std::string> out;
  for (const auto& name : deps) {
    auto [lo, hi] = idx.equal_range(name);
    for (auto it = lo; it != hi; ++it) {
      if (!visible.count(it->second.theory)) continue;
      if (it->second.kind != NameKind::DatatypeName) continue;
      const auto& d = c.theories[it->second.theory].decls[it->second.decl];
      const auto* dt = std::get_if<Datatype>(&d.node);
      if (dt && detect_non_uniform(*dt)) out.insert(dt->name);
    }
  }
  return out;
}

}  // namespace vcforge
