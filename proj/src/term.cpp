#include "vcforge/term.hpp"
#include <cctype>

#include <algorithm>
#include <cassert>
#include <map>

#include "vcforge/errors.hpp"

namespace vcforge {

// --- constructors --------------------------------------------------------

TyPtr ty_var(std::string name) { return std::make_shared<Ty>(TyVar{std::move(name)}); }
TyPtr ty_con(std::string name, std::vector<TyPtr> args) {
  return std::make_shared<Ty>(TyCon{std::move(name), std::move(args)});
}
TyPtr ty_arrow(TyPtr dom, TyPtr cod) {
  return std::make_shared<Ty>(TyArrow{std::move(dom), std::move(cod)});
}
TyPtr ty_tuple(std::vector<TyPtr> elems) {
  assert(elems.size() >= 2);
  return std::make_shared<Ty>(TyTuple{std::move(elems)});
}

PatternPtr p_var(std::string name) { return std::make_shared<Pattern>(PVar{std::move(name)}); }
PatternPtr p_wild() { return std::make_shared<Pattern>(PWild{}); }
PatternPtr p_con(std::string ctor, std::vector<PatternPtr> args) {
  return std::make_shared<Pattern>(PCon{std::move(ctor), std::move(args)});
}
PatternPtr p_tuple(std::vector<PatternPtr> elems) {
  assert(elems.size() >= 2);
  return std::make_shared<Pattern>(PTuple{std::move(elems)});
}
PatternPtr p_as(std::string name, PatternPtr inner) {
  return std::make_shared<Pattern>(PAs{std::move(name), std::move(inner)});
}

TermPtr mk_var(std::string name) { return std::make_shared<Term>(Var{std::move(name)}); }
TermPtr mk_const(std::string name) { return std::make_shared<Term>(Const{std::move(name)}); }
TermPtr mk_app(TermPtr fn, TermPtr arg) {
  return std::make_shared<Term>(App{std::move(fn), std::move(arg)});
}
TermPtr mk_abs(std::string binder, TyPtr ty, TermPtr body) {
  return std::make_shared<Term>(Abs{std::move(binder), std::move(ty), std::move(body)});
}
TermPtr mk_let(std::string binder, TermPtr value, TermPtr body) {
  return std::make_shared<Term>(Let{std::move(binder), std::move(value), std::move(body)});
}
TermPtr mk_case(TermPtr scrutinee, std::vector<CaseBranch> branches) {
  assert(!branches.empty());
  return std::make_shared<Term>(Case{std::move(scrutinee), std::move(branches)});
}
TermPtr mk_tuple(std::vector<TermPtr> elems) {
  assert(elems.size() >= 2);
  return std::make_shared<Term>(Tuple{std::move(elems)});
}
TermPtr mk_num(Numeral value) { return std::make_shared<Term>(NumLit{std::move(value)}); }
TermPtr mk_num(long long value) { return std::make_shared<Term>(NumLit{Numeral{value}}); }
TermPtr mk_str(std::string value) { return std::make_shared<Term>(StrLit{std::move(value)}); }

std::pair<TermPtr, std::vector<TermPtr>> app_spine(const TermPtr& t) {
  std::vector<TermPtr> args;
  TermPtr cur = t;
  while (const auto* a = cur->as<App>()) {
    args.push_back(a->arg);
    cur = a->fn;
  }
  std::reverse(args.begin(), args.end());
  return {cur, std::move(args)};
}

TermPtr build_app(TermPtr head, const std::vector<TermPtr>& args) {
  TermPtr t = std::move(head);
  for (const auto& a : args) t = mk_app(t, a);
  return t;
}

// --- pattern helpers --------------------------------------------------------

static void pattern_vars_into(const PatternPtr& p, std::vector<std::string>& out) {
  if (const auto* v = p->as<PVar>()) {
    out.push_back(v->name);
  } else if (const auto* c = p->as<PCon>()) {
    for (const auto& a : c->args) pattern_vars_into(a, out);
  } else if (const auto* t = p->as<PTuple>()) {
    for (const auto& e : t->elems) pattern_vars_into(e, out);
  } else if (const auto* as = p->as<PAs>()) {
    out.push_back(as->name);
    pattern_vars_into(as->inner, out);
  }
}

std::vector<std::string> pattern_vars(const PatternPtr& p) {
  std::vector<std::string> out;
  pattern_vars_into(p, out);
  return out;
}

bool pattern_linear(const PatternPtr& p) {
  auto vars = pattern_vars(p);
  std::set<std::string> seen;
  for (const auto& v : vars)
    if (!seen.insert(v).second) return false;
  return true;
}

// --- equality -----------------------------------------------------------------

bool ty_equal(const TyPtr& a, const TyPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node().index() != b->node().index()) return false;
  if (const auto* v = a->as<TyVar>()) return v->name == b->as<TyVar>()->name;
  if (const auto* c = a->as<TyCon>()) {
    const auto* d = b->as<TyCon>();
    if (c->name != d->name || c->args.size() != d->args.size()) return false;
    for (size_t i = 0; i < c->args.size(); ++i)
      if (!ty_equal(c->args[i], d->args[i])) return false;
    return true;
  }
  if (const auto* ar = a->as<TyArrow>()) {
    const auto* br = b->as<TyArrow>();
    return ty_equal(ar->dom, br->dom) && ty_equal(ar->cod, br->cod);
  }
  const auto* at = a->as<TyTuple>();
  const auto* bt = b->as<TyTuple>();
  if (at->elems.size() != bt->elems.size()) return false;
  for (size_t i = 0; i < at->elems.size(); ++i)
    if (!ty_equal(at->elems[i], bt->elems[i])) return false;
  return true;
}

bool pattern_equal(const PatternPtr& a, const PatternPtr& b) {
  if (a == b) return true;
  if (a->node().index() != b->node().index()) return false;
  if (const auto* v = a->as<PVar>()) return v->name == b->as<PVar>()->name;
  if (a->as<PWild>()) return true;
  if (const auto* c = a->as<PCon>()) {
    const auto* d = b->as<PCon>();
    if (c->ctor != d->ctor || c->args.size() != d->args.size()) return false;
    for (size_t i = 0; i < c->args.size(); ++i)
      if (!pattern_equal(c->args[i], d->args[i])) return false;
    return true;
  }
  if (const auto* t = a->as<PTuple>()) {
    const auto* u = b->as<PTuple>();
    if (t->elems.size() != u->elems.size()) return false;
    for (size_t i = 0; i < t->elems.size(); ++i)
      if (!pattern_equal(t->elems[i], u->elems[i])) return false;
    return true;
  }
  const auto* s = a->as<PAs>();
  const auto* r = b->as<PAs>();
  return s->name == r->name && pattern_equal(s->inner, r->inner);
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node().index() != b->node().index()) return false;
  if (const auto* v = a->as<Var>()) return v->name == b->as<Var>()->name;
  if (const auto* c = a->as<Const>()) return c->name == b->as<Const>()->name;
  if (const auto* ap = a->as<App>()) {
    const auto* bp = b->as<App>();
    return term_equal(ap->fn, bp->fn) && term_equal(ap->arg, bp->arg);
  }
  if (const auto* ab = a->as<Abs>()) {
    const auto* bb = b->as<Abs>();
    return ab->binder == bb->binder && ty_equal(ab->binder_ty, bb->binder_ty) &&
           term_equal(ab->body, bb->body);
  }
  if (const auto* al = a->as<Let>()) {
    const auto* bl = b->as<Let>();
    return al->binder == bl->binder && term_equal(al->value, bl->value) &&
           term_equal(al->body, bl->body);
  }
  if (const auto* ac = a->as<Case>()) {
    const auto* bc = b->as<Case>();
    if (ac->branches.size() != bc->branches.size()) return false;
    if (!term_equal(ac->scrutinee, bc->scrutinee)) return false;
    for (size_t i = 0; i < ac->branches.size(); ++i) {
      if (!pattern_equal(ac->branches[i].pat, bc->branches[i].pat)) return false;
      if (!term_equal(ac->branches[i].body, bc->branches[i].body)) return false;
    }
    return true;
  }
  if (const auto* at = a->as<Tuple>()) {
    const auto* bt = b->as<Tuple>();
    if (at->elems.size() != bt->elems.size()) return false;
    for (size_t i = 0; i < at->elems.size(); ++i)
      if (!term_equal(at->elems[i], bt->elems[i])) return false;
    return true;
  }
  if (const auto* an = a->as<NumLit>()) return an->value == b->as<NumLit>()->value;
  return a->as<StrLit>()->value == b->as<StrLit>()->value;
}

// --- free variables -------------------------------------------------------

static void free_vars_into(const TermPtr& t, std::set<std::string>& bound,
                           std::set<std::string>& out) {
  if (const auto* v = t->as<Var>()) {
    if (!bound.count(v->name)) out.insert(v->name);
  } else if (const auto* a = t->as<App>()) {
    free_vars_into(a->fn, bound, out);
    free_vars_into(a->arg, bound, out);
  } else if (const auto* ab = t->as<Abs>()) {
    bool fresh = bound.insert(ab->binder).second;
    free_vars_into(ab->body, bound, out);
    if (fresh) bound.erase(ab->binder);
  } else if (const auto* l = t->as<Let>()) {
    free_vars_into(l->value, bound, out);
    bool fresh = bound.insert(l->binder).second;
    free_vars_into(l->body, bound, out);
    if (fresh) bound.erase(l->binder);
  } else if (const auto* c = t->as<Case>()) {
    free_vars_into(c->scrutinee, bound, out);
    for (const auto& br : c->branches) {
      std::vector<std::string> added;
      for (const auto& pv : pattern_vars(br.pat))
        if (bound.insert(pv).second) added.push_back(pv);
      free_vars_into(br.body, bound, out);
      for (const auto& pv : added) bound.erase(pv);
    }
  } else if (const auto* tp = t->as<Tuple>()) {
    for (const auto& e : tp->elems) free_vars_into(e, bound, out);
  }
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> bound, out;
  free_vars_into(t, bound, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
  if (!used.count(base)) return base;
  for (size_t k = 1;; ++k) {
    std::string cand = base + std::to_string(k);
    if (!used.count(cand)) return cand;
  }
}

// --- substitution ------------------------------------------------------------

static PatternPtr rename_pattern_var(const PatternPtr& p, const std::string& from,
                                     const std::string& to) {
  if (const auto* v = p->as<PVar>()) return v->name == from ? p_var(to) : p;
  if (p->as<PWild>()) return p;
  if (const auto* c = p->as<PCon>()) {
    std::vector<PatternPtr> args;
    args.reserve(c->args.size());
    for (const auto& a : c->args) args.push_back(rename_pattern_var(a, from, to));
    return p_con(c->ctor, std::move(args));
  }
  if (const auto* t = p->as<PTuple>()) {
    std::vector<PatternPtr> elems;
    elems.reserve(t->elems.size());
    for (const auto& e : t->elems) elems.push_back(rename_pattern_var(e, from, to));
    return p_tuple(std::move(elems));
  }
  const auto* as = p->as<PAs>();
  return p_as(as->name == from ? to : as->name, rename_pattern_var(as->inner, from, to));
}

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& r) {
  if (const auto* v = t->as<Var>()) return v->name == x ? r : t;
  if (t->as<Const>() || t->as<NumLit>() || t->as<StrLit>()) return t;
  if (const auto* a = t->as<App>())
    return mk_app(substitute(a->fn, x, r), substitute(a->arg, x, r));
  if (const auto* tp = t->as<Tuple>()) {
    std::vector<TermPtr> elems;
    elems.reserve(tp->elems.size());
    for (const auto& e : tp->elems) elems.push_back(substitute(e, x, r));
    return mk_tuple(std::move(elems));
  }

  const auto fv_r = free_vars(r);

  if (const auto* ab = t->as<Abs>()) {
    if (ab->binder == x) return t;  // shadowed
    auto body = ab->body;
    std::string binder = ab->binder;
    if (fv_r.count(binder) && free_vars(body).count(x)) {
      auto used = free_vars(body);
      used.insert(fv_r.begin(), fv_r.end());
      used.insert(x);
      binder = fresh_name(ab->binder, used);
      body = substitute(body, ab->binder, mk_var(binder));
    }
    return mk_abs(binder, ab->binder_ty, substitute(body, x, r));
  }

  if (const auto* l = t->as<Let>()) {
    auto value = substitute(l->value, x, r);
    if (l->binder == x) return mk_let(l->binder, value, l->body);
    auto body = l->body;
    std::string binder = l->binder;
    if (fv_r.count(binder) && free_vars(body).count(x)) {
      auto used = free_vars(body);
      used.insert(fv_r.begin(), fv_r.end());
      used.insert(x);
      binder = fresh_name(l->binder, used);
      body = substitute(body, l->binder, mk_var(binder));
    }
    return mk_let(binder, value, substitute(body, x, r));
  }

  const auto* c = t->as<Case>();
  auto scrut = substitute(c->scrutinee, x, r);
  std::vector<CaseBranch> branches;
  branches.reserve(c->branches.size());
  for (const auto& br : c->branches) {
    auto pvs = pattern_vars(br.pat);
    if (std::find(pvs.begin(), pvs.end(), x) != pvs.end()) {
      branches.push_back({br.pat, br.body});  // x shadowed by the pattern
      continue;
    }
    auto pat = br.pat;
    auto body = br.body;
    if (free_vars(body).count(x)) {
      // Rename pattern binders that would capture free variables of r.
      auto used = free_vars(body);
      used.insert(fv_r.begin(), fv_r.end());
      used.insert(pvs.begin(), pvs.end());
      used.insert(x);
      for (const auto& pv : pvs) {
        if (!fv_r.count(pv)) continue;
        std::string np = fresh_name(pv, used);
        used.insert(np);
        pat = rename_pattern_var(pat, pv, np);
        body = substitute(body, pv, mk_var(np));
      }
    }
    branches.push_back({pat, substitute(body, x, r)});
  }
  return mk_case(scrut, std::move(branches));
}

// --- deconflict ----------------------------------------------------------------

namespace {

struct Deconflicter {
  std::set<std::string> used;

  std::string claim(const std::string& name) {
    std::string fresh = fresh_name(name, used);
    used.insert(fresh);
    return fresh;
  }

  PatternPtr walk_pattern(const PatternPtr& p, std::map<std::string, std::string>& env) {
    if (const auto* v = p->as<PVar>()) {
      std::string nv = claim(v->name);
      env[v->name] = nv;
      return p_var(nv);
    }
    if (p->as<PWild>()) return p;
    if (const auto* c = p->as<PCon>()) {
      std::vector<PatternPtr> args;
      args.reserve(c->args.size());
      for (const auto& a : c->args) args.push_back(walk_pattern(a, env));
      return p_con(c->ctor, std::move(args));
    }
    if (const auto* t = p->as<PTuple>()) {
      std::vector<PatternPtr> elems;
      elems.reserve(t->elems.size());
      for (const auto& e : t->elems) elems.push_back(walk_pattern(e, env));
      return p_tuple(std::move(elems));
    }
    const auto* as = p->as<PAs>();
    std::string nv = claim(as->name);
    env[as->name] = nv;
    return p_as(nv, walk_pattern(as->inner, env));
  }

  TermPtr walk(const TermPtr& t, const std::map<std::string, std::string>& env) {
    if (const auto* v = t->as<Var>()) {
      auto it = env.find(v->name);
      return it == env.end() ? t : mk_var(it->second);
    }
    if (t->as<Const>() || t->as<NumLit>() || t->as<StrLit>()) return t;
    if (const auto* a = t->as<App>()) return mk_app(walk(a->fn, env), walk(a->arg, env));
    if (const auto* tp = t->as<Tuple>()) {
      std::vector<TermPtr> elems;
      elems.reserve(tp->elems.size());
      for (const auto& e : tp->elems) elems.push_back(walk(e, env));
      return mk_tuple(std::move(elems));
    }
    if (const auto* ab = t->as<Abs>()) {
      std::string nb = claim(ab->binder);
      auto env2 = env;
      env2[ab->binder] = nb;
      return mk_abs(nb, ab->binder_ty, walk(ab->body, env2));
    }
    if (const auto* l = t->as<Let>()) {
      std::string nb = claim(l->binder);
      auto value = walk(l->value, env);  // binder not in scope in value
      auto env2 = env;
      env2[l->binder] = nb;
      return mk_let(nb, value, walk(l->body, env2));
    }
    const auto* c = t->as<Case>();
    auto scrut = walk(c->scrutinee, env);
    std::vector<CaseBranch> branches;
    branches.reserve(c->branches.size());
    for (const auto& br : c->branches) {
      auto env2 = env;
      std::map<std::string, std::string> penv;
      auto pat = walk_pattern(br.pat, penv);
      for (const auto& [k, v] : penv) env2[k] = v;
      branches.push_back({pat, walk(br.body, env2)});
    }
    return mk_case(scrut, std::move(branches));
  }
};

}  // namespace

TermPtr deconflict(const TermPtr& t, const std::set<std::string>& reserved) {
  Deconflicter d;
  d.used = reserved;
  for (const auto& v : free_vars(t)) d.used.insert(v);
  return d.walk(t, {});
}

// --- atom folding ------------------------------------------------------------

void fold_atoms(const TermPtr& t, const std::function<void(const Term&)>& visit) {
  if (t->as<Var>() || t->as<Const>() || t->as<NumLit>() || t->as<StrLit>()) {
    visit(*t);
    return;
  }
  if (const auto* a = t->as<App>()) {
    fold_atoms(a->fn, visit);
    fold_atoms(a->arg, visit);
  } else if (const auto* ab = t->as<Abs>()) {
    fold_atoms(ab->body, visit);
  } else if (const auto* l = t->as<Let>()) {
    fold_atoms(l->value, visit);
    fold_atoms(l->body, visit);
  } else if (const auto* c = t->as<Case>()) {
    fold_atoms(c->scrutinee, visit);
    for (const auto& br : c->branches) fold_atoms(br.body, visit);
  } else if (const auto* tp = t->as<Tuple>()) {
    for (const auto& e : tp->elems) fold_atoms(e, visit);
  }
}

// --- as-binding elimination ---------------------------------------------------

namespace {

struct AsEliminator {
  std::set<std::string> used;

  // Replaces wildcards by fresh variables; used below as-binders only.
  PatternPtr promote_wilds(const PatternPtr& p) {
    if (p->as<PWild>()) {
      std::string nv = fresh_name("w", used);
      used.insert(nv);
      return p_var(nv);
    }
    if (const auto* c = p->as<PCon>()) {
      std::vector<PatternPtr> args;
      args.reserve(c->args.size());
      for (const auto& a : c->args) args.push_back(promote_wilds(a));
      return p_con(c->ctor, std::move(args));
    }
    if (const auto* t = p->as<PTuple>()) {
      std::vector<PatternPtr> elems;
      elems.reserve(t->elems.size());
      for (const auto& e : t->elems) elems.push_back(promote_wilds(e));
      return p_tuple(std::move(elems));
    }
    return p;  // PVar; PAs cannot appear here (inner ones already stripped)
  }

  TermPtr reconstruct(const PatternPtr& p) {
    if (const auto* v = p->as<PVar>()) return mk_var(v->name);
    if (const auto* c = p->as<PCon>()) {
      std::vector<TermPtr> args;
      args.reserve(c->args.size());
      for (const auto& a : c->args) args.push_back(reconstruct(a));
      return build_app(mk_const(c->ctor), args);
    }
    if (const auto* t = p->as<PTuple>()) {
      std::vector<TermPtr> elems;
      elems.reserve(t->elems.size());
      for (const auto& e : t->elems) elems.push_back(reconstruct(e));
      return mk_tuple(std::move(elems));
    }
    throw MalformedPattern("cannot reconstruct matched fragment from pattern");
  }

  // Strips as-binders bottom-up, recording (binder, reconstruction) pairs
  // innermost first.
  PatternPtr strip(const PatternPtr& p, std::vector<std::pair<std::string, TermPtr>>& wraps) {
    if (const auto* as = p->as<PAs>()) {
      auto inner = strip(as->inner, wraps);
      inner = promote_wilds(inner);
      wraps.emplace_back(as->name, reconstruct(inner));
      return inner;
    }
    if (const auto* c = p->as<PCon>()) {
      std::vector<PatternPtr> args;
      args.reserve(c->args.size());
      for (const auto& a : c->args) args.push_back(strip(a, wraps));
      return p_con(c->ctor, std::move(args));
    }
    if (const auto* t = p->as<PTuple>()) {
      std::vector<PatternPtr> elems;
      elems.reserve(t->elems.size());
      for (const auto& e : t->elems) elems.push_back(strip(e, wraps));
      return p_tuple(std::move(elems));
    }
    return p;
  }

  TermPtr walk(const TermPtr& t) {
    if (t->as<Var>() || t->as<Const>() || t->as<NumLit>() || t->as<StrLit>()) return t;
    if (const auto* a = t->as<App>()) return mk_app(walk(a->fn), walk(a->arg));
    if (const auto* ab = t->as<Abs>()) return mk_abs(ab->binder, ab->binder_ty, walk(ab->body));
    if (const auto* l = t->as<Let>()) return mk_let(l->binder, walk(l->value), walk(l->body));
    if (const auto* tp = t->as<Tuple>()) {
      std::vector<TermPtr> elems;
      elems.reserve(tp->elems.size());
      for (const auto& e : tp->elems) elems.push_back(walk(e));
      return mk_tuple(std::move(elems));
    }
    const auto* c = t->as<Case>();
    auto scrut = walk(c->scrutinee);
    std::vector<CaseBranch> branches;
    branches.reserve(c->branches.size());
    for (const auto& br : c->branches) {
      std::vector<std::pair<std::string, TermPtr>> wraps;
      auto pat = strip(br.pat, wraps);
      auto body = walk(br.body);
      // Innermost as-binder becomes the innermost Let.
      for (const auto& [name, frag] : wraps) body = mk_let(name, frag, body);
      branches.push_back({pat, body});
    }
    return mk_case(scrut, std::move(branches));
  }
};

}  // namespace

TermPtr eliminate_as_bindings(const TermPtr& t) {
  AsEliminator e;
  e.used = collect_names(t);
  return e.walk(t);
}

// --- alpha normalization ----------------------------------------------------

namespace {

struct AlphaNormalizer {
  size_t counter = 0;

  std::string next() { return "#" + std::to_string(counter++); }

  PatternPtr walk_pattern(const PatternPtr& p, std::map<std::string, std::string>& env) {
    if (const auto* v = p->as<PVar>()) {
      std::string nv = next();
      env[v->name] = nv;
      return p_var(nv);
    }
    if (p->as<PWild>()) return p;
    if (const auto* c = p->as<PCon>()) {
      std::vector<PatternPtr> args;
      args.reserve(c->args.size());
      for (const auto& a : c->args) args.push_back(walk_pattern(a, env));
      return p_con(c->ctor, std::move(args));
    }
    if (const auto* t = p->as<PTuple>()) {
      std::vector<PatternPtr> elems;
      elems.reserve(t->elems.size());
      for (const auto& e : t->elems) elems.push_back(walk_pattern(e, env));
      return p_tuple(std::move(elems));
    }
    const auto* as = p->as<PAs>();
    std::string nv = next();
    env[as->name] = nv;
    return p_as(nv, walk_pattern(as->inner, env));
  }

  TermPtr walk(const TermPtr& t, const std::map<std::string, std::string>& env) {
    if (const auto* v = t->as<Var>()) {
      auto it = env.find(v->name);
      return it == env.end() ? t : mk_var(it->second);
    }
    if (t->as<Const>() || t->as<NumLit>() || t->as<StrLit>()) return t;
    if (const auto* a = t->as<App>()) {
      auto fn = walk(a->fn, env);
      return mk_app(fn, walk(a->arg, env));
    }
    if (const auto* tp = t->as<Tuple>()) {
      std::vector<TermPtr> elems;
      elems.reserve(tp->elems.size());
      for (const auto& e : tp->elems) elems.push_back(walk(e, env));
      return mk_tuple(std::move(elems));
    }
    if (const auto* ab = t->as<Abs>()) {
      std::string nb = next();
      auto env2 = env;
      env2[ab->binder] = nb;
      return mk_abs(nb, ab->binder_ty, walk(ab->body, env2));
    }
    if (const auto* l = t->as<Let>()) {
      std::string nb = next();
      auto value = walk(l->value, env);
      auto env2 = env;
      env2[l->binder] = nb;
      return mk_let(nb, value, walk(l->body, env2));
    }
    const auto* c = t->as<Case>();
    auto scrut = walk(c->scrutinee, env);
    std::vector<CaseBranch> branches;
    branches.reserve(c->branches.size());
    for (const auto& br : c->branches) {
      auto env2 = env;
      std::map<std::string, std::string> penv;
      auto pat = walk_pattern(br.pat, penv);
      for (const auto& [k, v] : penv) env2[k] = v;
      branches.push_back({pat, walk(br.body, env2)});
    }
    return mk_case(scrut, std::move(branches));
  }
};

}  // namespace

TermPtr alpha_normalize(const TermPtr& t) {
  AlphaNormalizer n;
  return n.walk(t, {});
}

bool alpha_equal(const TermPtr& a, const TermPtr& b) {
  return term_equal(alpha_normalize(a), alpha_normalize(b));
}

// --- name collection / sizing --------------------------------------------------

static void collect_pattern_names(const PatternPtr& p, std::set<std::string>& out) {
  if (const auto* v = p->as<PVar>()) {
    out.insert(v->name);
  } else if (const auto* c = p->as<PCon>()) {
    out.insert(c->ctor);
    for (const auto& a : c->args) collect_pattern_names(a, out);
  } else if (const auto* t = p->as<PTuple>()) {
    for (const auto& e : t->elems) collect_pattern_names(e, out);
  } else if (const auto* as = p->as<PAs>()) {
    out.insert(as->name);
    collect_pattern_names(as->inner, out);
  }
}

static void collect_names_into(const TermPtr& t, std::set<std::string>& out) {
  if (const auto* v = t->as<Var>()) {
    out.insert(v->name);
  } else if (const auto* c = t->as<Const>()) {
    out.insert(c->name);
  } else if (const auto* a = t->as<App>()) {
    collect_names_into(a->fn, out);
    collect_names_into(a->arg, out);
  } else if (const auto* ab = t->as<Abs>()) {
    out.insert(ab->binder);
    collect_names_into(ab->body, out);
  } else if (const auto* l = t->as<Let>()) {
    out.insert(l->binder);
    collect_names_into(l->value, out);
    collect_names_into(l->body, out);
  } else if (const auto* c2 = t->as<Case>()) {
    collect_names_into(c2->scrutinee, out);
    for (const auto& br : c2->branches) {
      collect_pattern_names(br.pat, out);
      collect_names_into(br.body, out);
    }
  } else if (const auto* tp = t->as<Tuple>()) {
    for (const auto& e : tp->elems) collect_names_into(e, out);
  }
}

std::set<std::string> collect_names(const TermPtr& t) {
  std::set<std::string> out;
  collect_names_into(t, out);
  return out;
}

size_t node_count(const TermPtr& t) {
  size_t n = 1;
  if (const auto* a = t->as<App>()) {
    n += node_count(a->fn) + node_count(a->arg);
  } else if (const auto* ab = t->as<Abs>()) {
    n += node_count(ab->body);
  } else if (const auto* l = t->as<Let>()) {
    n += node_count(l->value) + node_count(l->body);
  } else if (const auto* c = t->as<Case>()) {
    n += node_count(c->scrutinee);
    for (const auto& br : c->branches) n += node_count(br.body);
  } else if (const auto* tp = t->as<Tuple>()) {
    for (const auto& e : tp->elems) n += node_count(e);
  }
  return n;
}

// SourceLoc/CycleError live here to keep errors.hpp header-only trivial.
std::string SourceLoc::to_string() const {
  if (line == 0) return "<unknown>";
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

CycleError::CycleError(std::vector<std::string> cycle)
    : Error([&cycle] {
        std::string msg = "import cycle:";
        for (const auto& n : cycle) msg += " " + n;
        return msg;
      }()),
      cycle_(std::move(cycle)) {}

}  // namespace vcforge

namespace vcforge {

namespace {

bool ident_segment(const std::string& s, size_t from, size_t to) {
  if (from >= to) return false;
  char c0 = s[from];
  if (!(std::isalpha(static_cast<unsigned char>(c0)) || c0 == '_')) return false;
  for (size_t i = from + 1; i < to; ++i) {
    char c = s[i];
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''))
      return false;
  }
  return true;
}

}  // namespace

bool valid_identifier(const std::string& s, bool allow_qualified) {
  size_t start = 0;
  size_t dots = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '.') {
      if (!ident_segment(s, start, i)) return false;
      if (i < s.size()) ++dots;
      start = i + 1;
    }
  }
  return allow_qualified || dots == 0;
}

}  // namespace vcforge
