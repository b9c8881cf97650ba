#include "vcforge/emit.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "vcforge/errors.hpp"

namespace vcforge {

// --- name escaping -----------------------------------------------------------

NameEscaper::NameEscaper(const TargetProfile& profile) {
  reserved_ = profile.keywords;
  for (const auto& [corpus_name, entry] : profile.builtin_map) {
    (void)corpus_name;
    if (entry.name.find('.') == std::string::npos) reserved_.insert(entry.name);
    if (entry.notation && entry.notation->kind == NotationRule::Kind::Atom &&
        valid_identifier(entry.notation->text, false))
      reserved_.insert(entry.notation->text);
  }
  for (const auto& [corpus_name, spelling] : profile.tycon_map) {
    (void)corpus_name;
    reserved_.insert(spelling);
  }
  used_ = reserved_;
}

std::string NameEscaper::escape(const std::string& name) {
  // Dot-qualified names never collide with target keywords; they are
  // either builtin (mapped before reaching here) or pass through verbatim.
  if (name.find('.') != std::string::npos) return name;
  auto it = memo_.find(name);
  if (it != memo_.end()) return it->second;
  std::string out = name;
  if (used_.count(out)) {
    out = name + "_v";
    for (int i = 1; used_.count(out); ++i) out = name + "_v" + std::to_string(i);
  }
  used_.insert(out);
  memo_.emplace(name, out);
  return out;
}

std::string quote_string_literal(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c; break;
    }
  }
  out += '"';
  return out;
}

// --- term printing -----------------------------------------------------------

Printer::Printer(const TargetProfile& profile, NameEscaper& names,
                 std::set<std::string> declared_consts,
                 std::set<std::string> declared_tycons, PrintOptions opts)
    : profile_(&profile),
      names_(&names),
      declared_consts_(std::move(declared_consts)),
      declared_tycons_(std::move(declared_tycons)),
      opts_(opts) {}

Rendered Printer::finish(std::string text, int p, bool open, int min_prec) const {
  if (p < min_prec) return {"(" + std::move(text) + ")", prec::kAtom, false};
  return {std::move(text), p, open};
}

Printer::Spelling Printer::const_spelling(const std::string& name) {
  if (const BuiltinEntry* e = profile_->builtin(name))
    return {e->name, e->notation ? &*e->notation : nullptr};
  if (declared_consts_.count(name)) return {names_->escape(name), nullptr};
  if (opts_.strict_unmapped) throw UnmappedConstant(name);
  return {name.find('.') != std::string::npos ? name : names_->escape(name), nullptr};
}

Rendered Printer::render_binder(const BinderSyntax& syntax, const std::string& binder,
                                const TyPtr& ty, const TermPtr& body, int min_prec) {
  Rendered b = render(body, prec::kBinder);
  std::string text = syntax.intro + names_->escape(binder) + syntax.type_sep +
                     render_type(ty, prec::kBinder) + syntax.close + b.text;
  return finish(std::move(text), prec::kBinder, b.open_match, min_prec);
}

Rendered Printer::render_application(const TermPtr& head,
                                     const std::vector<TermPtr>& args, int min_prec) {
  if (const auto* c = head->as<Const>()) {
    if ((c->name == "forall" || c->name == "exists") && args.size() == 1) {
      if (const auto* abs = args[0]->as<Abs>()) {
        const BinderSyntax& q =
            c->name == "forall" ? profile_->forall_q : profile_->exists_q;
        return render_binder(q, abs->binder, abs->binder_ty, abs->body, min_prec);
      }
    }
    Spelling sp = const_spelling(c->name);
    if (sp.notation && sp.notation->arity == args.size()) {
      const NotationRule& n = *sp.notation;
      switch (n.kind) {
        case NotationRule::Kind::Infix: {
          int lhs_ctx = n.assoc == Assoc::Left ? n.prec : n.prec + 1;
          int rhs_ctx = n.assoc == Assoc::Right ? n.prec : n.prec + 1;
          Rendered l = render(args[0], lhs_ctx);
          Rendered r = render(args[1], rhs_ctx);
          return finish(l.text + " " + n.text + " " + r.text, n.prec, r.open_match,
                        min_prec);
        }
        case NotationRule::Kind::Prefix: {
          Rendered x = render(args[0], n.prec);
          return finish(n.text + x.text, n.prec, x.open_match, min_prec);
        }
        case NotationRule::Kind::Mixfix: {
          const std::string& tmpl = n.text;
          std::string text;
          bool open = false;
          size_t i = 0;
          while (i < tmpl.size()) {
            if (tmpl[i] == '$' && i + 1 < tmpl.size() &&
                std::isdigit(static_cast<unsigned char>(tmpl[i + 1]))) {
              size_t j = i + 1, slot = 0;
              while (j < tmpl.size() &&
                     std::isdigit(static_cast<unsigned char>(tmpl[j])))
                slot = slot * 10 + static_cast<size_t>(tmpl[j++] - '0');
              // A slot that opens the template sits to the left of the
              // operator and keeps its precedence; every later slot is
              // fenced by literal text and renders unconstrained.
              Rendered r = render(args.at(slot), i == 0 ? n.prec : prec::kBinder);
              text += r.text;
              open = r.open_match;
              i = j;
            } else {
              text += tmpl[i++];
              open = false;
            }
          }
          return finish(std::move(text), n.prec, open, min_prec);
        }
        case NotationRule::Kind::Atom:
          break;  // an applied nullary notation falls back to its plain name
      }
    }
    std::string text = sp.text;
    bool open = false;
    for (const TermPtr& a : args) {
      Rendered r = render(a, prec::kArg);
      text += " " + r.text;
      open = r.open_match;
    }
    return finish(std::move(text), prec::kApp, open, min_prec);
  }
  Rendered fn = render(head, prec::kApp);
  std::string text = fn.text;
  bool open = false;
  for (const TermPtr& a : args) {
    Rendered r = render(a, prec::kArg);
    text += " " + r.text;
    open = r.open_match;
  }
  return finish(std::move(text), prec::kApp, open, min_prec);
}

Rendered Printer::render(const TermPtr& t, int min_prec) {
  if (const auto* v = t->as<Var>())
    return finish(names_->escape(v->name), prec::kAtom, false, min_prec);
  if (const auto* c = t->as<Const>()) {
    Spelling sp = const_spelling(c->name);
    if (sp.notation && sp.notation->kind == NotationRule::Kind::Atom)
      return finish(sp.notation->text, prec::kAtom, false, min_prec);
    return finish(std::move(sp.text), prec::kAtom, false, min_prec);
  }
  if (const auto* n = t->as<NumLit>()) {
    int p = n->value.negative() ? prec::kNegLit : prec::kAtom;
    return finish(n->value.str(), p, false, min_prec);
  }
  if (const auto* s = t->as<StrLit>())
    return finish(quote_string_literal(s->value), prec::kAtom, false, min_prec);
  if (const auto* tu = t->as<Tuple>()) {
    std::string text = "(";
    for (size_t i = 0; i < tu->elems.size(); ++i) {
      if (i) text += ", ";
      text += render(tu->elems[i], prec::kBinder).text;
    }
    text += ")";
    return finish(std::move(text), prec::kAtom, false, min_prec);
  }
  if (const auto* a = t->as<Abs>())
    return render_binder(profile_->lambda, a->binder, a->binder_ty, a->body, min_prec);
  if (const auto* l = t->as<Let>()) {
    const LetSyntax& syn = profile_->let_syntax;
    Rendered value = render(l->value, prec::kBinder);
    Rendered body = render(l->body, prec::kBinder);
    std::string text = "let " + names_->escape(l->binder) + syn.assign + value.text +
                       syn.in_kw + body.text;
    return finish(std::move(text), prec::kBinder, body.open_match, min_prec);
  }
  if (const auto* cs = t->as<Case>()) {
    const CaseSyntax& syn = profile_->case_syntax;
    Rendered scrut = render(cs->scrutinee, prec::kBinder);
    std::string text = syn.kw + " " + scrut.text + syn.of_kw;
    for (size_t i = 0; i < cs->branches.size(); ++i) {
      text += (i == 0 && !syn.bar_before_first) ? " " : syn.bar;
      text += render_pattern(cs->branches[i].pat, false) + syn.arrow;
      Rendered body = render(cs->branches[i].body, prec::kBinder);
      bool last = i + 1 == cs->branches.size();
      // A non-final branch whose body ends inside another match would feed
      // our next bar to that inner match; parenthesizing the body closes it.
      if (!last && body.open_match)
        text += "(" + body.text + ")";
      else
        text += body.text;
    }
    text += syn.end_kw;
    // An end-delimited match is closed on both sides and never needs
    // parentheses; an open one binds like a binder and can swallow bars.
    bool open = syn.end_kw.empty();
    return finish(std::move(text), open ? prec::kBinder : prec::kAtom, open,
                  min_prec);
  }
  auto [head, args] = app_spine(t);
  return render_application(head, args, min_prec);
}

std::string Printer::render_type(const TyPtr& ty, int min_prec) {
  const TypeSyntax& ts = profile_->type_syntax;
  if (const auto* v = ty->as<TyVar>()) return ts.tyvar_prefix + v->name;
  if (const auto* a = ty->as<TyArrow>()) {
    std::string text =
        render_type(a->dom, 2) + " " + ts.arrow + " " + render_type(a->cod, 1);
    return min_prec > 1 ? "(" + text + ")" : text;
  }
  if (const auto* tu = ty->as<TyTuple>()) {
    std::string text;
    for (size_t i = 0; i < tu->elems.size(); ++i) {
      if (i) text += " " + ts.product + " ";
      text += render_type(tu->elems[i], 4);
    }
    return min_prec > 3 ? "(" + text + ")" : text;
  }
  const auto* con = ty->as<TyCon>();
  std::string spelling;
  auto mapped = profile_->tycon_map.find(con->name);
  if (mapped != profile_->tycon_map.end())
    spelling = mapped->second;
  else if (declared_tycons_.count(con->name))
    spelling = names_->escape(con->name);
  else if (opts_.strict_unmapped)
    throw UnmappedConstant(con->name);
  else
    spelling = con->name.find('.') != std::string::npos ? con->name
                                                        : names_->escape(con->name);
  if (con->args.empty()) return spelling;
  std::string text;
  if (ts.postfix_app) {
    if (con->args.size() == 1) {
      text = render_type(con->args[0], 10) + " " + spelling;
    } else {
      text = "(";
      for (size_t i = 0; i < con->args.size(); ++i) {
        if (i) text += ", ";
        text += render_type(con->args[i], prec::kBinder);
      }
      text += ") " + spelling;
    }
  } else {
    text = spelling;
    for (const TyPtr& arg : con->args) text += " " + render_type(arg, 11);
  }
  return min_prec > 10 ? "(" + text + ")" : text;
}

std::string Printer::render_pattern(const PatternPtr& p, bool atomic) {
  if (const auto* v = p->as<PVar>()) return names_->escape(v->name);
  if (p->as<PWild>()) return "_";
  if (const auto* tu = p->as<PTuple>()) {
    std::string text = "(";
    for (size_t i = 0; i < tu->elems.size(); ++i) {
      if (i) text += ", ";
      text += render_pattern(tu->elems[i], false);
    }
    return text + ")";
  }
  if (const auto* as = p->as<PAs>()) {
    if (!profile_->pattern_as_supported)
      throw Error("target '" + profile_->id +
                  "' cannot print as-patterns; eliminate them first");
    std::string text =
        render_pattern(as->inner, false) + " as " + names_->escape(as->name);
    return atomic ? "(" + text + ")" : text;
  }
  const auto* con = p->as<PCon>();
  Spelling sp = const_spelling(con->ctor);
  if (con->args.empty()) {
    if (sp.notation && sp.notation->kind == NotationRule::Kind::Atom)
      return sp.notation->text;
    return sp.text;
  }
  std::string text = sp.text;
  for (const PatternPtr& arg : con->args) text += " " + render_pattern(arg, true);
  return atomic ? "(" + text + ")" : text;
}

// --- declaration rendering -----------------------------------------------------

namespace {

bool pattern_has_as(const PatternPtr& p) {
  if (p->as<PAs>()) return true;
  if (const auto* c = p->as<PCon>()) {
    for (const auto& a : c->args)
      if (pattern_has_as(a)) return true;
  }
  if (const auto* t = p->as<PTuple>()) {
    for (const auto& e : t->elems)
      if (pattern_has_as(e)) return true;
  }
  return false;
}

bool term_has_as(const TermPtr& t) {
  if (const auto* a = t->as<App>()) return term_has_as(a->fn) || term_has_as(a->arg);
  if (const auto* a = t->as<Abs>()) return term_has_as(a->body);
  if (const auto* l = t->as<Let>())
    return term_has_as(l->value) || term_has_as(l->body);
  if (const auto* c = t->as<Case>()) {
    if (term_has_as(c->scrutinee)) return true;
    for (const auto& b : c->branches)
      if (pattern_has_as(b.pat) || term_has_as(b.body)) return true;
  }
  if (const auto* tu = t->as<Tuple>()) {
    for (const auto& e : tu->elems)
      if (term_has_as(e)) return true;
  }
  return false;
}

TermPtr prep_term(const TermPtr& t, const TargetProfile& profile) {
  if (!profile.requires_as_elimination || !term_has_as(t)) return t;
  return eliminate_as_bindings(deconflict(t));
}

TyPtr fun_signature(const FunDef& f) {
  TyPtr ty = f.ret;
  for (auto it = f.params.rbegin(); it != f.params.rend(); ++it)
    ty = ty_arrow(it->second, ty);
  return ty;
}

// f x1 .. xn = body, without quantifiers; used inside equation-style decls.
TermPtr bare_equation(const FunDef& f) {
  TermPtr lhs = mk_const(f.name);
  for (const auto& [p, ty] : f.params) {
    (void)ty;
    lhs = mk_app(lhs, mk_var(p));
  }
  return mk_app(mk_app(mk_const("eq"), lhs), f.body);
}

// forall x1..xn. f x1 .. xn = body; the statement of a trusted definition.
TermPtr quantified_equation(const FunDef& f) {
  TermPtr eq = bare_equation(f);
  for (auto it = f.params.rbegin(); it != f.params.rend(); ++it)
    eq = mk_app(mk_const("forall"), mk_abs(it->first, it->second, eq));
  return eq;
}

bool atomic_type(const TyPtr& ty) {
  if (ty->as<TyVar>()) return true;
  const auto* con = ty->as<TyCon>();
  return con && con->args.empty();
}

std::string isa_ty_param_list(const std::vector<std::string>& tps) {
  if (tps.empty()) return "";
  if (tps.size() == 1) return "'" + tps[0] + " ";
  std::string out = "(";
  for (size_t i = 0; i < tps.size(); ++i) {
    if (i) out += ", ";
    out += "'" + tps[i];
  }
  return out + ") ";
}

std::string type_binder_list(const std::vector<std::string>& tps, const char* open,
                             const char* close) {
  std::string out;
  for (const auto& p : tps) out += std::string(" ") + open + p + " : Type" + close;
  return out;
}

TyPtr self_type(const Datatype& d) {
  std::vector<TyPtr> args;
  for (const auto& p : d.ty_params) args.push_back(ty_var(p));
  return ty_con(d.name, std::move(args));
}

TyPtr ctor_type(const Datatype& d, const DatatypeCtor& c) {
  TyPtr ty = self_type(d);
  for (auto it = c.args.rbegin(); it != c.args.rend(); ++it) ty = ty_arrow(*it, ty);
  return ty;
}

std::string render_datatype(const Datatype& d, const TargetProfile& profile,
                            Printer& printer, NameEscaper& names) {
  std::ostringstream out;
  switch (profile.style) {
    case DeclStyle::Isabelle: {
      out << "datatype " << isa_ty_param_list(d.ty_params) << names.escape(d.name)
          << " =";
      for (size_t i = 0; i < d.constructors.size(); ++i) {
        out << (i ? " | " : " ") << names.escape(d.constructors[i].name);
        for (const TyPtr& arg : d.constructors[i].args) {
          if (atomic_type(arg))
            out << " " << printer.render_type(arg, prec::kBinder);
          else
            out << " \"" << printer.render_type(arg, prec::kBinder) << "\"";
        }
      }
      break;
    }
    case DeclStyle::Lean: {
      out << "inductive " << names.escape(d.name)
          << type_binder_list(d.ty_params, "(", ")") << " where";
      for (const auto& c : d.constructors)
        out << "\n  | " << names.escape(c.name) << " : "
            << printer.type(ctor_type(d, c));
      break;
    }
    case DeclStyle::Rocq: {
      out << "Inductive " << names.escape(d.name)
          << type_binder_list(d.ty_params, "(", ")") << " : Type :=";
      for (const auto& c : d.constructors)
        out << "\n  | " << names.escape(c.name) << " : "
            << printer.type(ctor_type(d, c));
      out << ".";
      break;
    }
  }
  return out.str();
}

std::string render_fundef(const FunDef& f, const TargetProfile& profile,
                          Printer& printer, NameEscaper& names) {
  std::ostringstream out;
  std::string fname = names.escape(f.name);
  bool trusted = f.recursive && f.termination_trusted;
  switch (profile.style) {
    case DeclStyle::Isabelle: {
      std::string sig = printer.type(fun_signature(f));
      if (trusted) {
        out << "consts " << fname << " :: \"" << sig << "\"\n";
        out << "axiomatization where\n  " << names.escape(f.name + "_def") << ": \""
            << printer.term(prep_term(quantified_equation(f), profile)) << "\"";
      } else {
        out << (f.recursive ? "fun " : "definition ") << fname << " :: \"" << sig
            << "\" where\n  \""
            << printer.term(prep_term(bare_equation(f), profile)) << "\"";
      }
      break;
    }
    case DeclStyle::Lean: {
      if (trusted) {
        std::string implicits;
        for (const auto& p : f.ty_params) implicits += "{" + p + " : Type} → ";
        out << "axiom " << fname << " : " << implicits
            << printer.type(fun_signature(f));
        out << "\naxiom " << names.escape(f.name + "_def") << " : ";
        if (!f.ty_params.empty()) {
          out << "∀";
          for (const auto& p : f.ty_params) out << " {" << p << " : Type}";
          out << ", ";
        }
        out << printer.term(prep_term(quantified_equation(f), profile));
      } else {
        out << "def " << fname << type_binder_list(f.ty_params, "{", "}");
        for (const auto& [p, ty] : f.params)
          out << " (" << names.escape(p) << " : " << printer.type(ty) << ")";
        out << " : " << printer.type(f.ret) << " :=\n  "
            << printer.term(prep_term(f.body, profile));
      }
      break;
    }
    case DeclStyle::Rocq: {
      if (trusted) {
        std::string quant;
        if (!f.ty_params.empty()) {
          quant = "forall";
          for (const auto& p : f.ty_params) quant += " (" + p + " : Type)";
          quant += ", ";
        }
        out << "Parameter " << fname << " : " << quant
            << printer.type(fun_signature(f)) << ".";
        out << "\nAxiom " << names.escape(f.name + "_def") << " : " << quant
            << printer.term(prep_term(quantified_equation(f), profile)) << ".";
      } else {
        out << (f.recursive ? "Fixpoint " : "Definition ") << fname
            << type_binder_list(f.ty_params, "(", ")");
        for (const auto& [p, ty] : f.params)
          out << " (" << names.escape(p) << " : " << printer.type(ty) << ")";
        out << " : " << printer.type(f.ret) << " :=\n  "
            << printer.term(prep_term(f.body, profile)) << ".";
      }
      break;
    }
  }
  return out.str();
}

void statement_tyvars(const TyPtr& ty, std::set<std::string>& out) {
  if (const auto* v = ty->as<TyVar>()) {
    out.insert(v->name);
    return;
  }
  if (const auto* c = ty->as<TyCon>())
    for (const auto& a : c->args) statement_tyvars(a, out);
  if (const auto* a = ty->as<TyArrow>()) {
    statement_tyvars(a->dom, out);
    statement_tyvars(a->cod, out);
  }
  if (const auto* t = ty->as<TyTuple>())
    for (const auto& e : t->elems) statement_tyvars(e, out);
}

void statement_tyvars(const TermPtr& t, std::set<std::string>& out) {
  if (const auto* a = t->as<App>()) {
    statement_tyvars(a->fn, out);
    statement_tyvars(a->arg, out);
  }
  if (const auto* a = t->as<Abs>()) {
    statement_tyvars(a->binder_ty, out);
    statement_tyvars(a->body, out);
  }
  if (const auto* l = t->as<Let>()) {
    statement_tyvars(l->value, out);
    statement_tyvars(l->body, out);
  }
  if (const auto* c = t->as<Case>()) {
    statement_tyvars(c->scrutinee, out);
    for (const auto& b : c->branches) statement_tyvars(b.body, out);
  }
  if (const auto* tu = t->as<Tuple>())
    for (const auto& e : tu->elems) statement_tyvars(e, out);
}

// Isabelle binds statement type variables implicitly; the other targets
// need them quantified up front, the same way trusted definitions bind
// their type parameters.
std::string statement_quantifier(const TermPtr& stmt, const TargetProfile& profile) {
  if (profile.style == DeclStyle::Isabelle) return "";
  std::set<std::string> vars;
  statement_tyvars(stmt, vars);
  if (vars.empty()) return "";
  std::string out = profile.style == DeclStyle::Lean ? "∀" : "forall";
  for (const auto& v : vars)
    out += profile.style == DeclStyle::Lean ? " {" + v + " : Type}"
                                            : " (" + v + " : Type)";
  return out + ", ";
}

std::string render_axiom(const Axiom& ax, const TargetProfile& profile,
                         Printer& printer, NameEscaper& names) {
  std::string quant = statement_quantifier(ax.statement, profile);
  std::string stmt = printer.term(prep_term(ax.statement, profile));
  switch (profile.style) {
    case DeclStyle::Isabelle:
      return "axiomatization where\n  " + names.escape(ax.name) + ": \"" + stmt + "\"";
    case DeclStyle::Lean:
      return "axiom " + names.escape(ax.name) + " : " + quant + stmt;
    case DeclStyle::Rocq:
      return "Axiom " + names.escape(ax.name) + " : " + quant + stmt + ".";
  }
  return "";
}

}  // namespace

std::string render_declaration(const Declaration& decl, const TargetProfile& profile,
                               Printer& printer, NameEscaper& names) {
  if (const auto* d = std::get_if<Datatype>(&decl.node))
    return render_datatype(*d, profile, printer, names);
  if (const auto* f = std::get_if<FunDef>(&decl.node))
    return render_fundef(*f, profile, printer, names);
  if (const auto* a = std::get_if<Axiom>(&decl.node))
    return render_axiom(*a, profile, printer, names);
  return "";  // goals are emitted as standalone proof files, never inline
}

// --- file assembly -------------------------------------------------------------

namespace {

std::set<std::string> corpus_consts(const Corpus& c) {
  std::set<std::string> out;
  for (const auto& th : c.theories)
    for (const auto& d : th.decls) {
      if (const auto* dt = std::get_if<Datatype>(&d.node))
        for (const auto& ctor : dt->constructors) out.insert(ctor.name);
      if (const auto* f = std::get_if<FunDef>(&d.node)) out.insert(f->name);
    }
  return out;
}

std::set<std::string> corpus_tycons(const Corpus& c) {
  std::set<std::string> out;
  for (const auto& th : c.theories)
    for (const auto& d : th.decls)
      if (const auto* dt = std::get_if<Datatype>(&d.node)) out.insert(dt->name);
  return out;
}

// A declaration is tainted when its transitive dependencies include a
// non-uniform datatype. Probing reuses the goal-closure walk: a synthetic
// statement that references the declaration has exactly its dependencies.
bool reaches_non_uniform(const Corpus& c, size_t theory, const Declaration& d) {
  TermPtr probe;
  if (const auto* dt = std::get_if<Datatype>(&d.node)) {
    probe = mk_abs("x", self_type(*dt), mk_num(0));
  } else if (const auto* f = std::get_if<FunDef>(&d.node)) {
    probe = mk_const(f->name);
  } else if (const auto* a = std::get_if<Axiom>(&d.node)) {
    probe = a->statement;
  } else {
    probe = std::get<Goal>(d.node).statement;
  }
  Goal g{"", probe};
  return !non_uniform_dependencies(c, theory, g).empty();
}

struct FileRenderer {
  const Corpus& corpus;
  const TargetProfile& profile;
  const EmitOptions& opts;
  NameEscaper names;
  Printer printer;

  FileRenderer(const Corpus& c, const TargetProfile& p, const EmitOptions& o)
      : corpus(c),
        profile(p),
        opts(o),
        names(p),
        printer(p, names, corpus_consts(c), corpus_tycons(c), o.print) {}

  bool renderable(size_t theory, const Declaration& d) const {
    if (std::holds_alternative<Goal>(d.node)) return false;
    if (!profile.supports_non_uniform && reaches_non_uniform(corpus, theory, d))
      return false;
    return true;
  }

  std::vector<std::string> theory_decls(size_t theory) {
    std::vector<std::string> out;
    for (const auto& d : corpus.theories[theory].decls)
      if (renderable(theory, d))
        out.push_back(render_declaration(d, profile, printer, names));
    return out;
  }

  // Every declaration visible from `theory`, bodies included, in import
  // order; used by inline emission.
  std::vector<std::string> visible_decls(size_t theory) {
    std::vector<std::string> out;
    std::set<size_t> visible = visible_theories(corpus, theory);
    for (size_t ti : topo_order(corpus)) {
      if (!visible.count(ti)) continue;
      for (auto& text : theory_decls(ti)) out.push_back(std::move(text));
    }
    return out;
  }
};

std::string join_blocks(const std::vector<std::string>& blocks) {
  std::string out;
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (i) out += "\n\n";
    out += blocks[i];
  }
  return out;
}

std::string isabelle_file(const std::string& theory_name,
                          const std::vector<std::string>& imports,
                          const std::vector<std::string>& blocks) {
  std::string out = "theory " + theory_name + "\n  imports Main";
  for (const auto& imp : imports) out += " \"" + imp + "\"";
  out += "\nbegin\n\n";
  if (!blocks.empty()) out += join_blocks(blocks) + "\n\n";
  out += "end\n";
  return out;
}

std::string lean_file(const std::vector<std::string>& imports,
                      const std::vector<std::string>& blocks) {
  std::string out;
  for (const auto& imp : imports) out += "import " + imp + "\n";
  if (!imports.empty()) out += "\n";
  if (!blocks.empty()) out += join_blocks(blocks) + "\n";
  return out;
}

std::string rocq_file(const std::vector<std::string>& imports, bool implicit_header,
                      const std::vector<std::string>& blocks) {
  std::string out;
  for (const auto& imp : imports) out += "Require Import " + imp + ".\n";
  if (!imports.empty()) out += "\n";
  if (implicit_header) out += "Set Implicit Arguments.\n\n";
  if (!blocks.empty()) out += join_blocks(blocks) + "\n";
  return out;
}

}  // namespace

std::string sanitize_file_stem(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (c == '.')
      out += "__";
    else
      out += c;
  }
  return out;
}

std::string render_library_file(const Corpus& corpus, size_t theory_index,
                                const TargetProfile& profile, const EmitOptions& opts) {
  FileRenderer fr(corpus, profile, opts);
  const Theory& th = corpus.theories[theory_index];
  std::vector<std::string> blocks = fr.theory_decls(theory_index);
  std::vector<std::string> imports;
  for (const auto& imp : th.imports) imports.push_back(sanitize_file_stem(imp));
  switch (profile.style) {
    case DeclStyle::Isabelle:
      return isabelle_file(sanitize_file_stem(th.name), imports, blocks);
    case DeclStyle::Lean:
      return lean_file(imports, blocks);
    case DeclStyle::Rocq:
      return rocq_file(imports, true, blocks);
  }
  return "";
}

std::string render_goal_file(const Corpus& corpus, size_t theory_index,
                             const Goal& goal, const TargetProfile& profile,
                             const EmitOptions& opts) {
  FileRenderer fr(corpus, profile, opts);
  const Theory& th = corpus.theories[theory_index];
  std::string stem = sanitize_file_stem(th.name);

  std::vector<std::string> blocks;
  std::vector<std::string> imports;
  if (opts.inline_dependencies)
    blocks = fr.visible_decls(theory_index);
  else
    imports.push_back(profile.style == DeclStyle::Isabelle ? "../lib/" + stem : stem);

  std::string gname = fr.names.escape(goal.name);
  std::string stmt = statement_quantifier(goal.statement, profile) +
                     fr.printer.term(prep_term(goal.statement, profile));
  switch (profile.style) {
    case DeclStyle::Isabelle: {
      blocks.push_back("lemma " + gname + ": \"" + stmt + "\"\n  " +
                       profile.placeholder);
      return isabelle_file(stem + "__" + sanitize_file_stem(goal.name), imports,
                           blocks);
    }
    case DeclStyle::Lean: {
      blocks.push_back("theorem " + gname + " : " + stmt + " := by\n  " +
                       profile.placeholder);
      return lean_file(imports, blocks);
    }
    case DeclStyle::Rocq: {
      blocks.push_back("Lemma " + gname + " : " + stmt + ".\nProof.\n" +
                       profile.placeholder);
      return rocq_file(imports, opts.inline_dependencies, blocks);
    }
  }
  return "";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string manifest_to_jsonl(const std::vector<ManifestRow>& rows) {
  std::string out;
  for (const auto& row : rows) {
    nlohmann::ordered_json j;
    if (!row.goal_id.empty()) j["goal_id"] = row.goal_id;
    if (!row.path.empty()) j["path"] = row.path;
    j["status"] = row.status;
    out += j.dump() + "\n";
  }
  return out;
}

EmitResult emit_corpus(const Corpus& corpus, const TargetProfile& profile,
                       const std::string& out_dir, const EmitOptions& opts) {
  namespace fs = std::filesystem;
  EmitResult res;

  std::map<std::string, std::string> stems;
  for (const auto& th : corpus.theories) {
    std::string stem = sanitize_file_stem(th.name);
    auto [it, fresh] = stems.emplace(stem, th.name);
    if (!fresh)
      throw ValidationError("theory names '" + it->second + "' and '" + th.name +
                            "' collide as file name '" + stem + "'");
  }

  std::vector<size_t> order = topo_order(corpus);
  fs::path root = fs::path(out_dir) / profile.id;
  std::error_code ec;
  fs::create_directories(root / "goals", ec);
  if (ec) throw IoError("cannot create output directory '" + root.string() + "'");
  if (!opts.inline_dependencies) fs::create_directories(root / "lib");

  for (size_t ti : order) {
    const Theory& th = corpus.theories[ti];
    std::string stem = sanitize_file_stem(th.name);
    if (!opts.inline_dependencies) {
      std::string fname = stem + "." + profile.file_ext;
      write_file(root / "lib" / fname,
                 render_library_file(corpus, ti, profile, opts));
      res.rows.push_back({"", profile.id + "/lib/" + fname, "library"});
    }
    for (const auto& d : th.decls) {
      const auto* g = std::get_if<Goal>(&d.node);
      if (!g) continue;
      std::string goal_id = th.name + "." + g->name;
      if (!profile.supports_non_uniform) {
        std::set<std::string> culprits = non_uniform_dependencies(corpus, ti, *g);
        if (!culprits.empty()) {
          res.rows.push_back({goal_id, "", "circumvented"});
          res.warnings.push_back("goal " + goal_id + " depends on non-uniform datatype '" +
                                 *culprits.begin() + "', which " + profile.id +
                                 " cannot express; goal circumvented");
          continue;
        }
      }
      std::string fname =
          stem + "__" + sanitize_file_stem(g->name) + "." + profile.file_ext;
      write_file(root / "goals" / fname,
                 render_goal_file(corpus, ti, *g, profile, opts));
      res.rows.push_back({goal_id, profile.id + "/goals/" + fname, "emitted"});
    }
  }
  write_file(root / "manifest.jsonl", manifest_to_jsonl(res.rows));
  return res;
}

}  // namespace vcforge
