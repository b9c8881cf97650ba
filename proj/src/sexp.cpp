#include "vcforge/sexp.hpp"

#include <cctype>
#include <sstream>

#include "vcforge/errors.hpp"

namespace vcforge {

// --- printing ---------------------------------------------------------------

static void escape_string_into(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
}

static void ty_into(const TyPtr& t, std::string& out) {
  if (const auto* v = t->as<TyVar>()) {
    out += "(tyvar " + v->name + ")";
  } else if (const auto* c = t->as<TyCon>()) {
    out += "(tycon " + c->name;
    for (const auto& a : c->args) {
      out += ' ';
      ty_into(a, out);
    }
    out += ')';
  } else if (const auto* a = t->as<TyArrow>()) {
    out += "(tyarrow ";
    ty_into(a->dom, out);
    out += ' ';
    ty_into(a->cod, out);
    out += ')';
  } else {
    const auto* tt = t->as<TyTuple>();
    out += "(tytuple";
    for (const auto& e : tt->elems) {
      out += ' ';
      ty_into(e, out);
    }
    out += ')';
  }
}

static void pattern_into(const PatternPtr& p, std::string& out) {
  if (const auto* v = p->as<PVar>()) {
    out += "(pvar " + v->name + ")";
  } else if (p->as<PWild>()) {
    out += "(pwild)";
  } else if (const auto* c = p->as<PCon>()) {
    out += "(pcon " + c->ctor;
    for (const auto& a : c->args) {
      out += ' ';
      pattern_into(a, out);
    }
    out += ')';
  } else if (const auto* t = p->as<PTuple>()) {
    out += "(ptuple";
    for (const auto& e : t->elems) {
      out += ' ';
      pattern_into(e, out);
    }
    out += ')';
  } else {
    const auto* as = p->as<PAs>();
    out += "(pas " + as->name + ' ';
    pattern_into(as->inner, out);
    out += ')';
  }
}

static void term_into(const TermPtr& t, std::string& out) {
  if (const auto* v = t->as<Var>()) {
    out += "(var " + v->name + ")";
  } else if (const auto* c = t->as<Const>()) {
    out += "(const " + c->name + ")";
  } else if (const auto* a = t->as<App>()) {
    out += "(app ";
    term_into(a->fn, out);
    out += ' ';
    term_into(a->arg, out);
    out += ')';
  } else if (const auto* ab = t->as<Abs>()) {
    out += "(abs " + ab->binder + ' ';
    ty_into(ab->binder_ty, out);
    out += ' ';
    term_into(ab->body, out);
    out += ')';
  } else if (const auto* l = t->as<Let>()) {
    out += "(let " + l->binder + ' ';
    term_into(l->value, out);
    out += ' ';
    term_into(l->body, out);
    out += ')';
  } else if (const auto* c2 = t->as<Case>()) {
    out += "(case ";
    term_into(c2->scrutinee, out);
    for (const auto& br : c2->branches) {
      out += " (";
      pattern_into(br.pat, out);
      out += ' ';
      term_into(br.body, out);
      out += ')';
    }
    out += ')';
  } else if (const auto* tp = t->as<Tuple>()) {
    out += "(tuple";
    for (const auto& e : tp->elems) {
      out += ' ';
      term_into(e, out);
    }
    out += ')';
  } else if (const auto* n = t->as<NumLit>()) {
    out += "(num " + n->value.str() + ")";
  } else {
    out += "(str ";
    escape_string_into(t->as<StrLit>()->value, out);
    out += ')';
  }
}

std::string term_to_sexp(const TermPtr& t) {
  std::string out;
  term_into(t, out);
  return out;
}

std::string ty_to_sexp(const TyPtr& t) {
  std::string out;
  ty_into(t, out);
  return out;
}

std::string pattern_to_sexp(const PatternPtr& p) {
  std::string out;
  pattern_into(p, out);
  return out;
}

// --- parsing ------------------------------------------------------------------

namespace {

struct SexpParser {
  const std::string& src;
  size_t pos = 0;

  explicit SexpParser(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg) {
    SourceLoc loc{1, 1};
    for (size_t i = 0; i < pos && i < src.size(); ++i) {
      if (src[i] == '\n') {
        ++loc.line;
        loc.column = 1;
      } else {
        ++loc.column;
      }
    }
    throw ParseError(loc, msg);
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  void expect(char c) {
    skip_ws();
    if (pos >= src.size() || src[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  }

  bool peek_close() {
    skip_ws();
    return pos < src.size() && src[pos] == ')';
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::string ident() {
    skip_ws();
    if (pos >= src.size() || !ident_start(src[pos])) fail("expected identifier");
    size_t start = pos;
    while (pos < src.size() && ident_char(src[pos])) ++pos;
    while (pos < src.size() && src[pos] == '.' && pos + 1 < src.size() &&
           ident_start(src[pos + 1])) {
      ++pos;
      while (pos < src.size() && ident_char(src[pos])) ++pos;
    }
    return src.substr(start, pos - start);
  }

  std::string keyword() {
    expect('(');
    return ident();
  }

  std::string string_lit() {
    skip_ws();
    if (pos >= src.size() || src[pos] != '"') fail("expected string literal");
    ++pos;
    std::string out;
    while (pos < src.size() && src[pos] != '"') {
      char c = src[pos++];
      if (c == '\\') {
        if (pos >= src.size()) fail("dangling escape");
        char e = src[pos++];
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          default: fail("unknown escape");
        }
      } else {
        out += c;
      }
    }
    if (pos >= src.size()) fail("unterminated string literal");
    ++pos;
    return out;
  }

  Numeral number() {
    skip_ws();
    size_t start = pos;
    if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) ++pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos == start) fail("expected integer");
    try {
      return Numeral::parse(src.substr(start, pos - start));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  TyPtr ty() {
    std::string kw = keyword();
    TyPtr result;
    if (kw == "tyvar") {
      result = ty_var(ident());
    } else if (kw == "tycon") {
      std::string name = ident();
      std::vector<TyPtr> args;
      while (!peek_close()) args.push_back(ty());
      result = ty_con(name, std::move(args));
    } else if (kw == "tyarrow") {
      auto dom = ty();
      auto cod = ty();
      result = ty_arrow(dom, cod);
    } else if (kw == "tytuple") {
      std::vector<TyPtr> elems;
      while (!peek_close()) elems.push_back(ty());
      if (elems.size() < 2) fail("tytuple needs at least two elements");
      result = ty_tuple(std::move(elems));
    } else {
      fail("unknown type form '" + kw + "'");
    }
    expect(')');
    return result;
  }

  PatternPtr pattern() {
    std::string kw = keyword();
    PatternPtr result;
    if (kw == "pvar") {
      result = p_var(ident());
    } else if (kw == "pwild") {
      result = p_wild();
    } else if (kw == "pcon") {
      std::string ctor = ident();
      std::vector<PatternPtr> args;
      while (!peek_close()) args.push_back(pattern());
      result = p_con(ctor, std::move(args));
    } else if (kw == "ptuple") {
      std::vector<PatternPtr> elems;
      while (!peek_close()) elems.push_back(pattern());
      if (elems.size() < 2) fail("ptuple needs at least two elements");
      result = p_tuple(std::move(elems));
    } else if (kw == "pas") {
      std::string name = ident();
      result = p_as(name, pattern());
    } else {
      fail("unknown pattern form '" + kw + "'");
    }
    expect(')');
    return result;
  }

  TermPtr term() {
    std::string kw = keyword();
    TermPtr result;
    if (kw == "var") {
      result = mk_var(ident());
    } else if (kw == "const") {
      result = mk_const(ident());
    } else if (kw == "app") {
      auto fn = term();
      auto arg = term();
      result = mk_app(fn, arg);
    } else if (kw == "abs") {
      std::string binder = ident();
      auto bty = ty();
      result = mk_abs(binder, bty, term());
    } else if (kw == "let") {
      std::string binder = ident();
      auto value = term();
      result = mk_let(binder, value, term());
    } else if (kw == "case") {
      auto scrut = term();
      std::vector<CaseBranch> branches;
      while (!peek_close()) {
        expect('(');
        auto pat = pattern();
        auto body = term();
        expect(')');
        branches.push_back({pat, body});
      }
      if (branches.empty()) fail("case needs at least one branch");
      result = mk_case(scrut, std::move(branches));
    } else if (kw == "tuple") {
      std::vector<TermPtr> elems;
      while (!peek_close()) elems.push_back(term());
      if (elems.size() < 2) fail("tuple needs at least two elements");
      result = mk_tuple(std::move(elems));
    } else if (kw == "num") {
      result = mk_num(number());
    } else if (kw == "str") {
      result = mk_str(string_lit());
    } else {
      fail("unknown term form '" + kw + "'");
    }
    expect(')');
    return result;
  }
};

}  // namespace

TermPtr term_from_sexp(const std::string& text) {
  SexpParser p(text);
  auto t = p.term();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input after term");
  return t;
}

}  // namespace vcforge
