#include "vcforge/rewrite.hpp"

#include <cctype>

#include <json.hpp>

#include "vcforge/errors.hpp"

namespace vcforge {

namespace {

bool looks_numeric(const std::string& s) {
  size_t i = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

ContractumNode parse_contractum(const nlohmann::json& j, size_t arity) {
  ContractumNode node;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (!s.empty() && s[0] == '$') {
      node.kind = ContractumNode::Kind::Placeholder;
      if (!looks_numeric(s.substr(1)) || s[1] == '-' || s[1] == '+')
        throw IllegalContractum("malformed placeholder '" + s + "'");
      node.index = std::stoul(s.substr(1));
      if (node.index >= arity)
        throw IllegalContractum("placeholder '" + s + "' exceeds rule arity " +
                                std::to_string(arity));
      return node;
    }
    if (looks_numeric(s)) {
      node.kind = ContractumNode::Kind::Number;
      node.value = Numeral::parse(s);
      return node;
    }
    if (!valid_identifier(s, true))
      throw IllegalContractum("'" + s + "' is not a constant, literal, or placeholder");
    node.kind = ContractumNode::Kind::Constant;
    node.name = s;
    return node;
  }
  if (j.is_number_integer()) {
    node.kind = ContractumNode::Kind::Number;
    node.value = Numeral::parse(std::to_string(j.get<long long>()));
    return node;
  }
  if (j.is_array()) {
    if (j.empty()) throw RuleFormatError("empty contractum spine");
    node.kind = ContractumNode::Kind::Spine;
    for (const auto& e : j) node.parts.push_back(parse_contractum(e, arity));
    if (node.parts[0].kind == ContractumNode::Kind::Number)
      throw IllegalContractum("numeric literal cannot head an application");
    return node;
  }
  throw RuleFormatError("contractum must be a string, integer, or array");
}

TermPtr instantiate(const ContractumNode& c, const std::vector<TermPtr>& args) {
  switch (c.kind) {
    case ContractumNode::Kind::Constant:
      return mk_const(c.name);
    case ContractumNode::Kind::Number:
      return mk_num(c.value);
    case ContractumNode::Kind::Placeholder:
      return args[c.index];
    case ContractumNode::Kind::Spine: {
      TermPtr head = instantiate(c.parts[0], args);
      std::vector<TermPtr> spine_args;
      for (size_t i = 1; i < c.parts.size(); ++i)
        spine_args.push_back(instantiate(c.parts[i], args));
      return build_app(head, spine_args);
    }
  }
  return nullptr;  // unreachable
}

}  // namespace

void RuleSet::add(RewriteRule rule) {
  auto key = std::make_pair(rule.head, rule.arity);
  if (rules_.count(key)) {
    warnings_.push_back("rule for '" + rule.head + "'/" + std::to_string(rule.arity) +
                        " is shadowed by an earlier rule and will never fire");
    return;
  }
  rules_.emplace(std::move(key), std::move(rule));
}

const RewriteRule* RuleSet::find(const std::string& head, size_t arity) const {
  auto it = rules_.find({head, arity});
  return it == rules_.end() ? nullptr : &it->second;
}

RuleSet RuleSet::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw RuleFormatError(std::string("rule file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array())
    throw RuleFormatError("rule file must be an object with a 'rules' array");

  RuleSet set;
  for (const auto& entry : doc["rules"]) {
    if (!entry.is_object() || !entry.contains("head") || !entry.contains("arity") ||
        !entry.contains("contractum"))
      throw RuleFormatError("each rule needs 'head', 'arity', and 'contractum'");
    RewriteRule rule;
    if (!entry["head"].is_string())
      throw RuleFormatError("rule 'head' must be a string");
    rule.head = entry["head"].get<std::string>();
    if (!valid_identifier(rule.head, true))
      throw RuleFormatError("rule head '" + rule.head + "' is not a valid identifier");
    if (!entry["arity"].is_number_unsigned())
      throw RuleFormatError("rule 'arity' must be a non-negative integer");
    rule.arity = entry["arity"].get<size_t>();
    rule.contractum = parse_contractum(entry["contractum"], rule.arity);
    set.add(std::move(rule));
  }
  return set;
}

// --- reduction ---------------------------------------------------------------

namespace {

struct Rewriter {
  const RuleSet& rules;
  size_t budget;
  RewriteStats& stats;
  std::vector<size_t> path;

  std::string path_string() const {
    if (path.empty()) return "root";
    std::string out;
    for (size_t i = 0; i < path.size(); ++i) {
      if (i) out += '.';
      out += std::to_string(path[i]);
    }
    return out;
  }

  TermPtr at(size_t child, const TermPtr& t) {
    path.push_back(child);
    TermPtr out = normalize(t);
    path.pop_back();
    return out;
  }

  TermPtr descend(const TermPtr& t) {
    if (const auto* a = t->as<App>()) {
      auto fn = at(0, a->fn);
      auto arg = at(1, a->arg);
      if (fn == a->fn && arg == a->arg) return t;
      return mk_app(fn, arg);
    }
    if (const auto* ab = t->as<Abs>()) {
      auto body = at(0, ab->body);
      if (body == ab->body) return t;
      return mk_abs(ab->binder, ab->binder_ty, body);
    }
    if (const auto* l = t->as<Let>()) {
      auto value = at(0, l->value);
      auto body = at(1, l->body);
      if (value == l->value && body == l->body) return t;
      return mk_let(l->binder, value, body);
    }
    if (const auto* c = t->as<Case>()) {
      auto scrut = at(0, c->scrutinee);
      std::vector<CaseBranch> branches;
      bool changed = scrut != c->scrutinee;
      for (size_t i = 0; i < c->branches.size(); ++i) {
        auto body = at(i + 1, c->branches[i].body);
        changed = changed || body != c->branches[i].body;
        branches.push_back({c->branches[i].pat, body});
      }
      if (!changed) return t;
      return mk_case(scrut, std::move(branches));
    }
    if (const auto* tp = t->as<Tuple>()) {
      std::vector<TermPtr> elems;
      bool changed = false;
      for (size_t i = 0; i < tp->elems.size(); ++i) {
        elems.push_back(at(i, tp->elems[i]));
        changed = changed || elems.back() != tp->elems[i];
      }
      if (!changed) return t;
      return mk_tuple(std::move(elems));
    }
    return t;  // Var, Const, NumLit, StrLit
  }

  TermPtr normalize(const TermPtr& t) {
    TermPtr cur = descend(t);
    for (;;) {
      auto [head, args] = app_spine(cur);
      const auto* c = head->as<Const>();
      if (!c) return cur;
      const RewriteRule* rule = rules.find(c->name, args.size());
      if (!rule) return cur;
      if (stats.fires >= budget)
        throw RewriteBudgetExceeded(path_string(), budget);
      ++stats.fires;
      cur = descend(instantiate(rule->contractum, args));
    }
  }
};

TermPtr map_children(const TermPtr& t, const std::function<TermPtr(const TermPtr&)>& f) {
  if (const auto* a = t->as<App>()) return mk_app(f(a->fn), f(a->arg));
  if (const auto* ab = t->as<Abs>()) return mk_abs(ab->binder, ab->binder_ty, f(ab->body));
  if (const auto* l = t->as<Let>()) return mk_let(l->binder, f(l->value), f(l->body));
  if (const auto* c = t->as<Case>()) {
    std::vector<CaseBranch> branches;
    for (const auto& br : c->branches) branches.push_back({br.pat, f(br.body)});
    return mk_case(f(c->scrutinee), std::move(branches));
  }
  if (const auto* tp = t->as<Tuple>()) {
    std::vector<TermPtr> elems;
    for (const auto& e : tp->elems) elems.push_back(f(e));
    return mk_tuple(std::move(elems));
  }
  return t;
}

bool spine_is(const TermPtr& t, const std::string& name, size_t arity,
              std::vector<TermPtr>* args_out = nullptr) {
  auto [head, args] = app_spine(t);
  const auto* c = head->as<Const>();
  if (!c || c->name != name || args.size() != arity) return false;
  if (args_out) *args_out = args;
  return true;
}

TermPtr double_negation(const TermPtr& t) {
  TermPtr cur = map_children(t, double_negation);
  std::vector<TermPtr> outer;
  if (spine_is(cur, "not", 1, &outer)) {
    std::vector<TermPtr> inner;
    if (spine_is(outer[0], "not", 1, &inner)) return inner[0];
  }
  return cur;
}

bool already_guarded(const TermPtr& e) {
  std::vector<TermPtr> args;
  if (!spine_is(e, "Int.max", 2, &args)) return false;
  const auto* zero = args[0]->as<NumLit>();
  return zero && zero->value.str() == "0";
}

TermPtr nat_guard(const TermPtr& t) {
  TermPtr cur = map_children(t, nat_guard);
  std::vector<TermPtr> args;
  if (spine_is(cur, "Nat.of_int", 1, &args) && !already_guarded(args[0])) {
    auto guarded = build_app(mk_const("Int.max"), {mk_num(Numeral::parse("0")), args[0]});
    return mk_app(mk_const("Nat.of_int"), guarded);
  }
  return cur;
}

const std::map<std::string, TermPtr (*)(const TermPtr&)>& registry() {
  static const std::map<std::string, TermPtr (*)(const TermPtr&)> fns = {
      {"double_negation", &double_negation},
      {"nat_guard", &nat_guard},
  };
  return fns;
}

}  // namespace

TermPtr rewrite_term(const TermPtr& t, const RuleSet& rules, size_t budget,
                     RewriteStats* stats) {
  RewriteStats local;
  Rewriter rw{rules, budget, stats ? *stats : local, {}};
  return rw.normalize(t);
}

const std::vector<std::string>& transformer_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) {
      (void)fn;
      out.push_back(name);
    }
    return out;
  }();
  return names;
}

TermPtr apply_transformer(const std::string& name, const TermPtr& t) {
  auto it = registry().find(name);
  if (it == registry().end())
    throw Error("unknown transformer pass '" + name + "'");
  return it->second(t);
}

}  // namespace vcforge
