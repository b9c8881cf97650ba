#include "vcforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "vcforge/errors.hpp"

namespace vcforge {

size_t goal_size(const TermPtr& t) {
  size_t n = 0;
  fold_atoms(t, [&](const Term&) { ++n; });
  return n;
}

size_t goal_depth(const TermPtr& t) {
  if (t->as<Var>() || t->as<Const>() || t->as<NumLit>() || t->as<StrLit>())
    return 1;
  if (t->as<App>()) {
    auto [head, args] = app_spine(t);
    size_t d = goal_depth(head);
    for (const auto& a : args) d = std::max(d, goal_depth(a));
    return 1 + d;
  }
  if (const Abs* a = t->as<Abs>()) return 1 + goal_depth(a->body);
  if (const Let* l = t->as<Let>())
    return 1 + std::max(goal_depth(l->value), goal_depth(l->body));
  if (const Case* c = t->as<Case>()) {
    size_t d = goal_depth(c->scrutinee);
    for (const auto& b : c->branches) d = std::max(d, goal_depth(b.body));
    return 1 + d;
  }
  size_t d = 0;
  for (const auto& e : t->as<Tuple>()->elems) d = std::max(d, goal_depth(e));
  return 1 + d;
}

size_t quantifier_count(const TermPtr& t) {
  size_t n = 0;
  fold_atoms(t, [&](const Term& atom) {
    if (const Const* c = std::get_if<Const>(&atom.node()))
      if (c->name == "forall" || c->name == "exists") ++n;
  });
  return n;
}

// --- taxonomy ---------------------------------------------------------------

const std::vector<std::string>& taxonomy_category_ids() {
  static const std::vector<std::string> ids = {
      "IntegerArith", "NonLinearArith",   "FloatArith", "ListSequence",
      "SetMapBag",    "TreeStringMatrix", "Memory",     "CustomDatatype"};
  return ids;
}

Taxonomy builtin_taxonomy() {
  Taxonomy tax;
  tax.categories = {
      {"IntegerArith",
       {"Int.add", "Int.sub", "Int.mul", "Int.div", "Int.mod", "Int.neg",
        "Int.pow", "Int.min", "Int.max", "Int.abs", "Why3.abs", "lt", "le",
        "gt", "ge", "Nat.of_int", "Int.int"},
       {}},
      {"NonLinearArith",
       {"Int.mul", "Int.div", "Int.pow", "Float.mul", "Float.div"},
       {}},
      {"FloatArith",
       {"Float.add", "Float.sub", "Float.mul", "Float.div", "Float.neg",
        "Float.lt", "Float.le", "Float.eq", "Float.of_int",
        "Float.is_finite"},
       {"float", "real"}},
      {"ListSequence",
       {"List.cons", "List.nil", "List.length", "List.append", "List.mem",
        "List.get", "Seq.get", "Seq.length", "Seq.concat", "Array.get",
        "Array.set", "Array.length", "Array.make", "Why3.length", "Why3.get",
        "Why3.set"},
       {"list", "seq", "array"}},
      {"SetMapBag",
       {"Set.mem", "Set.add", "Set.union", "Set.inter", "Set.empty",
        "Map.get", "Map.set", "Map.domain", "Bag.count", "Bag.add",
        "Bag.union", "Why3.mem"},
       {"set", "map", "bag"}},
      {"TreeStringMatrix",
       {"String.length", "String.concat", "String.sub", "Matrix.get",
        "Matrix.set", "Matrix.rows", "Matrix.cols"},
       {"string", "matrix", "tree"}},
      {"Memory",
       {"Memory.valid_rd", "Memory.valid_rw", "Memory.load", "Memory.store",
        "Memory.shift", "Memory.base_addr"},
       {"memory", "pointer"}},
      {"CustomDatatype", {}, {}},
  };
  tax.system_library_types = {"int",  "bool",   "nat",    "real",   "float",
                              "string", "unit", "list",   "array",  "set",
                              "bag",  "seq",    "matrix", "map",    "memory",
                              "pointer", "tree"};
  return tax;
}

Taxonomy parse_taxonomy(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw RuleFormatError(std::string("taxonomy file is not valid JSON: ") +
                          e.what());
  }
  if (!doc.is_object() || !doc.contains("categories") ||
      !doc["categories"].is_array())
    throw RuleFormatError("taxonomy file needs a 'categories' array");

  auto names = [](const nlohmann::json& j, const char* what) {
    std::set<std::string> out;
    if (j.is_null()) return out;
    if (!j.is_array())
      throw RuleFormatError(std::string(what) + " must be a string array");
    for (const auto& e : j) {
      if (!e.is_string())
        throw RuleFormatError(std::string(what) + " must be a string array");
      out.insert(e.get<std::string>());
    }
    return out;
  };

  const auto& known = taxonomy_category_ids();
  Taxonomy tax;
  std::set<std::string> seen;
  for (const auto& c : doc["categories"]) {
    if (!c.is_object() || !c.contains("id") || !c["id"].is_string())
      throw RuleFormatError("every category needs an 'id' string");
    TaxonomyCategory cat;
    cat.id = c["id"].get<std::string>();
    if (std::find(known.begin(), known.end(), cat.id) == known.end())
      throw RuleFormatError("unknown category id '" + cat.id + "'");
    if (!seen.insert(cat.id).second)
      throw RuleFormatError("category id '" + cat.id + "' appears twice");
    cat.constants = names(c.value("constants", nlohmann::json()), "'constants'");
    cat.tycons = names(c.value("tycons", nlohmann::json()), "'tycons'");
    tax.categories.push_back(std::move(cat));
  }
  for (const std::string& id : known)
    if (!seen.count(id))
      throw RuleFormatError("category id '" + id + "' is missing");
  tax.system_library_types =
      names(doc.value("system_library_types", nlohmann::json()),
            "'system_library_types'");
  return tax;
}

Taxonomy load_taxonomy_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw IoError("cannot read taxonomy file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_taxonomy(ss.str());
}

// --- classification -----------------------------------------------------------

namespace {

void ty_mentions(const TyPtr& ty, std::set<std::string>& out) {
  if (!ty) return;
  if (const TyCon* c = ty->as<TyCon>()) {
    out.insert(c->name);
    for (const auto& a : c->args) ty_mentions(a, out);
  } else if (const TyArrow* a = ty->as<TyArrow>()) {
    ty_mentions(a->dom, out);
    ty_mentions(a->cod, out);
  } else if (const TyTuple* t = ty->as<TyTuple>()) {
    for (const auto& e : t->elems) ty_mentions(e, out);
  }
}

struct Classifier {
  const ScopeInfo& scope;
  const Taxonomy& tax;
  const TaxonomyCategory* nonlinear = nullptr;
  std::set<std::string> fold_heads;  // operators folded over literals

  std::map<std::string, CategoryUsage> usage;
  std::map<std::string, std::set<std::string>> distinct;
  size_t categorized_occurrences = 0;
  std::set<std::string> categorized_names;

  // innermost binding last; null type for binders without an annotation
  std::map<std::string, std::vector<TyPtr>> env;
  bool nl_pending = false;

  Classifier(const ScopeInfo& s, const Taxonomy& t) : scope(s), tax(t) {
    for (const auto& cat : tax.categories) {
      if (cat.id == "NonLinearArith") nonlinear = &cat;
      if (cat.id == "IntegerArith" || cat.id == "FloatArith" ||
          cat.id == "NonLinearArith")
        fold_heads.insert(cat.constants.begin(), cat.constants.end());
    }
  }

  // A literal, or arithmetic over literals; anything else could vary.
  bool constant_expr(const TermPtr& t) const {
    if (t->as<NumLit>() || t->as<StrLit>()) return true;
    if (!t->as<App>()) return false;
    auto [head, args] = app_spine(t);
    const Const* h = head->as<Const>();
    if (!h || !fold_heads.count(h->name)) return false;
    for (const auto& a : args)
      if (!constant_expr(a)) return false;
    return true;
  }

  void contribute(const std::string& cat, const std::string& op, bool& any) {
    ++usage[cat].op_occurrences;
    distinct[cat].insert(op);
    any = true;
  }

  void atom(const std::string& name, bool named_constant,
            const std::set<std::string>& tys, bool nl) {
    bool any = false;
    for (const auto& cat : tax.categories) {
      if (cat.id == "NonLinearArith" || cat.id == "CustomDatatype") continue;
      bool hit = named_constant && cat.constants.count(name);
      if (!hit)
        for (const std::string& ty : tys)
          if (cat.tycons.count(ty)) {
            hit = true;
            break;
          }
      if (hit) contribute(cat.id, name, any);
    }
    if (nl) contribute("NonLinearArith", name, any);
    for (const std::string& ty : tys)
      if (scope.datatypes.count(ty) && !tax.system_library_types.count(ty)) {
        contribute("CustomDatatype", name, any);
        break;
      }
    if (any) {
      ++categorized_occurrences;
      categorized_names.insert(name);
    }
  }

  void bind(const std::string& name, const TyPtr& ty) {
    env[name].push_back(ty);
  }
  void unbind(const std::string& name) {
    auto it = env.find(name);
    it->second.pop_back();
    if (it->second.empty()) env.erase(it);
  }

  void walk(const TermPtr& t) {
    bool nl = std::exchange(nl_pending, false);
    if (const Var* v = t->as<Var>()) {
      std::set<std::string> tys;
      auto it = env.find(v->name);
      if (it != env.end() && it->second.back()) ty_mentions(it->second.back(), tys);
      atom(v->name, false, tys, nl);
      return;
    }
    if (const Const* c = t->as<Const>()) {
      auto it = scope.constant_tycons.find(c->name);
      static const std::set<std::string> none;
      atom(c->name, true, it != scope.constant_tycons.end() ? it->second : none,
           nl);
      return;
    }
    if (t->as<NumLit>() || t->as<StrLit>()) return;
    if (t->as<App>()) {
      auto [head, args] = app_spine(t);
      if (const Const* h = head->as<Const>())
        nl_pending = nonlinear && args.size() == 2 &&
                     nonlinear->constants.count(h->name) &&
                     !constant_expr(args[0]) && !constant_expr(args[1]);
      walk(head);
      for (const auto& a : args) walk(a);
      return;
    }
    if (const Abs* a = t->as<Abs>()) {
      bind(a->binder, a->binder_ty);
      walk(a->body);
      unbind(a->binder);
      return;
    }
    if (const Let* l = t->as<Let>()) {
      walk(l->value);
      bind(l->binder, nullptr);
      walk(l->body);
      unbind(l->binder);
      return;
    }
    if (const Case* c = t->as<Case>()) {
      walk(c->scrutinee);
      for (const auto& b : c->branches) {
        std::vector<std::string> vars = pattern_vars(b.pat);
        for (const auto& v : vars) bind(v, nullptr);
        walk(b.body);
        for (const auto& v : vars) unbind(v);
      }
      return;
    }
    for (const auto& e : t->as<Tuple>()->elems) walk(e);
  }
};

}  // namespace

ScopeInfo scope_info(const Corpus& c, size_t theory) {
  ScopeInfo info;
  for (size_t ti : visible_theories(c, theory)) {
    for (const Declaration& d : c.theories[ti].decls) {
      if (const Datatype* dt = std::get_if<Datatype>(&d.node)) {
        info.datatypes.insert(dt->name);
        for (const DatatypeCtor& ctor : dt->constructors) {
          std::set<std::string>& s = info.constant_tycons[ctor.name];
          s.insert(dt->name);
          for (const TyPtr& a : ctor.args) ty_mentions(a, s);
        }
      } else if (const FunDef* f = std::get_if<FunDef>(&d.node)) {
        std::set<std::string>& s = info.constant_tycons[f->name];
        for (const auto& [pname, pty] : f->params) {
          (void)pname;
          ty_mentions(pty, s);
        }
        ty_mentions(f->ret, s);
      }
    }
  }
  return info;
}

GoalMetrics classify(const TermPtr& t, const ScopeInfo& scope,
                     const Taxonomy& tax) {
  Classifier cl(scope, tax);
  cl.walk(t);
  GoalMetrics m;
  for (auto& [cat, use] : cl.usage) {
    use.distinct_ops = cl.distinct[cat].size();
    m.per_category[cat] = use;
    m.involved.insert(cat);
  }
  m.categorized.op_occurrences = cl.categorized_occurrences;
  m.categorized.distinct_ops = cl.categorized_names.size();
  return m;
}

GoalMetrics goal_metrics(const std::string& goal_id, const TermPtr& statement,
                         const ScopeInfo& scope, const Taxonomy& tax) {
  GoalMetrics m = classify(statement, scope, tax);
  m.goal_id = goal_id;
  m.size = goal_size(statement);
  m.depth = goal_depth(statement);
  m.quantifier_count = quantifier_count(statement);
  return m;
}

std::vector<GoalMetrics> corpus_metrics(const Corpus& c, const Taxonomy& tax) {
  std::vector<GoalMetrics> out;
  for (size_t ti = 0; ti < c.theories.size(); ++ti) {
    ScopeInfo scope;
    bool have_scope = false;
    for (const Declaration& d : c.theories[ti].decls) {
      const Goal* g = std::get_if<Goal>(&d.node);
      if (!g) continue;
      if (!have_scope) {
        scope = scope_info(c, ti);
        have_scope = true;
      }
      out.push_back(goal_metrics(c.theories[ti].name + "." + g->name,
                                 g->statement, scope, tax));
    }
  }
  return out;
}

// --- aggregation -----------------------------------------------------------

double nearest_rank_percentile(std::vector<double> values, double p) {
  if (values.empty()) throw EmptyInput("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  size_t n = values.size();
  size_t rank = static_cast<size_t>(std::ceil(p / 100.0 * n));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return values[rank - 1];
}

namespace {

StatLine stat_line(std::vector<double> values) {
  // summed in sorted order so permutations of the goal list agree exactly
  std::sort(values.begin(), values.end());
  double sum = 0;
  for (double v : values) sum += v;
  StatLine s;
  s.average = sum / values.size();
  s.p25 = nearest_rank_percentile(values, 25);
  s.p75 = nearest_rank_percentile(values, 75);
  return s;
}

}  // namespace

std::vector<CategoryRow> aggregate(const std::vector<GoalMetrics>& all,
                                   const Taxonomy& tax) {
  if (all.empty()) throw EmptyInput("no goal metrics to aggregate");
  std::vector<CategoryRow> rows;
  for (const auto& cat : tax.categories) {
    std::vector<double> occ, dis, size, depth, quant;
    for (const GoalMetrics& g : all) {
      auto it = g.per_category.find(cat.id);
      if (it == g.per_category.end()) continue;
      occ.push_back(static_cast<double>(it->second.op_occurrences));
      dis.push_back(static_cast<double>(it->second.distinct_ops));
      size.push_back(static_cast<double>(g.size));
      depth.push_back(static_cast<double>(g.depth));
      quant.push_back(static_cast<double>(g.quantifier_count));
    }
    if (occ.empty()) continue;
    CategoryRow row;
    row.id = cat.id;
    row.cases = occ.size();
    row.op_occurrences = stat_line(std::move(occ));
    row.distinct_ops = stat_line(std::move(dis));
    row.size = stat_line(std::move(size));
    row.depth = stat_line(std::move(depth));
    row.quantifiers = stat_line(std::move(quant));
    rows.push_back(std::move(row));
  }

  CategoryRow total;
  total.id = "All";
  total.cases = all.size();
  std::vector<double> occ, dis, size, depth, quant;
  for (const GoalMetrics& g : all) {
    occ.push_back(static_cast<double>(g.categorized.op_occurrences));
    dis.push_back(static_cast<double>(g.categorized.distinct_ops));
    size.push_back(static_cast<double>(g.size));
    depth.push_back(static_cast<double>(g.depth));
    quant.push_back(static_cast<double>(g.quantifier_count));
  }
  total.op_occurrences = stat_line(std::move(occ));
  total.distinct_ops = stat_line(std::move(dis));
  total.size = stat_line(std::move(size));
  total.depth = stat_line(std::move(depth));
  total.quantifiers = stat_line(std::move(quant));
  rows.push_back(std::move(total));
  return rows;
}

}  // namespace vcforge
