#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "support/gen.hpp"
#include "support/oracles.hpp"
#include "vcforge/errors.hpp"
#include "vcforge/metrics.hpp"

using namespace vcforge;

namespace {

TermPtr v(const std::string& n) { return mk_var(n); }
TermPtr c(const std::string& n) { return mk_const(n); }
TermPtr num(long n) { return mk_num(Numeral::parse(std::to_string(n))); }
template <class... Ts>
TermPtr ap(TermPtr f, Ts... args) {
  return build_app(std::move(f), {std::move(args)...});
}
TyPtr ty(const std::string& n) { return ty_con(n); }

// binary-application convention: no spine flattening
size_t binary_depth(const TermPtr& t) {
  if (t->as<Var>() || t->as<Const>() || t->as<NumLit>() || t->as<StrLit>())
    return 1;
  if (const App* a = t->as<App>())
    return 1 + std::max(binary_depth(a->fn), binary_depth(a->arg));
  if (const Abs* a = t->as<Abs>()) return 1 + binary_depth(a->body);
  if (const Let* l = t->as<Let>())
    return 1 + std::max(binary_depth(l->value), binary_depth(l->body));
  if (const Case* cs = t->as<Case>()) {
    size_t d = binary_depth(cs->scrutinee);
    for (const auto& b : cs->branches) d = std::max(d, binary_depth(b.body));
    return 1 + d;
  }
  size_t d = 0;
  for (const auto& e : t->as<Tuple>()->elems) d = std::max(d, binary_depth(e));
  return 1 + d;
}

const CategoryUsage& usage(const GoalMetrics& m, const std::string& cat) {
  static const CategoryUsage zero;
  auto it = m.per_category.find(cat);
  return it == m.per_category.end() ? zero : it->second;
}

}  // namespace

TEST_CASE("size counts atom occurrences") {
  CHECK(goal_size(num(3)) == 1);
  CHECK(goal_size(ap(c("eq"), ap(c("f"), v("x")), v("y"))) == 4);
  CHECK(goal_size(mk_abs("x", ty("int"), v("x"))) == 1);
  CHECK(goal_size(mk_tuple({v("a"), v("b"), num(0)})) == 3);
}

TEST_CASE("depth treats spine arguments as siblings") {
  CHECK(goal_depth(c("c")) == 1);
  CHECK(goal_depth(ap(c("f"), v("a"), v("b"))) == 2);
  CHECK(goal_depth(ap(c("f"), ap(c("g"), v("a")), v("b"))) == 3);
  CHECK(goal_depth(mk_abs("x", ty("int"), ap(c("f"), v("x")))) == 3);
  CHECK(goal_depth(mk_let("x", num(1), v("x"))) == 2);
  CHECK(goal_depth(mk_tuple({v("a"), ap(c("f"), v("b"))})) == 3);
  TermPtr branchy = mk_case(v("s"), {{p_con("C", {p_var("x")}), v("x")},
                                     {p_wild(), ap(c("f"), v("s"))}});
  CHECK(goal_depth(branchy) == 3);
}

TEST_CASE("quantifiers are counted by constant occurrence") {
  TermPtr two = ap(c("forall"),
                   mk_abs("x", ty("int"),
                          ap(c("exists"), mk_abs("y", ty("int"),
                                                 ap(c("P"), v("x"), v("y"))))));
  CHECK(quantifier_count(two) == 2);
  CHECK(quantifier_count(ap(c("eq"), v("x"), v("x"))) == 0);
}

TEST_CASE("structural metrics agree with the independent oracles") {
  std::mt19937 rng(20260816);
  testing::GenConfig cfg;
  const std::set<std::string> quants = {"forall", "exists"};
  for (int i = 0; i < 500; ++i) {
    TermPtr t = testing::random_term(rng, cfg);
    CHECK(goal_size(t) == testing::leaf_count_oracle(t));
    CHECK(goal_depth(t) == testing::depth_oracle(t));
    CHECK(quantifier_count(t) == testing::const_count_oracle(t, quants));
    // flattening application spines never increases height
    CHECK(goal_depth(t) <= binary_depth(t));
  }
}

TEST_CASE("the shipped taxonomy file matches the builtin tables") {
  Taxonomy file = load_taxonomy_file(
      (std::filesystem::path(VCFORGE_SOURCE_DIR) / "data" / "taxonomy.json")
          .string());
  Taxonomy code = builtin_taxonomy();
  REQUIRE(file.categories.size() == code.categories.size());
  for (size_t i = 0; i < file.categories.size(); ++i) {
    CHECK(file.categories[i].id == code.categories[i].id);
    CHECK(file.categories[i].constants == code.categories[i].constants);
    CHECK(file.categories[i].tycons == code.categories[i].tycons);
  }
  CHECK(file.system_library_types == code.system_library_types);
}

TEST_CASE("taxonomy loading rejects malformed input") {
  CHECK_THROWS_AS(parse_taxonomy("not json"), RuleFormatError);
  CHECK_THROWS_AS(parse_taxonomy("[]"), RuleFormatError);
  CHECK_THROWS_AS(parse_taxonomy(R"({"categories": [{"id": "Frobnicate"}]})"),
                  RuleFormatError);
  // one id twice, and consequently others missing
  CHECK_THROWS_AS(parse_taxonomy(R"({"categories": [
      {"id": "IntegerArith"}, {"id": "IntegerArith"}]})"),
                  RuleFormatError);
  std::string seven = R"({"categories": [
      {"id": "IntegerArith"}, {"id": "NonLinearArith"}, {"id": "FloatArith"},
      {"id": "ListSequence"}, {"id": "SetMapBag"}, {"id": "TreeStringMatrix"},
      {"id": "Memory"}]})";
  CHECK_THROWS_AS(parse_taxonomy(seven), RuleFormatError);
  CHECK_THROWS_AS(parse_taxonomy(R"({"categories": [
      {"id": "IntegerArith", "constants": 7}]})"),
                  RuleFormatError);
}

TEST_CASE("multiplication between non-constants is non-linear") {
  ScopeInfo scope;
  Taxonomy tax = builtin_taxonomy();

  GoalMetrics nl = classify(ap(c("Int.mul"), v("x"), v("y")), scope, tax);
  CHECK(nl.involved == std::set<std::string>{"IntegerArith", "NonLinearArith"});
  CHECK(usage(nl, "IntegerArith").op_occurrences == 1);
  CHECK(usage(nl, "NonLinearArith").op_occurrences == 1);
  CHECK(usage(nl, "NonLinearArith").distinct_ops == 1);
  CHECK(nl.categorized.op_occurrences == 1);
  CHECK(nl.categorized.distinct_ops == 1);

  GoalMetrics lin = classify(ap(c("Int.mul"), num(2), v("x")), scope, tax);
  CHECK(lin.involved == std::set<std::string>{"IntegerArith"});

  // a literal-only composition still counts as a constant operand
  GoalMetrics folded = classify(
      ap(c("Int.mul"), ap(c("Int.add"), num(1), num(2)), v("x")), scope, tax);
  CHECK(folded.involved == std::set<std::string>{"IntegerArith"});
  CHECK(usage(folded, "IntegerArith").op_occurrences == 2);
  CHECK(usage(folded, "IntegerArith").distinct_ops == 2);

  // an uninterpreted function of a literal is not constant
  GoalMetrics opaque =
      classify(ap(c("Int.mul"), v("x"), ap(c("f"), num(2))), scope, tax);
  CHECK(opaque.involved.count("NonLinearArith") == 1);

  GoalMetrics ground = classify(ap(c("Int.mul"), num(2), num(3)), scope, tax);
  CHECK(ground.involved == std::set<std::string>{"IntegerArith"});

  GoalMetrics division =
      classify(ap(c("Int.div"), v("x"), v("y")), scope, tax);
  CHECK(division.involved.count("NonLinearArith") == 1);
}

TEST_CASE("types pull atoms into the container categories") {
  Taxonomy tax = builtin_taxonomy();

  ScopeInfo scope;
  scope.constant_tycons["peek"] = {"seq", "int"};
  GoalMetrics m = classify(ap(c("peek"), v("s")), scope, tax);
  CHECK(m.involved == std::set<std::string>{"ListSequence"});
  CHECK(usage(m, "ListSequence").op_occurrences == 1);

  // a bound variable of list type counts through its binder annotation
  TermPtr t = mk_abs("xs", ty_con("list", {ty("int")}),
                     ap(c("eq"), v("xs"), v("xs")));
  GoalMetrics var = classify(t, ScopeInfo{}, tax);
  CHECK(var.involved == std::set<std::string>{"ListSequence"});
  CHECK(usage(var, "ListSequence").op_occurrences == 2);
  CHECK(usage(var, "ListSequence").distinct_ops == 1);

  // a variable merely named like an operator is not one
  GoalMetrics named = classify(mk_abs("lt", ty("bool"), v("lt")), ScopeInfo{}, tax);
  CHECK(named.involved.empty());
}

TEST_CASE("corpus-declared datatypes outside the system library are custom") {
  Corpus corpus;
  Theory base;
  base.name = "Trees";
  Datatype avl;
  avl.name = "avltree";
  avl.constructors = {{"Leaf", {}},
                      {"Node", {ty("avltree"), ty("int"), ty("avltree")}}};
  base.decls.push_back({avl});
  FunDef hgt;
  hgt.name = "hgt";
  hgt.params = {{"t", ty("avltree")}};
  hgt.ret = ty("int");
  hgt.body = num(0);
  base.decls.push_back({hgt});
  corpus.theories.push_back(base);

  ScopeInfo scope = scope_info(corpus, 0);
  CHECK(scope.datatypes == std::set<std::string>{"avltree"});
  CHECK(scope.constant_tycons.at("Node") ==
        std::set<std::string>{"avltree", "int"});
  CHECK(scope.constant_tycons.at("hgt") ==
        std::set<std::string>{"avltree", "int"});

  Taxonomy tax = builtin_taxonomy();
  GoalMetrics m = classify(
      ap(c("ge"), ap(c("hgt"), ap(c("Node"), c("Leaf"), num(1), c("Leaf"))),
         num(0)),
      scope, tax);
  CHECK(m.involved ==
        std::set<std::string>{"CustomDatatype", "IntegerArith"});
  // hgt, Node, Leaf, Leaf all mention avltree
  CHECK(usage(m, "CustomDatatype").op_occurrences == 4);
  CHECK(usage(m, "CustomDatatype").distinct_ops == 3);
  CHECK(usage(m, "IntegerArith").op_occurrences == 1);  // ge
  CHECK(m.categorized.op_occurrences == 5);

  // shadowing: a pattern rebinding drops the binder's type
  TermPtr shadow =
      mk_abs("t", ty("avltree"),
             mk_case(v("t"), {{p_var("t"), ap(c("eq"), v("t"), v("t"))}}));
  GoalMetrics s = classify(shadow, scope, tax);
  CHECK(usage(s, "CustomDatatype").op_occurrences == 1);  // the scrutinee only
}

TEST_CASE("scope follows theory imports") {
  Corpus corpus;
  Theory base;
  base.name = "Base";
  Datatype d;
  d.name = "shade";
  d.constructors = {{"Mk", {ty("int")}}};
  base.decls.push_back({d});
  Theory use;
  use.name = "Use";
  use.imports = {"Base"};
  FunDef f;
  f.name = "probe";
  f.params = {{"x", ty("shade")}};
  f.ret = ty("bool");
  f.body = c("true");
  use.decls.push_back({f});
  corpus.theories = {base, use};

  ScopeInfo from_use = scope_info(corpus, 1);
  CHECK(from_use.datatypes.count("shade") == 1);
  CHECK(from_use.constant_tycons.count("probe") == 1);

  ScopeInfo from_base = scope_info(corpus, 0);
  CHECK(from_base.constant_tycons.count("probe") == 0);
}

TEST_CASE("nearest-rank percentiles") {
  std::vector<double> four = {1, 2, 3, 4};
  CHECK(nearest_rank_percentile(four, 25) == 1);
  CHECK(nearest_rank_percentile(four, 75) == 3);
  CHECK(nearest_rank_percentile({42}, 25) == 42);
  CHECK(nearest_rank_percentile({42}, 75) == 42);
  CHECK_THROWS_AS(nearest_rank_percentile({}, 50), EmptyInput);

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> len(1, 40), val(0, 100);
  std::uniform_real_distribution<double> pct(0.0, 100.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> xs;
    int n = len(rng);
    for (int j = 0; j < n; ++j) xs.push_back(val(rng));
    double p = pct(rng);
    CHECK(nearest_rank_percentile(xs, p) == testing::percentile_oracle(xs, p));
  }
}

TEST_CASE("aggregation reports involved goals per category plus an All row") {
  Taxonomy tax = builtin_taxonomy();
  GoalMetrics g1;
  g1.goal_id = "a";
  g1.size = 10;
  g1.depth = 3;
  g1.quantifier_count = 1;
  g1.per_category["IntegerArith"] = {4, 2};
  g1.involved = {"IntegerArith"};
  g1.categorized = {4, 2};
  GoalMetrics g2;
  g2.goal_id = "b";
  g2.size = 20;
  g2.depth = 5;
  g2.quantifier_count = 0;
  g2.per_category["IntegerArith"] = {2, 1};
  g2.per_category["ListSequence"] = {5, 3};
  g2.involved = {"IntegerArith", "ListSequence"};
  g2.categorized = {7, 4};
  GoalMetrics g3;
  g3.goal_id = "c";
  g3.size = 3;
  g3.depth = 2;
  g3.quantifier_count = 0;

  std::vector<GoalMetrics> goals = {g1, g2, g3};
  std::vector<CategoryRow> rows = aggregate(goals, tax);
  REQUIRE(rows.size() == 3);

  CHECK(rows[0].id == "IntegerArith");
  CHECK(rows[0].cases == 2);
  CHECK(rows[0].op_occurrences.average == doctest::Approx(3.0));
  CHECK(rows[0].op_occurrences.p25 == 2);
  CHECK(rows[0].op_occurrences.p75 == 4);
  CHECK(rows[0].size.average == doctest::Approx(15.0));
  CHECK(rows[0].quantifiers.p75 == 1);

  CHECK(rows[1].id == "ListSequence");
  CHECK(rows[1].cases == 1);
  CHECK(rows[1].op_occurrences.average == doctest::Approx(5.0));
  CHECK(rows[1].op_occurrences.p25 == 5);
  CHECK(rows[1].distinct_ops.p75 == 3);

  CHECK(rows[2].id == "All");
  CHECK(rows[2].cases == 3);
  CHECK(rows[2].op_occurrences.average == doctest::Approx((4 + 7 + 0) / 3.0));
  CHECK(rows[2].size.average == doctest::Approx(11.0));
  CHECK(rows[2].size.p25 == 3);
  CHECK(rows[2].size.p75 == 20);

  // permutation invariance, exact on doubles
  std::vector<GoalMetrics> shuffled = {g3, g1, g2};
  std::vector<CategoryRow> again = aggregate(shuffled, tax);
  REQUIRE(again.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(again[i].id == rows[i].id);
    CHECK(again[i].cases == rows[i].cases);
    CHECK(again[i].op_occurrences.average == rows[i].op_occurrences.average);
    CHECK(again[i].size.p25 == rows[i].size.p25);
    CHECK(again[i].depth.p75 == rows[i].depth.p75);
  }

  CHECK_THROWS_AS(aggregate({}, tax), EmptyInput);
}

TEST_CASE("corpus metrics visits every goal with its theory's scope") {
  Corpus corpus;
  Theory t1;
  t1.name = "Base";
  Datatype d;
  d.name = "pod";
  d.constructors = {{"Pod", {ty("int")}}};
  t1.decls.push_back({d});
  Goal g1;
  g1.name = "uses_pod";
  g1.statement = ap(c("eq"), ap(c("Pod"), num(1)), v("p"));
  t1.decls.push_back({g1});
  Theory t2;
  t2.name = "Other";
  Goal g2;
  g2.name = "plain";
  g2.statement = ap(c("lt"), v("x"), v("y"));
  t2.decls.push_back({g2});
  corpus.theories = {t1, t2};

  Taxonomy tax = builtin_taxonomy();
  std::vector<GoalMetrics> all = corpus_metrics(corpus, tax);
  REQUIRE(all.size() == 2);
  CHECK(all[0].goal_id == "Base.uses_pod");
  CHECK(all[0].involved.count("CustomDatatype") == 1);
  CHECK(all[0].size == 4);
  CHECK(all[1].goal_id == "Other.plain");
  CHECK(all[1].involved == std::set<std::string>{"IntegerArith"});
  CHECK(all[1].depth == 2);
}
