#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "vcforge/corpus.hpp"
#include "vcforge/term.hpp"

namespace vcforge {

// Per-goal structural metrics and operation-taxonomy classification.

// Number of atom occurrences (variables, constants, literals).
size_t goal_size(const TermPtr& t);

// AST height with every argument of an application spine a sibling of the
// head: atoms are 1, (f a b) is 2, (f (g a) b) is 3. Binders, lets, cases
// and tuples add one level over their children.
size_t goal_depth(const TermPtr& t);

// Occurrences of the forall / exists constants.
size_t quantifier_count(const TermPtr& t);

struct TaxonomyCategory {
  std::string id;
  std::set<std::string> constants;  // operation names that belong outright
  std::set<std::string> tycons;     // types that pull an operation in
};

// The eight categories, in report order. Two are rule-driven rather than
// membership-driven: NonLinearArith's constant list only nominates the
// candidate operators (an occurrence counts when both operands are
// non-constant), and CustomDatatype matches any type constructor that has
// a corpus declaration and is not a system library type.
struct Taxonomy {
  std::vector<TaxonomyCategory> categories;
  std::set<std::string> system_library_types;
};

const std::vector<std::string>& taxonomy_category_ids();

// The shipped classification; data/taxonomy.json carries the same content
// as an editable starting point.
Taxonomy builtin_taxonomy();

// JSON form: {"categories": [{"id", "constants", "tycons"}...],
// "system_library_types": [...]}. Throws RuleFormatError on malformed
// input, unknown, duplicate, or missing category ids.
Taxonomy parse_taxonomy(const std::string& json_text);
Taxonomy load_taxonomy_file(const std::string& path);

// Everything classification needs to know about the declarations a goal
// can see: which type constructors each constant's signature mentions,
// and which datatype names have declarations.
struct ScopeInfo {
  std::map<std::string, std::set<std::string>> constant_tycons;
  std::set<std::string> datatypes;
};

ScopeInfo scope_info(const Corpus& c, size_t theory);

struct CategoryUsage {
  size_t op_occurrences = 0;
  size_t distinct_ops = 0;
};

struct GoalMetrics {
  std::string goal_id;
  size_t size = 0;
  size_t depth = 0;
  size_t quantifier_count = 0;
  // Categories with at least one occurrence; involved mirrors the keys.
  std::map<std::string, CategoryUsage> per_category;
  std::set<std::string> involved;
  // Atoms contributing to any category, each occurrence counted once, for
  // the report's closing All row.
  CategoryUsage categorized;
};

// Classification fields only; size, depth and quantifier_count stay zero.
GoalMetrics classify(const TermPtr& t, const ScopeInfo& scope,
                     const Taxonomy& tax);

GoalMetrics goal_metrics(const std::string& goal_id, const TermPtr& statement,
                         const ScopeInfo& scope, const Taxonomy& tax);

// Metrics for every goal of the corpus, in declaration order.
std::vector<GoalMetrics> corpus_metrics(const Corpus& c, const Taxonomy& tax);

struct StatLine {
  double average = 0;
  double p25 = 0;
  double p75 = 0;
};

struct CategoryRow {
  std::string id;  // category id, or "All" for the closing row
  size_t cases = 0;
  StatLine op_occurrences;
  StatLine distinct_ops;
  StatLine size;
  StatLine depth;
  StatLine quantifiers;
};

// Nearest-rank percentile: the smallest element with at least
// ceil(p / 100 * n) values at or below it. Throws EmptyInput.
double nearest_rank_percentile(std::vector<double> values, double p);

// One row per category with at least one involved goal, statistics taken
// over the involved goals only, closed by the All row over every goal.
// Throws EmptyInput on an empty goal list.
std::vector<CategoryRow> aggregate(const std::vector<GoalMetrics>& all,
                                   const Taxonomy& tax);

}  // namespace vcforge
