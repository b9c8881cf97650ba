#pragma once

#include <set>
#include <string>
#include <vector>

#include "vcforge/term.hpp"

namespace vcforge::testing {

// Independent re-implementations used as test oracles. These deliberately
// share no code with the library paths they check: different traversal
// style, different data structures.

// Number of atom occurrences (Var, Const, NumLit, StrLit), iterative.
size_t leaf_count_oracle(const vcforge::TermPtr& t);

// Depth with the sibling-argument convention: atoms are 1, an application
// spine adds one level over head and arguments, Abs/Let/Case add one over
// their children, tuple elements are siblings.
size_t depth_oracle(const vcforge::TermPtr& t);

// Occurrences of Const names in the given set.
size_t const_count_oracle(const vcforge::TermPtr& t, const std::set<std::string>& names);

// Free variables via explicit environment list instead of a bound set.
std::set<std::string> free_vars_oracle(const vcforge::TermPtr& t);

// Nearest-rank percentile over unsorted values: smallest v such that at
// least ceil(p/100 * n) values are <= v.
double percentile_oracle(std::vector<double> values, double p);

}  // namespace vcforge::testing
