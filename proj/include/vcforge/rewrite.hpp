#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "vcforge/term.hpp"

namespace vcforge {

// Right-hand side of a rewrite rule. Contracta are built from constants,
// numeric literals, placeholders referring to redex arguments, and
// application spines; they bind nothing and introduce no free variables,
// so instantiation is plain splicing.
struct ContractumNode {
  enum class Kind { Constant, Number, Placeholder, Spine };
  Kind kind = Kind::Constant;
  std::string name;                   // Constant
  Numeral value;                      // Number
  size_t index = 0;                   // Placeholder
  std::vector<ContractumNode> parts;  // Spine: parts[0] applied to the rest
};

struct RewriteRule {
  std::string head;  // constant at the root of the redex spine
  size_t arity = 0;  // exact number of spine arguments
  ContractumNode contractum;
};

// Rules keyed by (head, arity). The first rule loaded for a key wins;
// later ones are recorded as shadowed-rule warnings and never fire.
class RuleSet {
public:
  // Accepts {"rules": [{"head": ..., "arity": ..., "contractum": ...}]}.
  // Contracta are JSON strings ("f", "$0", "42"), integers, or arrays
  // forming application spines. Throws RuleFormatError on structural
  // problems, IllegalContractum on bad names or placeholder indices.
  static RuleSet from_json(const std::string& text);

  void add(RewriteRule rule);
  const RewriteRule* find(const std::string& head, size_t arity) const;
  size_t size() const { return rules_.size(); }
  const std::vector<std::string>& warnings() const { return warnings_; }

private:
  std::map<std::pair<std::string, size_t>, RewriteRule> rules_;
  std::vector<std::string> warnings_;
};

constexpr size_t kDefaultRewriteBudget = 10000;

struct RewriteStats {
  size_t fires = 0;
};

// Innermost, left-to-right reduction to fixpoint. Every application node
// is a candidate redex: its spine matches rules of exactly its argument
// count, so partial applications rewrite independently of the surrounding
// spine. Throws RewriteBudgetExceeded once `budget` rule firings are
// spent; the error carries the path of the subterm under reduction.
TermPtr rewrite_term(const TermPtr& t, const RuleSet& rules,
                     size_t budget = kDefaultRewriteBudget,
                     RewriteStats* stats = nullptr);

// Named structural passes that need more context than a rule can see.
//   double_negation  collapses not (not P) to P, bottom-up to fixpoint
//   nat_guard        wraps Nat.of_int arguments in Int.max 0 unless the
//                    argument already has that exact shape
const std::vector<std::string>& transformer_names();
TermPtr apply_transformer(const std::string& name, const TermPtr& t);

}  // namespace vcforge
