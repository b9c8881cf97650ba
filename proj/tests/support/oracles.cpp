#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vcforge::testing {

using namespace vcforge;

size_t leaf_count_oracle(const TermPtr& t) {
  size_t count = 0;
  std::vector<TermPtr> stack{t};
  while (!stack.empty()) {
    TermPtr cur = stack.back();
    stack.pop_back();
    if (cur->as<Var>() || cur->as<Const>() || cur->as<NumLit>() || cur->as<StrLit>()) {
      ++count;
    } else if (const auto* a = cur->as<App>()) {
      stack.push_back(a->fn);
      stack.push_back(a->arg);
    } else if (const auto* ab = cur->as<Abs>()) {
      stack.push_back(ab->body);
    } else if (const auto* l = cur->as<Let>()) {
      stack.push_back(l->value);
      stack.push_back(l->body);
    } else if (const auto* c = cur->as<Case>()) {
      stack.push_back(c->scrutinee);
      for (const auto& br : c->branches) stack.push_back(br.body);
    } else if (const auto* tp = cur->as<Tuple>()) {
      for (const auto& e : tp->elems) stack.push_back(e);
    }
  }
  return count;
}

size_t depth_oracle(const TermPtr& t) {
  if (const auto* a = t->as<App>()) {
    // whole spine is one level
    std::vector<TermPtr> parts;
    TermPtr cur = t;
    while (const auto* ap = cur->as<App>()) {
      parts.push_back(ap->arg);
      cur = ap->fn;
    }
    parts.push_back(cur);
    (void)a;
    size_t best = 0;
    for (const auto& p : parts) best = std::max(best, depth_oracle(p));
    return 1 + best;
  }
  if (const auto* ab = t->as<Abs>()) return 1 + depth_oracle(ab->body);
  if (const auto* l = t->as<Let>())
    return 1 + std::max(depth_oracle(l->value), depth_oracle(l->body));
  if (const auto* c = t->as<Case>()) {
    size_t best = depth_oracle(c->scrutinee);
    for (const auto& br : c->branches) best = std::max(best, depth_oracle(br.body));
    return 1 + best;
  }
  if (const auto* tp = t->as<Tuple>()) {
    size_t best = 0;
    for (const auto& e : tp->elems) best = std::max(best, depth_oracle(e));
    return 1 + best;
  }
  return 1;
}

size_t const_count_oracle(const TermPtr& t, const std::set<std::string>& names) {
  size_t count = 0;
  if (const auto* c = t->as<Const>()) {
    if (names.count(c->name)) ++count;
    return count;
  }
  if (const auto* a = t->as<App>())
    return const_count_oracle(a->fn, names) + const_count_oracle(a->arg, names);
  if (const auto* ab = t->as<Abs>()) return const_count_oracle(ab->body, names);
  if (const auto* l = t->as<Let>())
    return const_count_oracle(l->value, names) + const_count_oracle(l->body, names);
  if (const auto* c2 = t->as<Case>()) {
    count = const_count_oracle(c2->scrutinee, names);
    for (const auto& br : c2->branches) count += const_count_oracle(br.body, names);
    return count;
  }
  if (const auto* tp = t->as<Tuple>()) {
    for (const auto& e : tp->elems) count += const_count_oracle(e, names);
    return count;
  }
  return 0;
}

static void fv_walk(const TermPtr& t, std::vector<std::string> env,
                    std::set<std::string>& out) {
  auto bound = [&env](const std::string& n) {
    return std::find(env.begin(), env.end(), n) != env.end();
  };
  if (const auto* v = t->as<Var>()) {
    if (!bound(v->name)) out.insert(v->name);
  } else if (const auto* a = t->as<App>()) {
    fv_walk(a->fn, env, out);
    fv_walk(a->arg, env, out);
  } else if (const auto* ab = t->as<Abs>()) {
    auto env2 = env;
    env2.push_back(ab->binder);
    fv_walk(ab->body, env2, out);
  } else if (const auto* l = t->as<Let>()) {
    fv_walk(l->value, env, out);
    auto env2 = env;
    env2.push_back(l->binder);
    fv_walk(l->body, env2, out);
  } else if (const auto* c = t->as<Case>()) {
    fv_walk(c->scrutinee, env, out);
    for (const auto& br : c->branches) {
      auto env2 = env;
      for (const auto& pv : pattern_vars(br.pat)) env2.push_back(pv);
      fv_walk(br.body, env2, out);
    }
  } else if (const auto* tp = t->as<Tuple>()) {
    for (const auto& e : tp->elems) fv_walk(e, env, out);
  }
}

std::set<std::string> free_vars_oracle(const TermPtr& t) {
  std::set<std::string> out;
  fv_walk(t, {}, out);
  return out;
}

double percentile_oracle(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile of empty list");
  std::sort(values.begin(), values.end());
  size_t n = values.size();
  size_t rank = static_cast<size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return values[rank - 1];
}

}  // namespace vcforge::testing
