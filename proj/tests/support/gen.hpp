#pragma once

// Shared randomized-corpus helpers for tests: well-sorted formula
// generation (stratification-aware) and random interpretations.

#include <random>
#include <string>
#include <vector>

#include "syllog/core.hpp"

namespace syllog::testgen {

struct GenOptions {
  int max_depth = 4;
  int max_quant_sort = 2;   // highest quantifier sort to emit; -1 disables
  int max_prefix = 2;       // bound variables per prefix
  bool allow_pairs = true;  // pair terms in level-2 atoms
  int atom_bias = 3;        // odds of cutting to an atom early, 1 in N
};

// Fixed, parseable variable pools per sort.
inline const std::vector<Var>& pool(int sort) {
  static const std::vector<Var> p0 = {{"x", 0}, {"y", 0}, {"z", 0}, {"w", 0}};
  static const std::vector<Var> p1 = {{"X", 1}, {"Y", 1}, {"Z", 1}};
  static const std::vector<Var> p2 = {{"S", 2}, {"T", 2}, {"U", 2}};
  static const std::vector<Var> p3 = {{"R", 3}, {"Q", 3}};
  static const std::vector<Var> none;
  switch (sort) {
    case 0: return p0;
    case 1: return p1;
    case 2: return p2;
    case 3: return p3;
  }
  return none;
}

template <class Rng>
const Var& pick(Rng& rng, const std::vector<Var>& vars) {
  return vars[rng() % vars.size()];
}

template <class Rng>
FormulaPtr random_atom(Rng& rng, const GenOptions& opts) {
  switch (rng() % 6) {
    case 0:
      return matom(aeq(tvar(pick(rng, pool(0))), tvar(pick(rng, pool(0)))));
    case 1:
      return matom(ain(tvar(pick(rng, pool(0))), tvar(pick(rng, pool(1)))));
    case 2:
      return matom(aeq(tvar(pick(rng, pool(1))), tvar(pick(rng, pool(1)))));
    case 3:
      return matom(ain(tvar(pick(rng, pool(1))), tvar(pick(rng, pool(2)))));
    case 4: {
      Term l = opts.allow_pairs && rng() % 2 == 0
                   ? tpair(pick(rng, pool(0)), pick(rng, pool(0)))
                   : tvar(pick(rng, pool(2)));
      Term r = opts.allow_pairs && rng() % 2 == 0
                   ? tpair(pick(rng, pool(0)), pick(rng, pool(0)))
                   : tvar(pick(rng, pool(2)));
      return matom(aeq(std::move(l), std::move(r)));
    }
    default: {
      Term l = opts.allow_pairs && rng() % 2 == 0
                   ? tpair(pick(rng, pool(0)), pick(rng, pool(0)))
                   : tvar(pick(rng, pool(2)));
      return matom(ain(std::move(l), tvar(pick(rng, pool(3)))));
    }
  }
}

// Random well-sorted formula whose quantifier sorts do not exceed
// `quant_allowance` (so it can sit under a sort-(quant_allowance+1) prefix).
template <class Rng>
FormulaPtr random_formula_q(Rng& rng, const GenOptions& opts, int depth,
                            int quant_allowance) {
  if (depth <= 0 || static_cast<int>(rng() % opts.atom_bias) == 0)
    return random_atom(rng, opts);
  int roll = rng() % (quant_allowance >= 0 ? 4 : 3);
  switch (roll) {
    case 0:
      return mnot(random_formula_q(rng, opts, depth - 1, quant_allowance));
    case 1:
      return mand(random_formula_q(rng, opts, depth - 1, quant_allowance),
                  random_formula_q(rng, opts, depth - 1, quant_allowance));
    case 2:
      return mor(random_formula_q(rng, opts, depth - 1, quant_allowance),
                 random_formula_q(rng, opts, depth - 1, quant_allowance));
    default: {
      int sort = rng() % (quant_allowance + 1);
      const std::vector<Var>& vars = pool(sort);
      int n = 1 + rng() % opts.max_prefix;
      std::vector<Var> bound;
      for (const Var& v : vars) {
        if (static_cast<int>(bound.size()) >= n) break;
        bound.push_back(v);
      }
      FormulaPtr body = random_formula_q(rng, opts, depth - 1, sort - 1);
      return mforall(std::move(bound), std::move(body));
    }
  }
}

template <class Rng>
FormulaPtr random_formula(Rng& rng, const GenOptions& opts = {}) {
  return random_formula_q(rng, opts, opts.max_depth, opts.max_quant_sort);
}

// Random set values, member counts kept small so triple nesting stays cheap.
template <class Rng>
HSet random_hset(Rng& rng, int level, const std::vector<int>& domain) {
  if (level == 1) {
    std::vector<int> elems;
    for (int id : domain)
      if (rng() % 2 == 0) elems.push_back(id);
    return HSet::make1(std::move(elems));
  }
  std::vector<HSet> members;
  std::size_t n = rng() % 4;
  for (std::size_t i = 0; i < n; ++i)
    members.push_back(random_hset(rng, level - 1, domain));
  return HSet::make(level, std::move(members));
}

// Interpretation over {0..domain_size-1} assigning every pool variable.
template <class Rng>
Interpretation random_interpretation(Rng& rng, int domain_size) {
  Interpretation M;
  for (int i = 0; i < domain_size; ++i) {
    M.domain.push_back(i);
    M.elem_names.push_back("d" + std::to_string(i));
  }
  for (const Var& v : pool(0)) M.assign0[v] = rng() % domain_size;
  for (int sort = 1; sort <= 3; ++sort)
    for (const Var& v : pool(sort))
      M.assign.emplace(v, random_hset(rng, sort, M.domain));
  return M;
}

} // namespace syllog::testgen
