#include "syllog/smallmodel.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "syllog/syntax.hpp"

namespace syllog {

namespace {

// Saturation ceiling for budget arithmetic; well below overflow so sums of
// saturated products stay representable.
constexpr long long kBudgetCeiling = 1000000000000000LL;
// Largest witness-search space build_universe will enumerate: the number of
// (argument tuple, candidate witness tuple) pairs per insertion site.
constexpr long long kSearchCap = 2000000LL;

long long sat_mul(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  if (a >= kBudgetCeiling / b) return kBudgetCeiling;
  return a * b;
}

long long sat_pow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

// ---------------------------------------------------------------------------
// Partition refinement
// ---------------------------------------------------------------------------

// Each family value is its sorted member list. Blocks hold indices of values
// not yet separated; every round picks the canonically smallest member that
// splits the first still-mixed block, so runs are reproducible.
template <typename M>
std::vector<M> refine(std::vector<std::vector<M>> vals) {
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  std::vector<M> out;
  if (vals.size() < 2) return out;

  auto member_of = [](const std::vector<M>& s, const M& m) {
    return std::binary_search(s.begin(), s.end(), m);
  };

  std::vector<std::vector<std::size_t>> blocks(1);
  for (std::size_t i = 0; i < vals.size(); ++i) blocks[0].push_back(i);

  for (;;) {
    std::size_t bi = blocks.size();
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (blocks[i].size() >= 2) {
        bi = i;
        break;
      }
    if (bi == blocks.size()) break;

    std::vector<M> cand;
    for (std::size_t idx : blocks[bi])
      cand.insert(cand.end(), vals[idx].begin(), vals[idx].end());
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    const M* split = nullptr;
    for (const M& m : cand) {
      std::size_t in = 0;
      for (std::size_t idx : blocks[bi])
        if (member_of(vals[idx], m)) ++in;
      if (in > 0 && in < blocks[bi].size()) {
        split = &m;
        break;
      }
    }
    // Distinct sorted member lists always admit a splitter.
    if (split == nullptr) break;
    out.push_back(*split);

    std::vector<std::vector<std::size_t>> next;
    for (const auto& blk : blocks) {
      std::vector<std::size_t> yes, no;
      for (std::size_t idx : blk)
        (member_of(vals[idx], *split) ? yes : no).push_back(idx);
      if (!yes.empty()) next.push_back(std::move(yes));
      if (!no.empty()) next.push_back(std::move(no));
    }
    blocks = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Occurrence walks
// ---------------------------------------------------------------------------

// Level-2 universal occurrences anywhere in f. Their own matrices cannot
// contain further level-2 universals (stratification), so recursion stops at
// each hit; level-3 bodies are searched through.
void collect_level2(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  switch (f->kind) {
    case FKind::Atom:
      return;
    case FKind::Not:
      collect_level2(f->a, out);
      return;
    case FKind::And:
    case FKind::Or:
      collect_level2(f->a, out);
      collect_level2(f->b, out);
      return;
    case FKind::Forall:
      if (f->bound.front().sort == 1) {
        out.push_back(f);
        return;
      }
      if (f->bound.front().sort == 2) collect_level2(f->a, out);
      return;
  }
}

// Level-1 universal occurrences inside a level-2 matrix (any polarity).
void collect_level1(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  switch (f->kind) {
    case FKind::Atom:
      return;
    case FKind::Not:
      collect_level1(f->a, out);
      return;
    case FKind::And:
    case FKind::Or:
      collect_level1(f->a, out);
      collect_level1(f->b, out);
      return;
    case FKind::Forall:
      out.push_back(f);
      return;
  }
}

std::vector<Var> sorted_vars(const std::set<Var>& s) {
  return std::vector<Var>(s.begin(), s.end());
}

void sort_unique_hsets(std::vector<HSet>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void sort_unique_ints(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// ---------------------------------------------------------------------------
// Level-1 cut helpers
// ---------------------------------------------------------------------------

bool subset_of(const HSet& level1, const std::set<int>& ds) {
  for (int e : level1.elems)
    if (ds.find(e) == ds.end()) return false;
  return true;
}

bool meets(const HSet& level1, const std::set<int>& ds) {
  for (int e : level1.elems)
    if (ds.find(e) != ds.end()) return true;
  return false;
}

HSet cut_level1(const HSet& level1, const std::set<int>& ds) {
  std::vector<int> kept;
  for (int e : level1.elems)
    if (ds.find(e) != ds.end()) kept.push_back(e);
  return HSet::make1(std::move(kept));
}

const HSet& checked_value(const Interpretation& model, const Var& v,
                          int level) {
  const HSet& val = model.value(v);
  if (val.level != level)
    throw EvalError("variable " + v.name + " of sort " +
                    std::to_string(v.sort) + " is bound to a level-" +
                    std::to_string(val.level) + " set");
  return val;
}

std::string var_str(const Var& v) {
  if (v.sort == 0) return v.name;
  return v.name + "^" + std::to_string(v.sort);
}

}  // namespace

// ---------------------------------------------------------------------------
// Distinguishing sets
// ---------------------------------------------------------------------------

std::vector<int> distinguish_elements(const std::vector<HSet>& family) {
  std::vector<std::vector<int>> vals;
  vals.reserve(family.size());
  for (const HSet& s : family) {
    if (s.level != 1)
      throw SortError(
          "distinguish_elements: family members must be level-1 sets");
    vals.push_back(s.elems);
  }
  return refine<int>(std::move(vals));
}

std::vector<HSet> distinguish_sets(const std::vector<HSet>& family) {
  std::vector<std::vector<HSet>> vals;
  vals.reserve(family.size());
  int level = -1;
  for (const HSet& s : family) {
    if (s.level < 2)
      throw SortError(
          "distinguish_sets: family members must be level-2 or level-3 sets");
    if (level == -1) level = s.level;
    if (s.level != level)
      throw SortError("distinguish_sets: family members must share a level");
    vals.push_back(s.members);
  }
  return refine<HSet>(std::move(vals));
}

// ---------------------------------------------------------------------------
// Size budget
// ---------------------------------------------------------------------------

std::vector<PhiOccurrence> collect_phi(const NormalizedConjunction& psi) {
  std::vector<PhiOccurrence> out;
  if (psi.literals.empty()) return out;
  FormulaPtr conj = mand_all(psi.literals);
  std::set<Var> free_all = free_vars_all(conj);

  std::vector<FormulaPtr> chis;
  collect_level2(conj, chis);
  for (const FormulaPtr& chi : chis) {
    std::set<Var> prefix(chi->bound.begin(), chi->bound.end());
    std::vector<FormulaPtr> inner;
    collect_level1(chi->a, inner);
    for (const FormulaPtr& phi : inner) {
      bool closed = true;
      for (const Var& v : free_vars_all(phi))
        if (prefix.find(v) == prefix.end() &&
            free_all.find(v) == free_all.end()) {
          closed = false;
          break;
        }
      if (closed) out.push_back({chi, phi});
    }
  }
  return out;
}

SizeBudget compute_bound(const NormalizedConjunction& psi) {
  SizeBudget b;
  if (psi.literals.empty()) return b;
  FormulaPtr conj = mand_all(psi.literals);
  b.v0 = static_cast<int>(free_vars(conj, 0).size());
  b.v1 = static_cast<int>(free_vars(conj, 1).size());
  b.v2 = static_cast<int>(free_vars(conj, 2).size());

  std::vector<FormulaPtr> chis;
  collect_level2(conj, chis);
  for (const FormulaPtr& chi : chis)
    b.Lm = std::max(b.Lm, static_cast<int>(chi->bound.size()));

  std::vector<PhiOccurrence> phis = collect_phi(psi);
  b.phi_count = static_cast<int>(phis.size());
  for (const PhiOccurrence& occ : phis)
    b.Ln = std::max(b.Ln, static_cast<int>(occ.phi->bound.size()));

  long long base = std::max<long long>(0, b.v1 + 4LL * b.v2 - 1);
  long long extra =
      sat_mul(sat_mul(sat_pow(base, b.Lm), b.Ln), b.phi_count);
  long long raw = b.v0 + 4LL * b.v1 + 16LL * b.v2 + extra - 5;
  b.bound = std::max({1LL, static_cast<long long>(b.v0), raw});
  return b;
}

// ---------------------------------------------------------------------------
// Universe construction
// ---------------------------------------------------------------------------

UniverseArtifacts build_universe(const Interpretation& model,
                                 const NormalizedConjunction& psi) {
  if (psi.literals.empty())
    throw std::invalid_argument("build_universe: conjunction has no literals");
  if (model.domain.empty())
    throw EvalError("build_universe: model domain is empty");

  FormulaPtr conj = mand_all(psi.literals);
  UniverseArtifacts arts;
  arts.v0_free = sorted_vars(free_vars(conj, 0));
  arts.v1_free = sorted_vars(free_vars(conj, 1));
  arts.v2_free = sorted_vars(free_vars(conj, 2));

  // Step 1: separate the level-2 values named by the free sort-2 variables
  // (F1) and keep up to three canonical members of each (F2).
  std::vector<HSet> family2;
  for (const Var& X : arts.v2_free) family2.push_back(checked_value(model, X, 2));
  sort_unique_hsets(family2);
  arts.F1 = distinguish_sets(family2);
  for (const HSet& val : family2) {
    std::size_t take = std::min<std::size_t>(3, val.members.size());
    for (std::size_t i = 0; i < take; ++i) arts.F2.push_back(val.members[i]);
  }
  sort_unique_hsets(arts.F2);
  arts.F = arts.F1;
  arts.F.insert(arts.F.end(), arts.F2.begin(), arts.F2.end());
  sort_unique_hsets(arts.F);

  // Step 2: name the members of F that no free sort-1 variable already
  // denotes. Fresh names draw from the reserved supply, so they collide with
  // neither free nor bound variables of psi.
  std::set<HSet> named1_vals;
  for (const Var& X : arts.v1_free)
    named1_vals.insert(checked_value(model, X, 1));
  FreshSupply supply;
  supply.reserve(conj);
  Interpretation mbar = model;
  for (const HSet& val : arts.F)
    if (named1_vals.find(val) == named1_vals.end()) {
      Var v = supply.fresh(1);
      arts.V1F.emplace_back(v, val);
      mbar.assign[v] = val;
    }

  // Step 3: separate all named level-1 sets (Delta1), keep up to three
  // canonical elements of each (Delta2), and seed Dstar with the values of
  // the free sort-0 variables.
  std::vector<HSet> named_sets;
  for (const Var& X : arts.v1_free)
    named_sets.push_back(checked_value(model, X, 1));
  for (const auto& [v, val] : arts.V1F) named_sets.push_back(val);
  sort_unique_hsets(named_sets);
  arts.Delta1 = distinguish_elements(named_sets);
  for (const HSet& J : named_sets) {
    std::size_t take = std::min<std::size_t>(3, J.elems.size());
    for (std::size_t i = 0; i < take; ++i) arts.Delta2.push_back(J.elems[i]);
  }
  sort_unique_ints(arts.Delta2);
  arts.Delta = arts.Delta1;
  arts.Delta.insert(arts.Delta.end(), arts.Delta2.begin(), arts.Delta2.end());
  sort_unique_ints(arts.Delta);

  std::set<int> dstar(arts.Delta.begin(), arts.Delta.end());
  for (const Var& x : arts.v0_free) dstar.insert(model.value0(x));

  // Step 4: for every instantiable level-1 universal under a level-2 prefix,
  // substitute each argument tuple of named level-1 variables; when the
  // instantiated universal fails in the source model, insert the
  // lexicographically first falsifying witness tuple.
  std::vector<Var> pool = arts.v1_free;
  for (const auto& [v, val] : arts.V1F) pool.push_back(v);
  const std::vector<int>& dom = model.domain;

  for (const PhiOccurrence& occ : collect_phi(psi)) {
    const std::size_t m = occ.chi->bound.size();
    const std::size_t n = occ.phi->bound.size();
    long long tuples = sat_pow(static_cast<long long>(pool.size()),
                               static_cast<int>(m));
    long long space =
        sat_mul(tuples, sat_pow(static_cast<long long>(dom.size()),
                                static_cast<int>(n)));
    if (space > kSearchCap)
      throw CapacityError(
          "source model domain too large to search (cap exceeded)");
    if (tuples == 0) continue;

    std::vector<std::size_t> t(m, 0);
    for (;;) {
      std::map<Var, Var> sub;
      std::vector<Var> args;
      for (std::size_t j = 0; j < m; ++j) {
        sub[occ.chi->bound[j]] = pool[t[j]];
        args.push_back(pool[t[j]]);
      }
      FormulaPtr inst = substitute(occ.phi->a, sub);

      Interpretation local = mbar;
      std::vector<std::size_t> u(n, 0);
      bool found = false;
      for (;;) {
        for (std::size_t i = 0; i < n; ++i)
          local.assign0[occ.phi->bound[i]] = dom[u[i]];
        if (!eval(local, inst)) {
          found = true;
          break;
        }
        int k = static_cast<int>(n) - 1;
        while (k >= 0 && ++u[k] == dom.size()) {
          u[k] = 0;
          --k;
        }
        if (k < 0) break;
      }
      if (found) {
        WitnessEntry entry{occ.phi, args, {}};
        for (std::size_t i = 0; i < n; ++i) {
          entry.inserted.push_back(dom[u[i]]);
          dstar.insert(dom[u[i]]);
        }
        arts.witness_log.push_back(std::move(entry));
      }

      int k = static_cast<int>(m) - 1;
      while (k >= 0 && ++t[k] == pool.size()) {
        t[k] = 0;
        --k;
      }
      if (k < 0) break;
    }
  }

  // Definition 1 needs a nonempty universe.
  if (dstar.empty()) dstar.insert(dom.front());
  arts.Dstar.assign(dstar.begin(), dstar.end());
  return arts;
}

// ---------------------------------------------------------------------------
// Relativization
// ---------------------------------------------------------------------------

int default_dstar_pick(const UniverseArtifacts& arts) {
  if (arts.Dstar.empty())
    throw EvalError("default_dstar_pick: Dstar is empty");
  return arts.Dstar.front();
}

Interpretation relativize(const Interpretation& model,
                          const UniverseArtifacts& arts, int dstar_pick,
                          const std::vector<Var>& v1_free,
                          const std::vector<std::pair<Var, HSet>>& v1_fresh,
                          const std::vector<Var>& v2_free) {
  std::set<int> ds(arts.Dstar.begin(), arts.Dstar.end());
  if (ds.find(dstar_pick) == ds.end())
    throw EvalError("relativize: collapse element is not in Dstar");

  Interpretation mbar = model;
  for (const auto& [v, val] : v1_fresh) mbar.assign[v] = val;

  // Named level-1 sets: full values and their cuts.
  std::set<HSet> named1_full, named1_cut;
  for (const Var& X : v1_free) {
    const HSet& val = checked_value(mbar, X, 1);
    named1_full.insert(val);
    named1_cut.insert(cut_level1(val, ds));
  }
  for (const auto& [v, val] : v1_fresh) {
    named1_full.insert(val);
    named1_cut.insert(cut_level1(val, ds));
  }

  // Level-2 rule: members surviving inside pow(Dstar), minus the cut named
  // sets, plus the cut of each named set whose full value was a member.
  auto rel2 = [&](const HSet& val) {
    std::vector<HSet> out;
    for (const HSet& J : val.members)
      if (subset_of(J, ds) && named1_cut.find(J) == named1_cut.end())
        out.push_back(J);
    for (const HSet& full : named1_full)
      if (val.contains(full)) out.push_back(cut_level1(full, ds));
    return HSet::make(2, std::move(out));
  };

  std::set<HSet> named2_full, named2_rel;
  for (const Var& X : v2_free) {
    const HSet& val = checked_value(mbar, X, 2);
    named2_full.insert(val);
    named2_rel.insert(rel2(val));
  }

  auto in_pow_pow = [&](const HSet& K) {
    for (const HSet& J : K.members)
      if (!subset_of(J, ds)) return false;
    return true;
  };
  auto rel3 = [&](const HSet& val) {
    std::vector<HSet> out;
    for (const HSet& K : val.members)
      if (in_pow_pow(K) && named2_rel.find(K) == named2_rel.end())
        out.push_back(K);
    for (const HSet& full : named2_full)
      if (val.contains(full)) out.push_back(rel2(full));
    return HSet::make(3, std::move(out));
  };

  Interpretation out;
  out.domain = arts.Dstar;
  out.elem_names = model.elem_names;
  for (const auto& [x, e] : mbar.assign0)
    out.assign0[x] = ds.find(e) != ds.end() ? e : dstar_pick;
  for (const auto& [X, val] : mbar.assign) {
    if (val.level == 1)
      out.assign[X] = cut_level1(val, ds);
    else if (val.level == 2)
      out.assign[X] = rel2(val);
    else
      out.assign[X] = rel3(val);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Separation properties
// ---------------------------------------------------------------------------

bool verify_properties_abc(const Interpretation& model,
                           const UniverseArtifacts& arts,
                           std::vector<std::string>* diags) {
  bool ok = true;
  auto fail = [&](std::string msg) {
    ok = false;
    if (diags) diags->push_back(std::move(msg));
  };
  std::set<int> ds(arts.Dstar.begin(), arts.Dstar.end());

  Interpretation mbar = model;
  for (const auto& [v, val] : arts.V1F) mbar.assign[v] = val;

  std::vector<std::pair<Var, HSet>> named1;
  for (const Var& X : arts.v1_free)
    named1.emplace_back(X, checked_value(mbar, X, 1));
  for (const auto& p : arts.V1F) named1.push_back(p);
  std::set<HSet> named1_full;
  for (const auto& [v, s] : named1) named1_full.insert(s);

  // (A): distinct named level-1 values differ inside Dstar.
  for (std::size_t i = 0; i < named1.size(); ++i)
    for (std::size_t j = i + 1; j < named1.size(); ++j) {
      const HSet& a = named1[i].second;
      const HSet& b = named1[j].second;
      if (a == b) continue;
      if (!meets(hset_diff(a, b), ds) && !meets(hset_diff(b, a), ds))
        fail("property (A) fails for " + var_str(named1[i].first) + " and " +
             var_str(named1[j].first) +
             ": the values differ only outside Dstar");
    }

  // (B): distinct free sort-2 values differ at a named member that is empty
  // or meets Dstar.
  std::vector<std::pair<Var, HSet>> named2;
  for (const Var& X : arts.v2_free)
    named2.emplace_back(X, checked_value(mbar, X, 2));
  for (std::size_t i = 0; i < named2.size(); ++i)
    for (std::size_t j = i + 1; j < named2.size(); ++j) {
      const HSet& a = named2[i].second;
      const HSet& b = named2[j].second;
      if (a == b) continue;
      bool witness = false;
      for (const HSet& d : {hset_diff(a, b), hset_diff(b, a)}) {
        for (const HSet& J : d.members)
          if (named1_full.find(J) != named1_full.end() &&
              (J.elems.empty() || meets(J, ds))) {
            witness = true;
            break;
          }
        if (witness) break;
      }
      if (!witness)
        fail("property (B) fails for " + var_str(named2[i].first) + " and " +
             var_str(named2[j].first) +
             ": no named separating member survives the cut");
    }

  // (C): a pair value differing from a free sort-2 value is told apart by a
  // named witness surviving the cut, or differs on the pair side already.
  for (const Var& x : arts.v0_free)
    for (const Var& y : arts.v0_free) {
      int mx = mbar.value0(x);
      int my = mbar.value0(y);
      HSet pair = HSet::make(
          2, {HSet::make1({mx}), HSet::make1({mx, my})});
      for (const auto& [X, c2] : named2) {
        if (pair == c2) continue;
        bool okc = !hset_diff(pair, c2).members.empty();
        if (!okc) {
          HSet s1 = HSet::make1({mx});
          HSet s2 = HSet::make1({mx, my});
          for (const HSet& J : hset_diff(c2, pair).members) {
            if (named1_full.find(J) == named1_full.end() || !meets(J, ds))
              continue;
            HSet cj = cut_level1(J, ds);
            if (cj != s1 && cj != s2) {
              okc = true;
              break;
            }
          }
        }
        if (!okc)
          fail("property (C) fails for <" + x.name + "," + y.name +
               "> against " + var_str(X) +
               ": no surviving witness separates the pair");
      }
    }

  // The separations must also hold semantically after relativization.
  Interpretation rel =
      relativize(model, arts, default_dstar_pick(arts), arts.v1_free,
                 arts.V1F, arts.v2_free);
  for (std::size_t i = 0; i < named1.size(); ++i)
    for (std::size_t j = i + 1; j < named1.size(); ++j)
      if (named1[i].second != named1[j].second &&
          rel.value(named1[i].first) == rel.value(named1[j].first))
        fail("relativized values of " + var_str(named1[i].first) + " and " +
             var_str(named1[j].first) + " collide");
  for (std::size_t i = 0; i < named2.size(); ++i)
    for (std::size_t j = i + 1; j < named2.size(); ++j)
      if (named2[i].second != named2[j].second &&
          rel.value(named2[i].first) == rel.value(named2[j].first))
        fail("relativized values of " + var_str(named2[i].first) + " and " +
             var_str(named2[j].first) + " collide");
  for (const Var& x : arts.v0_free)
    for (const Var& y : arts.v0_free) {
      HSet pair = HSet::make(2, {HSet::make1({mbar.value0(x)}),
                                 HSet::make1({mbar.value0(x), mbar.value0(y)})});
      HSet rpair = HSet::make(2, {HSet::make1({rel.value0(x)}),
                                  HSet::make1({rel.value0(x), rel.value0(y)})});
      for (const auto& [X, c2] : named2)
        if (pair != c2 && rpair == rel.value(X))
          fail("relativized pair <" + x.name + "," + y.name +
               "> collides with " + var_str(X));
    }
  return ok;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

nlohmann::json hset_json(const HSet& s, const Interpretation& model) {
  nlohmann::json a = nlohmann::json::array();
  if (s.level == 1) {
    for (int e : s.elems) a.push_back(model.elem_name(e));
  } else {
    for (const HSet& m : s.members) a.push_back(hset_json(m, model));
  }
  return a;
}

}  // namespace

std::string artifacts_json(const UniverseArtifacts& arts,
                           const Interpretation& model) {
  nlohmann::json j;
  auto set_list = [&](const std::vector<HSet>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const HSet& s : v) a.push_back(hset_json(s, model));
    return a;
  };
  auto elem_list = [&](const std::vector<int>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int e : v) a.push_back(model.elem_name(e));
    return a;
  };
  auto var_list = [&](const std::vector<Var>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const Var& x : v) a.push_back(var_str(x));
    return a;
  };
  j["F1"] = set_list(arts.F1);
  j["F2"] = set_list(arts.F2);
  j["F"] = set_list(arts.F);
  j["Delta1"] = elem_list(arts.Delta1);
  j["Delta2"] = elem_list(arts.Delta2);
  j["Delta"] = elem_list(arts.Delta);
  nlohmann::json fresh = nlohmann::json::array();
  for (const auto& [v, val] : arts.V1F)
    fresh.push_back({{"var", var_str(v)}, {"set", hset_json(val, model)}});
  j["V1F"] = fresh;
  j["Dstar"] = elem_list(arts.Dstar);
  nlohmann::json wl = nlohmann::json::array();
  for (const WitnessEntry& e : arts.witness_log) {
    nlohmann::json args = nlohmann::json::array();
    for (const Var& v : e.args) args.push_back(var_str(v));
    wl.push_back({{"phi", print(e.phi)},
                  {"args", args},
                  {"inserted", elem_list(e.inserted)}});
  }
  j["witness_log"] = wl;
  j["free_vars"] = {{"sort0", var_list(arts.v0_free)},
                    {"sort1", var_list(arts.v1_free)},
                    {"sort2", var_list(arts.v2_free)}};
  return j.dump(2);
}

}  // namespace syllog
