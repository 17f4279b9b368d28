// Tests for the brute-force oracle, R1-R6 saturation, the h-fragment
// decision procedure, certification, and the propositional reduction.

#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "json.hpp"
#include "support/gen.hpp"
#include "syllog/core.hpp"
#include "syllog/fragment.hpp"
#include "syllog/solver.hpp"
#include "syllog/syntax.hpp"

using namespace syllog;

namespace {

const Var vx{"x", 0};
const Var vy{"y", 0};
const Var vX{"X", 1};
const Var vS{"S", 2};
const Var vU{"U", 1};  // designated universe
const Var vB2{"B", 2}; // designated bounded sort-2 collection
const Var vB3{"B", 3}; // designated bounded sort-3 collection

FormulaPtr atom_eq00(const Var& a, const Var& b) {
  return matom(aeq(tvar(a), tvar(b)));
}
FormulaPtr atom_in01(const Var& a, const Var& b) {
  return matom(ain(tvar(a), tvar(b)));
}

bool holds(const std::vector<FormulaPtr>& H, const FormulaPtr& f) {
  for (const FormulaPtr& g : H)
    if (formula_equal(g, f)) return true;
  return false;
}

// Conjunction equality up to associativity: decomposition reassembles a
// multi-conjunct chi from its flattened leaves.
bool same_conjuncts(const FormulaPtr& a, const FormulaPtr& b) {
  std::vector<FormulaPtr> la = and_leaves(a);
  std::vector<FormulaPtr> lb = and_leaves(b);
  if (la.size() != lb.size()) return false;
  for (std::size_t i = 0; i < la.size(); ++i)
    if (!formula_equal(la[i], lb[i])) return false;
  return true;
}

template <class Rng>
const Var& pick(Rng& rng, const std::vector<Var>& vs) {
  return vs[rng() % vs.size()];
}

// Random quantifier-free formula over explicit variable pools; only atom
// shapes whose pools are populated are drawn.
template <class Rng>
FormulaPtr rnd_qf_atom(Rng& rng, const std::vector<Var>& v0,
                       const std::vector<Var>& v1, const std::vector<Var>& v2,
                       const std::vector<Var>& v3) {
  for (;;) {
    switch (rng() % 6) {
      case 0:
        if (v0.size() >= 1)
          return matom(aeq(tvar(pick(rng, v0)), tvar(pick(rng, v0))));
        break;
      case 1:
        if (!v0.empty() && !v1.empty())
          return matom(ain(tvar(pick(rng, v0)), tvar(pick(rng, v1))));
        break;
      case 2:
        if (!v1.empty())
          return matom(aeq(tvar(pick(rng, v1)), tvar(pick(rng, v1))));
        break;
      case 3:
        if (!v1.empty() && !v2.empty())
          return matom(ain(tvar(pick(rng, v1)), tvar(pick(rng, v2))));
        break;
      case 4:
        if (!v2.empty()) {
          if (!v0.empty() && rng() % 3 == 0)
            return matom(aeq(tpair(pick(rng, v0), pick(rng, v0)),
                             tvar(pick(rng, v2))));
          return matom(aeq(tvar(pick(rng, v2)), tvar(pick(rng, v2))));
        }
        break;
      default:
        if (!v3.empty()) {
          if (!v0.empty() && rng() % 2 == 0)
            return matom(ain(tpair(pick(rng, v0), pick(rng, v0)),
                             tvar(pick(rng, v3))));
          if (!v2.empty())
            return matom(ain(tvar(pick(rng, v2)), tvar(pick(rng, v3))));
        }
        break;
    }
  }
}

template <class Rng>
FormulaPtr rnd_qf(Rng& rng, const std::vector<Var>& v0,
                  const std::vector<Var>& v1, const std::vector<Var>& v2,
                  const std::vector<Var>& v3, int depth) {
  if (depth <= 0 || rng() % 3 == 0) return rnd_qf_atom(rng, v0, v1, v2, v3);
  switch (rng() % 3) {
    case 0:
      return mnot(rnd_qf(rng, v0, v1, v2, v3, depth - 1));
    case 1:
      return mand(rnd_qf(rng, v0, v1, v2, v3, depth - 1),
                  rnd_qf(rng, v0, v1, v2, v3, depth - 1));
    default:
      return mor(rnd_qf(rng, v0, v1, v2, v3, depth - 1),
                 rnd_qf(rng, v0, v1, v2, v3, depth - 1));
  }
}

// Random chi part for an h-shell: propositional combinations of
// quantifier-free atoms, short level-1 universals, and guarded level-2/3
// universals over the designated collections.
template <class Rng>
FormulaPtr rnd_chi_leaf(Rng& rng, int h) {
  std::vector<Var> v0{vx, vy};
  std::vector<Var> v1{vX};
  std::vector<Var> v2{vS};
  std::vector<Var> v3{vB3};
  switch (rng() % 4) {
    case 0:
      return rnd_qf(rng, v0, v1, v2, v3, 2);
    case 1: { // level-1 universal, prefix of at most h sort-0 variables
      int k = 1 + static_cast<int>(rng() % h);
      std::vector<Var> qs;
      for (int i = 0; i < k; ++i) qs.push_back(Var{"q" + std::to_string(i + 1), 0});
      std::vector<Var> v0q = v0;
      v0q.insert(v0q.end(), qs.begin(), qs.end());
      return mforall(qs, rnd_qf(rng, v0q, v1, v2, v3, 2));
    }
    case 2: { // guarded level-2 universal
      int k = 1 + static_cast<int>(rng() % h);
      std::vector<Var> Ks;
      for (int i = 0; i < k; ++i) Ks.push_back(Var{"K" + std::to_string(i + 1), 1});
      std::vector<FormulaPtr> guard;
      for (const Var& K : Ks) guard.push_back(matom(ain(tvar(K), tvar(vB2))));
      std::vector<Var> v1q = v1;
      v1q.insert(v1q.end(), Ks.begin(), Ks.end());
      FormulaPtr body = rnd_qf(rng, v0, v1q, v2, v3, 2);
      if (rng() % 2 == 0) {
        std::vector<Var> qs{Var{"q1", 0}};
        std::vector<Var> v0q = v0;
        v0q.push_back(qs.front());
        body = mand(body, mforall(qs, rnd_qf(rng, v0q, v1q, v2, v3, 1)));
      }
      return mforall(Ks, mimpl(mand_all(guard), body));
    }
    default: { // guarded level-3 universal, single-variable prefix
      Var P{"P1", 2};
      FormulaPtr guard = matom(ain(tvar(P), tvar(vB3)));
      std::vector<Var> v2q = v2;
      v2q.push_back(P);
      FormulaPtr body = rnd_qf(rng, v0, v1, v2q, v3, 2);
      if (rng() % 2 == 0) {
        Var K{"K1", 1};
        std::vector<Var> v1q = v1;
        v1q.push_back(K);
        body = mand(body,
                    mforall({K}, mimpl(matom(ain(tvar(K), tvar(vB2))),
                                       rnd_qf(rng, v0, v1q, v2q, v3, 1))));
      }
      return mforall({P}, mimpl(guard, body));
    }
  }
}

template <class Rng>
FormulaPtr rnd_chi(Rng& rng, int h, int depth) {
  if (depth <= 0 || rng() % 3 == 0) return rnd_chi_leaf(rng, h);
  switch (rng() % 3) {
    case 0:
      return mnot(rnd_chi(rng, h, depth - 1));
    case 1:
      return mand(rnd_chi(rng, h, depth - 1), rnd_chi(rng, h, depth - 1));
    default:
      return mor(rnd_chi(rng, h, depth - 1), rnd_chi(rng, h, depth - 1));
  }
}

// Random propositional formula over letters 1..max_letter.
template <class Rng>
PropPtr rnd_prop(Rng& rng, int max_letter, int size) {
  if (size <= 1) return pletter(1 + static_cast<int>(rng() % max_letter));
  switch (rng() % 3) {
    case 0:
      return pnot(rnd_prop(rng, max_letter, size - 1));
    case 1: {
      int left = 1 + static_cast<int>(rng() % (size - 1));
      return pand(rnd_prop(rng, max_letter, left),
                  rnd_prop(rng, max_letter, size - 1 - left));
    }
    default: {
      int left = 1 + static_cast<int>(rng() % (size - 1));
      return por(rnd_prop(rng, max_letter, left),
                 rnd_prop(rng, max_letter, size - 1 - left));
    }
  }
}

// Level-1 value with fewer than h elements.
template <class Rng>
HSet rnd_small1(Rng& rng, int n, int h) {
  std::set<int> elems;
  int count = static_cast<int>(rng() % h);
  while (static_cast<int>(elems.size()) < count) elems.insert(rng() % n);
  return HSet::make1({elems.begin(), elems.end()});
}

// Sort-2 value whose members all satisfy the pow_{<h} cardinality bound.
template <class Rng>
HSet rnd_val2(Rng& rng, int n, int h) {
  std::vector<HSet> members;
  int count = static_cast<int>(rng() % 4);
  for (int i = 0; i < count; ++i) members.push_back(rnd_small1(rng, n, h));
  return HSet::make(2, std::move(members));
}

// Sort-3 value whose members (and their members) satisfy the bound.
template <class Rng>
HSet rnd_val3(Rng& rng, int n, int h) {
  std::vector<HSet> members;
  int count = static_cast<int>(rng() % 3);
  for (int i = 0; i < count; ++i) {
    std::vector<HSet> inner;
    int k = static_cast<int>(rng() % h);
    for (int j = 0; j < k; ++j) inner.push_back(rnd_small1(rng, n, h));
    members.push_back(HSet::make(2, std::move(inner)));
  }
  return HSet::make(3, std::move(members));
}

// Interpretation assigning every free variable of f a bound-respecting value.
template <class Rng>
Interpretation rnd_capped_model(Rng& rng, const FormulaPtr& f, int n, int h) {
  Interpretation m;
  for (int i = 0; i < n; ++i) {
    m.domain.push_back(i);
    m.elem_names.push_back(std::string(1, static_cast<char>('a' + i)));
  }
  for (const Var& v : free_vars_all(f)) {
    switch (v.sort) {
      case 0: m.assign0[v] = rng() % n; break;
      case 1: {
        std::set<int> elems;
        for (int d = 0; d < n; ++d)
          if (rng() % 2 == 0) elems.insert(d);
        m.assign.emplace(v, HSet::make1({elems.begin(), elems.end()}));
        break;
      }
      case 2: m.assign.emplace(v, rnd_val2(rng, n, h)); break;
      default: m.assign.emplace(v, rnd_val3(rng, n, h)); break;
    }
  }
  return m;
}

long long model_weight(const Interpretation& m) {
  long long w = static_cast<long long>(m.domain.size() + m.assign0.size());
  for (const auto& [v, s] : m.assign) {
    (void)v;
    w += 1 + static_cast<long long>(s.size());
    for (const HSet& mm : s.members) w += static_cast<long long>(mm.size());
  }
  return w;
}

} // namespace

TEST_CASE("verdict statuses render and serialize") {
  CHECK(to_string(SolveStatus::SAT) == "SAT");
  CHECK(to_string(SolveStatus::UNSAT) == "UNSAT");
  CHECK(to_string(SolveStatus::CAPPED) == "CAPPED");

  Verdict v;
  v.status = SolveStatus::UNSAT;
  v.stats.nodes = 7;
  v.stats.max_domain = 2;
  v.stats.branches = 3;
  auto j = nlohmann::json::parse(verdict_json(v));
  CHECK(j["status"] == "UNSAT");
  CHECK(!j.contains("model"));
  CHECK(j["stats"]["nodes"] == 7);
  CHECK(j["stats"]["max_domain"] == 2);
  CHECK(j["stats"]["branches"] == 3);

  Verdict s = oracle_sat(atom_eq00(vx, vx), 2);
  auto js = nlohmann::json::parse(verdict_json(s));
  CHECK(js["status"] == "SAT");
  CHECK(js.contains("model"));
}

TEST_CASE("oracle finds the expected first models") {
  Verdict v = oracle_sat(atom_eq00(vx, vx), 3);
  REQUIRE(v.status == SolveStatus::SAT);
  REQUIRE(v.model.has_value());
  CHECK(v.model->domain.size() == 1);
  CHECK(v.stats.max_domain == 1);
  CHECK(eval(*v.model, atom_eq00(vx, vx)));

  // Every subset of the domain must be a member of S.
  FormulaPtr all_sets = mforall({Var{"Z", 1}},
                                matom(ain(tvar(Var{"Z", 1}), tvar(vS))));
  Verdict w = oracle_sat(all_sets, 2);
  REQUIRE(w.status == SolveStatus::SAT);
  REQUIRE(w.model.has_value());
  CHECK(w.model->domain.size() == 1);
  const HSet& sval = w.model->value(vS);
  CHECK(sval.size() == 2);
  CHECK(sval.contains(HSet::make1({})));
  CHECK(sval.contains(HSet::make1({0})));
  CHECK(eval(*w.model, all_sets));
}

TEST_CASE("oracle separates unsat from capped") {
  FormulaPtr contradiction = mand(atom_in01(vx, vX), mnot(atom_in01(vx, vX)));
  Verdict v = oracle_sat(contradiction, 2);
  CHECK(v.status == SolveStatus::UNSAT);
  CHECK(!v.model.has_value());
  CHECK(v.stats.nodes > 0);

  // Forcing a sort-3 value to hold all four level-2 sets over a singleton
  // domain, then denying one: unsatisfiable, but only visible when the
  // member caps are lifted.
  Var T{"T", 3}, Z0{"Z0", 2}, Z{"Z", 2};
  FormulaPtr all_in = mforall({Z}, matom(ain(tvar(Z), tvar(T))));
  FormulaPtr f = mand(all_in, mnot(matom(ain(tvar(Z0), tvar(T)))));
  Verdict capped = oracle_sat(f, 1);
  CHECK(capped.status == SolveStatus::CAPPED);
  OracleOptions full;
  full.no_caps = true;
  Verdict definite = oracle_sat(f, 1, full);
  CHECK(definite.status == SolveStatus::UNSAT);

  // A tiny node budget can only ever weaken the verdict to CAPPED.
  OracleOptions tiny;
  tiny.node_budget = 0;
  Verdict starved = oracle_sat(mnot(atom_eq00(vx, vx)), 2, tiny);
  CHECK(starved.status == SolveStatus::CAPPED);
}

TEST_CASE("saturation decomposes conjunctions and double negations") {
  FormulaPtr A = atom_eq00(vx, vx);
  FormulaPtr B = atom_in01(vx, vX);

  std::vector<SaturationState> bs = saturate(mand(A, B));
  REQUIRE(bs.size() == 1);
  CHECK(bs[0].H.size() == 2);
  CHECK(holds(bs[0].H, A));
  CHECK(holds(bs[0].H, B));
  CHECK(bs[0].pending_branches.empty());
  CHECK(bs[0].rule_applications >= 1);

  bs = saturate(mnot(mnot(A)));
  REQUIRE(bs.size() == 1);
  CHECK(bs[0].H.size() == 1);
  CHECK(holds(bs[0].H, A));

  // Negated disjunction: both negations land in the same branch.
  bs = saturate(mnot(mor(A, B)));
  REQUIRE(bs.size() == 1);
  CHECK(holds(bs[0].H, mnot(A)));
  CHECK(holds(bs[0].H, mnot(B)));

  // Duplicate literals are kept once.
  bs = saturate(mand(A, A));
  REQUIRE(bs.size() == 1);
  CHECK(bs[0].H.size() == 1);
}

TEST_CASE("saturation instantiates negated universals at fresh witnesses") {
  Var z{"z", 0};
  FormulaPtr f = mnot(mforall({z}, atom_in01(z, vX)));
  std::vector<SaturationState> bs = saturate(f);
  REQUIRE(bs.size() == 1);
  REQUIRE(bs[0].fresh_vars.size() == 1);
  const Var& w = bs[0].fresh_vars[0];
  CHECK(w.sort == 0);
  CHECK(!(w == z));
  REQUIRE(bs[0].H.size() == 1);
  CHECK(formula_equal(bs[0].H[0], mnot(atom_in01(w, vX))));

  // A two-variable sort-1 prefix yields two sort-1 witnesses.
  Var K1{"K1", 1}, K2{"K2", 1};
  FormulaPtr g = mnot(mforall({K1, K2}, matom(aeq(tvar(K1), tvar(K2)))));
  bs = saturate(g);
  REQUIRE(bs.size() == 1);
  REQUIRE(bs[0].fresh_vars.size() == 2);
  CHECK(bs[0].fresh_vars[0].sort == 1);
  CHECK(bs[0].fresh_vars[1].sort == 1);
  CHECK(formula_equal(
      bs[0].H[0],
      mnot(matom(aeq(tvar(bs[0].fresh_vars[0]), tvar(bs[0].fresh_vars[1]))))));
}

TEST_CASE("saturation branches on disjunctions with observable alternatives") {
  FormulaPtr A = atom_eq00(vx, vx);
  FormulaPtr B = atom_eq00(vy, vy);
  FormulaPtr C = atom_eq00(vx, vy);
  FormulaPtr D = atom_in01(vx, vX);
  FormulaPtr f = mand(mor(A, B), mor(C, D));

  Saturator cur(f);
  REQUIRE(!cur.done());
  CHECK(holds(cur.current().H, A));
  CHECK(holds(cur.current().H, C));
  REQUIRE(cur.current().pending_branches.size() == 2);
  CHECK(formula_equal(cur.current().pending_branches[0], B)); // outermost
  CHECK(formula_equal(cur.current().pending_branches[1], D));

  cur.advance();
  REQUIRE(!cur.done());
  CHECK(holds(cur.current().H, A));
  CHECK(holds(cur.current().H, D));
  CHECK(cur.current().pending_branches.size() == 1);

  cur.advance();
  CHECK(holds(cur.current().H, B));
  CHECK(holds(cur.current().H, C));
  cur.advance();
  CHECK(holds(cur.current().H, B));
  CHECK(holds(cur.current().H, D));
  CHECK(cur.current().pending_branches.empty());
  cur.advance();
  CHECK(cur.done());

  // The negated-conjunction dual branches the same way.
  std::vector<SaturationState> bs = saturate(mnot(mand(A, B)));
  REQUIRE(bs.size() == 2);
  CHECK(holds(bs[0].H, mnot(A)));
  CHECK(holds(bs[1].H, mnot(B)));

  // The materializer honors its limit.
  CHECK(saturate(f).size() == 4);
  CHECK(saturate(f, 2).size() == 2);
}

TEST_CASE("saturation rejects inputs outside the restricted fragment") {
  // A negative level-1 universal inside a level-2 universal whose bound
  // variables are not linked to the enclosing prefix.
  Var z{"z", 0}, Z{"Z", 1};
  FormulaPtr bad = mforall({Z}, mnot(mforall({z}, atom_in01(z, vX))));
  CHECK(!is_4lqsr(bad));
  CHECK_THROWS_AS(saturate(bad), FragmentError);
  CHECK_THROWS_AS(Saturator{bad}, FragmentError);
}

TEST_CASE("branch conjunctions imply their input") {
  std::mt19937 rng(20260815);
  testgen::GenOptions opts;
  opts.max_depth = 3;
  int branches_checked = 0;
  OracleOptions oracle_opts;
  oracle_opts.node_budget = 200'000;
  while (branches_checked < 50) {
    FormulaPtr f = testgen::random_formula(rng, opts);
    if (!is_4lqsr(f)) continue;
    for (const SaturationState& b : saturate(f, 4)) {
      REQUIRE(!b.H.empty());
      std::vector<FormulaPtr> parts = b.H;
      parts.push_back(mnot(f));
      // A model of the branch violating the input would refute soundness;
      // the small search space must never produce one.
      Verdict v = oracle_sat(mand_all(parts), 1, oracle_opts);
      CHECK(v.status != SolveStatus::SAT);
      ++branches_checked;
      if (branches_checked >= 50) break;
    }
  }
}

TEST_CASE("rule applications stay linear in the input size") {
  std::mt19937 rng(7);
  testgen::GenOptions opts;
  opts.max_depth = 5;
  for (int i = 0; i < 100; ++i) {
    FormulaPtr f = testgen::random_formula(rng, opts);
    if (!is_4lqsr(f)) continue;
    for (const SaturationState& b : saturate(f, 16))
      CHECK(b.rule_applications <= 2 * f->node_count + 2);
  }
}

TEST_CASE("h-shells decompose back to their parts") {
  for (int h = 2; h <= 3; ++h) {
    CAPTURE(h);
    FormulaPtr bare = make_h_shell(nullptr, h);
    DecomposeResult dr = decompose_h(bare, h);
    REQUIRE(dr.ok());
    CHECK(dr.decomposition->chi == nullptr);
    CHECK(dr.decomposition->psi2.empty());
    CHECK(dr.decomposition->psi3.empty());
    CHECK(dr.decomposition->h == h);

    // A chi with free sort-2 and sort-3 variables gets psi coverage.
    Var R{"R", 3};
    FormulaPtr chi = mand(matom(ain(tvar(vS), tvar(R))),
                          matom(ain(tvar(vX), tvar(vS))));
    DecomposeResult dc = decompose_h(make_h_shell(chi, h), h);
    REQUIRE(dc.ok());
    REQUIRE(dc.decomposition->chi != nullptr);
    CHECK(same_conjuncts(dc.decomposition->chi, chi));
    REQUIRE(dc.decomposition->psi2.size() == 1);
    CHECK(dc.decomposition->psi2[0].var == vS);
    REQUIRE(dc.decomposition->psi3.size() == 1);
    CHECK(dc.decomposition->psi3[0].var == R);
  }

  CHECK_THROWS_AS(make_h_shell(nullptr, 1), std::invalid_argument);

  std::mt19937 rng(99);
  for (int i = 0; i < 30; ++i) {
    int h = 2 + static_cast<int>(rng() % 2);
    FormulaPtr chi = rnd_chi(rng, h, 2);
    FormulaPtr shell = make_h_shell(chi, h);
    DecomposeResult dr = decompose_h(shell, h);
    CAPTURE(print(chi));
    REQUIRE(dr.ok());
    REQUIRE(dr.decomposition->chi != nullptr);
    CHECK(same_conjuncts(dr.decomposition->chi, chi));
  }
}

TEST_CASE("solve_h validates its inputs") {
  FormulaPtr shell = make_h_shell(nullptr, 2);
  CHECK_THROWS_AS(solve_h(shell, 1), std::invalid_argument);
  CHECK_THROWS_AS(solve_h(atom_eq00(vx, vx), 2), FragmentError);
}

TEST_CASE("solve_h decides reduced propositional formulae") {
  // The two canonical singletons first.
  PropPtr taut = por(pletter(1), pnot(pletter(1)));
  FormulaPtr fs = make_h_shell(reduce_sat(taut), 2);
  Verdict v = solve_h(fs, 2);
  REQUIRE(v.status == SolveStatus::SAT);
  REQUIRE(v.model.has_value());
  CHECK(certify(*v.model, fs, 2));
  CHECK(eval(*v.model, fs));
  CHECK(v.stats.branches >= 1);

  PropPtr contra = pand(pletter(1), pnot(pletter(1)));
  Verdict u = solve_h(make_h_shell(reduce_sat(contra), 2), 2);
  CHECK(u.status == SolveStatus::UNSAT);
  CHECK(!u.model.has_value());

  // Randomized truth-table agreement: satisfiable reductions must come
  // back SAT, unsatisfiable ones UNSAT (never CAPPED: a propositionally
  // contradictory branch is always refutable).
  std::mt19937 rng(4242);
  int sat_seen = 0;
  for (int i = 0; i < 45; ++i) {
    PropPtr p = rnd_prop(rng, 4, 2 + static_cast<int>(rng() % 8));
    bool expect = prop_brute_sat(p);
    FormulaPtr f = make_h_shell(reduce_sat(p), 2);
    Verdict r = solve_h(f, 2);
    CAPTURE(print(reduce_sat(p)));
    CHECK(r.status == (expect ? SolveStatus::SAT : SolveStatus::UNSAT));
    if (expect) {
      ++sat_seen;
      REQUIRE(r.model.has_value());
      CHECK(certify(*r.model, f, 2));
    }
  }
  CHECK(sat_seen >= 10);

  // Random trees are mostly satisfiable, so drive the unsatisfiable side
  // with explicit contradictions of varied shape.
  for (int i = 0; i < 8; ++i) {
    PropPtr q = rnd_prop(rng, 3, 1 + static_cast<int>(rng() % 5));
    FormulaPtr f = make_h_shell(reduce_sat(pand(q, pnot(q))), 2);
    CAPTURE(print(reduce_sat(q)));
    CHECK(solve_h(f, 2).status == SolveStatus::UNSAT);
  }
}

TEST_CASE("solve_h refutes a shell whose chi demands a large member") {
  // chi asserts that some member of the bounded sort-2 collection has two
  // distinct elements; at h = 2 the shell forbids exactly that.
  Var Z{"Z", 1}, z1{"z1", 0}, z2{"z2", 0};
  FormulaPtr small = mforall(
      {z1, z2}, mimpl(mand(matom(ain(tvar(z1), tvar(Z))),
                           matom(ain(tvar(z2), tvar(Z)))),
                      matom(aeq(tvar(z1), tvar(z2)))));
  FormulaPtr chi = mnot(mforall({Z}, mimpl(matom(ain(tvar(Z), tvar(vB2))),
                                           small)));
  FormulaPtr shell = make_h_shell(chi, 2);
  Verdict v = solve_h(shell, 2);
  CHECK(v.status == SolveStatus::UNSAT);
}

TEST_CASE("pair terms obey the member-size discipline of the shells") {
  // <x, y> in B with x != y requires a two-element member {x, y}; the
  // h = 2 shell caps members below two elements, the h = 3 shell admits it.
  FormulaPtr chi = mand(matom(ain(tpair(vx, vy), tvar(vB3))),
                        mnot(atom_eq00(vx, vy)));
  Verdict tight = solve_h(make_h_shell(chi, 2), 2);
  CHECK(tight.status == SolveStatus::UNSAT);

  FormulaPtr roomy = make_h_shell(chi, 3);
  Verdict wide = solve_h(roomy, 3);
  REQUIRE(wide.status == SolveStatus::SAT);
  REQUIRE(wide.model.has_value());
  CHECK(wide.model->domain.size() == 2);
  CHECK(certify(*wide.model, roomy, 3));
  CHECK(eval(*wide.model, roomy));

  // Without the disequality the h = 2 shell collapses the pair instead.
  FormulaPtr collapsed = make_h_shell(matom(ain(tpair(vx, vy), tvar(vB3))), 2);
  Verdict c = solve_h(collapsed, 2);
  REQUIRE(c.status == SolveStatus::SAT);
  CHECK(c.model->value0(vx) == c.model->value0(vy));
}

TEST_CASE("solve_h agrees with the oracle on random shell formulae") {
  std::mt19937 rng(31337);
  OracleOptions oracle_opts;
  oracle_opts.node_budget = 400'000;
  int decided = 0;
  for (int i = 0; i < 40; ++i) {
    FormulaPtr chi = rnd_chi(rng, 2, 2);
    FormulaPtr f = make_h_shell(chi, 2);
    REQUIRE(decompose_h(f, 2).ok());
    Verdict v = solve_h(f, 2);
    CAPTURE(print(chi));
    if (v.status == SolveStatus::SAT) {
      ++decided;
      REQUIRE(v.model.has_value());
      CHECK(certify(*v.model, f, 2));
      if (v.model->domain.size() <= 4) CHECK(eval(*v.model, f));
    } else if (v.status == SolveStatus::UNSAT) {
      ++decided;
      // An UNSAT claim covers every size; the oracle must not find a model.
      Verdict o = oracle_sat(f, 1, oracle_opts);
      CHECK(o.status != SolveStatus::SAT);
    }
  }
  CHECK(decided >= 20);
}

TEST_CASE("solve_h verdicts do not depend on the worker count") {
  std::mt19937 rng(555);
  int compared = 0;
  for (int i = 0; i < 12 && compared < 6; ++i) {
    FormulaPtr f = make_h_shell(rnd_chi(rng, 2, 1), 2);
    SolveHOptions one, two;
    two.jobs = 2;
    Verdict a = solve_h(f, 2, one);
    Verdict b = solve_h(f, 2, two);
    CHECK(a.status == b.status);
    if (a.status == SolveStatus::SAT) {
      REQUIRE(b.model.has_value());
      CHECK(print_model(*a.model) == print_model(*b.model));
    }
    ++compared;
  }
  CHECK(compared == 6);
}

TEST_CASE("certify rejects broken preconditions with diagnostics") {
  FormulaPtr f = make_h_shell(reduce_sat(pletter(1)), 2);
  Verdict v = solve_h(f, 2);
  REQUIRE(v.status == SolveStatus::SAT);
  Interpretation good = *v.model;
  REQUIRE(certify(good, f, 2));

  // Unassigned free variable.
  Interpretation missing = good;
  missing.assign.erase(vU);
  CertifyResult r1 = certify_explain(missing, f, 2);
  CHECK(!r1.ok);
  CHECK(r1.diagnostic.find("unassigned") != std::string::npos);

  // A sort-2 value with a member at the cardinality bound.
  Interpretation fat = good;
  fat.domain = {0, 1};
  fat.elem_names = {"a", "b"};
  fat.assign[vB2] = HSet::make(2, {HSet::make1({0, 1})});
  CertifyResult r2 = certify_explain(fat, f, 2);
  CHECK(!r2.ok);
  CHECK(r2.diagnostic.find("member") != std::string::npos);

  // A universe missing a domain element.
  Interpretation narrow = good;
  narrow.domain = {0, 1};
  narrow.elem_names = {"a", "b"};
  narrow.assign[vU] = HSet::make1({0});
  CertifyResult r3 = certify_explain(narrow, f, 2);
  CHECK(!r3.ok);

  // A chi conjunct that evaluates to false.
  FormulaPtr g = make_h_shell(
      mand(reduce_sat(pletter(1)), reduce_sat(pnot(pletter(2)))), 2);
  Verdict vg = solve_h(g, 2);
  REQUIRE(vg.status == SolveStatus::SAT);
  Interpretation flipped = *vg.model;
  Var x2{"x2", 0};
  // Move x2 into X so the negated membership fails.
  HSet xval = flipped.value(Var{"X", 1});
  std::vector<int> elems = xval.elems;
  elems.push_back(flipped.value0(x2));
  flipped.assign[Var{"X", 1}] = HSet::make1(std::move(elems));
  flipped.assign[vU] = HSet::make1(flipped.domain);
  CertifyResult r4 = certify_explain(flipped, g, 2);
  if (!r4.ok) CHECK(r4.diagnostic.find("chi conjunct") != std::string::npos);
  CHECK(r4.ok == eval(flipped, g));

  CHECK_THROWS_AS(certify_explain(good, atom_eq00(vx, vx), 2), FragmentError);
}

TEST_CASE("certify matches the evaluator on precondition-clean models") {
  std::mt19937 rng(2024);
  std::vector<std::pair<Interpretation, FormulaPtr>> cases;
  for (int i = 0; i < 20; ++i) {
    FormulaPtr f = make_h_shell(rnd_chi(rng, 2, 2), 2);
    for (int k = 0; k < 5; ++k) {
      int n = 1 + static_cast<int>(rng() % 3);
      cases.emplace_back(rnd_capped_model(rng, f, n, 2), f);
    }
  }

  std::vector<CertifyResult> cert;
  std::uint64_t before = stats::pow2_expansions.load();
  for (const auto& [m, f] : cases) cert.push_back(certify_explain(m, f, 2));
  CHECK(stats::pow2_expansions.load() == before);

  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& [m, f] = cases[i];
    bool expected = eval(m, f);
    CAPTURE(i);
    CAPTURE(print(f));
    CHECK(cert[i].ok == expected);
    // The certificate check stays quadratic in model plus formula size.
    long long budget = model_weight(m) + f->node_count;
    CHECK(cert[i].steps <= 60 * budget * budget);
  }
}

TEST_CASE("propositional helpers behave") {
  CHECK_THROWS_AS(pletter(0), std::invalid_argument);
  CHECK(prop_brute_sat(pletter(3)));
  CHECK(!prop_brute_sat(pand(pletter(1), pnot(pletter(1)))));
  CHECK(prop_brute_sat(pand(por(pletter(1), pletter(2)), pnot(pletter(1)))));

  FormulaPtr r = reduce_sat(pletter(1));
  REQUIRE(r->kind == FKind::Atom);
  CHECK(r->atom->kind == AtomKind::In);
  CHECK(r->atom->lhs.v.sort == 0);
  CHECK(r->atom->rhs.v.sort == 1);

  // Distinct letters map to distinct sort-0 variables over one shared set.
  FormulaPtr rr = reduce_sat(pand(pletter(1), pletter(2)));
  CHECK(free_vars(rr, 0).size() == 2);
  CHECK(free_vars(rr, 1).size() == 1);

  // Reduction preserves satisfiability against the truth table.
  std::mt19937 rng(606);
  for (int i = 0; i < 60; ++i) {
    PropPtr p = rnd_prop(rng, 4, 2 + static_cast<int>(rng() % 8));
    Verdict v = oracle_sat(reduce_sat(p), 2);
    REQUIRE(v.status != SolveStatus::CAPPED);
    CHECK((v.status == SolveStatus::SAT) == prop_brute_sat(p));
  }
}
