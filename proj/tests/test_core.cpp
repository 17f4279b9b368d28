#include "doctest.h"

#include <random>

#include "syllog/core.hpp"

using namespace syllog;

namespace {

Var v0(const char* n) { return Var{n, 0}; }
Var v1(const char* n) { return Var{n, 1}; }
Var v2(const char* n) { return Var{n, 2}; }
Var v3(const char* n) { return Var{n, 3}; }

FormulaPtr in0(const char* x, const char* X) {
  return matom(ain(tvar(v0(x)), tvar(v1(X))));
}
FormulaPtr eq0(const char* x, const char* y) {
  return matom(aeq(tvar(v0(x)), tvar(v0(y))));
}

} // namespace

TEST_CASE("pair terms evaluate a la Kuratowski") {
  Interpretation M;
  M.domain = {0, 1};
  M.elem_names = {"a", "b"};
  M.assign0[v0("x")] = 0;
  M.assign0[v0("y")] = 1;

  HSet pxy = eval_term2(M, tpair(v0("x"), v0("y")));
  HSet expected =
      HSet::make(2, {HSet::make1({0}), HSet::make1({0, 1})});
  CHECK(pxy == expected);

  // Kuratowski collapse: <x,x> has exactly one member.
  HSet pxx = eval_term2(M, tpair(v0("x"), v0("x")));
  CHECK(pxx == HSet::make(2, {HSet::make1({0})}));
  CHECK(pxx.size() == 1);

  // Sort-2 variables evaluate by lookup.
  M.assign[v2("X")] = HSet::make(2, {HSet::make1({0})});
  CHECK(eval_term2(M, tvar(v2("X"))) == HSet::make(2, {HSet::make1({0})}));

  CHECK_THROWS_AS(eval_term2(M, tpair(v0("x"), v0("unset"))), EvalError);
}

TEST_CASE("atom evaluation and quantifier semantics") {
  Interpretation M;
  M.domain = {0};
  M.elem_names = {"a"};
  M.assign0[v0("x")] = 0;
  M.assign[v1("X")] = HSet::make1({0});

  CHECK(eval(M, in0("x", "X")));

  Var z = v0("z");
  FormulaPtr refl = mforall({z}, matom(aeq(tvar(z), tvar(z))));
  CHECK(eval(M, refl));

  Interpretation M2;
  M2.domain = {0, 1};
  M2.elem_names = {"a", "b"};
  M2.assign[v3("X")] = HSet::empty(3);
  Var Z2 = v2("Z");
  FormulaPtr no_member =
      mforall({Z2}, mnot(matom(ain(tvar(Z2), tvar(v3("X"))))));
  CHECK(eval(M2, no_member));
  // The sort-2 quantifier above ranges over all 16 level-2 sets over a
  // 2-element domain.
  CHECK(enumerate_subsets(2, enumerate_level1({0, 1})).size() == 16);
}

TEST_CASE("sort-2 quantifier expansion is capacity-guarded and instrumented") {
  Interpretation M;
  M.domain = {0, 1, 2, 3, 4};
  M.assign[v3("X")] = HSet::empty(3);
  Var Z2 = v2("Z");
  FormulaPtr f = mforall({Z2}, mnot(matom(ain(tvar(Z2), tvar(v3("X"))))));
  CHECK_THROWS_AS(eval(M, f), CapacityError);

  M.domain = {0, 1};
  auto before = stats::pow2_expansions.load();
  CHECK(eval(M, f));
  CHECK(stats::pow2_expansions.load() == before + 1);
}

TEST_CASE("atom constructors reject ill-sorted shapes") {
  CHECK_THROWS_WITH_AS(ain(tvar(v0("x")), tvar(v2("X"))),
                       "membership of sort-0 term in sort-2 variable is not "
                       "an atom",
                       SortError);
  CHECK_THROWS_AS(ain(tvar(v1("X")), tvar(v1("Y"))), SortError);
  CHECK_THROWS_AS(aeq(tvar(v0("x")), tvar(v1("X"))), SortError);
  CHECK_THROWS_AS(aeq(tvar(v3("X")), tvar(v3("Y"))), SortError);
  CHECK_THROWS_AS(tpair(v1("X"), v0("y")), SortError);
  CHECK_THROWS_AS(ain(tvar(v0("x")), tpair(v0("a"), v0("b"))), SortError);

  // Pair terms are fine on either side of a level-2 equality and on the
  // left of a level-2 membership.
  CHECK_NOTHROW(aeq(tpair(v0("x"), v0("y")), tvar(v2("Z"))));
  CHECK_NOTHROW(aeq(tvar(v2("Z")), tpair(v0("x"), v0("y"))));
  CHECK_NOTHROW(ain(tpair(v0("x"), v0("y")), tvar(v3("R"))));
}

TEST_CASE("quantifier construction enforces stratification") {
  FormulaPtr qf = in0("z", "X");
  Var z = v0("z"), w = v0("w");
  Var Z1 = v1("Z");

  CHECK_THROWS_AS(mforall({}, qf), SortError);
  CHECK_THROWS_AS(mforall({z, z}, qf), SortError);
  CHECK_THROWS_AS(mforall({z, Z1}, qf), SortError);
  CHECK_THROWS_AS(mforall({Var{"X", 3}}, qf), SortError);

  // A level-1 matrix must be quantifier-free.
  FormulaPtr inner = mforall({z}, qf);
  CHECK_THROWS_AS(mforall({w}, mand(inner, eq0("w", "w"))), SortError);

  // Directly nested same-sort prefixes merge into one block.
  FormulaPtr merged = mforall({w}, mforall({z}, matom(aeq(tvar(w), tvar(z)))));
  CHECK(merged->kind == FKind::Forall);
  CHECK(merged->bound == std::vector<Var>{w, z});
  CHECK(merged->a->kind == FKind::Atom);

  // Shadowed outer variables are dropped by the merge.
  FormulaPtr shadow = mforall({z}, mforall({z}, qf));
  CHECK(shadow->bound == std::vector<Var>{z});

  // Level-2 bodies may embed level-1 universals, even under negation.
  CHECK_NOTHROW(mforall({Z1}, mnot(inner)));
  // Level-3 bodies may embed level-2 universals.
  CHECK_NOTHROW(mforall({v2("W")}, mforall({Z1}, mnot(inner))));
  // ... but not further level-3 quantifiers.
  FormulaPtr lvl3 = mforall({v2("W")}, matom(ain(tvar(Z1), tvar(v2("W")))));
  CHECK_THROWS_AS(mforall({v2("V")}, mand(lvl3, lvl3)), SortError);
}

TEST_CASE("substitution rewrites free occurrences only") {
  Var z = v0("z"), zp = v0("z'");
  FormulaPtr f = in0("z", "X");
  FormulaPtr g = substitute(f, {{z, zp}});
  CHECK(formula_equal(g, matom(ain(tvar(zp), tvar(v1("X"))))));

  FormulaPtr closed = mforall({z}, f);
  CHECK(formula_equal(substitute(closed, {{z, zp}}), closed));

  Var z1 = v0("z1"), z2 = v0("z2"), a = v0("a"), b = v0("b");
  FormulaPtr pe = matom(aeq(tpair(z1, z2), tvar(v2("Z"))));
  FormulaPtr pe2 = substitute(pe, {{z1, a}, {z2, b}});
  CHECK(formula_equal(pe2, matom(aeq(tpair(a, b), tvar(v2("Z"))))));

  // Sort-changing mappings are rejected.
  CHECK_THROWS_AS(substitute(f, {{z, v1("Z")}}), SortError);

  // Capture is an error, never silently renamed.
  Var w = v0("w");
  FormulaPtr cap = mforall({w}, matom(aeq(tvar(z), tvar(w))));
  CHECK_THROWS_AS(substitute(cap, {{z, w}}), SubstError);
}

TEST_CASE("free variable collection by sort") {
  Var z = v0("z");
  FormulaPtr f = mforall({z}, in0("z", "X"));
  CHECK(free_vars(f, 1) == std::set<Var>{v1("X")});
  CHECK(free_vars(f, 0).empty());

  FormulaPtr g = mand(
      matom(ain(tpair(v0("x"), v0("y")), tvar(v3("X")))),
      mforall({v1("Z")}, matom(ain(tvar(v1("Z")), tvar(v2("X"))))));
  CHECK(free_vars(g, 0) == std::set<Var>{v0("x"), v0("y")});
  CHECK(free_vars(g, 1).empty());
  CHECK(free_vars(g, 2) == std::set<Var>{v2("X")});
  CHECK(free_vars(g, 3) == std::set<Var>{v3("X")});
}

TEST_CASE("polarity tracks negations above an occurrence") {
  FormulaPtr A = in0("x", "A");
  FormulaPtr B = in0("x", "B");

  auto polarity_of = [](const std::vector<PolarityEntry>& entries,
                        const FormulaPtr& node) {
    for (const auto& e : entries)
      if (formula_equal(e.node, node)) return e.positive;
    FAIL("occurrence not found");
    return false;
  };

  auto p1 = polarity_occurrences(mnot(mand(A, B)));
  CHECK_FALSE(polarity_of(p1, A));

  auto p2 = polarity_occurrences(mnot(mnot(A)));
  CHECK(polarity_of(p2, A));

  auto p3 = polarity_occurrences(mnot(mor(mnot(A), B)));
  CHECK(polarity_of(p3, A));
  CHECK_FALSE(polarity_of(p3, B));

  // Root occurrence is positive and carries the empty path.
  CHECK(p1.front().path.empty());
  CHECK(p1.front().positive);
}

TEST_CASE("HSet canonical form makes equality extensional") {
  CHECK(HSet::make1({2, 1, 1}) == HSet::make1({1, 2}));
  CHECK(HSet::make(2, {HSet::make1({1}), HSet::make1({1})}) ==
        HSet::make(2, {HSet::make1({1})}));
  CHECK(HSet::make1({1}) != HSet::make1({1, 2}));
  CHECK_THROWS_AS(HSet::make(2, {HSet::make(2, {})}), SortError);

  HSet a = HSet::make1({0, 1});
  HSet b = HSet::make1({1, 2});
  CHECK(hset_union(a, b) == HSet::make1({0, 1, 2}));
  CHECK(hset_intersect(a, b) == HSet::make1({1}));
  CHECK(hset_diff(a, b) == HSet::make1({0}));

  // Enumeration is canonical: by size, then lexicographic.
  auto subsets = enumerate_level1({0, 1});
  REQUIRE(subsets.size() == 4);
  CHECK(subsets[0] == HSet::empty(1));
  CHECK(subsets[1] == HSet::make1({0}));
  CHECK(subsets[2] == HSet::make1({1}));
  CHECK(subsets[3] == HSet::make1({0, 1}));
}

TEST_CASE("alpha equality ignores bound names, not free ones") {
  Var z = v0("z"), w = v0("w");
  FormulaPtr f = mforall({z}, in0("z", "X"));
  FormulaPtr g = mforall({w}, in0("w", "X"));
  CHECK(alpha_equal(f, g));
  CHECK_FALSE(formula_equal(f, g));

  FormulaPtr h = mforall({w}, in0("w", "Y"));
  CHECK_FALSE(alpha_equal(f, h));

  // Nesting a same-sort prefix merges, so these differ in block arity:
  // (forall z) vs (forall w,z). Alpha equality is structural, not semantic.
  FormulaPtr s1 = mforall({z}, mforall({z}, in0("z", "X")));
  FormulaPtr s2 = mforall({w}, mforall({z}, in0("z", "X")));
  CHECK_FALSE(alpha_equal(s1, s2));

  Var a = v0("a"), b = v0("b"), c = v0("c"), d = v0("d");
  CHECK(alpha_equal(mforall({a, b}, matom(aeq(tvar(a), tvar(b)))),
                    mforall({c, d}, matom(aeq(tvar(c), tvar(d))))));
  CHECK_FALSE(alpha_equal(mforall({a, b}, matom(aeq(tvar(a), tvar(b)))),
                          mforall({c, d}, matom(aeq(tvar(d), tvar(c))))));

  CHECK_FALSE(alpha_equal(in0("z", "X"), in0("w", "X")));
}

TEST_CASE("double negation is semantically inert on a random corpus") {
  std::mt19937_64 rng(20260815);
  Interpretation M;
  M.domain = {0, 1};
  M.assign0[v0("x")] = 0;
  M.assign0[v0("y")] = 1;
  M.assign[v1("X")] = HSet::make1({0});
  M.assign[v1("Y")] = HSet::make1({0, 1});

  auto rand_formula = [&](auto&& self, int depth) -> FormulaPtr {
    const char* xs[] = {"x", "y"};
    const char* Xs[] = {"X", "Y"};
    if (depth == 0 || rng() % 4 == 0) {
      if (rng() % 2 == 0)
        return eq0(xs[rng() % 2], xs[rng() % 2]);
      return in0(xs[rng() % 2], Xs[rng() % 2]);
    }
    switch (rng() % 3) {
      case 0:
        return mnot(self(self, depth - 1));
      case 1:
        return mand(self(self, depth - 1), self(self, depth - 1));
      default:
        return mor(self(self, depth - 1), self(self, depth - 1));
    }
  };

  for (int i = 0; i < 200; ++i) {
    FormulaPtr f = rand_formula(rand_formula, 3);
    CHECK(eval(M, mnot(mnot(f))) == eval(M, f));
  }
}

TEST_CASE("substitution commutes with evaluation under rebinding") {
  // eval(M, f[z -> w]) equals eval(M with z bound to Mw, f).
  Var z = v0("z"), w = v0("w");
  FormulaPtr f = mor(in0("z", "X"), eq0("z", "w"));

  Interpretation M;
  M.domain = {0, 1, 2};
  M.assign0[w] = 2;
  M.assign[v1("X")] = HSet::make1({1});

  FormulaPtr fw = substitute(f, {{z, w}});
  Interpretation Mz = M;
  Mz.assign0[z] = M.assign0[w];
  CHECK(eval(M, fw) == eval(Mz, f));
}
