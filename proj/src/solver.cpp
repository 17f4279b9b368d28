#include "syllog/solver.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cassert>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "json.hpp"
#include "syllog/smallmodel.hpp"
#include "syllog/syntax.hpp"

namespace syllog {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

std::vector<std::string> letter_names(int n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::string s(1, static_cast<char>('a' + i % 26));
    if (i >= 26) s += std::to_string(i / 26);
    names.push_back(std::move(s));
  }
  return names;
}

HSet pair_hset(int a, int b) {
  return HSet::make(2, {HSet::make1({a}), HSet::make1({a, b})});
}

bool level1_within(const HSet& s, const std::set<int>& dom) {
  for (int e : s.elems)
    if (!dom.count(e)) return false;
  return true;
}

bool level2_within(const HSet& s, const std::set<int>& dom) {
  for (const HSet& m : s.members)
    if (!level1_within(m, dom)) return false;
  return true;
}

// Calls fn with each k-combination of 0..m-1 in lexicographic order; fn
// returns false to stop. Returns false iff stopped early.
template <class Fn>
bool foreach_combination(int m, int k, Fn&& fn) {
  if (k > m) return true;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    if (!fn(const_cast<const std::vector<int>&>(idx))) return false;
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return true;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Subsets of pool with at most cap members, by size then lexicographic
// member indices. fn returns false to stop; returns false iff stopped.
template <class Fn>
bool foreach_capped_subset(const std::vector<HSet>& pool, int cap, int level,
                           Fn&& fn) {
  int m = static_cast<int>(pool.size());
  for (int k = 0; k <= std::min(cap, m); ++k) {
    bool cont = foreach_combination(m, k, [&](const std::vector<int>& idx) {
      std::vector<HSet> members;
      members.reserve(idx.size());
      for (int i : idx) members.push_back(pool[i]);
      return fn(HSet::make(level, std::move(members)));
    });
    if (!cont) return false;
  }
  return true;
}

// Sum over k < h of C(n, k), saturating at a large sentinel.
long long count_pow_lt(long long n, int h) {
  constexpr long long kHuge = 1'000'000'000'000LL;
  long long total = 0;
  for (int k = 0; k < h; ++k) {
    if (k > n) break;
    long long c = 1;
    for (int i = 1; i <= k; ++i) {
      c = c * (n - i + 1) / i;
      if (c > kHuge) return kHuge;
    }
    total += c;
    if (total > kHuge) return kHuge;
  }
  return total;
}

// Level-1 sets over `domain` with fewer than h elements, canonical order.
std::vector<HSet> pow_lt_level1(const std::vector<int>& domain, int h) {
  std::vector<HSet> out;
  int m = static_cast<int>(domain.size());
  for (int k = 0; k < h && k <= m; ++k) {
    foreach_combination(m, k, [&](const std::vector<int>& idx) {
      std::vector<int> elems;
      elems.reserve(idx.size());
      for (int i : idx) elems.push_back(domain[i]);
      out.push_back(HSet::make1(std::move(elems)));
      return true;
    });
  }
  return out;
}

// Level-`level` sets over `pool` with fewer than h members, canonical order.
std::vector<HSet> pow_lt_higher(int level, const std::vector<HSet>& pool,
                                int h) {
  std::vector<HSet> out;
  int m = static_cast<int>(pool.size());
  for (int k = 0; k < h && k <= m; ++k) {
    foreach_combination(m, k, [&](const std::vector<int>& idx) {
      std::vector<HSet> members;
      members.reserve(idx.size());
      for (int i : idx) members.push_back(pool[i]);
      out.push_back(HSet::make(level, std::move(members)));
      return true;
    });
  }
  return out;
}

// Free variables of several formulae, split by sort and ordered
// (sort, name) so layouts and search orders are reproducible.
std::array<std::vector<Var>, 4> vars_by_sort(
    const std::vector<FormulaPtr>& fs, const std::set<Var>& extra) {
  std::set<Var> all = extra;
  for (const FormulaPtr& f : fs) {
    std::set<Var> fv = free_vars_all(f);
    all.insert(fv.begin(), fv.end());
  }
  std::array<std::vector<Var>, 4> by_sort;
  for (const Var& v : all) by_sort[v.sort].push_back(v);
  for (auto& vs : by_sort) std::sort(vs.begin(), vs.end());
  return by_sort;
}

// ---------------------------------------------------------------------------
// CNF container and a plain DPLL solver (two watched literals, no learning)
// ---------------------------------------------------------------------------

bool lit_less(int a, int b) {
  int va = std::abs(a), vb = std::abs(b);
  return va != vb ? va < vb : a < b;
}

struct Cnf {
  int nvars = 0;
  std::vector<std::vector<int>> clauses;
  bool contradiction = false;

  int new_var() { return ++nvars; }

  void add_clause(std::vector<int> lits) {
    std::sort(lits.begin(), lits.end(), lit_less);
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 0; i + 1 < lits.size(); ++i)
      if (lits[i] == -lits[i + 1]) return; // tautology
    if (lits.empty()) {
      contradiction = true;
      return;
    }
    clauses.push_back(std::move(lits));
  }
};

enum class SatRes { Sat, Unsat, Abort };

// Chronological-backtracking DPLL. Decisions follow `order` with false
// tried first, so the first model found assigns the ordered variables the
// lexicographically least satisfying combination; auxiliary definition
// variables are fixed by propagation alone. No learning, no restarts, no
// activity heuristics: the search order is part of the answer.
class SatSolver {
 public:
  SatSolver(const Cnf& cnf, long long budget)
      : clauses_(cnf.clauses), budget_(budget) {
    val_.assign(cnf.nvars + 1, 0);
    watches_.assign(2 * static_cast<std::size_t>(cnf.nvars + 1), {});
    for (int ci = 0; ci < static_cast<int>(clauses_.size()); ++ci) {
      auto& c = clauses_[ci];
      if (c.size() == 1) {
        units_.push_back(c[0]);
      } else {
        watches_[enc(c[0])].push_back(ci);
        watches_[enc(c[1])].push_back(ci);
      }
    }
  }

  SatRes solve(const std::vector<int>& order) {
    for (int l : units_)
      if (!assign(l)) return SatRes::Unsat;
    if (!propagate()) return SatRes::Unsat;
    struct Dec {
      int var;
      std::size_t trail, oi;
      bool flipped;
    };
    std::vector<Dec> decs;
    std::size_t oi = 0;
    for (;;) {
      if (steps_ > budget_) return SatRes::Abort;
      while (oi < order.size() && val_[order[oi]] != 0) ++oi;
      if (oi == order.size()) return SatRes::Sat;
      int v = order[oi];
      decs.push_back({v, trail_.size(), oi, false});
      ++steps_;
      bool ok = assign(-v) && propagate();
      while (!ok) {
        if (steps_ > budget_) return SatRes::Abort;
        while (!decs.empty() && decs.back().flipped) {
          undo(decs.back().trail);
          decs.pop_back();
        }
        if (decs.empty()) return SatRes::Unsat;
        Dec& d = decs.back();
        undo(d.trail);
        d.flipped = true;
        oi = d.oi;
        ++steps_;
        ok = assign(d.var) && propagate();
      }
    }
  }

  int value(int var) const { return val_[var]; }
  long long steps() const { return steps_; }

  // Every clause satisfied under the current assignment; guards against an
  // accidental early Sat with unconstrained auxiliaries.
  bool model_ok() const {
    for (const auto& c : clauses_) {
      bool sat = false;
      for (int l : c)
        if (lit_val(l) == 1) {
          sat = true;
          break;
        }
      if (!sat) return false;
    }
    return true;
  }

 private:
  static std::size_t enc(int lit) {
    return 2 * static_cast<std::size_t>(std::abs(lit)) + (lit < 0 ? 1 : 0);
  }
  int lit_val(int lit) const {
    int v = val_[std::abs(lit)];
    return lit < 0 ? -v : v;
  }
  bool assign(int lit) {
    int v = std::abs(lit), s = lit > 0 ? 1 : -1;
    if (val_[v] == s) return true;
    if (val_[v] == -s) return false;
    val_[v] = static_cast<int8_t>(s);
    trail_.push_back(lit);
    return true;
  }
  void undo(std::size_t sz) {
    while (trail_.size() > sz) {
      val_[std::abs(trail_.back())] = 0;
      trail_.pop_back();
    }
    qhead_ = sz;
  }
  bool propagate() {
    while (qhead_ < trail_.size()) {
      int p = trail_[qhead_++];
      auto& wl = watches_[enc(-p)];
      std::size_t i = 0, j = 0;
      bool conflict = false;
      while (i < wl.size()) {
        ++steps_;
        int ci = wl[i++];
        auto& c = clauses_[ci];
        if (c[0] == -p) std::swap(c[0], c[1]);
        if (lit_val(c[0]) == 1) {
          wl[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lit_val(c[k]) != -1) {
            std::swap(c[1], c[k]);
            watches_[enc(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        wl[j++] = ci;
        if (!assign(c[0])) {
          while (i < wl.size()) wl[j++] = wl[i++];
          conflict = true;
          break;
        }
      }
      wl.resize(j);
      if (conflict) return false;
    }
    return true;
  }

  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<int8_t> val_;
  std::vector<int> trail_;
  std::size_t qhead_ = 0;
  std::vector<int> units_;
  long long budget_, steps_ = 0;
};

// ---------------------------------------------------------------------------
// Tseitin gate builder with structural sharing
// ---------------------------------------------------------------------------

// A circuit value: either a constant or a CNF literal.
struct Expr {
  bool is_const = true;
  bool cval = false;
  int lit = 0;
};
Expr etrue() { return {true, true, 0}; }
Expr efalse() { return {true, false, 0}; }
Expr elit(int l) { return {false, false, l}; }
Expr ebool(bool b) { return b ? etrue() : efalse(); }

// Thrown when a translation outgrows its budget. The bounded search
// reports the layer as truncated (feeding CAPPED); the ground refuter
// just stops strengthening its clause set.
struct LayerAbort {};

class GateBuilder {
 public:
  GateBuilder(Cnf& cnf, int var_cap, long long clause_cap)
      : cnf_(cnf), var_cap_(var_cap), clause_cap_(clause_cap) {}

  Expr mk_not(Expr e) const {
    if (e.is_const) return ebool(!e.cval);
    return elit(-e.lit);
  }
  Expr mk_and(std::vector<Expr> xs) { return gate(std::move(xs), true); }
  Expr mk_or(std::vector<Expr> xs) { return gate(std::move(xs), false); }
  Expr mk_and2(Expr a, Expr b) { return mk_and({a, b}); }
  Expr mk_or2(Expr a, Expr b) { return mk_or({a, b}); }
  Expr mk_iff(Expr a, Expr b) {
    return mk_and({mk_or({mk_not(a), b}), mk_or({mk_not(b), a})});
  }
  Expr mk_xor(Expr a, Expr b) { return mk_not(mk_iff(a, b)); }
  Expr mk_imp(Expr a, Expr b) { return mk_or({mk_not(a), b}); }

  void assert_true(const Expr& e) {
    if (e.is_const) {
      if (!e.cval) cnf_.contradiction = true;
      return;
    }
    cnf_.add_clause({e.lit});
  }

 private:
  Expr gate(std::vector<Expr> xs, bool conj) {
    std::vector<int> lits;
    for (const Expr& x : xs) {
      if (x.is_const) {
        if (x.cval != conj) return ebool(!conj);
        continue;
      }
      lits.push_back(x.lit);
    }
    std::sort(lits.begin(), lits.end(), lit_less);
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 0; i + 1 < lits.size(); ++i)
      if (lits[i] == -lits[i + 1]) return ebool(!conj);
    if (lits.empty()) return ebool(conj);
    if (lits.size() == 1) return elit(lits[0]);
    auto& cache = conj ? and_cache_ : or_cache_;
    auto it = cache.find(lits);
    if (it != cache.end()) return elit(it->second);
    if (cnf_.nvars >= var_cap_ ||
        static_cast<long long>(cnf_.clauses.size()) >= clause_cap_)
      throw LayerAbort{};
    int g = cnf_.new_var();
    if (conj) {
      std::vector<int> big{g};
      for (int l : lits) {
        cnf_.add_clause({-g, l});
        big.push_back(-l);
      }
      cnf_.add_clause(std::move(big));
    } else {
      std::vector<int> big{-g};
      for (int l : lits) {
        cnf_.add_clause({g, -l});
        big.push_back(l);
      }
      cnf_.add_clause(std::move(big));
    }
    cache.emplace(std::move(lits), g);
    return elit(g);
  }

  Cnf& cnf_;
  int var_cap_;
  long long clause_cap_;
  std::map<std::vector<int>, int> and_cache_, or_cache_;
};

// ---------------------------------------------------------------------------
// Guard detection
// ---------------------------------------------------------------------------

// For a universal whose matrix is an antecedent-first implication, maps
// each prefix variable to the collection variable guarding it (the rhs of
// a `bv in G` conjunct of the antecedent), when one exists.
std::map<Var, Var> guard_map(const FormulaPtr& forall) {
  std::map<Var, Var> out;
  const FormulaPtr& matrix = forall->a;
  if (matrix->kind != FKind::Or || matrix->a->kind != FKind::Not) return out;
  std::set<Var> bound(forall->bound.begin(), forall->bound.end());
  for (const FormulaPtr& leaf : and_leaves(matrix->a->a)) {
    if (leaf->kind != FKind::Atom || leaf->atom->kind != AtomKind::In ||
        leaf->atom->lhs.is_pair())
      continue;
    const Var& lv = leaf->atom->lhs.v;
    if (bound.count(lv) && !out.count(lv)) out.emplace(lv, leaf->atom->rhs.v);
  }
  return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::SAT: return "SAT";
    case SolveStatus::UNSAT: return "UNSAT";
    case SolveStatus::CAPPED: return "CAPPED";
  }
  return "CAPPED";
}

std::string verdict_json(const Verdict& v) {
  json j;
  j["status"] = to_string(v.status);
  if (v.model) j["model"] = json::parse(print_model(*v.model));
  j["stats"] = {{"nodes", v.stats.nodes},
                {"max_domain", v.stats.max_domain},
                {"branches", v.stats.branches}};
  return j.dump();
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

namespace {

struct OracleRun {
  const OracleOptions& opts;
  const FormulaPtr& f;
  std::vector<Var> vars;
  long long nodes = 0;
  bool truncated = false;
  bool out_of_budget = false;

  bool leaf(Interpretation& interp) {
    if (out_of_budget) return false;
    ++nodes;
    if (nodes > opts.node_budget) {
      out_of_budget = truncated = true;
      return false;
    }
    try {
      return eval(interp, f);
    } catch (const CapacityError&) {
      truncated = true;
      return false;
    }
  }

  bool assign_from(Interpretation& interp, std::size_t i,
                   const std::vector<HSet>& pool1,
                   const std::vector<HSet>* pool2) {
    if (i == vars.size()) return leaf(interp);
    if (out_of_budget) return false;
    const Var& v = vars[i];
    if (v.sort == 0) {
      for (int d : interp.domain) {
        interp.assign0[v] = d;
        if (assign_from(interp, i + 1, pool1, pool2)) return true;
      }
      interp.assign0.erase(v);
      return false;
    }
    if (v.sort == 1) {
      for (const HSet& s : pool1) {
        interp.assign[v] = s;
        if (assign_from(interp, i + 1, pool1, pool2)) return true;
      }
      interp.assign.erase(v);
      return false;
    }
    if (v.sort == 2) {
      int cap = opts.no_caps ? static_cast<int>(pool1.size())
                             : opts.member_cap2;
      if (!opts.no_caps &&
          static_cast<std::size_t>(opts.member_cap2) < pool1.size())
        truncated = true;
      bool found = false;
      foreach_capped_subset(pool1, cap, 2, [&](HSet val) {
        interp.assign[v] = std::move(val);
        if (assign_from(interp, i + 1, pool1, pool2)) {
          found = true;
          return false;
        }
        return !out_of_budget;
      });
      if (!found) interp.assign.erase(v);
      return found;
    }
    // sort 3
    if (!pool2) {
      truncated = true;
      return false;
    }
    int cap = opts.no_caps ? static_cast<int>(pool2->size())
                           : opts.member_cap3;
    if (!opts.no_caps &&
        static_cast<std::size_t>(opts.member_cap3) < pool2->size())
      truncated = true;
    bool found = false;
    foreach_capped_subset(*pool2, cap, 3, [&](HSet val) {
      interp.assign[v] = std::move(val);
      if (assign_from(interp, i + 1, pool1, pool2)) {
        found = true;
        return false;
      }
      return !out_of_budget;
    });
    if (!found) interp.assign.erase(v);
    return found;
  }
};

} // namespace

Verdict oracle_sat(const FormulaPtr& f, int max_domain,
                   const OracleOptions& opts) {
  if (!f) throw std::invalid_argument("oracle_sat: null formula");
  if (max_domain < 1)
    throw std::invalid_argument("oracle_sat: max_domain must be at least 1");

  std::array<std::vector<Var>, 4> by_sort = vars_by_sort({f}, {});
  OracleRun run{opts, f, {}, 0, false, false};
  for (const auto& vs : by_sort)
    run.vars.insert(run.vars.end(), vs.begin(), vs.end());
  bool need_pool2 = !by_sort[3].empty();

  Verdict out;
  for (int n = 1; n <= max_domain && !run.out_of_budget; ++n) {
    out.stats.max_domain = n;
    Interpretation interp;
    interp.domain.resize(n);
    std::iota(interp.domain.begin(), interp.domain.end(), 0);
    interp.elem_names = letter_names(n);

    std::vector<HSet> pool1 = enumerate_level1(interp.domain);
    std::vector<HSet> pool2;
    const std::vector<HSet>* pool2_ptr = nullptr;
    if (need_pool2) {
      if (pool1.size() <= 16) {
        pool2 = enumerate_subsets(2, pool1);
        pool2_ptr = &pool2;
      }
      // else: the member space for sort-3 values cannot be materialized;
      // assign_from flags the truncation.
    }
    if (run.assign_from(interp, 0, pool1, pool2_ptr)) {
      out.status = SolveStatus::SAT;
      out.model = std::move(interp);
      out.stats.nodes = run.nodes;
      return out;
    }
  }
  out.stats.nodes = run.nodes;
  out.status = run.truncated ? SolveStatus::CAPPED : SolveStatus::UNSAT;
  return out;
}

// ---------------------------------------------------------------------------
// Saturation
// ---------------------------------------------------------------------------

namespace {

void add_literal(std::vector<FormulaPtr>& H, const FormulaPtr& lit) {
  for (const FormulaPtr& have : H)
    if (formula_equal(have, lit)) return;
  H.push_back(lit);
}

} // namespace

Saturator::Saturator(FormulaPtr f) {
  if (!f) throw std::invalid_argument("saturate: null formula");
  std::vector<FragmentDiagnostic> diags;
  if (!is_4lqsr(f, &diags)) {
    std::string msg = "saturate: input outside the restricted fragment";
    if (!diags.empty()) msg += ": " + diags.front().message;
    throw FragmentError(msg);
  }
  supply_.reserve(f);
  Frame root;
  root.todo.push_back(std::move(f));
  stack_.push_back(std::move(root));
  run();
}

void Saturator::run() {
  while (!stack_.empty()) {
    Frame fr = std::move(stack_.back());
    stack_.pop_back();
    while (!fr.todo.empty()) {
      FormulaPtr g = fr.todo.back();
      fr.todo.pop_back();
      switch (g->kind) {
        case FKind::Atom:
        case FKind::Forall:
          add_literal(fr.H, g);
          break;
        case FKind::And: // split a conjunction into both conjuncts
          ++fr.rules;
          fr.todo.push_back(g->b);
          fr.todo.push_back(g->a);
          break;
        case FKind::Or: { // choose a disjunct; park the alternative
          ++fr.rules;
          Frame alt = fr;
          alt.todo.push_back(g->b);
          alt.choice = g->b;
          stack_.push_back(std::move(alt));
          fr.todo.push_back(g->a);
          break;
        }
        case FKind::Not: {
          const FormulaPtr& inner = g->a;
          switch (inner->kind) {
            case FKind::Atom:
              add_literal(fr.H, g);
              break;
            case FKind::Not: // double negation
              ++fr.rules;
              fr.todo.push_back(inner->a);
              break;
            case FKind::Or: // a negated disjunction yields both negations
              ++fr.rules;
              fr.todo.push_back(mnot(inner->b));
              fr.todo.push_back(mnot(inner->a));
              break;
            case FKind::And: { // a negated conjunction is a choice
              ++fr.rules;
              Frame alt = fr;
              alt.todo.push_back(mnot(inner->b));
              alt.choice = mnot(inner->b);
              stack_.push_back(std::move(alt));
              fr.todo.push_back(mnot(inner->a));
              break;
            }
            case FKind::Forall: {
              // Negated universal: instantiate at fresh witnesses of the
              // prefix sorts; the instance entails the negated universal.
              ++fr.rules;
              std::map<Var, Var> repl;
              for (const Var& bv : inner->bound) {
                Var w = supply_.fresh(bv.sort);
                repl.emplace(bv, w);
                fr.fresh_vars.push_back(w);
              }
              fr.todo.push_back(mnot(substitute(inner->a, repl)));
              break;
            }
          }
          break;
        }
      }
    }
    current_.H = std::move(fr.H);
    current_.fresh_vars = std::move(fr.fresh_vars);
    current_.rule_applications = fr.rules;
    current_.fresh = supply_;
    current_.pending_branches.clear();
    for (const Frame& parked : stack_)
      if (parked.choice) current_.pending_branches.push_back(parked.choice);
    done_ = false;
    return;
  }
  done_ = true;
  current_ = SaturationState{};
}

void Saturator::advance() {
  if (!done_) run();
}

std::vector<SaturationState> saturate(const FormulaPtr& f, std::size_t limit) {
  std::vector<SaturationState> out;
  for (Saturator cur(f); !cur.done() && out.size() < limit; cur.advance())
    out.push_back(cur.current());
  return out;
}

// ---------------------------------------------------------------------------
// Bounded search at a fixed universe size (bit-blasting)
// ---------------------------------------------------------------------------

namespace {

constexpr int kLayerVarCap = 400'000;
constexpr long long kLayerClauseCap = 2'000'000;
constexpr long long kLayerInstanceBudget = 400'000;
constexpr long long kLayerPoolCap = 300'000;

enum class LayerRes { Sat, Unsat, Abort };

struct Env {
  std::map<Var, int> e0;   // quantified sort-0 variables
  std::map<Var, HSet> ec;  // quantified sort-1/2 variables
};

// One (branch, universe size) search space: candidate domain 0..n-1,
// sort-2 values restricted to pow_{<h}(D), sort-3 values to
// pow_{<h}(pow_{<h}(D)). Free variables become bit blocks: element bits
// for sort 0 (one-hot), characteristic vectors for sorts 1-3.
struct Layer {
  int h = 2, n = 1;
  std::vector<int> domain;
  std::vector<HSet> poolm1, poolm2;
  std::map<HSet, int> m1_idx, m2_idx;
  std::vector<HSet> pool1_full, pool2_full; // lazily built fallbacks
  std::array<std::vector<Var>, 4> vars;
  std::map<Var, int> base;
  int input_top = 0;
  Cnf cnf;
  std::unique_ptr<GateBuilder> gb;
  long long instances_left = kLayerInstanceBudget;

  int bit0(const Var& v, int d) const { return base.at(v) + d; }
  int bit1(const Var& v, int d) const { return base.at(v) + d; }
  int bit2(const Var& v, int i) const { return base.at(v) + i; }
  int bit3(const Var& v, int i) const { return base.at(v) + i; }
};

void layer_init(Layer& L, const std::vector<FormulaPtr>& H,
                const std::set<Var>& extra_free, int h, int n) {
  L.h = h;
  L.n = n;
  L.domain.resize(n);
  std::iota(L.domain.begin(), L.domain.end(), 0);
  L.poolm1 = pow_lt_level1(L.domain, h);
  if (count_pow_lt(static_cast<long long>(L.poolm1.size()), h) > kLayerPoolCap)
    throw LayerAbort{};
  L.poolm2 = pow_lt_higher(2, L.poolm1, h);
  for (int i = 0; i < static_cast<int>(L.poolm1.size()); ++i)
    L.m1_idx.emplace(L.poolm1[i], i);
  for (int i = 0; i < static_cast<int>(L.poolm2.size()); ++i)
    L.m2_idx.emplace(L.poolm2[i], i);

  L.vars = vars_by_sort(H, extra_free);
  L.gb = std::make_unique<GateBuilder>(L.cnf, kLayerVarCap, kLayerClauseCap);

  auto alloc = [&](const Var& v, int width) {
    L.base.emplace(v, L.cnf.nvars + 1);
    for (int i = 0; i < width; ++i) L.cnf.new_var();
  };
  for (const Var& v : L.vars[0]) alloc(v, n);
  for (const Var& v : L.vars[1]) alloc(v, n);
  for (const Var& v : L.vars[2]) alloc(v, static_cast<int>(L.poolm1.size()));
  for (const Var& v : L.vars[3]) alloc(v, static_cast<int>(L.poolm2.size()));
  L.input_top = L.cnf.nvars;

  // Sort-0 variables denote exactly one element.
  for (const Var& v : L.vars[0]) {
    std::vector<int> at_least;
    for (int d = 0; d < n; ++d) at_least.push_back(L.bit0(v, d));
    L.cnf.add_clause(at_least);
    for (int d = 0; d < n; ++d)
      for (int e = d + 1; e < n; ++e)
        L.cnf.add_clause({-L.bit0(v, d), -L.bit0(v, e)});
  }
}

// --- term/side resolution ---------------------------------------------------

struct T0 {
  bool is_const = false;
  int id = 0;
  Var v;
};

T0 resolve0(const Env& env, const Var& x) {
  auto it = env.e0.find(x);
  if (it != env.e0.end()) return {true, it->second, {}};
  return {false, 0, x};
}

struct V1 {
  bool is_const = false;
  HSet c;
  Var v;
};

V1 resolve1(const Env& env, const Var& x) {
  auto it = env.ec.find(x);
  if (it != env.ec.end()) return {true, it->second, {}};
  return {false, HSet::empty(1), x};
}

struct V2 {
  enum Kind { Sym, Const, Pair } kind = Sym;
  Var v;
  HSet c;
  T0 px, py;
};

V2 resolve2(const Env& env, const Term& t) {
  V2 out;
  if (t.is_pair()) {
    T0 a = resolve0(env, t.v);
    T0 b = resolve0(env, *t.pair_right);
    if (a.is_const && b.is_const) {
      out.kind = V2::Const;
      out.c = pair_hset(a.id, b.id);
    } else {
      out.kind = V2::Pair;
      out.px = a;
      out.py = b;
    }
    return out;
  }
  auto it = env.ec.find(t.v);
  if (it != env.ec.end()) {
    out.kind = V2::Const;
    out.c = it->second;
  } else {
    out.kind = V2::Sym;
    out.v = t.v;
  }
  return out;
}

// --- atom translation --------------------------------------------------------

Expr tr_eq0(Layer& L, const T0& a, const T0& b) {
  if (a.is_const && b.is_const) return ebool(a.id == b.id);
  if (!a.is_const && !b.is_const) {
    if (a.v == b.v) return etrue();
    std::vector<Expr> alts;
    for (int d : L.domain)
      alts.push_back(
          L.gb->mk_and2(elit(L.bit0(a.v, d)), elit(L.bit0(b.v, d))));
    return L.gb->mk_or(std::move(alts));
  }
  const T0& sym = a.is_const ? b : a;
  int id = a.is_const ? a.id : b.id;
  return elit(L.bit0(sym.v, id));
}

Expr tr_in0(Layer& L, const T0& x, const V1& Y) {
  if (Y.is_const) {
    if (x.is_const) return ebool(Y.c.contains_elem(x.id));
    std::vector<Expr> alts;
    for (int d : Y.c.elems)
      if (d >= 0 && d < L.n) alts.push_back(elit(L.bit0(x.v, d)));
    return L.gb->mk_or(std::move(alts));
  }
  if (x.is_const) return elit(L.bit1(Y.v, x.id));
  std::vector<Expr> alts;
  for (int d : L.domain)
    alts.push_back(L.gb->mk_and2(elit(L.bit0(x.v, d)), elit(L.bit1(Y.v, d))));
  return L.gb->mk_or(std::move(alts));
}

Expr tr_eq1(Layer& L, const V1& A, const V1& B) {
  if (A.is_const && B.is_const) return ebool(A.c == B.c);
  if (!A.is_const && !B.is_const && A.v == B.v) return etrue();
  std::set<int> dom(L.domain.begin(), L.domain.end());
  if (A.is_const && !level1_within(A.c, dom)) return efalse();
  if (B.is_const && !level1_within(B.c, dom)) return efalse();
  std::vector<Expr> parts;
  for (int d : L.domain) {
    Expr ea = A.is_const ? ebool(A.c.contains_elem(d)) : elit(L.bit1(A.v, d));
    Expr eb = B.is_const ? ebool(B.c.contains_elem(d)) : elit(L.bit1(B.v, d));
    parts.push_back(L.gb->mk_iff(ea, eb));
  }
  return L.gb->mk_and(std::move(parts));
}

// Membership bit of poolm1[i] in a non-pair sort-2 side.
Expr m1bit(Layer& L, const V2& s, int i) {
  if (s.kind == V2::Sym) return elit(L.bit2(s.v, i));
  return ebool(s.c.contains(L.poolm1[i]));
}

bool const_within_m1(Layer& L, const HSet& c) {
  for (const HSet& m : c.members)
    if (!L.m1_idx.count(m)) return false;
  return true;
}

Expr tr_eq2_flat(Layer& L, const V2& a, const V2& b) {
  // Neither side is a pair with symbolic components.
  if (a.kind == V2::Const && b.kind == V2::Const) return ebool(a.c == b.c);
  if (a.kind == V2::Sym && b.kind == V2::Sym && a.v == b.v) return etrue();
  if (a.kind == V2::Const && !const_within_m1(L, a.c)) return efalse();
  if (b.kind == V2::Const && !const_within_m1(L, b.c)) return efalse();
  std::vector<Expr> parts;
  for (int i = 0; i < static_cast<int>(L.poolm1.size()); ++i)
    parts.push_back(L.gb->mk_iff(m1bit(L, a, i), m1bit(L, b, i)));
  return L.gb->mk_and(std::move(parts));
}

// Alternatives (guard, constant value) for a pair side with symbolic
// components.
std::vector<std::pair<Expr, HSet>> expand_pair(Layer& L, const V2& p) {
  std::vector<std::pair<Expr, HSet>> out;
  std::vector<int> lefts, rights;
  if (p.px.is_const) lefts.push_back(p.px.id); else lefts = L.domain;
  if (p.py.is_const) rights.push_back(p.py.id); else rights = L.domain;
  for (int a : lefts) {
    for (int b : rights) {
      std::vector<Expr> guard;
      if (!p.px.is_const) guard.push_back(elit(L.bit0(p.px.v, a)));
      if (!p.py.is_const) guard.push_back(elit(L.bit0(p.py.v, b)));
      out.emplace_back(L.gb->mk_and(std::move(guard)), pair_hset(a, b));
    }
  }
  return out;
}

Expr tr_eq2(Layer& L, const V2& a, const V2& b) {
  if (a.kind != V2::Pair && b.kind != V2::Pair) return tr_eq2_flat(L, a, b);
  if (a.kind == V2::Pair && b.kind == V2::Pair) {
    std::vector<Expr> alts;
    for (const auto& [ga, ca] : expand_pair(L, a))
      for (const auto& [gb2, cb] : expand_pair(L, b))
        if (ca == cb) alts.push_back(L.gb->mk_and2(ga, gb2));
    return L.gb->mk_or(std::move(alts));
  }
  const V2& pair = a.kind == V2::Pair ? a : b;
  const V2& other = a.kind == V2::Pair ? b : a;
  std::vector<Expr> alts;
  for (const auto& [g, c] : expand_pair(L, pair)) {
    V2 cc;
    cc.kind = V2::Const;
    cc.c = c;
    alts.push_back(L.gb->mk_and2(g, tr_eq2_flat(L, cc, other)));
  }
  return L.gb->mk_or(std::move(alts));
}

Expr tr_in1(Layer& L, const V1& A, const V2& S) {
  if (S.kind == V2::Const) {
    if (A.is_const) return ebool(S.c.contains(A.c));
    std::vector<Expr> alts;
    for (const HSet& m : S.c.members) {
      V1 mc{true, m, {}};
      alts.push_back(tr_eq1(L, A, mc));
    }
    return L.gb->mk_or(std::move(alts));
  }
  // S symbolic: its value is always a subset of poolm1.
  if (A.is_const) {
    auto it = L.m1_idx.find(A.c);
    if (it == L.m1_idx.end()) return efalse();
    return elit(L.bit2(S.v, it->second));
  }
  std::vector<Expr> alts;
  for (int i = 0; i < static_cast<int>(L.poolm1.size()); ++i) {
    V1 mc{true, L.poolm1[i], {}};
    alts.push_back(L.gb->mk_and2(tr_eq1(L, A, mc), elit(L.bit2(S.v, i))));
  }
  return L.gb->mk_or(std::move(alts));
}

Expr tr_in2(Layer& L, const V2& s, const Var& R) {
  if (s.kind == V2::Const) {
    auto it = L.m2_idx.find(s.c);
    if (it == L.m2_idx.end()) return efalse();
    return elit(L.bit3(R, it->second));
  }
  if (s.kind == V2::Pair) {
    std::vector<Expr> alts;
    for (const auto& [g, c] : expand_pair(L, s)) {
      auto it = L.m2_idx.find(c);
      if (it == L.m2_idx.end()) continue;
      alts.push_back(L.gb->mk_and2(g, elit(L.bit3(R, it->second))));
    }
    return L.gb->mk_or(std::move(alts));
  }
  // s symbolic: its value is always inside poolm2.
  std::vector<Expr> alts;
  for (int t = 0; t < static_cast<int>(L.poolm2.size()); ++t) {
    V2 cc;
    cc.kind = V2::Const;
    cc.c = L.poolm2[t];
    alts.push_back(
        L.gb->mk_and2(tr_eq2_flat(L, s, cc), elit(L.bit3(R, t))));
  }
  return L.gb->mk_or(std::move(alts));
}

Expr tr_atom(Layer& L, const Env& env, const Atom& at) {
  if (at.kind == AtomKind::Eq) {
    switch (at.level()) {
      case 0:
        return tr_eq0(L, resolve0(env, at.lhs.v), resolve0(env, at.rhs.v));
      case 1:
        return tr_eq1(L, resolve1(env, at.lhs.v), resolve1(env, at.rhs.v));
      default:
        return tr_eq2(L, resolve2(env, at.lhs), resolve2(env, at.rhs));
    }
  }
  switch (at.level()) {
    case 0:
      return tr_in0(L, resolve0(env, at.lhs.v), resolve1(env, at.rhs.v));
    case 1:
      return tr_in1(L, resolve1(env, at.lhs.v), resolve2(env, at.rhs));
    default:
      return tr_in2(L, resolve2(env, at.lhs), at.rhs.v);
  }
}

Expr tr_formula(Layer& L, Env& env, const FormulaPtr& f);

Expr tr_forall(Layer& L, Env& env, const FormulaPtr& f) {
  const std::vector<Var>& bound = f->bound;
  int s = bound.front().sort;

  if (s == 0) {
    std::vector<Expr> parts;
    std::vector<int> tuple(bound.size(), 0);
    for (;;) {
      if (--L.instances_left < 0) throw LayerAbort{};
      for (std::size_t i = 0; i < bound.size(); ++i)
        env.e0[bound[i]] = tuple[i];
      parts.push_back(tr_formula(L, env, f->a));
      std::size_t i = 0;
      while (i < tuple.size() && ++tuple[i] == L.n) tuple[i++] = 0;
      if (i == tuple.size()) break;
    }
    for (const Var& bv : bound) env.e0.erase(bv);
    return L.gb->mk_and(std::move(parts));
  }

  // Guarded prefixes range only over the guard's candidate values; an
  // out-of-range value falsifies its guard atom, so the skipped instances
  // are vacuously true and the restriction is exact.
  std::map<Var, Var> guards = guard_map(f);
  std::vector<std::vector<HSet>> ranges;
  for (const Var& bv : bound) {
    auto it = guards.find(bv);
    const std::vector<HSet>* range = nullptr;
    std::vector<HSet> owned;
    if (it != guards.end()) {
      const Var& g = it->second;
      auto ec = env.ec.find(g);
      if (ec != env.ec.end()) {
        owned = ec->second.members;
        range = &owned;
      } else if (g.sort == s + 1) {
        range = s == 1 ? &L.poolm1 : &L.poolm2;
      }
    }
    if (!range) {
      // Unguarded: the full value space at this size.
      if (s == 1) {
        if (L.pool1_full.empty()) {
          if (L.n > 12) throw LayerAbort{};
          L.pool1_full = enumerate_level1(L.domain);
        }
        range = &L.pool1_full;
      } else {
        if (L.pool2_full.empty()) {
          if (L.pool1_full.empty()) {
            if (L.n > 12) throw LayerAbort{};
            L.pool1_full = enumerate_level1(L.domain);
          }
          if (L.pool1_full.size() > 13) throw LayerAbort{};
          L.pool2_full = enumerate_subsets(2, L.pool1_full);
        }
        range = &L.pool2_full;
      }
    }
    ranges.push_back(*range);
  }

  std::vector<Expr> parts;
  std::vector<std::size_t> tuple(bound.size(), 0);
  for (const auto& r : ranges)
    if (r.empty()) return etrue(); // empty guard range: vacuously true
  for (;;) {
    if (--L.instances_left < 0) throw LayerAbort{};
    for (std::size_t i = 0; i < bound.size(); ++i)
      env.ec[bound[i]] = ranges[i][tuple[i]];
    parts.push_back(tr_formula(L, env, f->a));
    std::size_t i = 0;
    while (i < tuple.size() && ++tuple[i] == ranges[i].size()) tuple[i++] = 0;
    if (i == tuple.size()) break;
  }
  for (const Var& bv : bound) env.ec.erase(bv);
  return L.gb->mk_and(std::move(parts));
}

Expr tr_formula(Layer& L, Env& env, const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Atom:
      return tr_atom(L, env, *f->atom);
    case FKind::Not:
      return L.gb->mk_not(tr_formula(L, env, f->a));
    case FKind::And:
      return L.gb->mk_and2(tr_formula(L, env, f->a),
                           tr_formula(L, env, f->b));
    case FKind::Or:
      return L.gb->mk_or2(tr_formula(L, env, f->a), tr_formula(L, env, f->b));
    case FKind::Forall:
      return tr_forall(L, env, f);
  }
  return efalse();
}

Interpretation decode_layer(const Layer& L, const SatSolver& solver) {
  Interpretation m;
  m.domain = L.domain;
  m.elem_names = letter_names(L.n);
  for (const Var& v : L.vars[0]) {
    for (int d : L.domain)
      if (solver.value(L.bit0(v, d)) > 0) {
        m.assign0[v] = d;
        break;
      }
  }
  for (const Var& v : L.vars[1]) {
    std::vector<int> elems;
    for (int d : L.domain)
      if (solver.value(L.bit1(v, d)) > 0) elems.push_back(d);
    m.assign[v] = HSet::make1(std::move(elems));
  }
  for (const Var& v : L.vars[2]) {
    std::vector<HSet> members;
    for (int i = 0; i < static_cast<int>(L.poolm1.size()); ++i)
      if (solver.value(L.bit2(v, i)) > 0) members.push_back(L.poolm1[i]);
    m.assign[v] = HSet::make(2, std::move(members));
  }
  for (const Var& v : L.vars[3]) {
    std::vector<HSet> members;
    for (int i = 0; i < static_cast<int>(L.poolm2.size()); ++i)
      if (solver.value(L.bit3(v, i)) > 0) members.push_back(L.poolm2[i]);
    m.assign[v] = HSet::make(3, std::move(members));
  }
  return m;
}

LayerRes blast_layer(const std::vector<FormulaPtr>& H,
                     const std::set<Var>& extra_free, int h, int n,
                     long long sat_budget, long long* steps_out,
                     Interpretation* model_out) {
  Layer L;
  try {
    layer_init(L, H, extra_free, h, n);
    Env env;
    for (const FormulaPtr& f : H) {
      L.gb->assert_true(tr_formula(L, env, f));
      if (L.cnf.contradiction) return LayerRes::Unsat;
    }
  } catch (const LayerAbort&) {
    return LayerRes::Abort;
  }
  if (L.cnf.contradiction) return LayerRes::Unsat;

  std::vector<int> order(L.input_top);
  std::iota(order.begin(), order.end(), 1);
  SatSolver solver(L.cnf, sat_budget);
  SatRes r = solver.solve(order);
  *steps_out += solver.steps();
  if (r == SatRes::Abort) return LayerRes::Abort;
  if (r == SatRes::Unsat) return LayerRes::Unsat;
  if (!solver.model_ok())
    throw std::logic_error("bounded search left a clause unsatisfied");
  *model_out = decode_layer(L, solver);
  return LayerRes::Sat;
}

// ---------------------------------------------------------------------------
// Ground refuter
// ---------------------------------------------------------------------------
//
// Propositional abstraction of one saturated branch over a finite table of
// named objects:
//   sort 0: the branch's free sort-0 variables, separation witnesses for
//           negated sort-1/2 equalities, and one synthetic element (every
//           domain is nonempty);
//   sort 1: free sort-1 variables, separation witnesses, plus the unordered
//           pairs {a, b} over the sort-0 objects (the members any pair-term
//           value actually has);
//   sort 2: free sort-2 variables plus the ordered pair terms <a, b>;
//   sort 3: free sort-3 variables.
// Universals are expanded over the object table, atoms become propositional
// keys, and a small theory (pair-term structure, equality closure and
// congruence) ties the keys together. Every emitted clause is a consequence
// of the branch, so an unsatisfiable abstraction refutes the branch. The
// converse direction is deliberately not claimed: budget exhaustion or a
// satisfiable abstraction just means "not refuted".

constexpr long long kRefuterUniversalCap = 50'000;
constexpr long long kRefuterInstanceBudget = 400'000;
constexpr long long kRefuterSatBudget = 2'000'000;
constexpr int kRefuterVarCap = 200'000;
constexpr long long kRefuterClauseCap = 1'000'000;
constexpr int kRefuterMaxElems = 24;
constexpr std::size_t kRefuterClosureKeyCap = 6'000;

enum RKey : int {
  kEq0,  // (a, b, 0)            a < b
  kIn0,  // (e, A, 0)            A core
  kEq1,  // (A, B, 0)            core, A < B
  kEq1B, // (A, a, b)            core A; value of A = {a, b}, a <= b
  kIn1,  // (A, S, 0)            core A, core S
  kIn1U, // (a, b, S)            {a, b} in S, a <= b, core S
  kEq2,  // (S, T, 0)            core, S < T
  kEq2P, // (S, x, y)            core S; value of S = <x, y>
  kIn2,  // (S, R, 0)            core S, core R
  kIn2P, // (x, y, R)            <x, y> in R, core R
};

struct RefCtx {
  std::map<Var, int> id0, id1, id2, id3;
  int n0 = 0, c1 = 0, c2 = 0, c3 = 0;
  std::vector<std::pair<int, int>> b1; // unordered pairs a <= b, lex order
  std::map<std::pair<int, int>, int> b1_idx;
  Cnf cnf;
  std::unique_ptr<GateBuilder> gb;
  std::map<std::array<int, 4>, int> keys;
  long long instances_left = kRefuterInstanceBudget;

  int o1_count() const { return c1 + static_cast<int>(b1.size()); }
  int o2_count() const { return c2 + n0 * n0; }
  int enc_b1(int a, int b) const {
    return c1 + b1_idx.at({std::min(a, b), std::max(a, b)});
  }
  int enc_pair(int x, int y) const { return c2 + x * n0 + y; }
};

Expr r_key(RefCtx& C, RKey kind, int p, int q, int r);

Expr r_eq0(RefCtx& C, int a, int b) {
  if (a == b) return etrue();
  return r_key(C, kEq0, std::min(a, b), std::max(a, b), 0);
}

Expr r_in0(RefCtx& C, int e, int A) {
  if (A < C.c1) return r_key(C, kIn0, e, A, 0);
  auto [a, b] = C.b1[A - C.c1];
  return C.gb->mk_or2(r_eq0(C, e, a), r_eq0(C, e, b));
}

Expr r_eq1(RefCtx& C, int A, int B) {
  if (A == B) return etrue();
  bool Ab = A >= C.c1, Bb = B >= C.c1;
  if (!Ab && !Bb) return r_key(C, kEq1, std::min(A, B), std::max(A, B), 0);
  if (Ab && Bb) {
    // {a, b} = {c, d}: every element of each side equals one of the other.
    auto [a, b] = C.b1[A - C.c1];
    auto [c, d] = C.b1[B - C.c1];
    return C.gb->mk_and({C.gb->mk_or2(r_eq0(C, a, c), r_eq0(C, a, d)),
                         C.gb->mk_or2(r_eq0(C, b, c), r_eq0(C, b, d)),
                         C.gb->mk_or2(r_eq0(C, c, a), r_eq0(C, c, b)),
                         C.gb->mk_or2(r_eq0(C, d, a), r_eq0(C, d, b))});
  }
  int core = Ab ? B : A;
  auto [a, b] = C.b1[(Ab ? A : B) - C.c1];
  return r_key(C, kEq1B, core, a, b);
}

Expr r_in1(RefCtx& C, int A, int S2) {
  if (S2 < C.c2) {
    if (A < C.c1) return r_key(C, kIn1, A, S2, 0);
    auto [a, b] = C.b1[A - C.c1];
    return r_key(C, kIn1U, a, b, S2);
  }
  int code = S2 - C.c2;
  int x = code / C.n0, y = code % C.n0;
  // members of <x, y> are exactly {x} and {x, y}
  return C.gb->mk_or2(r_eq1(C, A, C.enc_b1(x, x)),
                      r_eq1(C, A, C.enc_b1(x, y)));
}

Expr r_eq2(RefCtx& C, int S, int T) {
  if (S == T) return etrue();
  bool Sp = S >= C.c2, Tp = T >= C.c2;
  if (!Sp && !Tp) return r_key(C, kEq2, std::min(S, T), std::max(S, T), 0);
  if (Sp && Tp) {
    int cs = S - C.c2, ct = T - C.c2;
    return C.gb->mk_and2(r_eq0(C, cs / C.n0, ct / C.n0),
                         r_eq0(C, cs % C.n0, ct % C.n0));
  }
  int core = Sp ? T : S;
  int code = (Sp ? S : T) - C.c2;
  return r_key(C, kEq2P, core, code / C.n0, code % C.n0);
}

Expr r_in2(RefCtx& C, int S2, int R) {
  if (S2 < C.c2) return r_key(C, kIn2, S2, R, 0);
  int code = S2 - C.c2;
  return r_key(C, kIn2P, code / C.n0, code % C.n0, R);
}

Expr r_key(RefCtx& C, RKey kind, int p, int q, int r) {
  std::array<int, 4> k{kind, p, q, r};
  auto it = C.keys.find(k);
  if (it != C.keys.end()) return elit(it->second);
  int v = C.cnf.new_var();
  C.keys.emplace(k, v);
  // Structural theory, minted together with the key. Everything below is
  // a consequence of the key's intended reading, so adding it preserves
  // the "clauses follow from the branch" invariant.
  switch (kind) {
    case kEq1B: {
      // value of core A is {a, b}: fixes A's elements
      for (int e = 0; e < C.n0; ++e)
        C.gb->assert_true(C.gb->mk_imp(
            elit(v),
            C.gb->mk_iff(r_in0(C, e, p),
                         C.gb->mk_or2(r_eq0(C, e, q), r_eq0(C, e, r)))));
      break;
    }
    case kEq2P: {
      // value of core S is <x, y>: fixes S's members
      for (int O = 0; O < C.o1_count(); ++O)
        C.gb->assert_true(C.gb->mk_imp(
            elit(v), C.gb->mk_iff(r_in1(C, O, p),
                                  C.gb->mk_or2(
                                      r_eq1(C, O, C.enc_b1(q, q)),
                                      r_eq1(C, O, C.enc_b1(q, r))))));
      break;
    }
    default:
      break;
  }
  return elit(v);
}

int r_obj0(const RefCtx& C, const std::map<Var, int>& env, const Var& v) {
  auto it = env.find(v);
  if (it != env.end()) return it->second;
  return C.id0.at(v);
}

int r_obj1(const RefCtx& C, const std::map<Var, int>& env, const Var& v) {
  auto it = env.find(v);
  if (it != env.end()) return it->second;
  return C.id1.at(v);
}

int r_obj2(const RefCtx& C, const std::map<Var, int>& env, const Term& t) {
  if (t.is_pair())
    return C.enc_pair(r_obj0(C, env, t.v), r_obj0(C, env, *t.pair_right));
  auto it = env.find(t.v);
  if (it != env.end()) return it->second;
  return C.id2.at(t.v);
}

// `weight` is the number of times the enclosing universals have already
// instantiated this position; a nested universal's true footprint is
// weight * (its own tuple count), and that is what the width guard limits.
// Skipping a too-wide universal is sound: the kept instances remain
// consequences of the branch, the abstraction just gets weaker.
Expr r_formula(RefCtx& C, std::map<Var, int>& env, const FormulaPtr& f,
               long long weight) {
  switch (f->kind) {
    case FKind::Atom: {
      const Atom& at = *f->atom;
      if (at.kind == AtomKind::Eq) {
        switch (at.level()) {
          case 0:
            return r_eq0(C, r_obj0(C, env, at.lhs.v), r_obj0(C, env, at.rhs.v));
          case 1:
            return r_eq1(C, r_obj1(C, env, at.lhs.v), r_obj1(C, env, at.rhs.v));
          default:
            return r_eq2(C, r_obj2(C, env, at.lhs), r_obj2(C, env, at.rhs));
        }
      }
      switch (at.level()) {
        case 0:
          return r_in0(C, r_obj0(C, env, at.lhs.v), r_obj1(C, env, at.rhs.v));
        case 1:
          return r_in1(C, r_obj1(C, env, at.lhs.v),
                       r_obj2(C, env, tvar(at.rhs.v)));
        default:
          return r_in2(C, r_obj2(C, env, at.lhs), C.id3.at(at.rhs.v));
      }
    }
    case FKind::Not:
      return C.gb->mk_not(r_formula(C, env, f->a, weight));
    case FKind::And:
      return C.gb->mk_and2(r_formula(C, env, f->a, weight),
                           r_formula(C, env, f->b, weight));
    case FKind::Or:
      return C.gb->mk_or2(r_formula(C, env, f->a, weight),
                          r_formula(C, env, f->b, weight));
    case FKind::Forall: {
      int s = f->bound.front().sort;
      long long range = s == 0   ? C.n0
                        : s == 1 ? C.o1_count()
                                 : C.o2_count();
      long long product = 1;
      for (std::size_t i = 0; i < f->bound.size(); ++i) {
        product *= range;
        if (product * weight > kRefuterUniversalCap)
          return etrue(); // too wide: skip
      }
      std::vector<Expr> parts;
      std::vector<int> tuple(f->bound.size(), 0);
      bool exhausted_budget = false;
      for (;;) {
        if (--C.instances_left < 0) {
          exhausted_budget = true;
          break; // keep the instances gathered so far (still consequences)
        }
        for (std::size_t i = 0; i < f->bound.size(); ++i)
          env[f->bound[i]] = tuple[i];
        parts.push_back(r_formula(C, env, f->a, weight * product));
        std::size_t i = 0;
        while (i < tuple.size() && ++tuple[i] == range) tuple[i++] = 0;
        if (i == tuple.size()) break;
      }
      for (const Var& bv : f->bound) env.erase(bv);
      (void)exhausted_budget;
      return C.gb->mk_and(std::move(parts));
    }
  }
  return etrue();
}

void r_eq_axioms(RefCtx& C) {
  auto transitivity = [&](int count, auto eq) {
    for (int a = 0; a < count; ++a)
      for (int b = a + 1; b < count; ++b)
        for (int c = b + 1; c < count; ++c) {
          Expr ab = eq(a, b), bc = eq(b, c), ac = eq(a, c);
          C.gb->assert_true(
              C.gb->mk_imp(C.gb->mk_and2(ab, bc), ac));
          C.gb->assert_true(
              C.gb->mk_imp(C.gb->mk_and2(ab, ac), bc));
          C.gb->assert_true(
              C.gb->mk_imp(C.gb->mk_and2(ac, bc), ab));
        }
  };
  transitivity(C.n0, [&](int a, int b) { return r_eq0(C, a, b); });
  transitivity(C.c1, [&](int a, int b) { return r_eq1(C, a, b); });
  transitivity(C.c2, [&](int a, int b) { return r_eq2(C, a, b); });
}

// One closure round over the keys minted so far: congruence of memberships
// under the equality keys, bridges between core sort-2 objects and pair
// terms, and Kuratowski injectivity for pair-valued cores.
void r_closure(RefCtx& C) {
  std::map<std::array<int, 4>, int> snap = C.keys;
  if (snap.size() > kRefuterClosureKeyCap) return;
  for (const auto& [k, var] : snap) {
    Expr kv = elit(var);
    switch (k[0]) {
      case kIn0: {
        int e = k[1], A = k[2];
        for (int e2 = 0; e2 < C.n0; ++e2)
          if (e2 != e)
            C.gb->assert_true(C.gb->mk_imp(
                r_eq0(C, e, e2), C.gb->mk_iff(kv, r_in0(C, e2, A))));
        for (int A2 = 0; A2 < C.c1; ++A2)
          if (A2 != A)
            C.gb->assert_true(C.gb->mk_imp(
                r_eq1(C, A, A2), C.gb->mk_iff(kv, r_in0(C, e, A2))));
        break;
      }
      case kIn1: {
        int A = k[1], S = k[2];
        for (int A2 = 0; A2 < C.c1; ++A2)
          if (A2 != A)
            C.gb->assert_true(C.gb->mk_imp(
                r_eq1(C, A, A2), C.gb->mk_iff(kv, r_in1(C, A2, S))));
        for (int S2 = 0; S2 < C.c2; ++S2)
          if (S2 != S)
            C.gb->assert_true(C.gb->mk_imp(
                r_eq2(C, S, S2), C.gb->mk_iff(kv, r_in1(C, A, S2))));
        break;
      }
      case kIn1U: {
        int S = k[3];
        for (int S2 = 0; S2 < C.c2; ++S2)
          if (S2 != S)
            C.gb->assert_true(C.gb->mk_imp(
                r_eq2(C, S, S2),
                C.gb->mk_iff(kv, r_key(C, kIn1U, k[1], k[2], S2))));
        break;
      }
      case kIn2: {
        int S = k[1], R = k[2];
        for (int S2 = 0; S2 < C.c2; ++S2)
          if (S2 != S)
            C.gb->assert_true(C.gb->mk_imp(
                r_eq2(C, S, S2), C.gb->mk_iff(kv, r_in2(C, S2, R))));
        // bridge to pair terms: S = <x, y> transfers membership in R
        for (int x = 0; x < C.n0; ++x)
          for (int y = 0; y < C.n0; ++y)
            C.gb->assert_true(C.gb->mk_imp(
                r_eq2(C, S, C.enc_pair(x, y)),
                C.gb->mk_iff(kv, r_key(C, kIn2P, x, y, R))));
        break;
      }
      case kIn2P: {
        int x = k[1], y = k[2], R = k[3];
        for (int x2 = 0; x2 < C.n0; ++x2)
          if (x2 != x)
            C.gb->assert_true(C.gb->mk_imp(
                r_eq0(C, x, x2), C.gb->mk_iff(kv, r_key(C, kIn2P, x2, y, R))));
        for (int y2 = 0; y2 < C.n0; ++y2)
          if (y2 != y)
            C.gb->assert_true(C.gb->mk_imp(
                r_eq0(C, y, y2), C.gb->mk_iff(kv, r_key(C, kIn2P, x, y2, R))));
        break;
      }
      case kEq1B: {
        int A = k[1];
        for (int A2 = 0; A2 < C.c1; ++A2)
          if (A2 != A)
            C.gb->assert_true(C.gb->mk_imp(
                r_eq1(C, A, A2),
                C.gb->mk_iff(kv, r_key(C, kEq1B, A2, k[2], k[3]))));
        break;
      }
      case kEq2P: {
        int S = k[1];
        for (int S2 = 0; S2 < C.c2; ++S2)
          if (S2 != S)
            C.gb->assert_true(C.gb->mk_imp(
                r_eq2(C, S, S2),
                C.gb->mk_iff(kv, r_key(C, kEq2P, S2, k[2], k[3]))));
        // Kuratowski injectivity: two pair values for the same core agree
        // componentwise.
        for (const auto& [k2, var2] : snap) {
          if (k2[0] != kEq2P || k2[1] != S || k2 == k) continue;
          C.gb->assert_true(C.gb->mk_imp(
              C.gb->mk_and2(kv, elit(var2)),
              C.gb->mk_and2(r_eq0(C, k[2], k2[2]),
                            r_eq0(C, k[3], k2[3]))));
        }
        break;
      }
      default:
        break;
    }
  }
}

bool refute_branch(const std::vector<FormulaPtr>& H, long long* steps_out) {
  RefCtx C;
  std::array<std::vector<Var>, 4> by_sort = vars_by_sort(H, {});

  // Disequality witnesses: a separating element for each negated sort-1
  // equality, a separating member for each negated sort-2 equality.
  std::vector<const Atom*> diseq1, diseq2;
  for (const FormulaPtr& f : H) {
    if (f->kind != FKind::Not || f->a->kind != FKind::Atom) continue;
    const Atom& at = *f->a->atom;
    if (at.kind != AtomKind::Eq) continue;
    if (at.level() == 1) diseq1.push_back(&at);
    if (at.level() == 2) diseq2.push_back(&at);
  }

  int i = 0;
  for (const Var& v : by_sort[0]) C.id0.emplace(v, i++);
  int wit0_base = i;
  i += static_cast<int>(diseq1.size());
  C.n0 = i + 1; // one synthetic element: domains are nonempty
  if (C.n0 > kRefuterMaxElems) return false;

  i = 0;
  for (const Var& v : by_sort[1]) C.id1.emplace(v, i++);
  int wit1_base = i;
  i += static_cast<int>(diseq2.size());
  C.c1 = i;
  for (int a = 0; a < C.n0; ++a)
    for (int b = a; b < C.n0; ++b) {
      C.b1_idx.emplace(std::make_pair(a, b), static_cast<int>(C.b1.size()));
      C.b1.emplace_back(a, b);
    }

  i = 0;
  for (const Var& v : by_sort[2]) C.id2.emplace(v, i++);
  C.c2 = i;
  i = 0;
  for (const Var& v : by_sort[3]) C.id3.emplace(v, i++);
  C.c3 = i;

  C.gb = std::make_unique<GateBuilder>(C.cnf, kRefuterVarCap,
                                       kRefuterClauseCap);

  std::map<Var, int> env;
  try {
    for (const FormulaPtr& f : H) C.gb->assert_true(r_formula(C, env, f, 1));
    // Witness constraints: the separating object lands in exactly one side.
    for (std::size_t d = 0; d < diseq1.size(); ++d) {
      int w = wit0_base + static_cast<int>(d);
      int A = r_obj1(C, env, diseq1[d]->lhs.v);
      int B = r_obj1(C, env, diseq1[d]->rhs.v);
      C.gb->assert_true(C.gb->mk_xor(r_in0(C, w, A), r_in0(C, w, B)));
    }
    for (std::size_t d = 0; d < diseq2.size(); ++d) {
      int w = wit1_base + static_cast<int>(d);
      int S = r_obj2(C, env, diseq2[d]->lhs);
      int T = r_obj2(C, env, diseq2[d]->rhs);
      C.gb->assert_true(C.gb->mk_xor(r_in1(C, w, S), r_in1(C, w, T)));
    }
    r_eq_axioms(C);
    r_closure(C);
  } catch (const LayerAbort&) {
    // Keep whatever was asserted: it is still a sound (weaker) abstraction.
  }
  if (C.cnf.contradiction) return true;

  std::vector<int> order(C.cnf.nvars);
  std::iota(order.begin(), order.end(), 1);
  SatSolver solver(C.cnf, kRefuterSatBudget);
  SatRes r = solver.solve(order);
  *steps_out += solver.steps();
  return r == SatRes::Unsat;
}

} // namespace

// ---------------------------------------------------------------------------
// solve_h
// ---------------------------------------------------------------------------

namespace {

struct LayerOutcome {
  LayerRes res = LayerRes::Unsat;
  Interpretation model;
  bool ran = false;
};

// Runs sizes first..limit (1-based) across `jobs` workers; outcome slots are
// merged in ascending size order, so the result is independent of scheduling.
void run_sizes(const std::vector<FormulaPtr>& H, const std::set<Var>& extra,
               int h, int limit, long long sat_budget, int jobs,
               std::vector<LayerOutcome>& out, long long* steps) {
  out.assign(limit, LayerOutcome{});
  if (jobs <= 1) {
    for (int n = 1; n <= limit; ++n) {
      out[n - 1].ran = true;
      out[n - 1].res = blast_layer(H, extra, h, n, sat_budget, steps,
                                   &out[n - 1].model);
      if (out[n - 1].res != LayerRes::Unsat) return; // first hit settles it
    }
    return;
  }
  std::atomic<bool> stop{false};
  std::atomic<long long> shared_steps{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> workers;
  for (int t = 0; t < jobs; ++t) {
    workers.emplace_back([&, t] {
      long long local = 0;
      try {
        for (int n = t + 1; n <= limit; n += jobs) {
          if (stop.load()) break;
          out[n - 1].ran = true;
          out[n - 1].res = blast_layer(H, extra, h, n, sat_budget, &local,
                                       &out[n - 1].model);
          if (out[n - 1].res != LayerRes::Unsat) stop.store(true);
        }
      } catch (...) {
        errors[t] = std::current_exception();
        stop.store(true);
      }
      shared_steps += local;
    });
  }
  for (auto& w : workers) w.join();
  *steps += shared_steps.load();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace

Verdict solve_h(const FormulaPtr& f, int h, const SolveHOptions& opts) {
  if (h < 2) throw std::invalid_argument("solve_h: h must be at least 2");
  DecomposeResult dec = decompose_h(f, h, opts.names);
  if (!dec.ok()) {
    std::string msg = "solve_h: input is not an h-fragment formula";
    if (!dec.diagnostics.empty()) msg += ": " + dec.diagnostics.front().message;
    throw FragmentError(msg);
  }

  std::set<Var> input_free = free_vars_all(f);
  Verdict out;
  long long steps = 0;
  bool truncated = false;

  for (Saturator cur(f); !cur.done(); cur.advance()) {
    const SaturationState& branch = cur.current();
    ++out.stats.branches;

    if (refute_branch(branch.H, &steps)) continue;

    NormalizedConjunction nc{branch.H, branch.fresh_vars};
    SizeBudget sb = compute_bound(nc);
    long long limit = opts.full_bound
                          ? sb.bound
                          : std::min<long long>(sb.bound, opts.sat_cap);
    bool sizes_truncated = limit < sb.bound;

    if (steps > opts.node_budget) {
      truncated = true;
      break;
    }

    std::vector<LayerOutcome> outcomes;
    run_sizes(branch.H, input_free, h, static_cast<int>(limit),
              std::min<long long>(opts.node_budget - steps, 4'000'000),
              std::max(1, opts.jobs), outcomes, &steps);

    for (int n = 1; n <= static_cast<int>(limit); ++n) {
      LayerOutcome& lo = outcomes[n - 1];
      if (!lo.ran) break; // a worker stopped the run at a smaller size
      out.stats.max_domain = std::max(out.stats.max_domain, n);
      if (lo.res == LayerRes::Abort) {
        sizes_truncated = true;
        break;
      }
      if (lo.res == LayerRes::Sat) {
        CertifyResult cert = certify_explain(lo.model, f, h, opts.names);
        if (!cert.ok)
          throw std::logic_error(
              "solve_h: search produced a model that fails certification: " +
              cert.diagnostic);
        // Defensive cross-check against the reference evaluator where the
        // space is small enough for it.
        try {
          if (!eval(lo.model, f))
            throw std::logic_error(
                "solve_h: search produced a model the evaluator rejects");
        } catch (const CapacityError&) {
          // certification already vouches for the model
        }
        out.status = SolveStatus::SAT;
        out.model = std::move(lo.model);
        out.stats.nodes = steps;
        return out;
      }
    }
    if (sizes_truncated) truncated = true;
  }

  out.stats.nodes = steps;
  out.status = truncated ? SolveStatus::CAPPED : SolveStatus::UNSAT;
  return out;
}

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

namespace {

struct CertEval {
  const Interpretation& model;
  std::set<int> dom;
  long long steps = 0;
  std::map<Var, int> env0;
  std::map<Var, HSet> env;

  int val0(const Var& v) {
    auto it = env0.find(v);
    return it != env0.end() ? it->second : model.value0(v);
  }
  const HSet& val(const Var& v) {
    auto it = env.find(v);
    return it != env.end() ? it->second : model.value(v);
  }
  HSet term2(const Term& t) {
    if (t.is_pair()) return pair_hset(val0(t.v), val0(*t.pair_right));
    return val(t.v);
  }

  bool atom(const Atom& at) {
    ++steps;
    if (at.kind == AtomKind::Eq) {
      switch (at.level()) {
        case 0: return val0(at.lhs.v) == val0(at.rhs.v);
        case 1: return val(at.lhs.v) == val(at.rhs.v);
        default: return term2(at.lhs) == term2(at.rhs);
      }
    }
    switch (at.level()) {
      case 0: return val(at.rhs.v).contains_elem(val0(at.lhs.v));
      case 1: return val(at.rhs.v).contains(val(at.lhs.v));
      default: return val(at.rhs.v).contains(term2(at.lhs));
    }
  }

  bool ev(const FormulaPtr& f) {
    switch (f->kind) {
      case FKind::Atom:
        return atom(*f->atom);
      case FKind::Not:
        return !ev(f->a);
      case FKind::And:
        return ev(f->a) && ev(f->b);
      case FKind::Or:
        return ev(f->a) || ev(f->b);
      case FKind::Forall:
        return forall(f);
    }
    return false;
  }

  bool forall(const FormulaPtr& f) {
    int s = f->bound.front().sort;
    if (s == 0) return forall0(f, 0);

    // Guarded prefixes range over the guard collection's members inside
    // the domain; everything else in pow(D) falsifies the guard, so the
    // instances skipped here are vacuously true and the answer matches
    // the unrestricted evaluator. The full double powerset is never built.
    std::map<Var, Var> guards = guard_map(f);
    std::vector<std::vector<HSet>> ranges;
    for (const Var& bv : f->bound) {
      auto g = guards.find(bv);
      if (g == guards.end())
        throw std::logic_error(
            "certify: unguarded level-" + std::to_string(s + 1) +
            " universal escaped decomposition");
      const HSet* coll;
      auto ec = env.find(g->second);
      coll = ec != env.end() ? &ec->second : &model.value(g->second);
      std::vector<HSet> range;
      for (const HSet& m : coll->members) {
        bool inside = s == 1 ? level1_within(m, dom) : level2_within(m, dom);
        if (inside) range.push_back(m);
      }
      ranges.push_back(std::move(range));
    }
    return forallc(f, ranges, 0);
  }

  bool forall0(const FormulaPtr& f, std::size_t i) {
    if (i == f->bound.size()) {
      ++steps;
      return ev(f->a);
    }
    for (int d : model.domain) {
      env0[f->bound[i]] = d;
      bool ok = forall0(f, i + 1);
      env0.erase(f->bound[i]);
      if (!ok) return false;
    }
    return true;
  }

  bool forallc(const FormulaPtr& f, const std::vector<std::vector<HSet>>& rs,
               std::size_t i) {
    if (i == f->bound.size()) {
      ++steps;
      return ev(f->a);
    }
    for (const HSet& v : rs[i]) {
      env[f->bound[i]] = v;
      bool ok = forallc(f, rs, i + 1);
      env.erase(f->bound[i]);
      if (!ok) return false;
    }
    return true;
  }
};

} // namespace

CertifyResult certify_explain(const Interpretation& model, const FormulaPtr& f,
                              int h, const DesignatedNames& names) {
  DecomposeResult dr = decompose_h(f, h, names);
  if (!dr.ok()) {
    std::string msg = "certify: input is not an h-fragment formula";
    if (!dr.diagnostics.empty())
      msg += ": " + dr.diagnostics.front().message;
    throw FragmentError(msg);
  }
  const HFragmentDecomposition& d = *dr.decomposition;

  CertifyResult res;
  auto reject = [&](std::string why) {
    res.ok = false;
    res.diagnostic = std::move(why);
    return res;
  };

  // Preconditions: every free variable assigned, every sort-2/3 value
  // within the pow_{<h} cardinality bounds.
  std::set<Var> frees = free_vars_all(f);
  for (const Var& v : frees) {
    ++res.steps;
    if (v.sort == 0 ? !model.assign0.count(v) : !model.assign.count(v))
      return reject("free variable " + var_display(v) + " is unassigned");
  }
  for (const Var& v : frees) {
    if (v.sort < 2) continue;
    const HSet& val = model.value(v);
    for (const HSet& m : val.members) {
      ++res.steps;
      if (static_cast<int>(m.size()) >= h)
        return reject("a member of M " + var_display(v) + " has " +
                      std::to_string(m.size()) + " members, expected fewer "
                      "than " + std::to_string(h));
      if (v.sort == 3)
        for (const HSet& mm : m.members) {
          ++res.steps;
          if (static_cast<int>(mm.size()) >= h)
            return reject("a member of a member of M " + var_display(v) +
                          " has " + std::to_string(mm.size()) +
                          " elements, expected fewer than " +
                          std::to_string(h));
        }
    }
  }

  std::set<int> dom(model.domain.begin(), model.domain.end());

  // xi1: the universe variable holds every domain element.
  const HSet& U = model.value(d.universe_var);
  for (int e : model.domain) {
    ++res.steps;
    if (!U.contains_elem(e))
      return reject("element " + model.elem_name(e) + " is missing from M " +
                    var_display(d.universe_var));
  }

  // xi2: members of the bounded sort-2 collection inside the domain stay
  // below h elements (already forced by the precondition; kept as a check
  // on the conjunct itself).
  const HSet& B2 = model.value(d.bounded2_var);
  for (const HSet& m : B2.members) {
    ++res.steps;
    if (level1_within(m, dom) && static_cast<int>(m.size()) >= h)
      return reject("a member of M " + var_display(d.bounded2_var) +
                    " has too many elements");
  }

  // xi3: members of the bounded sort-3 collection have their own members
  // inside the bounded sort-2 collection, and fewer than h of them.
  const HSet& B3 = model.value(d.bounded3_var);
  for (const HSet& m : B3.members) {
    if (!level2_within(m, dom)) continue;
    int inside = 0;
    for (const HSet& mm : m.members) {
      ++res.steps;
      if (!level1_within(mm, dom)) continue;
      ++inside;
      if (!B2.contains(mm))
        return reject("a member of a member of M " +
                      var_display(d.bounded3_var) + " is outside M " +
                      var_display(d.bounded2_var));
    }
    if (inside >= h)
      return reject("a member of M " + var_display(d.bounded3_var) +
                    " has too many members");
  }

  // psi conjuncts.
  for (const PsiEntry& e : d.psi2) {
    const HSet& X = model.value(e.var);
    if (e.member_form) {
      ++res.steps;
      if (!B3.contains(X))
        return reject("M " + var_display(e.var) + " is not a member of M " +
                      var_display(d.bounded3_var));
    } else {
      for (const HSet& m : X.members) {
        ++res.steps;
        if (level1_within(m, dom) && !B2.contains(m))
          return reject("a member of M " + var_display(e.var) +
                        " is outside M " + var_display(d.bounded2_var));
      }
    }
  }
  for (const PsiEntry& e : d.psi3) {
    const HSet& X = model.value(e.var);
    for (const HSet& m : X.members) {
      ++res.steps;
      if (level2_within(m, dom) && !B3.contains(m))
        return reject("a member of M " + var_display(e.var) +
                      " is outside M " + var_display(d.bounded3_var));
    }
  }

  // chi.
  if (d.chi) {
    CertEval ev{model, dom, 0, {}, {}};
    std::vector<FormulaPtr> parts = and_leaves(d.chi);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (!ev.ev(parts[i])) {
        res.steps += ev.steps;
        return reject("chi conjunct " + std::to_string(i + 1) + " of " +
                      std::to_string(parts.size()) + " evaluates to false: " +
                      print(parts[i]));
      }
    }
    res.steps += ev.steps;
  }

  res.ok = true;
  return res;
}

bool certify(const Interpretation& model, const FormulaPtr& f, int h,
             const DesignatedNames& names) {
  return certify_explain(model, f, h, names).ok;
}

// ---------------------------------------------------------------------------
// Propositional reduction
// ---------------------------------------------------------------------------

PropPtr pletter(int i) {
  if (i < 1) throw std::invalid_argument("pletter: letters are numbered from 1");
  auto p = std::make_shared<PropFormula>();
  p->kind = PropKind::Letter;
  p->letter = i;
  return p;
}

namespace {

PropPtr pnode(PropKind k, PropPtr a, PropPtr b) {
  if (!a || (k != PropKind::Not && !b))
    throw std::invalid_argument("propositional connective with null operand");
  auto p = std::make_shared<PropFormula>();
  p->kind = k;
  p->a = std::move(a);
  p->b = std::move(b);
  return p;
}

void collect_letters(const PropPtr& p, std::set<int>& out) {
  if (p->kind == PropKind::Letter) {
    out.insert(p->letter);
    return;
  }
  collect_letters(p->a, out);
  if (p->b) collect_letters(p->b, out);
}

bool peval(const PropPtr& p, const std::map<int, bool>& env) {
  switch (p->kind) {
    case PropKind::Letter: return env.at(p->letter);
    case PropKind::Not: return !peval(p->a, env);
    case PropKind::And: return peval(p->a, env) && peval(p->b, env);
    case PropKind::Or: return peval(p->a, env) || peval(p->b, env);
  }
  return false;
}

} // namespace

PropPtr pnot(PropPtr a) { return pnode(PropKind::Not, std::move(a), nullptr); }
PropPtr pand(PropPtr a, PropPtr b) {
  return pnode(PropKind::And, std::move(a), std::move(b));
}
PropPtr por(PropPtr a, PropPtr b) {
  return pnode(PropKind::Or, std::move(a), std::move(b));
}

bool prop_brute_sat(const PropPtr& p) {
  if (!p) throw std::invalid_argument("prop_brute_sat: null formula");
  std::set<int> letters;
  collect_letters(p, letters);
  if (letters.size() > 24)
    throw CapacityError("prop_brute_sat: too many letters for a truth table");
  std::vector<int> ls(letters.begin(), letters.end());
  for (std::uint64_t mask = 0; mask < (1ULL << ls.size()); ++mask) {
    std::map<int, bool> env;
    for (std::size_t i = 0; i < ls.size(); ++i)
      env[ls[i]] = (mask >> i) & 1;
    if (peval(p, env)) return true;
  }
  return false;
}

FormulaPtr reduce_sat(const PropPtr& prop) {
  if (!prop) throw std::invalid_argument("reduce_sat: null formula");
  Var X{"X", 1};
  // Each letter becomes membership of its own sort-0 variable in X; truth
  // assignments and memberships simulate each other exactly.
  std::function<FormulaPtr(const PropPtr&)> go =
      [&](const PropPtr& p) -> FormulaPtr {
    switch (p->kind) {
      case PropKind::Letter:
        return matom(
            ain(tvar(Var{"x" + std::to_string(p->letter), 0}), tvar(X)));
      case PropKind::Not:
        return mnot(go(p->a));
      case PropKind::And:
        return mand(go(p->a), go(p->b));
      case PropKind::Or:
        return mor(go(p->a), go(p->b));
    }
    throw std::logic_error("reduce_sat: unreachable");
  };
  return go(prop);
}

} // namespace syllog
