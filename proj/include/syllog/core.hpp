#pragma once

// Core data model for the four-level quantified set-theoretic language:
// sorted variables, Kuratowski pair terms, atoms, formulae, hereditarily
// finite set values, and finite interpretations with an exact evaluator.
//
// Everything here is immutable after construction and safe to share across
// threads; all operations are pure functions.

#include <atomic>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace syllog {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Ill-sorted construction (bad atom shape, bad quantifier prefix, ...).
struct SortError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Evaluation over an interpretation failed (unassigned variable, ...).
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An enumeration would exceed a configured capacity. Raised instead of
// silently truncating; never a wrong answer.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Variables and terms
// ---------------------------------------------------------------------------

// A sorted variable. Sorts run 0..3: sort-0 variables range over domain
// elements, sort-k variables over the k-fold powerset of the domain.
// `name` carries no sort suffix; rendering appends ^k for k >= 1.
struct Var {
  std::string name;
  int sort = 0;

  friend bool operator==(const Var&, const Var&) = default;
  friend auto operator<=>(const Var&, const Var&) = default;
};

// Display form of a variable: "x" for sort 0, "X^k" for sort k >= 1.
std::string var_display(const Var& v);

// A term is either a variable of any sort or a pair term <x,y> over two
// sort-0 variables. Pair terms are the only compound terms; they denote
// sort-2 values ({{Mx},{Mx,My}} under evaluation).
struct Term {
  Var v;                          // the variable, or the pair's left component
  std::optional<Var> pair_right;  // engaged iff this is a pair term

  bool is_pair() const { return pair_right.has_value(); }
  // Sort of the value the term denotes; pair terms denote sort-2 values.
  int value_sort() const { return is_pair() ? 2 : v.sort; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

Term tvar(Var v);
// Throws SortError unless both components are sort-0 variables.
Term tpair(Var left, Var right);

std::string term_display(const Term& t);

// ---------------------------------------------------------------------------
// Atoms
// ---------------------------------------------------------------------------

enum class AtomKind { Eq, In };

// A sorted atom. Level k in {0,1,2} classifies the operand sorts:
//   Eq level k: both sides denote sort-k values (k = 2 admits pair terms);
//   In level k: left side denotes a sort-k value, right side is a variable
//               of sort k+1 (pair terms admitted on the left at k = 2 only).
struct Atom {
  AtomKind kind = AtomKind::Eq;
  Term lhs, rhs;

  int level() const { return lhs.value_sort(); }

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

// Shape-validating constructors; throw SortError with a descriptive message.
Atom aeq(Term lhs, Term rhs);
Atom ain(Term lhs, Term rhs);

// ---------------------------------------------------------------------------
// Formulae
// ---------------------------------------------------------------------------

enum class FKind { Atom, Not, And, Or, Forall };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable formula node. Construct only through the m* functions below,
// which enforce the stratification invariants:
//   - quantifier prefixes are nonempty, duplicate-free, single-sorted,
//     with bound sort in {0,1,2};
//   - the body of a quantifier binding sort-s variables contains no
//     quantifier of sort >= s (so level-1 universals have quantifier-free
//     matrices, level-2 bodies may embed level-1 universals, and level-3
//     bodies may embed levels 1-2);
//   - directly nested prefixes of the same sort are merged into one block.
struct Formula {
  FKind kind = FKind::Atom;
  std::optional<Atom> atom;  // FKind::Atom
  FormulaPtr a, b;           // Not: a; And/Or: a,b; Forall: a = body
  std::vector<Var> bound;    // Forall prefix

  // Cached structure data, filled in by the constructors.
  std::size_t hash = 0;
  int max_quant_sort = -1;  // max bound-variable sort in the subtree, -1 if none
  int node_count = 1;
};

FormulaPtr matom(Atom a);
FormulaPtr mnot(FormulaPtr f);
FormulaPtr mand(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr mor(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr mforall(std::vector<Var> bound, FormulaPtr body);

// Desugaring helpers: A -> B is ~A | B, A <-> B is (~A | B) & (~B | A).
FormulaPtr mimpl(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr miff(FormulaPtr lhs, FormulaPtr rhs);
// Left folds; both require a nonempty list.
FormulaPtr mand_all(const std::vector<FormulaPtr>& fs);
FormulaPtr mor_all(const std::vector<FormulaPtr>& fs);

// Deep structural equality (hash shortcut, then node-by-node).
bool formula_equal(const FormulaPtr& lhs, const FormulaPtr& rhs);

// Leaves of the maximal And-tree (resp. Or-tree) rooted at f, left to
// right; a non-And (non-Or) formula is its own single leaf.
std::vector<FormulaPtr> and_leaves(const FormulaPtr& f);
std::vector<FormulaPtr> or_leaves(const FormulaPtr& f);

// Structural equality modulo renaming of bound variables.
bool alpha_equal(const FormulaPtr& lhs, const FormulaPtr& rhs);

// ---------------------------------------------------------------------------
// Hereditarily finite set values
// ---------------------------------------------------------------------------

// A level-k set value over domain element ids:
//   level 1: a set of element ids,
//   level 2: a set of level-1 sets,
//   level 3: a set of level-2 sets.
// Members are always kept sorted and duplicate-free, so structural equality
// coincides with extensional equality.
struct HSet {
  int level = 1;
  std::vector<int> elems;    // level 1 only
  std::vector<HSet> members; // levels 2 and 3 only

  static HSet make1(std::vector<int> elems);
  static HSet make(int level, std::vector<HSet> members);
  static HSet empty(int level);

  std::size_t size() const {
    return level == 1 ? elems.size() : members.size();
  }
  bool contains_elem(int id) const;        // level 1
  bool contains(const HSet& member) const; // levels 2 and 3
};

// Lexicographic order on (level, elems, members); written out by hand
// because a defaulted comparison cannot recurse through vector<HSet>.
int hset_cmp(const HSet& lhs, const HSet& rhs);
inline bool operator==(const HSet& a, const HSet& b) { return hset_cmp(a, b) == 0; }
inline bool operator!=(const HSet& a, const HSet& b) { return hset_cmp(a, b) != 0; }
inline bool operator<(const HSet& a, const HSet& b) { return hset_cmp(a, b) < 0; }

// Same-level set algebra (throws SortError on level mismatch).
HSet hset_union(const HSet& lhs, const HSet& rhs);
HSet hset_intersect(const HSet& lhs, const HSet& rhs);
HSet hset_diff(const HSet& lhs, const HSet& rhs);

// All level-1 sets over the given element ids, in canonical order
// (2^n results; by size, then lexicographically by member list).
std::vector<HSet> enumerate_level1(const std::vector<int>& domain);
// All level-(k+1) sets whose members are drawn from `pool` (every member of
// pool must have level k). 2^|pool| results in canonical order.
std::vector<HSet> enumerate_subsets(int level, const std::vector<HSet>& pool);

// ---------------------------------------------------------------------------
// Interpretations
// ---------------------------------------------------------------------------

// A finite interpretation: a nonempty domain of element ids plus an
// assignment of values to variables. Domain ids need not be contiguous
// (relativized models use a subset of the original ids).
struct Interpretation {
  std::vector<int> domain;             // sorted, duplicate-free
  std::vector<std::string> elem_names; // per id; ids index this table
  std::map<Var, int> assign0;          // sort-0 variables
  std::map<Var, HSet> assign;          // sort-1/2/3 variables

  std::string elem_name(int id) const; // falls back to "d<id>"

  // Lookup helpers; throw EvalError naming the variable when unassigned.
  int value0(const Var& v) const;
  const HSet& value(const Var& v) const;
};

// Enumeration guards for the evaluator. pow2_domain_cap bounds |D| when a
// sort-2 quantifier must range over pow(pow(D)); pow1_domain_cap bounds |D|
// for sort-1 quantifiers over pow(D). Exceeding either raises CapacityError.
struct EvalLimits {
  int pow2_domain_cap = 4;
  int pow1_domain_cap = 16;
};

namespace stats {
// Number of times a sort-2 quantifier was expanded over the full
// pow(pow(D)) space. Certification must never bump this.
extern std::atomic<std::uint64_t> pow2_expansions;
}

// Value of a sort-2 term (pair terms a la Kuratowski: {{Mx},{Mx,My}}).
HSet eval_term2(const Interpretation& interp, const Term& t);

// Truth value of f under interp. Sort-0 quantifiers range over the domain,
// sort-1 over pow(domain), sort-2 over pow(pow(domain)) (capacity-guarded).
bool eval(const Interpretation& interp, const FormulaPtr& f,
          const EvalLimits& limits = {});

// ---------------------------------------------------------------------------
// Syntactic operations
// ---------------------------------------------------------------------------

// Raised by substitute: a replacement variable would be captured by a
// quantifier in f (callers must supply fresh variables).
struct SubstError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Simultaneous substitution of free variable occurrences. The mapping must
// be sort-preserving (SortError otherwise); capture raises SubstError, it
// is never repaired by silent renaming.
FormulaPtr substitute(const FormulaPtr& f, const std::map<Var, Var>& mapping);

// Free variables of f of the given sort.
std::set<Var> free_vars(const FormulaPtr& f, int sort);
// All free variables of f, any sort.
std::set<Var> free_vars_all(const FormulaPtr& f);

// Every subformula occurrence with its polarity. The path lists child
// indices from the root (Not/Forall child = 0, And/Or children = 0/1);
// an occurrence is positive iff the number of Not nodes strictly above it
// is even.
struct PolarityEntry {
  std::vector<int> path;
  FormulaPtr node;
  bool positive = true;
};
std::vector<PolarityEntry> polarity_occurrences(const FormulaPtr& f);

} // namespace syllog
