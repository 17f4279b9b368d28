#pragma once

// Reduction of 4LQS^R formulae to disjunctions of normalized conjunctions:
// alpha-renaming apart, lazy disjunctive normal form over the propositional
// skeleton (purely universal subformulae stay opaque), and elimination of
// negated universals through fresh witness variables. Every emitted
// conjunction consists solely of
//   (1) quantifier-free literals,
//   (2) level-1 purely universal formulae,
//   (3) level-2/3 purely universal formulae within Restrictions I/II,
// and the input is satisfiable iff some emitted conjunction is.

#include <array>
#include <memory>
#include <vector>

#include "syllog/core.hpp"

namespace syllog {

// Issues variable names under the reserved "$<sort>_<n>" scheme. reserve()
// scans a formula and advances the counters past any such names already in
// use, so issued names never collide with names in the source.
struct FreshSupply {
  std::array<long, 4> next{0, 0, 0, 0};

  Var fresh(int sort);
  void reserve(const FormulaPtr& f);
};

// Alpha-renames so that every quantifier binds distinct fresh variables,
// disjoint from every free variable. The result is alpha-equal to the input.
FormulaPtr rename_apart(const FormulaPtr& f, FreshSupply& supply);

// Lazy disjunctive normal form. Purely universal subformulae are treated as
// atoms: they are never expanded, only (possibly) negated. Each position of
// the cursor is one disjunct, presented as its list of literals (deduplicated,
// left-to-right). expansions() counts internal node materializations and
// exists so laziness is observable: reading the first disjunct must not
// expand sibling branches.
class DnfCursor {
 public:
  explicit DnfCursor(FormulaPtr f);
  ~DnfCursor();
  DnfCursor(DnfCursor&&) noexcept;
  DnfCursor& operator=(DnfCursor&&) noexcept;

  bool done() const { return done_; }
  const std::vector<FormulaPtr>& current() const { return current_; }
  void advance();
  long expansions() const { return expansions_; }

 private:
  struct Node;
  FormulaPtr root_;
  std::unique_ptr<Node> top_;
  std::vector<FormulaPtr> current_;
  bool done_ = false;
  long expansions_ = 0;

  void collect();
};

inline DnfCursor to_dnf(FormulaPtr f) { return DnfCursor(std::move(f)); }

struct NormalizedConjunction {
  std::vector<FormulaPtr> literals;
  std::vector<Var> fresh_vars; // witnesses introduced for negated universals
};

// Single elimination pass over a conjunction of literals (renamed apart):
// every literal ~(forall v1..vk)phi becomes ~phi[v1/v1',...,vk/vk'] with
// fresh variables of matching sorts; everything else passes through. The
// replacement preserves satisfiability in both directions.
NormalizedConjunction eliminate_negative_quantifiers(
    const std::vector<FormulaPtr>& conj, FreshSupply& supply);

// Lazy normalization: rename apart, then interleave DNF expansion with
// negative-universal elimination until every branch is literal-clean.
// Throws FragmentError if the input (or, defensively, an output) is outside
// 4LQS^R.
class NormalizeCursor {
 public:
  explicit NormalizeCursor(FormulaPtr f);

  bool done() const { return done_; }
  const NormalizedConjunction& current() const { return current_; }
  void advance();

 private:
  struct State {
    std::vector<FormulaPtr> pending; // processed back-to-front
    std::vector<FormulaPtr> literals;
    std::vector<Var> fresh_vars;
  };

  FreshSupply supply_;
  std::vector<State> stack_;
  NormalizedConjunction current_;
  bool done_ = false;

  void run();
};

inline NormalizeCursor normalize(FormulaPtr f) {
  return NormalizeCursor(std::move(f));
}

// Materializes up to `limit` normalized conjunctions.
std::vector<NormalizedConjunction> normalize_all(
    const FormulaPtr& f, std::size_t limit = static_cast<std::size_t>(-1));

} // namespace syllog
