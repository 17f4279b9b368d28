#pragma once

// Membership tests for the restricted fragment: Restriction I (linked
// sort-0 variables in negatively occurring level-1 universals inside
// level-2 universals), Restriction II (shape limits inside level-3
// universals), and the h-bounded subfragment decomposition.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "syllog/core.hpp"

namespace syllog {

// A formula fell outside the fragment an operation supports.
struct FragmentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Validity of a quantifier-free formula over level-0 atoms (x = y and
// x in X^1 only). Decided by enumerating partitions of the sort-0
// variables into equivalence classes together with membership bit-vectors
// of classes into the sort-1 variables; the formula is valid iff no
// partition+bits combination falsifies it. Throws FragmentError on atoms
// of level >= 1 or on quantifiers, CapacityError when the search space
// exceeds its guard rails.
bool validity_2ls(const FormulaPtr& f);

// One entry per (level-2 universal, negatively occurring level-1 universal
// in its matrix) pair found anywhere in the checked formula.
struct LinkReport {
  FormulaPtr universal;      // the level-1 universal occurrence
  std::set<Var> linked_vars; // the enclosing level-2 prefix variables
  FormulaPtr condition;      // ~matrix -> every z_i in every Z_j
  bool valid = false;        // validity_2ls(condition); false when the
                             // matrix strays outside level-0 atoms
  bool level0_only = true;   // matrix uses level-0 atoms only
  std::vector<int> path;     // occurrence path of `universal` from the root
};

// Restriction I holds iff every report has valid and level0_only set.
std::vector<LinkReport> check_restriction_1(const FormulaPtr& psi);

struct FragmentDiagnostic {
  std::string rule; // "RestrI" | "RestrII" | "Def2-item-<k>"
  std::vector<int> path;
  std::string message;
};

// JSON array of {rule, path, message} objects.
std::string diagnostics_json(const std::vector<FragmentDiagnostic>& diags);

// Restriction II: inside every level-3 universal, (a) negatively occurring
// level-1 universals outside level-2 universals must have the shape
// (forall z1..zn) ~(conjunction of <z_i,z_j> = Y^2 atoms), and (b) level-2
// universals occur only positively.
bool check_restriction_2(const FormulaPtr& psi,
                         std::vector<FragmentDiagnostic>* diags = nullptr);

// Both restrictions.
bool is_4lqsr(const FormulaPtr& psi,
              std::vector<FragmentDiagnostic>* diags = nullptr);

// ---------------------------------------------------------------------------
// h-bounded subfragment decomposition
// ---------------------------------------------------------------------------

// The designated variables of the h-fragment shell. Overridable because
// inputs are free to call them anything.
struct DesignatedNames {
  Var universe{"U", 1};
  Var bounded2{"B", 2};
  Var bounded3{"B", 3};
};

struct PsiEntry {
  Var var;
  bool member_form = false; // X^2 in B^3 rather than the subset shape
  FormulaPtr conjunct;
};

struct HFragmentDecomposition {
  Var universe_var;
  Var bounded2_var;
  Var bounded3_var;
  FormulaPtr xi1; // (forall z)(z in U^1)
  FormulaPtr xi2; // every member of B^2 has fewer than h elements
  FormulaPtr xi3; // every member of B^3 sits inside B^2 and has < h members
  std::vector<PsiEntry> psi2; // one per free sort-2 variable other than B^2
  std::vector<PsiEntry> psi3; // one per free sort-3 variable other than B^3
  FormulaPtr chi; // remaining conjuncts folded left to right; null if none
  int h = 2;
};

struct DecomposeResult {
  std::optional<HFragmentDecomposition> decomposition;
  std::vector<FragmentDiagnostic> diagnostics;

  bool ok() const { return decomposition.has_value(); }
};

// Matches the conjuncts of psi against the shell shapes (any conjunct
// order, any bound-variable names, equality orientation and guard order
// immaterial). Guard implications must be written antecedent-first
// (`A -> B`, equivalently ~A | B). Accepted formulae always satisfy both
// restrictions; rejection diagnostics name the first offending conjunct.
// Throws std::invalid_argument when h < 2.
DecomposeResult decompose_h(const FormulaPtr& psi, int h,
                            const DesignatedNames& names = {});

// Inverse direction: wraps chi in a full shell. Emits xi1, xi2, xi3, one
// subset-shaped psi conjunct for every free sort-2/3 variable of chi other
// than the designated ones, and chi itself last. chi may be null for the
// bare shell. The result decomposes back: decompose_h(make_h_shell(chi, h),
// h) succeeds whenever chi is a valid chi part for this h. Throws
// std::invalid_argument when h < 2.
FormulaPtr make_h_shell(const FormulaPtr& chi, int h,
                        const DesignatedNames& names = {});

} // namespace syllog
