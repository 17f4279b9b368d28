#pragma once

#include <string>
#include <utility>
#include <vector>

#include "syllog/core.hpp"
#include "syllog/normalize.hpp"

namespace syllog {

// Small-model construction: given a normalized conjunction psi and a model M
// of psi, carve a bounded subset D* of the domain and relativize M to it so
// that the relativized model still satisfies psi. The pipeline is
//
//   compute_bound(psi)            size budget, before any model is known
//   build_universe(M, psi)        Steps 1-4: distinguishing sets, fresh
//                                 level-1 names, Delta, witness insertion
//   relativize(M, arts, ...)      the induced interpretation over D*
//   verify_properties_abc(...)    the separation properties the relativized
//                                 model relies on
//
// All choices (splitting members, witness tuples, the default collapse
// element) are made canonically so reruns are reproducible.

// ---------------------------------------------------------------------------
// Distinguishing sets
// ---------------------------------------------------------------------------

// A family of pairwise distinct level-1 sets is separated by a small set of
// element ids: F separates J, J' when F picks an element of their symmetric
// difference. Partition refinement; at each round the splitting member is
// the canonically smallest one that breaks the first still-mixed block, so
// the result is deterministic. |result| <= max(0, #distinct values - 1).
std::vector<int> distinguish_elements(const std::vector<HSet>& family);

// Same refinement for a family of level-2 (or level-3) sets, separated by
// level-1 (resp. level-2) members.
std::vector<HSet> distinguish_sets(const std::vector<HSet>& family);

// ---------------------------------------------------------------------------
// Size budget
// ---------------------------------------------------------------------------

// One witness-insertion site: a level-1 universal phi occurring in the
// matrix of a level-2 universal chi somewhere in psi. The same level-1
// formula under two distinct level-2 prefixes yields two entries.
struct PhiOccurrence {
  FormulaPtr chi;  // level-2 universal occurrence
  FormulaPtr phi;  // level-1 universal inside chi's matrix
};

// Occurrence pairs whose instantiated matrices are closed over the free
// variables of psi. A level-2 universal nested inside a level-3 universal
// may mention the enclosing sort-2 prefix; such pairs cannot be evaluated
// against a model of psi and are skipped (they contribute no witnesses, so
// the budget below still dominates the construction).
std::vector<PhiOccurrence> collect_phi(const NormalizedConjunction& psi);

struct SizeBudget {
  int v0 = 0;          // free sort-0 variables of psi
  int v1 = 0;          // free sort-1 variables
  int v2 = 0;          // free sort-2 variables
  int Lm = 0;          // max level-2 prefix length over all occurrences
  int Ln = 0;          // max level-1 prefix length over collect_phi entries
  int phi_count = 0;   // |collect_phi(psi)|
  long long bound = 1; // see compute_bound
};

// bound = max(1, v0, v0 + 4 v1 + 16 v2 + (max(0, v1 + 4 v2 - 1)^Lm * Ln) *
// phi_count - 5), products saturating well below overflow. The closed form
// is exact for v2 >= 1; with free sort-2 variables present it dominates
// |Dstar| for every source model. When v1 >= 1 and v2 = 0 the arithmetic
// collapses below the construction (the -1 inside the base stands in for a
// fresh-name count that is zero, not negative, in that regime), so size
// assertions are only meaningful on conjunctions with a free sort-2
// variable or none of sort 1.
SizeBudget compute_bound(const NormalizedConjunction& psi);

// ---------------------------------------------------------------------------
// Universe construction (Steps 1-4)
// ---------------------------------------------------------------------------

// One witness insertion: phi's prefix variables were substituted per `args`
// (one argument per variable of the enclosing level-2 prefix) and the
// instantiated universal was false in the source model; `inserted` is the
// lexicographically first falsifying tuple of domain elements.
struct WitnessEntry {
  FormulaPtr phi;
  std::vector<Var> args;
  std::vector<int> inserted;
};

struct UniverseArtifacts {
  std::vector<HSet> F1;     // separates the values of the free sort-2 vars
  std::vector<HSet> F2;     // up to 3 canonical members of each such value
  std::vector<HSet> F;      // F1 union F2
  std::vector<int> Delta1;  // separates the named level-1 sets
  std::vector<int> Delta2;  // up to 3 canonical elements of each named set
  std::vector<int> Delta;   // Delta1 union Delta2
  std::vector<std::pair<Var, HSet>> V1F;  // fresh sort-1 names for F minus
                                          // the already-named level-1 sets
  std::vector<int> Dstar;   // the carved universe (sorted ids)
  std::vector<WitnessEntry> witness_log;

  // Free variables of psi by sort, recorded so later stages need not
  // re-derive them.
  std::vector<Var> v0_free, v1_free, v2_free;
};

// Runs Steps 1-4 against a model of psi (every free variable assigned).
// Witness search enumerates |D|^n tuples per instantiation; throws
// CapacityError("source model domain too large to search (cap exceeded)")
// when that product leaves the supported range. Dstar is never empty: if
// the steps produce nothing, the smallest domain element is inserted.
UniverseArtifacts build_universe(const Interpretation& model,
                                 const NormalizedConjunction& psi);

// ---------------------------------------------------------------------------
// Relativization
// ---------------------------------------------------------------------------

// Smallest element of Dstar; the canonical collapse target.
int default_dstar_pick(const UniverseArtifacts& arts);

// The relativized interpretation over Dstar:
//   sort 0: M*x = Mx when Mx is in Dstar, else dstar_pick;
//   sort 1: M*X = MX intersected with Dstar;
//   sort 2: members of MX that survive inside pow(Dstar), minus the cut
//           named level-1 sets, plus the cut value of each named level-1
//           variable whose full value was a member of MX;
//   sort 3: the same shape one level up, with the free sort-2 variables as
//           the named sets.
// The named level-1 variables are v1_free plus the fresh pairs in v1_fresh
// (their assignments are added to the model first).
Interpretation relativize(const Interpretation& model,
                          const UniverseArtifacts& arts, int dstar_pick,
                          const std::vector<Var>& v1_free,
                          const std::vector<std::pair<Var, HSet>>& v1_fresh,
                          const std::vector<Var>& v2_free);

// ---------------------------------------------------------------------------
// Separation properties
// ---------------------------------------------------------------------------

// Checks the three properties the relativized model relies on, using the
// variable sets recorded in arts:
//   (A) distinct values of named level-1 variables differ inside Dstar;
//   (B) distinct values of free sort-2 variables differ at a named level-1
//       member that is empty or meets Dstar;
//   (C) a pair value <x,y> differing from a free sort-2 value differs at a
//       named witness that survives the cut, or already differs on the pair
//       side itself.
// On failure appends human-readable explanations to diags (when given) and
// returns false.
bool verify_properties_abc(const Interpretation& model,
                           const UniverseArtifacts& arts,
                           std::vector<std::string>* diags = nullptr);

// JSON rendering of the artifacts for audit; element ids are printed via
// the model's element names.
std::string artifacts_json(const UniverseArtifacts& arts,
                           const Interpretation& model);

}  // namespace syllog
