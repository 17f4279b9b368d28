#pragma once

// Satisfiability machinery: a brute-force finite-model oracle for the whole
// language, R1-R6 saturation with observable branch state, the bounded
// model search for the h-fragment, the polynomial certificate checker, and
// the reduction from propositional SAT.
//
// The oracle and the h-fragment solver are two independent decision paths
// on purpose: the oracle enumerates interpretations and asks eval, the
// solver searches candidate values drawn from the pow_{<h} pools guided by
// the guard discipline of the h-fragment. Tests play them against each
// other.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "syllog/core.hpp"
#include "syllog/fragment.hpp"
#include "syllog/normalize.hpp"

namespace syllog {

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

enum class SolveStatus { SAT, UNSAT, CAPPED };

std::string to_string(SolveStatus s);

struct SolveStats {
  long long nodes = 0; // interpretations evaluated / search decisions taken
  int max_domain = 0;  // largest domain size tried
  int branches = 0;    // saturation branches examined (0 for the oracle)
};

// CAPPED is a distinct outcome: some part of the search was truncated (a
// member-count cap, a node budget, an enumeration too large to materialize)
// and no model was found, so nothing was proved. It is never collapsed
// into UNSAT.
struct Verdict {
  SolveStatus status = SolveStatus::CAPPED;
  std::optional<Interpretation> model; // engaged iff status == SAT
  SolveStats stats;
};

// {"status":..., "model":..., "stats":{"nodes","max_domain","branches"}};
// "model" is present only on SAT and uses the model certificate schema.
std::string verdict_json(const Verdict& v);

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

struct OracleOptions {
  // Largest number of members enumerated for a sort-2 (resp. sort-3) value.
  // Ignored when no_caps is set.
  int member_cap2 = 3;
  int member_cap3 = 3;
  bool no_caps = false;
  // Evaluations before the search gives up with CAPPED. Always enforced:
  // with no_caps the value spaces are doubly exponential in |D|.
  long long node_budget = 2'000'000;
};

// Iterative deepening over domain sizes 1..max_domain; for each size,
// every assignment of the free variables is enumerated in canonical order
// (sort-0 variables over elements, sort-1 over subsets, sort-2/3 over
// member-capped subsets of the next pool down) and tested with eval.
// SAT ships the first model found. UNSAT is returned only when every size
// was exhausted with nothing truncated; any truncation turns an empty
// search into CAPPED.
Verdict oracle_sat(const FormulaPtr& f, int max_domain,
                   const OracleOptions& opts = {});

// ---------------------------------------------------------------------------
// Saturation (rules R1-R6)
// ---------------------------------------------------------------------------

// One saturated branch. H holds only quantifier-free literals and positive
// purely universal formulae; the conjunction of H implies the input (every
// rule either decomposes a formula into consequences-by-cases or replaces
// a negated universal with a fresh-variable instance that entails it).
struct SaturationState {
  std::vector<FormulaPtr> H;
  // Disjunct alternatives stacked by R3 and not yet explored, outermost
  // first. Empty once the last branch is being visited.
  std::vector<FormulaPtr> pending_branches;
  // Witness variables R4-R6 introduced on this branch, in creation order.
  std::vector<Var> fresh_vars;
  // Snapshot of the name supply after saturating this branch.
  FreshSupply fresh;
  // R1-R6 applications spent producing this branch (termination measure).
  long rule_applications = 0;
};

// Lazy branch cursor: each position is one saturated H; advancing pops the
// most recent pending R3 alternative and saturates it. Negated conjunctions
// and disjunctions are handled by the dual forms of R2/R3, as in the rules'
// footnote reading of implication. Throws FragmentError when the input is
// outside the restricted fragment.
class Saturator {
 public:
  explicit Saturator(FormulaPtr f);

  bool done() const { return done_; }
  const SaturationState& current() const { return current_; }
  void advance();

 private:
  struct Frame {
    std::vector<FormulaPtr> todo; // processed back-to-front
    std::vector<FormulaPtr> H;
    std::vector<Var> fresh_vars;
    FormulaPtr choice; // the disjunct this frame will pursue (exposure only)
    long rules = 0;
  };

  FreshSupply supply_;
  std::vector<Frame> stack_;
  SaturationState current_;
  bool done_ = false;

  void run();
};

// Materializes up to `limit` saturated branches.
std::vector<SaturationState> saturate(
    const FormulaPtr& f, std::size_t limit = static_cast<std::size_t>(-1));

// ---------------------------------------------------------------------------
// h-fragment decision
// ---------------------------------------------------------------------------

struct SolveHOptions {
  // Largest universe size searched for models. The per-branch size budget
  // from the small-model bound is almost always far beyond reach, so an
  // unsatisfiable branch that resists refutation yields CAPPED rather than
  // a false UNSAT.
  int sat_cap = 6;
  // Search every size up to the full small-model bound (the CLI spells
  // this --i-know-this-is-huge). Overrides sat_cap.
  bool full_bound = false;
  // Search decisions across the whole call before giving up with CAPPED.
  long long node_budget = 50'000'000;
  // Worker threads used for the per-branch size layers.
  int jobs = 1;
  DesignatedNames names{};
};

// Decision procedure for h-fragment formulae: saturates into branches;
// refutes branches by propositional reasoning over ground instantiations
// at the named objects (free variables, witnesses, pair terms); searches
// the surviving branches for models of sizes 1..min(bound, sat_cap) with
// every sort-2 value inside pow_{<h}(D*) and every sort-3 value inside
// pow_{<h}(pow_{<h}(D*)). SAT verdicts carry the first model found in
// canonical order, gated by certify. UNSAT requires every branch to be
// refuted or exhausted up to its bound; anything short of that is CAPPED.
// Throws std::invalid_argument when h < 2 and FragmentError when
// decompose_h rejects f.
Verdict solve_h(const FormulaPtr& f, int h, const SolveHOptions& opts = {});

// ---------------------------------------------------------------------------
// Certificate checking
// ---------------------------------------------------------------------------

struct CertifyResult {
  bool ok = false;
  std::string diagnostic; // nonempty iff rejected
  long long steps = 0;    // atom evaluations + quantifier instances
};

// Checks model |= f for an h-fragment f without ever expanding a free
// powerset above the domain: level-2 universals range only over the
// members of the guarding sort-2 value, level-3 universals only over the
// members of the guarding sort-3 value. Preconditions (every free variable
// assigned, every sort-2/3 value within the pow_{<h} cardinality bounds)
// are checked first and violations reject with a diagnostic. On models
// meeting the preconditions the answer coincides with eval. Throws
// FragmentError when decompose_h rejects f.
CertifyResult certify_explain(const Interpretation& model, const FormulaPtr& f,
                              int h, const DesignatedNames& names = {});

bool certify(const Interpretation& model, const FormulaPtr& f, int h,
             const DesignatedNames& names = {});

// ---------------------------------------------------------------------------
// Propositional reduction
// ---------------------------------------------------------------------------

enum class PropKind { Letter, Not, And, Or };

struct PropFormula;
using PropPtr = std::shared_ptr<const PropFormula>;

struct PropFormula {
  PropKind kind = PropKind::Letter;
  int letter = 1; // 1-based index, letter P<i>
  PropPtr a, b;
};

PropPtr pletter(int i);
PropPtr pnot(PropPtr a);
PropPtr pand(PropPtr a, PropPtr b);
PropPtr por(PropPtr a, PropPtr b);

// Truth-table satisfiability (at most 24 distinct letters).
bool prop_brute_sat(const PropPtr& p);

// Replaces every letter P_i by the atom x_i in X^1 over one fixed sort-1
// variable X and distinct sort-0 variables x_i. The output is satisfiable
// iff the input is propositionally satisfiable.
FormulaPtr reduce_sat(const PropPtr& prop);

} // namespace syllog
