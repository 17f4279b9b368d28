// K45 frontend: modal formulae, Kripke semantics with the model-global
// box/diamond clauses, a brute-force Kripke oracle over transitive and
// euclidean frames, the translation into the h = 3 fragment, and the
// end-to-end decision procedure.
//
// Box and diamond are evaluated globally: [] f holds (at every world) iff
// f holds at every world that has some predecessor, and <> f holds iff f
// holds at some such world. The translation's all-or-nothing subformula
// sets match exactly this reading.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "syllog/core.hpp"
#include "syllog/fragment.hpp"
#include "syllog/solver.hpp"

namespace syllog {

enum class MKind { Letter, Not, And, Or, Box, Diamond };

struct ModalFormula;
using ModalPtr = std::shared_ptr<const ModalFormula>;

// Letters are numbered from 1 (surface syntax p1, p2, ...). Implication
// and biconditional are desugared at construction/parse time.
struct ModalFormula {
  MKind kind;
  int letter = 1; // Letter only
  ModalPtr a;     // Not/Box/Diamond operand, And/Or left
  ModalPtr b;     // And/Or right
};

ModalPtr mletter(int i);
ModalPtr mnot(const ModalPtr& a);
ModalPtr mand(const ModalPtr& a, const ModalPtr& b);
ModalPtr mor(const ModalPtr& a, const ModalPtr& b);
ModalPtr mbox(const ModalPtr& a);
ModalPtr mdia(const ModalPtr& a);

bool modal_equal(const ModalPtr& a, const ModalPtr& b);
int modal_size(const ModalPtr& f);  // node count
int modal_depth(const ModalPtr& f); // maximum modality nesting
std::vector<int> modal_letters(const ModalPtr& f); // sorted, distinct

// Surface syntax: letters p1 p2 ..., ~ & | -> <->, [] for box, <> for
// diamond, parentheses. -> is right-associative; -> and <-> desugar.
std::string print_modal(const ModalPtr& f);
ModalPtr parse_modal(const std::string& text);

// Worlds are 0 .. worlds-1. rel holds the accessibility pairs and val maps
// each letter to the set of worlds where it is true (absent means empty).
struct KripkeModel {
  int worlds = 1;
  std::set<std::pair<int, int>> rel;
  std::map<int, std::set<int>> val;
};

// Evaluates f at world w under the global box/diamond clauses. Throws
// std::invalid_argument if w is not a world of K.
bool kripke_eval(const KripkeModel& K, int w, const ModalPtr& f);

// Least transitive and euclidean superset of rel.
std::set<std::pair<int, int>> transitive_euclidean_closure(
    std::set<std::pair<int, int>> rel);

// First (model, world) satisfying f among models with at most max_worlds
// worlds and transitive euclidean accessibility, enumerated in a fixed
// order (world count, then relation, then valuation, then world).
std::optional<std::pair<KripkeModel, int>> kripke_oracle_sat(
    const ModalPtr& f, int max_worlds);

// Result of translating a modal formula: the full h = 3 fragment formula
// plus the pieces a caller may want to address individually.
struct TranslationResult {
  FormulaPtr formula;        // shell, characterization, defs, and query
  Var phi_var{"", 1};        // the sort-1 set variable denoting f's worlds
  Var query_var{"x", 0};     // the queried world: x in phi_var
  Var relation_var{"XR", 3}; // the accessibility relation
  std::map<int, Var> letter_vars;
  FormulaPtr xi_w1, xi_lt2, xi_lt3; // Definition-2 shell conjuncts
  FormulaPtr psi12;                 // relation_var below the bounded pool
  FormulaPtr chi1, chi2, chi3, chi4;
  std::vector<FormulaPtr> tau_defs; // one defining conjunct per subformula
};

// Translates f into the h = 3 fragment. Subformula set variables are
// memoized structurally, so repeated subformulae share one definition.
TranslationResult translate_k45(const ModalPtr& f);

// Decision verdict plus, on SAT, the Kripke model decoded from the set
// model (worlds = domain, relation from pair decoding, valuation from the
// letter variables) and the query world.
struct ModalVerdict {
  Verdict verdict;
  std::optional<KripkeModel> kripke;
  int world = 0;
};

// SAT iff the translation is satisfiable. On SAT the decoded Kripke model
// is re-verified with kripke_eval; decode or verification failures are
// internal errors and throw.
ModalVerdict decide_k45(const ModalPtr& f, const SolveHOptions& opts = {});

} // namespace syllog
