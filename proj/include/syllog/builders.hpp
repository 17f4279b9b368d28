// Programmatic constructors for the classic set/relation encodings of
// 4LQS^R: accessibility-relation conditions, Boolean operations over
// relations, relation inverse, the bounded powerset pow_{<h}, the restricted
// set-formation operator, the unordered Cartesian product, and the pow*
// variant of the powerset.
//
// All builders emit formulae that pass is_4lqsr, with deterministic bound
// variable names (z, z1, z2, ..., Y for sort 1, Z for sort 2) so emitted
// schemas are stable for golden comparisons.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "syllog/core.hpp"

namespace syllog {

// Conditions on a binary accessibility relation, encoded over a sort-3
// variable whose members are Kuratowski-encoded ordered pairs.
enum class RelationProperty {
  BinaryRelation, // the relation consists exactly of the pairs over the universe
  Reflexive,
  Symmetric,
  Transitive,
  Euclidean,
  WeaklyConnected,
  Irreflexive,
  Intransitive,
  Antisymmetric,
  Asymmetric,
};

// Boolean operations over relations represented as sort-3 variables.
enum class BoolOpKind {
  Intersection,
  Union,
  Complement, // out is the complement of lhs; rhs is ignored
  Difference,
  Inclusion, // lhs is included in rhs; out is ignored
};

const char* to_string(RelationProperty kind);
const char* to_string(BoolOpKind kind);
std::optional<RelationProperty> relation_property_from_string(const std::string& name);
std::optional<BoolOpKind> bool_op_from_string(const std::string& name);
std::vector<RelationProperty> all_relation_properties();
std::vector<BoolOpKind> all_bool_ops();

// Emits the defining schema of the given property for relation variable R
// (sort 3), quantifying over fresh z1, z2, z3 (and Z^2 for BinaryRelation).
// Throws std::invalid_argument if R does not have sort 3.
FormulaPtr relation_property(RelationProperty kind, const Var& R);

// Emits the schema relating out, lhs, and rhs (all sort 3). Complement
// reads lhs only; Inclusion relates lhs to rhs and ignores out.
FormulaPtr boolean_op(BoolOpKind kind, const Var& out, const Var& lhs,
                      const Var& rhs);

// (forall z1,z2)(<z1,z2> in r1 <-> <z2,z1> in r2): r2 is the inverse of r1.
FormulaPtr inverse_relation(const Var& r1, const Var& r2);

// x2 = pow_{<h}(x1): members of x2 are exactly the subsets of x1 with
// fewer than h elements. Requires h >= 2.
FormulaPtr pow_lt_h(const Var& x2, const Var& x1, int h);

// target = { member : body }: the restricted set-formation operator
// (forall member)(member in target <-> body). target has sort 1, 2, or 3
// and member the sort below it. The result is checked against the fragment
// restrictions; a violating body raises FragmentError.
FormulaPtr set_former(const Var& target, const Var& member, FormulaPtr body);

// x2 = factors[0] (x) ... (x) factors[n-1]: the unordered Cartesian
// product, whose members are the sets {x_1, ..., x_n} with x_i drawn from
// the i-th factor. Factors have sort 1, x2 sort 2, and n >= 1.
FormulaPtr unordered_product(const Var& x2, const std::vector<Var>& factors);

// a = pow*(factors): the collection of subsets of the union of the factors
// that meet every factor. a has sort 2 (its members are sets of domain
// elements), factors sort 1, n >= 1.
FormulaPtr pow_star(const Var& a, const std::vector<Var>& factors);

// A level-2 set decodes to the ordered pair (a, b) exactly when it equals
// {{a}, {a, b}}; members of a relation value that are not of this shape are
// counted rather than silently dropped, so callers can surface them.
struct DecodedRelation {
  std::vector<std::pair<int, int>> pairs;
  int stray_members = 0;
};

// Decodes the members of a sort-3 value into ordered pairs. Throws
// std::invalid_argument if r3 is not a level-3 set.
DecodedRelation decode_relation(const HSet& r3);

// Decodes a single level-2 set as a Kuratowski pair if it has that shape.
std::optional<std::pair<int, int>> decode_pair(const HSet& s2);

} // namespace syllog
