#include "syllog/builders.hpp"

#include <algorithm>
#include <stdexcept>

#include "syllog/fragment.hpp"

namespace syllog {

namespace {

void require_sort(const Var& v, int sort, const char* what) {
  if (v.sort != sort)
    throw std::invalid_argument(std::string(what) + ": variable " + v.name +
                                " must have sort " + std::to_string(sort));
}

FormulaPtr pin(const Var& a, const Var& b, const Var& R) {
  return matom(ain(tpair(a, b), tvar(R)));
}

} // namespace

const char* to_string(RelationProperty kind) {
  switch (kind) {
    case RelationProperty::BinaryRelation: return "binary-relation";
    case RelationProperty::Reflexive: return "reflexive";
    case RelationProperty::Symmetric: return "symmetric";
    case RelationProperty::Transitive: return "transitive";
    case RelationProperty::Euclidean: return "euclidean";
    case RelationProperty::WeaklyConnected: return "weakly-connected";
    case RelationProperty::Irreflexive: return "irreflexive";
    case RelationProperty::Intransitive: return "intransitive";
    case RelationProperty::Antisymmetric: return "antisymmetric";
    case RelationProperty::Asymmetric: return "asymmetric";
  }
  return "unknown";
}

const char* to_string(BoolOpKind kind) {
  switch (kind) {
    case BoolOpKind::Intersection: return "intersection";
    case BoolOpKind::Union: return "union";
    case BoolOpKind::Complement: return "complement";
    case BoolOpKind::Difference: return "difference";
    case BoolOpKind::Inclusion: return "inclusion";
  }
  return "unknown";
}

std::vector<RelationProperty> all_relation_properties() {
  return {RelationProperty::BinaryRelation, RelationProperty::Reflexive,
          RelationProperty::Symmetric,      RelationProperty::Transitive,
          RelationProperty::Euclidean,      RelationProperty::WeaklyConnected,
          RelationProperty::Irreflexive,    RelationProperty::Intransitive,
          RelationProperty::Antisymmetric,  RelationProperty::Asymmetric};
}

std::vector<BoolOpKind> all_bool_ops() {
  return {BoolOpKind::Intersection, BoolOpKind::Union, BoolOpKind::Complement,
          BoolOpKind::Difference, BoolOpKind::Inclusion};
}

std::optional<RelationProperty> relation_property_from_string(
    const std::string& name) {
  for (RelationProperty k : all_relation_properties())
    if (name == to_string(k)) return k;
  return std::nullopt;
}

std::optional<BoolOpKind> bool_op_from_string(const std::string& name) {
  for (BoolOpKind k : all_bool_ops())
    if (name == to_string(k)) return k;
  return std::nullopt;
}

FormulaPtr relation_property(RelationProperty kind, const Var& R) {
  require_sort(R, 3, "relation_property");
  const Var z1{"z1", 0}, z2{"z2", 0}, z3{"z3", 0};
  switch (kind) {
    case RelationProperty::BinaryRelation: {
      const Var Z{"Z", 2};
      FormulaPtr is_pair =
          mnot(mforall({z1, z2}, mnot(matom(aeq(tpair(z1, z2), tvar(Z))))));
      return mforall({Z}, miff(matom(ain(tvar(Z), tvar(R))), is_pair));
    }
    case RelationProperty::Reflexive:
      return mforall({z1}, pin(z1, z1, R));
    case RelationProperty::Symmetric:
      return mforall({z1, z2}, mimpl(pin(z1, z2, R), pin(z2, z1, R)));
    case RelationProperty::Transitive:
      return mforall({z1, z2, z3},
                     mimpl(mand(pin(z1, z2, R), pin(z2, z3, R)),
                           pin(z1, z3, R)));
    case RelationProperty::Euclidean:
      return mforall({z1, z2, z3},
                     mimpl(mand(pin(z1, z2, R), pin(z1, z3, R)),
                           pin(z2, z3, R)));
    case RelationProperty::WeaklyConnected:
      return mforall({z1, z2, z3},
                     mimpl(mand(pin(z1, z2, R), pin(z1, z3, R)),
                           mor_all({pin(z2, z3, R),
                                    matom(aeq(tvar(z2), tvar(z3))),
                                    pin(z3, z2, R)})));
    case RelationProperty::Irreflexive:
      return mforall({z1}, mnot(pin(z1, z1, R)));
    case RelationProperty::Intransitive:
      return mforall({z1, z2, z3},
                     mimpl(mand(pin(z1, z2, R), pin(z2, z3, R)),
                           mnot(pin(z1, z3, R))));
    case RelationProperty::Antisymmetric:
      return mforall({z1, z2},
                     mimpl(mand(pin(z1, z2, R), pin(z2, z1, R)),
                           matom(aeq(tvar(z1), tvar(z2)))));
    case RelationProperty::Asymmetric:
      return mforall({z1, z2}, mimpl(pin(z1, z2, R), mnot(pin(z2, z1, R))));
  }
  throw std::invalid_argument("relation_property: unknown kind");
}

FormulaPtr boolean_op(BoolOpKind kind, const Var& out, const Var& lhs,
                      const Var& rhs) {
  const Var Z{"Z", 2};
  auto member = [&](const Var& r) {
    require_sort(r, 3, "boolean_op");
    return matom(ain(tvar(Z), tvar(r)));
  };
  switch (kind) {
    case BoolOpKind::Intersection:
      return mforall({Z}, miff(member(out), mand(member(lhs), member(rhs))));
    case BoolOpKind::Union:
      return mforall({Z}, miff(member(out), mor(member(lhs), member(rhs))));
    case BoolOpKind::Complement:
      return mforall({Z}, miff(member(out), mnot(member(lhs))));
    case BoolOpKind::Difference:
      return mforall({Z}, miff(member(out),
                               mand(member(lhs), mnot(member(rhs)))));
    case BoolOpKind::Inclusion:
      return mforall({Z}, mimpl(member(lhs), member(rhs)));
  }
  throw std::invalid_argument("boolean_op: unknown kind");
}

FormulaPtr inverse_relation(const Var& r1, const Var& r2) {
  require_sort(r1, 3, "inverse_relation");
  require_sort(r2, 3, "inverse_relation");
  const Var z1{"z1", 0}, z2{"z2", 0};
  return mforall({z1, z2}, miff(pin(z1, z2, r1), pin(z2, z1, r2)));
}

FormulaPtr pow_lt_h(const Var& x2, const Var& x1, int h) {
  require_sort(x2, 2, "pow_lt_h");
  require_sort(x1, 1, "pow_lt_h");
  if (h < 2) throw std::invalid_argument("pow_lt_h: h must be at least 2");
  const Var Y{"Y", 1}, z{"z", 0};
  FormulaPtr subset = mforall(
      {z}, mimpl(matom(ain(tvar(z), tvar(Y))), matom(ain(tvar(z), tvar(x1)))));
  std::vector<Var> zs;
  for (int i = 1; i <= h; ++i) zs.push_back(Var{"z" + std::to_string(i), 0});
  std::vector<FormulaPtr> in_y;
  for (const Var& zi : zs) in_y.push_back(matom(ain(tvar(zi), tvar(Y))));
  std::vector<FormulaPtr> collide;
  for (int i = 0; i < h; ++i)
    for (int j = i + 1; j < h; ++j)
      collide.push_back(matom(aeq(tvar(zs[i]), tvar(zs[j]))));
  FormulaPtr small = mforall(zs, mimpl(mand_all(in_y), mor_all(collide)));
  return mforall({Y}, miff(matom(ain(tvar(Y), tvar(x2))),
                           mand(subset, small)));
}

FormulaPtr set_former(const Var& target, const Var& member, FormulaPtr body) {
  if (target.sort < 1 || target.sort > 3)
    throw std::invalid_argument("set_former: target must have sort 1, 2, or 3");
  require_sort(member, target.sort - 1, "set_former");
  if (!body) throw std::invalid_argument("set_former: null body");
  FormulaPtr f = mforall(
      {member}, miff(matom(ain(tvar(member), tvar(target))), std::move(body)));
  std::vector<FragmentDiagnostic> diags;
  if (!is_4lqsr(f, &diags)) {
    std::string msg = "set_former: body violates the fragment restrictions";
    if (!diags.empty()) msg += ": " + diags.front().message;
    throw FragmentError(msg);
  }
  return f;
}

namespace {

// Z (x) X_i != empty, phrased universally: ~(forall z)~(z in Y & z in Xi).
FormulaPtr meets(const Var& Y, const Var& Xi) {
  const Var z{"z", 0};
  return mnot(mforall({z}, mnot(mand(matom(ain(tvar(z), tvar(Y))),
                                     matom(ain(tvar(z), tvar(Xi)))))));
}

FormulaPtr subset_of_union(const Var& Y, const std::vector<Var>& factors) {
  const Var z{"z", 0};
  std::vector<FormulaPtr> in_some;
  for (const Var& Xi : factors) in_some.push_back(matom(ain(tvar(z), tvar(Xi))));
  return mforall({z}, mimpl(matom(ain(tvar(z), tvar(Y))), mor_all(in_some)));
}

} // namespace

FormulaPtr unordered_product(const Var& x2, const std::vector<Var>& factors) {
  require_sort(x2, 2, "unordered_product");
  if (factors.empty())
    throw std::invalid_argument("unordered_product: no factors");
  for (const Var& f : factors) require_sort(f, 1, "unordered_product");
  const int n = static_cast<int>(factors.size());
  const Var Y{"Y", 1};

  std::vector<FormulaPtr> parts;
  parts.push_back(subset_of_union(Y, factors));
  for (const Var& Xi : factors) parts.push_back(meets(Y, Xi));

  // A member set Y arises from a tuple exactly when, beyond being a subset
  // of the union that meets every factor, its elements can be assigned to
  // factor slots surjectively. By the matching criterion that holds iff for
  // every slot subset S, the elements of Y lying in no factor outside S
  // number at most |S|. The mask over factor slots ranges over all S.
  for (int mask = 1; mask < (1 << n); ++mask) {
    int k = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) ++k;
    std::vector<Var> zs;
    for (int i = 1; i <= k + 1; ++i)
      zs.push_back(Var{"z" + std::to_string(i), 0});
    std::vector<FormulaPtr> confined;
    for (const Var& zi : zs) {
      std::vector<FormulaPtr> conj{matom(ain(tvar(zi), tvar(Y)))};
      for (int i = 0; i < n; ++i)
        if (!(mask & (1 << i)))
          conj.push_back(mnot(matom(ain(tvar(zi), tvar(factors[i])))));
      confined.push_back(mand_all(conj));
    }
    std::vector<FormulaPtr> collide;
    for (int i = 0; i <= k; ++i)
      for (int j = i + 1; j <= k; ++j)
        collide.push_back(matom(aeq(tvar(zs[i]), tvar(zs[j]))));
    parts.push_back(mforall(zs, mimpl(mand_all(confined), mor_all(collide))));
  }
  return set_former(x2, Y, mand_all(parts));
}

FormulaPtr pow_star(const Var& a, const std::vector<Var>& factors) {
  require_sort(a, 2, "pow_star");
  if (factors.empty()) throw std::invalid_argument("pow_star: no factors");
  for (const Var& f : factors) require_sort(f, 1, "pow_star");
  const Var Y{"Y", 1};
  std::vector<FormulaPtr> parts;
  parts.push_back(subset_of_union(Y, factors));
  for (const Var& Xi : factors) parts.push_back(meets(Y, Xi));
  return set_former(a, Y, mand_all(parts));
}

std::optional<std::pair<int, int>> decode_pair(const HSet& s2) {
  if (s2.level != 2) return std::nullopt;
  if (s2.size() == 1) {
    const HSet& inner = s2.members.front();
    if (inner.size() == 1) return std::make_pair(inner.elems[0], inner.elems[0]);
    return std::nullopt;
  }
  if (s2.size() == 2) {
    const HSet* single = nullptr;
    const HSet* pair = nullptr;
    for (const HSet& m : s2.members) {
      if (m.size() == 1 && !single) single = &m;
      else if (m.size() == 2 && !pair) pair = &m;
      else return std::nullopt;
    }
    if (!single || !pair) return std::nullopt;
    int a = single->elems[0];
    if (std::find(pair->elems.begin(), pair->elems.end(), a) ==
        pair->elems.end())
      return std::nullopt;
    int b = pair->elems[0] == a ? pair->elems[1] : pair->elems[0];
    return std::make_pair(a, b);
  }
  return std::nullopt;
}

DecodedRelation decode_relation(const HSet& r3) {
  if (r3.level != 3)
    throw std::invalid_argument("decode_relation: value is not a level-3 set");
  DecodedRelation out;
  for (const HSet& m : r3.members) {
    if (auto p = decode_pair(m))
      out.pairs.push_back(*p);
    else
      ++out.stray_members;
  }
  return out;
}

} // namespace syllog
