#include "syllog/fragment.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "json.hpp"
#include "syllog/syntax.hpp"

namespace syllog {

// ---------------------------------------------------------------------------
// validity_2ls
// ---------------------------------------------------------------------------

namespace {

void require_2ls(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Atom:
      if (f->atom->level() != 0)
        throw FragmentError(
            "validity check supports level-0 atoms only, found " +
            print(f));
      return;
    case FKind::Not:
      require_2ls(f->a);
      return;
    case FKind::And:
    case FKind::Or:
      require_2ls(f->a);
      require_2ls(f->b);
      return;
    case FKind::Forall:
      throw FragmentError("validity check requires a quantifier-free formula");
  }
}

struct PartitionSearch {
  std::vector<Var> v0, v1;
  std::map<Var, int> idx0, idx1;

  // Truth value under: cls maps sort-0 var index to its equivalence class,
  // bits holds class-in-variable membership, laid out class-major.
  bool holds(const FormulaPtr& f, const std::vector<int>& cls,
             std::uint32_t bits) const {
    switch (f->kind) {
      case FKind::Atom: {
        const Atom& a = *f->atom;
        int cl = cls[idx0.at(a.lhs.v)];
        if (a.kind == AtomKind::Eq) return cl == cls[idx0.at(a.rhs.v)];
        int xi = idx1.at(a.rhs.v);
        return bits >> (cl * static_cast<int>(v1.size()) + xi) & 1u;
      }
      case FKind::Not:
        return !holds(f->a, cls, bits);
      case FKind::And:
        return holds(f->a, cls, bits) && holds(f->b, cls, bits);
      case FKind::Or:
        return holds(f->a, cls, bits) || holds(f->b, cls, bits);
      case FKind::Forall:
        break;
    }
    return false; // unreachable, require_2ls rejected quantifiers
  }
};

} // namespace

bool validity_2ls(const FormulaPtr& f) {
  require_2ls(f);
  PartitionSearch s;
  for (const Var& v : free_vars(f, 0)) {
    s.idx0.emplace(v, static_cast<int>(s.v0.size()));
    s.v0.push_back(v);
  }
  for (const Var& v : free_vars(f, 1)) {
    s.idx1.emplace(v, static_cast<int>(s.v1.size()));
    s.v1.push_back(v);
  }
  std::size_t n = s.v0.size(), m = s.v1.size();
  if (n == 0) return true; // level-0 atoms always mention a sort-0 variable

  // Enumerate partitions as restricted growth strings: cls[0] = 0 and
  // cls[i] <= 1 + max(cls[0..i-1]). Every finite interpretation induces
  // such a partition plus class-membership bits, and conversely each
  // combination is realized by some interpretation, so searching them is
  // a complete (in)validity check for this fragment.
  std::vector<int> cls(n, 0);
  std::uint64_t partitions = 0, work = 0;
  for (;;) {
    if (++partitions > 100000)
      throw CapacityError("validity_2ls: too many partitions");
    std::size_t k = *std::max_element(cls.begin(), cls.end()) + 1;
    if (k * m > 20)
      throw CapacityError("validity_2ls: too many membership bits");
    work += std::uint64_t{1} << (k * m);
    if (work > (std::uint64_t{1} << 22))
      throw CapacityError("validity_2ls: search space too large");

    for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << (k * m)); ++bits)
      if (!s.holds(f, cls, bits)) return false;

    // Advance to the next restricted growth string.
    std::size_t i = n;
    bool advanced = false;
    while (i-- > 1) {
      int mx = *std::max_element(cls.begin(), cls.begin() + i);
      if (cls[i] <= mx) {
        ++cls[i];
        std::fill(cls.begin() + i + 1, cls.end(), 0);
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Restriction I
// ---------------------------------------------------------------------------

namespace {

int pu_level(const FormulaPtr& f) {
  if (f->kind != FKind::Forall) return 0;
  return f->bound.front().sort + 1;
}

bool atoms_all_level0(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Atom:
      return f->atom->level() == 0;
    case FKind::Not:
      return atoms_all_level0(f->a);
    case FKind::And:
    case FKind::Or:
      return atoms_all_level0(f->a) && atoms_all_level0(f->b);
    case FKind::Forall:
      return atoms_all_level0(f->a);
  }
  return true;
}

std::vector<int> concat_path(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

} // namespace

std::vector<LinkReport> check_restriction_1(const FormulaPtr& psi) {
  std::vector<LinkReport> reports;
  for (const PolarityEntry& occ : polarity_occurrences(psi)) {
    if (pu_level(occ.node) != 2) continue;
    const FormulaPtr& matrix = occ.node->a;
    for (const PolarityEntry& inner : polarity_occurrences(matrix)) {
      if (pu_level(inner.node) != 1 || inner.positive) continue;
      LinkReport r;
      r.universal = inner.node;
      r.linked_vars.insert(occ.node->bound.begin(), occ.node->bound.end());
      r.path = concat_path(concat_path(occ.path, {0}), inner.path);
      r.level0_only = atoms_all_level0(inner.node->a);
      std::vector<FormulaPtr> links;
      for (const Var& z : inner.node->bound)
        for (const Var& Z : occ.node->bound)
          links.push_back(matom(ain(tvar(z), tvar(Z))));
      r.condition = mimpl(mnot(inner.node->a), mand_all(links));
      r.valid = r.level0_only && validity_2ls(r.condition);
      reports.push_back(std::move(r));
    }
  }
  return reports;
}

// ---------------------------------------------------------------------------
// Restriction II
// ---------------------------------------------------------------------------

namespace {

// Shape required of a negative level-1 universal directly inside a level-3
// matrix: (forall z1..zn) ~(conjunction of pair = sort-2-variable atoms,
// pair components drawn from the prefix).
bool negative_level1_shape_ok(const FormulaPtr& pu) {
  const FormulaPtr& body = pu->a;
  if (body->kind != FKind::Not) return false;
  auto bound_has = [&](const Var& v) {
    return std::find(pu->bound.begin(), pu->bound.end(), v) !=
           pu->bound.end();
  };
  for (const FormulaPtr& leaf : and_leaves(body->a)) {
    if (leaf->kind != FKind::Atom) return false;
    const Atom& a = *leaf->atom;
    if (a.kind != AtomKind::Eq || a.level() != 2) return false;
    if (a.lhs.is_pair() == a.rhs.is_pair()) return false;
    const Term& pair = a.lhs.is_pair() ? a.lhs : a.rhs;
    if (!bound_has(pair.v) || !bound_has(*pair.pair_right)) return false;
  }
  return true;
}

void walk_level3_matrix(const FormulaPtr& f, bool positive,
                        std::vector<int>& path, bool& ok,
                        std::vector<FragmentDiagnostic>* diags) {
  auto emit = [&](const std::string& msg) {
    ok = false;
    if (diags) diags->push_back({"RestrII", path, msg});
  };
  switch (f->kind) {
    case FKind::Atom:
      return;
    case FKind::Not:
      path.push_back(0);
      walk_level3_matrix(f->a, !positive, path, ok, diags);
      path.pop_back();
      return;
    case FKind::And:
    case FKind::Or:
      path.push_back(0);
      walk_level3_matrix(f->a, positive, path, ok, diags);
      path.back() = 1;
      walk_level3_matrix(f->b, positive, path, ok, diags);
      path.pop_back();
      return;
    case FKind::Forall:
      if (pu_level(f) == 2) {
        // Level-2 universals may occur only positively; their interiors
        // answer to Restriction I instead.
        if (!positive)
          emit("a level-2 universal occurs negatively inside a level-3 "
               "universal");
        return;
      }
      if (!positive && !negative_level1_shape_ok(f))
        emit("a negative level-1 universal inside a level-3 universal must "
             "be of the shape (forall z...) ~(<z_i,z_j> = Y^2 & ...)");
      return;
  }
}

} // namespace

bool check_restriction_2(const FormulaPtr& psi,
                         std::vector<FragmentDiagnostic>* diags) {
  bool ok = true;
  for (const PolarityEntry& occ : polarity_occurrences(psi)) {
    if (pu_level(occ.node) != 3) continue;
    std::vector<int> path = concat_path(occ.path, {0});
    walk_level3_matrix(occ.node->a, true, path, ok, diags);
  }
  return ok;
}

bool is_4lqsr(const FormulaPtr& psi, std::vector<FragmentDiagnostic>* diags) {
  bool ok = true;
  for (const LinkReport& r : check_restriction_1(psi)) {
    if (!r.level0_only) {
      ok = false;
      if (diags)
        diags->push_back(
            {"RestrI", r.path,
             "the matrix of a negatively occurring level-1 universal inside "
             "a level-2 universal must use level-0 atoms only"});
    } else if (!r.valid) {
      ok = false;
      if (diags)
        diags->push_back({"RestrI", r.path,
                          "bound variables are not linked to the enclosing "
                          "prefix: not valid: " +
                              print(r.condition)});
    }
  }
  if (!check_restriction_2(psi, diags)) ok = false;
  return ok;
}

std::string diagnostics_json(const std::vector<FragmentDiagnostic>& diags) {
  nlohmann::json arr = nlohmann::json::array();
  for (const FragmentDiagnostic& d : diags)
    arr.push_back({{"rule", d.rule}, {"path", d.path}, {"message", d.message}});
  return arr.dump();
}

// ---------------------------------------------------------------------------
// decompose_h
// ---------------------------------------------------------------------------

namespace {

// Implication written antecedent-first: ~A | B with the negation at the
// root of the left disjunct (exactly what `A -> B` desugars to).
bool match_impl(const FormulaPtr& f, FormulaPtr& antecedent,
                FormulaPtr& consequent) {
  if (f->kind != FKind::Or || f->a->kind != FKind::Not) return false;
  antecedent = f->a->a;
  consequent = f->b;
  return true;
}

bool is_in_var_var(const FormulaPtr& f, const Var& lhs, const Var& rhs) {
  return f->kind == FKind::Atom && f->atom->kind == AtomKind::In &&
         f->atom->lhs == tvar(lhs) && f->atom->rhs == tvar(rhs);
}

// Conjunction whose leaves are exactly { v in target : v in prefix }, each
// prefix variable guarded once, in any order.
bool match_guard(const FormulaPtr& g, const std::vector<Var>& prefix,
                 const Var& target) {
  std::vector<FormulaPtr> leaves = and_leaves(g);
  if (leaves.size() != prefix.size()) return false;
  std::vector<bool> used(prefix.size(), false);
  for (const FormulaPtr& leaf : leaves) {
    if (leaf->kind != FKind::Atom || leaf->atom->kind != AtomKind::In ||
        leaf->atom->lhs.is_pair() || !(leaf->atom->rhs == tvar(target)))
      return false;
    bool found = false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      if (!used[i] && leaf->atom->lhs.v == prefix[i]) {
        used[i] = found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// Disjunction of equalities between distinct prefix variables covering
// every unordered pair exactly once, either orientation.
bool match_pairwise_eq(const FormulaPtr& d, const std::vector<Var>& prefix) {
  std::vector<FormulaPtr> leaves = or_leaves(d);
  std::size_t n = prefix.size();
  if (leaves.size() != n * (n - 1) / 2) return false;
  auto index_of = [&](const Var& v) -> int {
    for (std::size_t i = 0; i < n; ++i)
      if (prefix[i] == v) return static_cast<int>(i);
    return -1;
  };
  std::set<std::pair<int, int>> seen;
  for (const FormulaPtr& leaf : leaves) {
    if (leaf->kind != FKind::Atom || leaf->atom->kind != AtomKind::Eq ||
        leaf->atom->lhs.is_pair() || leaf->atom->rhs.is_pair())
      return false;
    int i = index_of(leaf->atom->lhs.v), j = index_of(leaf->atom->rhs.v);
    if (i < 0 || j < 0 || i == j) return false;
    if (!seen.emplace(std::min(i, j), std::max(i, j)).second) return false;
  }
  return true;
}

bool single_bound(const FormulaPtr& f, int sort) {
  return f->kind == FKind::Forall && f->bound.size() == 1 &&
         f->bound.front().sort == sort;
}

bool match_xi1(const FormulaPtr& f, const Var& universe) {
  return single_bound(f, 0) && is_in_var_var(f->a, f->bound.front(), universe);
}

// (forall Z^1)(Z^1 in B^2 -> (forall z1..zh)(z1 in Z^1 & ... -> z_i = z_j | ...))
bool match_xi2(const FormulaPtr& f, const Var& b2, int h) {
  if (!single_bound(f, 1)) return false;
  FormulaPtr ant, cons;
  if (!match_impl(f->a, ant, cons)) return false;
  if (!is_in_var_var(ant, f->bound.front(), b2)) return false;
  if (cons->kind != FKind::Forall ||
      static_cast<int>(cons->bound.size()) != h ||
      cons->bound.front().sort != 0)
    return false;
  FormulaPtr guard, eqs;
  if (!match_impl(cons->a, guard, eqs)) return false;
  return match_guard(guard, cons->bound, f->bound.front()) &&
         match_pairwise_eq(eqs, cons->bound);
}

// Member rule half of xi3: (forall Z^1)(Z^1 in Z^2 -> Z^1 in B^2).
bool match_xi3_members(const FormulaPtr& f, const Var& z2, const Var& b2) {
  if (!single_bound(f, 1)) return false;
  FormulaPtr ant, cons;
  return match_impl(f->a, ant, cons) &&
         is_in_var_var(ant, f->bound.front(), z2) &&
         is_in_var_var(cons, f->bound.front(), b2);
}

// Smallness half of xi3: (forall Z1^1..Zh^1)(all in Z^2 -> some equal).
bool match_xi3_smallness(const FormulaPtr& f, const Var& z2, int h) {
  if (f->kind != FKind::Forall || static_cast<int>(f->bound.size()) != h ||
      f->bound.front().sort != 1)
    return false;
  FormulaPtr guard, eqs;
  return match_impl(f->a, guard, eqs) && match_guard(guard, f->bound, z2) &&
         match_pairwise_eq(eqs, f->bound);
}

bool match_xi3(const FormulaPtr& f, const Var& b2, const Var& b3, int h) {
  if (!single_bound(f, 2)) return false;
  const Var& z2 = f->bound.front();
  FormulaPtr ant, cons;
  if (!match_impl(f->a, ant, cons)) return false;
  if (!is_in_var_var(ant, z2, b3)) return false;
  std::vector<FormulaPtr> parts = and_leaves(cons);
  if (parts.size() != 2) return false;
  return (match_xi3_members(parts[0], z2, b2) &&
          match_xi3_smallness(parts[1], z2, h)) ||
         (match_xi3_members(parts[1], z2, b2) &&
          match_xi3_smallness(parts[0], z2, h));
}

// (forall Z^1)(Z^1 in X^2 -> Z^1 in B^2), X^2 distinct from B^2.
std::optional<Var> match_psi2_subset(const FormulaPtr& f, const Var& b2) {
  if (!single_bound(f, 1)) return std::nullopt;
  FormulaPtr ant, cons;
  if (!match_impl(f->a, ant, cons)) return std::nullopt;
  const Var& z = f->bound.front();
  if (!is_in_var_var(cons, z, b2)) return std::nullopt;
  if (ant->kind != FKind::Atom || ant->atom->kind != AtomKind::In ||
      !(ant->atom->lhs == tvar(z)))
    return std::nullopt;
  Var target = ant->atom->rhs.v;
  if (target == b2) return std::nullopt; // that one belongs to chi
  return target;
}

// X^2 in B^3, X^2 distinct from B^2.
std::optional<Var> match_psi2_member(const FormulaPtr& f, const Var& b2,
                                     const Var& b3) {
  if (f->kind != FKind::Atom || f->atom->kind != AtomKind::In ||
      f->atom->lhs.is_pair() || f->atom->lhs.v.sort != 2 ||
      !(f->atom->rhs == tvar(b3)))
    return std::nullopt;
  if (f->atom->lhs.v == b2) return std::nullopt;
  return f->atom->lhs.v;
}

// (forall Z^2)(Z^2 in X^3 -> Z^2 in B^3), X^3 distinct from B^3.
std::optional<Var> match_psi3(const FormulaPtr& f, const Var& b3) {
  if (!single_bound(f, 2)) return std::nullopt;
  FormulaPtr ant, cons;
  if (!match_impl(f->a, ant, cons)) return std::nullopt;
  const Var& z = f->bound.front();
  if (!is_in_var_var(cons, z, b3)) return std::nullopt;
  if (ant->kind != FKind::Atom || ant->atom->kind != AtomKind::In ||
      !(ant->atom->lhs == tvar(z)))
    return std::nullopt;
  Var target = ant->atom->rhs.v;
  if (target == b3) return std::nullopt;
  return target;
}

// chi piece type (b): level-1 universal with prefix length <= h. Matrices
// are quantifier-free by construction.
bool chi_b(const FormulaPtr& f, int h, std::string& why) {
  if (static_cast<int>(f->bound.size()) > h) {
    why = "level-1 prefix longer than h";
    return false;
  }
  return true;
}

bool chi_phi1(const FormulaPtr& f, int h, std::string& why) {
  switch (f->kind) {
    case FKind::Atom:
      return true;
    case FKind::Not:
      return chi_phi1(f->a, h, why);
    case FKind::And:
    case FKind::Or:
      return chi_phi1(f->a, h, why) && chi_phi1(f->b, h, why);
    case FKind::Forall:
      if (f->bound.front().sort != 0) {
        why = "only level-1 universals may appear under a guarded level-2 "
              "universal";
        return false;
      }
      return chi_b(f, h, why);
  }
  return false;
}

// chi piece type (c): (forall Z1^1..Zm^1)(all in B^2 -> phi1), m <= h.
bool chi_c(const FormulaPtr& f, int h, const Var& b2, std::string& why) {
  if (static_cast<int>(f->bound.size()) > h) {
    why = "level-2 prefix longer than h";
    return false;
  }
  FormulaPtr ant, cons;
  if (!match_impl(f->a, ant, cons) || !match_guard(ant, f->bound, b2)) {
    why = "a level-2 universal in chi must guard its prefix with membership "
          "in the bounded sort-2 collection";
    return false;
  }
  return chi_phi1(cons, h, why);
}

bool chi_phi2(const FormulaPtr& f, int h, const Var& b2, std::string& why) {
  switch (f->kind) {
    case FKind::Atom:
      return true;
    case FKind::Not:
      return chi_phi2(f->a, h, b2, why);
    case FKind::And:
    case FKind::Or:
      return chi_phi2(f->a, h, b2, why) && chi_phi2(f->b, h, b2, why);
    case FKind::Forall:
      if (f->bound.front().sort == 0) return chi_b(f, h, why);
      return chi_c(f, h, b2, why);
  }
  return false;
}

// chi piece type (d): (forall Z1^2..Zp^2)(all in B^3 -> phi2), p <= h.
bool chi_d(const FormulaPtr& f, int h, const Var& b2, const Var& b3,
           std::string& why) {
  if (static_cast<int>(f->bound.size()) > h) {
    why = "level-3 prefix longer than h";
    return false;
  }
  FormulaPtr ant, cons;
  if (!match_impl(f->a, ant, cons) || !match_guard(ant, f->bound, b3)) {
    why = "a level-3 universal in chi must guard its prefix with membership "
          "in the bounded sort-3 collection";
    return false;
  }
  return chi_phi2(cons, h, b2, why);
}

bool chi_valid(const FormulaPtr& f, int h, const Var& b2, const Var& b3,
               std::string& why) {
  switch (f->kind) {
    case FKind::Atom:
      return true;
    case FKind::Not:
      return chi_valid(f->a, h, b2, b3, why);
    case FKind::And:
    case FKind::Or:
      return chi_valid(f->a, h, b2, b3, why) &&
             chi_valid(f->b, h, b2, b3, why);
    case FKind::Forall:
      switch (f->bound.front().sort) {
        case 0: return chi_b(f, h, why);
        case 1: return chi_c(f, h, b2, why);
        default: return chi_d(f, h, b2, b3, why);
      }
  }
  return false;
}

} // namespace

DecomposeResult decompose_h(const FormulaPtr& psi, int h,
                            const DesignatedNames& names) {
  if (h < 2) throw std::invalid_argument("decompose_h: h must be at least 2");
  DecomposeResult out;
  auto reject = [&](int item, int leaf_index, const std::string& msg) {
    out.diagnostics.push_back(
        {"Def2-item-" + std::to_string(item), {leaf_index}, msg});
  };

  if (!is_4lqsr(psi, &out.diagnostics)) return out;

  HFragmentDecomposition d;
  d.h = h;
  d.universe_var = names.universe;
  d.bounded2_var = names.bounded2;
  d.bounded3_var = names.bounded3;

  std::vector<FormulaPtr> leaves = and_leaves(psi);
  std::vector<std::pair<int, FormulaPtr>> rest;
  std::set<Var> psi2_seen, psi3_seen;

  for (int i = 0; i < static_cast<int>(leaves.size()); ++i) {
    const FormulaPtr& leaf = leaves[i];
    if (!d.xi1 && match_xi1(leaf, names.universe)) {
      d.xi1 = leaf;
      continue;
    }
    if (!d.xi2 && match_xi2(leaf, names.bounded2, h)) {
      d.xi2 = leaf;
      continue;
    }
    if (!d.xi3 && match_xi3(leaf, names.bounded2, names.bounded3, h)) {
      d.xi3 = leaf;
      continue;
    }
    if (auto v = match_psi2_subset(leaf, names.bounded2)) {
      if (psi2_seen.count(*v)) {
        reject(4, i, "duplicate subset conjunct for " + var_display(*v));
        return out;
      }
      psi2_seen.insert(*v);
      d.psi2.push_back({*v, false, leaf});
      continue;
    }
    if (auto v = match_psi3(leaf, names.bounded3)) {
      if (psi3_seen.count(*v)) {
        reject(5, i, "duplicate subset conjunct for " + var_display(*v));
        return out;
      }
      psi3_seen.insert(*v);
      d.psi3.push_back({*v, false, leaf});
      continue;
    }
    if (auto v = match_psi2_member(leaf, names.bounded2, names.bounded3)) {
      if (!psi2_seen.count(*v)) {
        psi2_seen.insert(*v);
        d.psi2.push_back({*v, true, leaf});
        continue;
      }
      // Already covered: the membership atom is an ordinary chi atom.
    }
    rest.emplace_back(i, leaf);
  }

  if (!d.xi1) {
    reject(1, 0, "missing universe conjunct (forall z)(z in " +
                     var_display(names.universe) + ")");
    return out;
  }
  if (!d.xi2) {
    reject(2, 0, "missing smallness conjunct for " +
                     var_display(names.bounded2));
    return out;
  }
  if (!d.xi3) {
    reject(3, 0, "missing smallness conjunct for " +
                     var_display(names.bounded3));
    return out;
  }

  for (const Var& v : free_vars(psi, 2)) {
    if (v == names.bounded2 || psi2_seen.count(v)) continue;
    reject(4, 0, "free variable " + var_display(v) +
                     " has no bounding conjunct");
    return out;
  }
  for (const Var& v : free_vars(psi, 3)) {
    if (v == names.bounded3 || psi3_seen.count(v)) continue;
    reject(5, 0, "free variable " + var_display(v) +
                     " has no bounding conjunct");
    return out;
  }

  std::vector<FormulaPtr> chi_parts;
  for (const auto& [idx, leaf] : rest) {
    std::string why;
    if (!chi_valid(leaf, h, names.bounded2, names.bounded3, why)) {
      reject(6, idx, why + ": " + print(leaf));
      return out;
    }
    chi_parts.push_back(leaf);
  }
  if (!chi_parts.empty()) d.chi = mand_all(chi_parts);

  out.decomposition = std::move(d);
  return out;
}

namespace {

// Conjunction of `v in target` over the prefix, in prefix order.
FormulaPtr guard_conj(const std::vector<Var>& prefix, const Var& target) {
  std::vector<FormulaPtr> parts;
  for (const Var& v : prefix)
    parts.push_back(matom(ain(tvar(v), tvar(target))));
  return mand_all(parts);
}

// Disjunction of v_i = v_j over all pairs i < j, in lexicographic order.
FormulaPtr pairwise_eq_disj(const std::vector<Var>& prefix) {
  std::vector<FormulaPtr> parts;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    for (std::size_t j = i + 1; j < prefix.size(); ++j)
      parts.push_back(matom(aeq(tvar(prefix[i]), tvar(prefix[j]))));
  return mor_all(parts);
}

std::vector<Var> numbered_vars(const std::string& stem, int sort, int count) {
  std::vector<Var> vs;
  for (int i = 1; i <= count; ++i)
    vs.push_back(Var{stem + std::to_string(i), sort});
  return vs;
}

} // namespace

FormulaPtr make_h_shell(const FormulaPtr& chi, int h,
                        const DesignatedNames& names) {
  if (h < 2)
    throw std::invalid_argument("make_h_shell: h must be at least 2");

  std::vector<FormulaPtr> conjuncts;

  Var z{"z", 0};
  conjuncts.push_back(
      mforall({z}, matom(ain(tvar(z), tvar(names.universe)))));

  Var z1{"Z", 1};
  std::vector<Var> zs0 = numbered_vars("z", 0, h);
  conjuncts.push_back(mforall(
      {z1}, mimpl(matom(ain(tvar(z1), tvar(names.bounded2))),
                  mforall(zs0, mimpl(guard_conj(zs0, z1),
                                     pairwise_eq_disj(zs0))))));

  Var z2{"Z", 2};
  Var w1{"W", 1};
  std::vector<Var> zs1 = numbered_vars("Z", 1, h);
  FormulaPtr members_rule =
      mforall({w1}, mimpl(matom(ain(tvar(w1), tvar(z2))),
                          matom(ain(tvar(w1), tvar(names.bounded2)))));
  FormulaPtr smallness_rule = mforall(
      zs1, mimpl(guard_conj(zs1, z2), pairwise_eq_disj(zs1)));
  conjuncts.push_back(
      mforall({z2}, mimpl(matom(ain(tvar(z2), tvar(names.bounded3))),
                          mand(members_rule, smallness_rule))));

  if (chi) {
    for (const Var& v : free_vars(chi, 2)) {
      if (v == names.bounded2) continue;
      Var b{"Z", 1};
      conjuncts.push_back(
          mforall({b}, mimpl(matom(ain(tvar(b), tvar(v))),
                             matom(ain(tvar(b), tvar(names.bounded2))))));
    }
    for (const Var& v : free_vars(chi, 3)) {
      if (v == names.bounded3) continue;
      Var b{"Z", 2};
      conjuncts.push_back(
          mforall({b}, mimpl(matom(ain(tvar(b), tvar(v))),
                             matom(ain(tvar(b), tvar(names.bounded3))))));
    }
    conjuncts.push_back(chi);
  }
  return mand_all(conjuncts);
}

} // namespace syllog
