#include "syllog/core.hpp"

#include <algorithm>
#include <functional>

namespace syllog {

// ---------------------------------------------------------------------------
// Variables and terms
// ---------------------------------------------------------------------------

std::string var_display(const Var& v) {
  if (v.sort == 0) return v.name;
  return v.name + "^" + std::to_string(v.sort);
}

Term tvar(Var v) {
  if (v.sort < 0 || v.sort > 3)
    throw SortError("variable sort must be in 0..3: " + v.name);
  Term t;
  t.v = std::move(v);
  return t;
}

Term tpair(Var left, Var right) {
  if (left.sort != 0 || right.sort != 0)
    throw SortError("pair components must be sort-0 variables: <" +
                    var_display(left) + "," + var_display(right) + ">");
  Term t;
  t.v = std::move(left);
  t.pair_right = std::move(right);
  return t;
}

std::string term_display(const Term& t) {
  if (t.is_pair())
    return "<" + t.v.name + "," + t.pair_right->name + ">";
  return var_display(t.v);
}

// ---------------------------------------------------------------------------
// Atoms
// ---------------------------------------------------------------------------

Atom aeq(Term lhs, Term rhs) {
  int ls = lhs.value_sort(), rs = rhs.value_sort();
  if (ls != rs)
    throw SortError("equality between sort-" + std::to_string(ls) +
                    " and sort-" + std::to_string(rs) + " terms is not an atom");
  if (ls > 2)
    throw SortError("equality between sort-3 terms is not an atom");
  Atom a;
  a.kind = AtomKind::Eq;
  a.lhs = std::move(lhs);
  a.rhs = std::move(rhs);
  return a;
}

Atom ain(Term lhs, Term rhs) {
  if (rhs.is_pair())
    throw SortError("the right-hand side of a membership atom must be a variable");
  int ls = lhs.value_sort(), rs = rhs.value_sort();
  if (rs != ls + 1)
    throw SortError("membership of sort-" + std::to_string(ls) +
                    " term in sort-" + std::to_string(rs) +
                    " variable is not an atom");
  if (lhs.is_pair() && ls != 2)
    throw SortError("pair terms denote sort-2 values");
  Atom a;
  a.kind = AtomKind::In;
  a.lhs = std::move(lhs);
  a.rhs = std::move(rhs);
  return a;
}

// ---------------------------------------------------------------------------
// Formula construction
// ---------------------------------------------------------------------------

namespace {

std::size_t hash_mix(std::size_t seed, std::size_t v) {
  // splitmix-style combiner; good avalanche, cheap.
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  return seed;
}

std::size_t hash_var(const Var& v) {
  return hash_mix(std::hash<std::string>{}(v.name),
                  static_cast<std::size_t>(v.sort));
}

std::size_t hash_term(const Term& t) {
  std::size_t h = hash_var(t.v);
  if (t.is_pair()) h = hash_mix(h, hash_var(*t.pair_right)) ^ 0x517cc1b7ULL;
  return h;
}

std::size_t hash_atom(const Atom& a) {
  std::size_t h = a.kind == AtomKind::Eq ? 0xe9u : 0x17u;
  h = hash_mix(h, hash_term(a.lhs));
  h = hash_mix(h, hash_term(a.rhs));
  return h;
}

FormulaPtr finish(Formula node) {
  std::size_t h = static_cast<std::size_t>(node.kind) * 0x9e3779b9u;
  int mqs = -1;
  int nodes = 1;
  if (node.atom) h = hash_mix(h, hash_atom(*node.atom));
  for (const FormulaPtr& child : {node.a, node.b}) {
    if (!child) continue;
    h = hash_mix(h, child->hash);
    mqs = std::max(mqs, child->max_quant_sort);
    nodes += child->node_count;
  }
  for (const Var& v : node.bound) {
    h = hash_mix(h, hash_var(v));
    mqs = std::max(mqs, v.sort);
  }
  node.hash = h;
  node.max_quant_sort = mqs;
  node.node_count = nodes;
  return std::make_shared<const Formula>(std::move(node));
}

void require(bool ok, const char* what) {
  if (!ok) throw SortError(what);
}

} // namespace

FormulaPtr matom(Atom a) {
  Formula f;
  f.kind = FKind::Atom;
  f.atom = std::move(a);
  return finish(std::move(f));
}

FormulaPtr mnot(FormulaPtr f) {
  require(f != nullptr, "mnot: null operand");
  Formula n;
  n.kind = FKind::Not;
  n.a = std::move(f);
  return finish(std::move(n));
}

FormulaPtr mand(FormulaPtr lhs, FormulaPtr rhs) {
  require(lhs && rhs, "mand: null operand");
  Formula n;
  n.kind = FKind::And;
  n.a = std::move(lhs);
  n.b = std::move(rhs);
  return finish(std::move(n));
}

FormulaPtr mor(FormulaPtr lhs, FormulaPtr rhs) {
  require(lhs && rhs, "mor: null operand");
  Formula n;
  n.kind = FKind::Or;
  n.a = std::move(lhs);
  n.b = std::move(rhs);
  return finish(std::move(n));
}

FormulaPtr mforall(std::vector<Var> bound, FormulaPtr body) {
  require(body != nullptr, "mforall: null body");
  require(!bound.empty(), "quantifier prefixes must bind at least one variable");
  int sort = bound.front().sort;
  require(sort >= 0 && sort <= 2, "quantified variables must have sort 0, 1, or 2");
  for (const Var& v : bound)
    require(v.sort == sort, "a quantifier prefix must bind variables of one sort");

  // Merge a directly nested prefix of the same sort into one block; outer
  // variables shadowed by the inner prefix are dropped (they cannot occur).
  if (body->kind == FKind::Forall && body->bound.front().sort == sort) {
    std::vector<Var> merged;
    for (const Var& v : bound) {
      if (std::find(body->bound.begin(), body->bound.end(), v) ==
          body->bound.end())
        merged.push_back(v);
    }
    merged.insert(merged.end(), body->bound.begin(), body->bound.end());
    bound = std::move(merged);
    body = body->a;
  }

  for (std::size_t i = 0; i < bound.size(); ++i)
    for (std::size_t j = i + 1; j < bound.size(); ++j)
      require(!(bound[i] == bound[j]),
              "a quantifier prefix must not bind a variable twice");

  // Stratification: a sort-s prefix admits only strictly lower quantifier
  // sorts in its matrix (level-1 matrices are quantifier-free, and so on).
  if (body->max_quant_sort >= sort)
    throw SortError(
        "stratification violation: a sort-" + std::to_string(sort) +
        " prefix cannot govern a sort-" + std::to_string(body->max_quant_sort) +
        " quantifier");

  Formula n;
  n.kind = FKind::Forall;
  n.a = std::move(body);
  n.bound = std::move(bound);
  return finish(std::move(n));
}

FormulaPtr mimpl(FormulaPtr lhs, FormulaPtr rhs) {
  return mor(mnot(std::move(lhs)), std::move(rhs));
}

FormulaPtr miff(FormulaPtr lhs, FormulaPtr rhs) {
  return mand(mor(mnot(lhs), rhs), mor(mnot(rhs), lhs));
}

FormulaPtr mand_all(const std::vector<FormulaPtr>& fs) {
  require(!fs.empty(), "mand_all: empty conjunction");
  FormulaPtr acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = mand(acc, fs[i]);
  return acc;
}

FormulaPtr mor_all(const std::vector<FormulaPtr>& fs) {
  require(!fs.empty(), "mor_all: empty disjunction");
  FormulaPtr acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = mor(acc, fs[i]);
  return acc;
}

bool formula_equal(const FormulaPtr& lhs, const FormulaPtr& rhs) {
  if (lhs == rhs) return true;
  if (!lhs || !rhs) return false;
  if (lhs->hash != rhs->hash || lhs->kind != rhs->kind ||
      lhs->node_count != rhs->node_count)
    return false;
  if (lhs->atom != rhs->atom) return false;
  if (lhs->bound != rhs->bound) return false;
  return formula_equal(lhs->a, rhs->a) && formula_equal(lhs->b, rhs->b);
}

namespace {

void leaves_rec(const FormulaPtr& f, FKind split, std::vector<FormulaPtr>& out) {
  if (f->kind == split) {
    leaves_rec(f->a, split, out);
    leaves_rec(f->b, split, out);
  } else {
    out.push_back(f);
  }
}

} // namespace

std::vector<FormulaPtr> and_leaves(const FormulaPtr& f) {
  std::vector<FormulaPtr> out;
  leaves_rec(f, FKind::And, out);
  return out;
}

std::vector<FormulaPtr> or_leaves(const FormulaPtr& f) {
  std::vector<FormulaPtr> out;
  leaves_rec(f, FKind::Or, out);
  return out;
}

namespace {

// Scoped bound-variable correspondence for alpha comparison. Lookup walks
// from the innermost binding outward, so shadowing behaves correctly.
struct AlphaScope {
  std::vector<std::pair<Var, Var>> pairs;

  bool matches(const Var& l, const Var& r) const {
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
      if (it->first == l) return it->second == r;
      if (it->second == r) return false; // r is bound, l is not its partner
    }
    // Neither side bound here: free occurrences must agree exactly.
    return l == r;
  }
};

bool alpha_term(const Term& l, const Term& r, const AlphaScope& scope) {
  if (l.is_pair() != r.is_pair()) return false;
  if (!scope.matches(l.v, r.v)) return false;
  if (l.is_pair() && !scope.matches(*l.pair_right, *r.pair_right)) return false;
  return true;
}

bool alpha_rec(const FormulaPtr& l, const FormulaPtr& r, AlphaScope& scope) {
  if (!l || !r) return l == r;
  if (l->kind != r->kind) return false;
  switch (l->kind) {
    case FKind::Atom:
      if (l->atom->kind != r->atom->kind) return false;
      return alpha_term(l->atom->lhs, r->atom->lhs, scope) &&
             alpha_term(l->atom->rhs, r->atom->rhs, scope);
    case FKind::Not:
      return alpha_rec(l->a, r->a, scope);
    case FKind::And:
    case FKind::Or:
      return alpha_rec(l->a, r->a, scope) && alpha_rec(l->b, r->b, scope);
    case FKind::Forall: {
      if (l->bound.size() != r->bound.size()) return false;
      for (std::size_t i = 0; i < l->bound.size(); ++i)
        if (l->bound[i].sort != r->bound[i].sort) return false;
      for (std::size_t i = 0; i < l->bound.size(); ++i)
        scope.pairs.emplace_back(l->bound[i], r->bound[i]);
      bool ok = alpha_rec(l->a, r->a, scope);
      scope.pairs.resize(scope.pairs.size() - l->bound.size());
      return ok;
    }
  }
  return false;
}

} // namespace

bool alpha_equal(const FormulaPtr& lhs, const FormulaPtr& rhs) {
  AlphaScope scope;
  return alpha_rec(lhs, rhs, scope);
}

// ---------------------------------------------------------------------------
// HSet
// ---------------------------------------------------------------------------

int hset_cmp(const HSet& lhs, const HSet& rhs) {
  if (lhs.level != rhs.level) return lhs.level < rhs.level ? -1 : 1;
  if (lhs.elems != rhs.elems) return lhs.elems < rhs.elems ? -1 : 1;
  std::size_t n = std::min(lhs.members.size(), rhs.members.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = hset_cmp(lhs.members[i], rhs.members[i]);
    if (c != 0) return c;
  }
  if (lhs.members.size() != rhs.members.size())
    return lhs.members.size() < rhs.members.size() ? -1 : 1;
  return 0;
}

HSet HSet::make1(std::vector<int> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  HSet s;
  s.level = 1;
  s.elems = std::move(elems);
  return s;
}

HSet HSet::make(int level, std::vector<HSet> members) {
  if (level < 2 || level > 3)
    throw SortError("HSet::make: level must be 2 or 3");
  for (const HSet& m : members)
    if (m.level != level - 1)
      throw SortError("HSet::make: member level mismatch");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  HSet s;
  s.level = level;
  s.members = std::move(members);
  return s;
}

HSet HSet::empty(int level) {
  if (level == 1) return make1({});
  return make(level, {});
}

bool HSet::contains_elem(int id) const {
  return std::binary_search(elems.begin(), elems.end(), id);
}

bool HSet::contains(const HSet& member) const {
  return std::binary_search(members.begin(), members.end(), member);
}

namespace {
void require_same_level(const HSet& lhs, const HSet& rhs) {
  if (lhs.level != rhs.level)
    throw SortError("set operation on sets of different levels");
}
} // namespace

HSet hset_union(const HSet& lhs, const HSet& rhs) {
  require_same_level(lhs, rhs);
  if (lhs.level == 1) {
    std::vector<int> out(lhs.elems);
    out.insert(out.end(), rhs.elems.begin(), rhs.elems.end());
    return HSet::make1(std::move(out));
  }
  std::vector<HSet> out(lhs.members);
  out.insert(out.end(), rhs.members.begin(), rhs.members.end());
  return HSet::make(lhs.level, std::move(out));
}

HSet hset_intersect(const HSet& lhs, const HSet& rhs) {
  require_same_level(lhs, rhs);
  if (lhs.level == 1) {
    std::vector<int> out;
    std::set_intersection(lhs.elems.begin(), lhs.elems.end(),
                          rhs.elems.begin(), rhs.elems.end(),
                          std::back_inserter(out));
    return HSet::make1(std::move(out));
  }
  std::vector<HSet> out;
  std::set_intersection(lhs.members.begin(), lhs.members.end(),
                        rhs.members.begin(), rhs.members.end(),
                        std::back_inserter(out));
  return HSet::make(lhs.level, std::move(out));
}

HSet hset_diff(const HSet& lhs, const HSet& rhs) {
  require_same_level(lhs, rhs);
  if (lhs.level == 1) {
    std::vector<int> out;
    std::set_difference(lhs.elems.begin(), lhs.elems.end(),
                        rhs.elems.begin(), rhs.elems.end(),
                        std::back_inserter(out));
    return HSet::make1(std::move(out));
  }
  std::vector<HSet> out;
  std::set_difference(lhs.members.begin(), lhs.members.end(),
                      rhs.members.begin(), rhs.members.end(),
                      std::back_inserter(out));
  return HSet::make(lhs.level, std::move(out));
}

namespace {

// Subset masks ordered by popcount then numeric value, so enumeration is
// canonical: smaller sets first, lexicographic within a size class.
std::vector<std::uint32_t> masks_by_size(std::size_t n) {
  std::vector<std::uint32_t> masks;
  masks.reserve(std::size_t{1} << n);
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << n); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t x, std::uint32_t y) {
                     int px = __builtin_popcount(x), py = __builtin_popcount(y);
                     if (px != py) return px < py;
                     return x < y;
                   });
  return masks;
}

} // namespace

std::vector<HSet> enumerate_level1(const std::vector<int>& domain) {
  if (domain.size() > 20)
    throw CapacityError("enumerate_level1: domain too large");
  std::vector<HSet> out;
  out.reserve(std::size_t{1} << domain.size());
  for (std::uint32_t mask : masks_by_size(domain.size())) {
    std::vector<int> elems;
    for (std::size_t i = 0; i < domain.size(); ++i)
      if (mask & (std::uint32_t{1} << i)) elems.push_back(domain[i]);
    out.push_back(HSet::make1(std::move(elems)));
  }
  return out;
}

std::vector<HSet> enumerate_subsets(int level, const std::vector<HSet>& pool) {
  if (pool.size() > 20)
    throw CapacityError("enumerate_subsets: pool too large");
  std::vector<HSet> out;
  out.reserve(std::size_t{1} << pool.size());
  for (std::uint32_t mask : masks_by_size(pool.size())) {
    std::vector<HSet> members;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (mask & (std::uint32_t{1} << i)) members.push_back(pool[i]);
    out.push_back(HSet::make(level, std::move(members)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interpretations and evaluation
// ---------------------------------------------------------------------------

namespace stats {
std::atomic<std::uint64_t> pow2_expansions{0};
}

std::string Interpretation::elem_name(int id) const {
  if (id >= 0 && static_cast<std::size_t>(id) < elem_names.size() &&
      !elem_names[id].empty())
    return elem_names[id];
  return "d" + std::to_string(id);
}

int Interpretation::value0(const Var& v) const {
  auto it = assign0.find(v);
  if (it == assign0.end())
    throw EvalError("unassigned variable: " + var_display(v));
  return it->second;
}

const HSet& Interpretation::value(const Var& v) const {
  auto it = assign.find(v);
  if (it == assign.end())
    throw EvalError("unassigned variable: " + var_display(v));
  return it->second;
}

namespace {

// Evaluation context: the base interpretation plus a mutable overlay for
// quantified variables (restored on scope exit).
struct EvalCtx {
  const Interpretation& base;
  const EvalLimits& limits;
  std::map<Var, int> local0;
  std::map<Var, HSet> local;

  int value0(const Var& v) const {
    auto it = local0.find(v);
    if (it != local0.end()) return it->second;
    return base.value0(v);
  }
  const HSet& value(const Var& v) const {
    auto it = local.find(v);
    if (it != local.end()) return it->second;
    return base.value(v);
  }

  HSet term2(const Term& t) const {
    if (!t.is_pair()) return value(t.v);
    int mx = value0(t.v), my = value0(*t.pair_right);
    return HSet::make(2, {HSet::make1({mx}), HSet::make1({mx, my})});
  }

  bool atom(const Atom& a) const {
    switch (a.level()) {
      case 0:
        if (a.kind == AtomKind::Eq)
          return value0(a.lhs.v) == value0(a.rhs.v);
        return value(a.rhs.v).contains_elem(value0(a.lhs.v));
      case 1:
        if (a.kind == AtomKind::Eq) return value(a.lhs.v) == value(a.rhs.v);
        return value(a.rhs.v).contains(value(a.lhs.v));
      default:
        if (a.kind == AtomKind::Eq) return term2(a.lhs) == term2(a.rhs);
        return value(a.rhs.v).contains(term2(a.lhs));
    }
  }

  bool formula(const FormulaPtr& f) {
    switch (f->kind) {
      case FKind::Atom:
        return atom(*f->atom);
      case FKind::Not:
        return !formula(f->a);
      case FKind::And:
        return formula(f->a) && formula(f->b);
      case FKind::Or:
        return formula(f->a) || formula(f->b);
      case FKind::Forall:
        return forall(f->bound, 0, f->a);
    }
    return false; // unreachable
  }

  bool forall(const std::vector<Var>& bound, std::size_t i,
              const FormulaPtr& body) {
    if (i == bound.size()) return formula(body);
    const Var& v = bound[i];
    if (v.sort == 0) {
      auto prev = stash0(v);
      for (int id : base.domain) {
        local0[v] = id;
        if (!forall(bound, i + 1, body)) {
          restore0(v, prev);
          return false;
        }
      }
      restore0(v, prev);
      return true;
    }
    std::vector<HSet> range;
    if (v.sort == 1) {
      if (static_cast<int>(base.domain.size()) > limits.pow1_domain_cap)
        throw CapacityError("sort-1 quantifier over a domain of size " +
                            std::to_string(base.domain.size()) +
                            " exceeds the enumeration cap");
      range = enumerate_level1(base.domain);
    } else {
      if (static_cast<int>(base.domain.size()) > limits.pow2_domain_cap)
        throw CapacityError("sort-2 quantifier over a domain of size " +
                            std::to_string(base.domain.size()) +
                            " exceeds the enumeration cap");
      stats::pow2_expansions.fetch_add(1, std::memory_order_relaxed);
      range = enumerate_subsets(2, enumerate_level1(base.domain));
    }
    auto prev = stash(v);
    for (HSet& value : range) {
      local[v] = std::move(value);
      if (!forall(bound, i + 1, body)) {
        restore(v, prev);
        return false;
      }
    }
    restore(v, prev);
    return true;
  }

  std::optional<int> stash0(const Var& v) const {
    auto it = local0.find(v);
    if (it == local0.end()) return std::nullopt;
    return it->second;
  }
  void restore0(const Var& v, const std::optional<int>& prev) {
    if (prev)
      local0[v] = *prev;
    else
      local0.erase(v);
  }
  std::optional<HSet> stash(const Var& v) const {
    auto it = local.find(v);
    if (it == local.end()) return std::nullopt;
    return it->second;
  }
  void restore(const Var& v, const std::optional<HSet>& prev) {
    if (prev)
      local[v] = *prev;
    else
      local.erase(v);
  }
};

} // namespace

HSet eval_term2(const Interpretation& interp, const Term& t) {
  EvalLimits limits;
  EvalCtx ctx{interp, limits, {}, {}};
  if (!t.is_pair() && t.v.sort != 2)
    throw SortError("eval_term2: term does not denote a sort-2 value");
  return ctx.term2(t);
}

bool eval(const Interpretation& interp, const FormulaPtr& f,
          const EvalLimits& limits) {
  if (interp.domain.empty())
    throw EvalError("interpretation domain must be nonempty");
  if (!f) throw EvalError("eval: null formula");
  EvalCtx ctx{interp, limits, {}, {}};
  return ctx.formula(f);
}

// ---------------------------------------------------------------------------
// Substitution, free variables, polarity
// ---------------------------------------------------------------------------

namespace {

struct SubstCtx {
  const std::map<Var, Var>& mapping;
  std::vector<Var> bound_stack;

  bool is_bound(const Var& v) const {
    return std::find(bound_stack.begin(), bound_stack.end(), v) !=
           bound_stack.end();
  }

  Var rewrite(const Var& v) const {
    if (is_bound(v)) return v; // bound occurrence, untouched
    auto it = mapping.find(v);
    if (it == mapping.end()) return v;
    if (is_bound(it->second))
      throw SubstError("substitution would capture " +
                       var_display(it->second) + " (replacing " +
                       var_display(v) + ")");
    return it->second;
  }

  Term rewrite(const Term& t) const {
    if (t.is_pair()) return tpair(rewrite(t.v), rewrite(*t.pair_right));
    return tvar(rewrite(t.v));
  }

  FormulaPtr walk(const FormulaPtr& f) {
    switch (f->kind) {
      case FKind::Atom: {
        Atom a = *f->atom;
        a.lhs = rewrite(a.lhs);
        a.rhs = rewrite(a.rhs);
        return matom(std::move(a));
      }
      case FKind::Not:
        return mnot(walk(f->a));
      case FKind::And:
        return mand(walk(f->a), walk(f->b));
      case FKind::Or:
        return mor(walk(f->a), walk(f->b));
      case FKind::Forall: {
        bound_stack.insert(bound_stack.end(), f->bound.begin(),
                           f->bound.end());
        FormulaPtr body = walk(f->a);
        bound_stack.resize(bound_stack.size() - f->bound.size());
        return mforall(f->bound, std::move(body));
      }
    }
    return f; // unreachable
  }
};

} // namespace

FormulaPtr substitute(const FormulaPtr& f, const std::map<Var, Var>& mapping) {
  for (const auto& [from, to] : mapping)
    if (from.sort != to.sort)
      throw SortError("substitution must preserve sorts: " +
                      var_display(from) + " -> " + var_display(to));
  SubstCtx ctx{mapping, {}};
  return ctx.walk(f);
}

namespace {

void collect_free(const FormulaPtr& f, std::vector<Var>& bound_stack,
                  std::set<Var>& out) {
  auto is_bound = [&](const Var& v) {
    return std::find(bound_stack.begin(), bound_stack.end(), v) !=
           bound_stack.end();
  };
  auto add_term = [&](const Term& t) {
    if (!is_bound(t.v)) out.insert(t.v);
    if (t.is_pair() && !is_bound(*t.pair_right)) out.insert(*t.pair_right);
  };
  switch (f->kind) {
    case FKind::Atom:
      add_term(f->atom->lhs);
      add_term(f->atom->rhs);
      return;
    case FKind::Not:
      collect_free(f->a, bound_stack, out);
      return;
    case FKind::And:
    case FKind::Or:
      collect_free(f->a, bound_stack, out);
      collect_free(f->b, bound_stack, out);
      return;
    case FKind::Forall:
      bound_stack.insert(bound_stack.end(), f->bound.begin(), f->bound.end());
      collect_free(f->a, bound_stack, out);
      bound_stack.resize(bound_stack.size() - f->bound.size());
      return;
  }
}

} // namespace

std::set<Var> free_vars_all(const FormulaPtr& f) {
  std::set<Var> out;
  std::vector<Var> bound_stack;
  collect_free(f, bound_stack, out);
  return out;
}

std::set<Var> free_vars(const FormulaPtr& f, int sort) {
  std::set<Var> out;
  for (const Var& v : free_vars_all(f))
    if (v.sort == sort) out.insert(v);
  return out;
}

namespace {

void collect_polarity(const FormulaPtr& f, std::vector<int>& path,
                      bool positive, std::vector<PolarityEntry>& out) {
  out.push_back({path, f, positive});
  switch (f->kind) {
    case FKind::Atom:
      return;
    case FKind::Not:
      path.push_back(0);
      collect_polarity(f->a, path, !positive, out);
      path.pop_back();
      return;
    case FKind::And:
    case FKind::Or:
      path.push_back(0);
      collect_polarity(f->a, path, positive, out);
      path.back() = 1;
      collect_polarity(f->b, path, positive, out);
      path.pop_back();
      return;
    case FKind::Forall:
      path.push_back(0);
      collect_polarity(f->a, path, positive, out);
      path.pop_back();
      return;
  }
}

} // namespace

std::vector<PolarityEntry> polarity_occurrences(const FormulaPtr& f) {
  std::vector<PolarityEntry> out;
  std::vector<int> path;
  collect_polarity(f, path, true, out);
  return out;
}

} // namespace syllog
