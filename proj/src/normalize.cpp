#include "syllog/normalize.hpp"

#include <charconv>
#include <map>
#include <string>

#include "syllog/fragment.hpp"

namespace syllog {

// ---------------------------------------------------------------------------
// FreshSupply
// ---------------------------------------------------------------------------

Var FreshSupply::fresh(int sort) {
  if (sort < 0 || sort > 3)
    throw SortError("fresh variable sort out of range");
  return Var{"$" + std::to_string(sort) + "_" + std::to_string(next[sort]++),
             sort};
}

namespace {

void reserve_var(std::array<long, 4>& next, const Var& v) {
  // Names of the shape "$<sort>_<n>" claim counter values up to n.
  const std::string& s = v.name;
  std::string prefix = "$" + std::to_string(v.sort) + "_";
  if (s.rfind(prefix, 0) != 0) return;
  long n = 0;
  const char* begin = s.data() + prefix.size();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, n);
  if (ec == std::errc() && ptr == end && n >= next[v.sort])
    next[v.sort] = n + 1;
}

void reserve_walk(std::array<long, 4>& next, const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Atom:
      reserve_var(next, f->atom->lhs.v);
      if (f->atom->lhs.pair_right) reserve_var(next, *f->atom->lhs.pair_right);
      reserve_var(next, f->atom->rhs.v);
      if (f->atom->rhs.pair_right) reserve_var(next, *f->atom->rhs.pair_right);
      return;
    case FKind::Not:
      reserve_walk(next, f->a);
      return;
    case FKind::And:
    case FKind::Or:
      reserve_walk(next, f->a);
      reserve_walk(next, f->b);
      return;
    case FKind::Forall:
      for (const Var& v : f->bound) reserve_var(next, v);
      reserve_walk(next, f->a);
      return;
  }
}

} // namespace

void FreshSupply::reserve(const FormulaPtr& f) { reserve_walk(next, f); }

// ---------------------------------------------------------------------------
// rename_apart
// ---------------------------------------------------------------------------

namespace {

Term rename_term(const std::map<Var, Var>& env, const Term& t) {
  auto lookup = [&](const Var& v) {
    auto it = env.find(v);
    return it == env.end() ? v : it->second;
  };
  if (t.is_pair()) return tpair(lookup(t.v), lookup(*t.pair_right));
  return tvar(lookup(t.v));
}

FormulaPtr rename_rec(const FormulaPtr& f, std::map<Var, Var> env,
                      FreshSupply& supply) {
  switch (f->kind) {
    case FKind::Atom: {
      const Atom& a = *f->atom;
      Term lhs = rename_term(env, a.lhs);
      Term rhs = rename_term(env, a.rhs);
      return matom(a.kind == AtomKind::Eq ? aeq(lhs, rhs) : ain(lhs, rhs));
    }
    case FKind::Not:
      return mnot(rename_rec(f->a, env, supply));
    case FKind::And:
      return mand(rename_rec(f->a, env, supply),
                  rename_rec(f->b, env, supply));
    case FKind::Or:
      return mor(rename_rec(f->a, env, supply),
                 rename_rec(f->b, env, supply));
    case FKind::Forall: {
      std::vector<Var> bound;
      for (const Var& v : f->bound) {
        Var nv = supply.fresh(v.sort);
        env[v] = nv;
        bound.push_back(nv);
      }
      return mforall(std::move(bound), rename_rec(f->a, env, supply));
    }
  }
  throw std::logic_error("unreachable formula kind");
}

} // namespace

FormulaPtr rename_apart(const FormulaPtr& f, FreshSupply& supply) {
  supply.reserve(f);
  return rename_rec(f, {}, supply);
}

// ---------------------------------------------------------------------------
// DnfCursor
// ---------------------------------------------------------------------------

// A cursor node enumerates the disjuncts of one negation-normal subtree.
// Conjunctions become Join nodes (cartesian product of child disjuncts,
// right child fastest), disjunctions become Choice nodes (left child first).
// Purely universal subformulae and atoms are literals. Children materialize
// on demand, which is what keeps the enumeration lazy.
struct DnfCursor::Node {
  enum class Kind { Lit, Join, Choice };

  Kind kind = Kind::Lit;
  FormulaPtr literal;       // Lit only
  FormulaPtr lhs, rhs;      // Join/Choice operands
  bool neg = false;         // negation context of lhs/rhs
  std::unique_ptr<Node> a, b;
  bool on_second = false;   // Choice: currently yielding rhs
  long* counter = nullptr;

  static std::unique_ptr<Node> make(FormulaPtr f, bool neg, long* counter) {
    ++*counter;
    while (f->kind == FKind::Not) {
      neg = !neg;
      f = f->a;
    }
    auto n = std::make_unique<Node>();
    n->counter = counter;
    if (f->kind == FKind::Atom || f->kind == FKind::Forall) {
      n->literal = neg ? mnot(f) : f;
      return n;
    }
    n->kind = (f->kind == FKind::And) != neg ? Kind::Join : Kind::Choice;
    n->lhs = f->a;
    n->rhs = f->b;
    n->neg = neg;
    return n;
  }

  void start() {
    switch (kind) {
      case Kind::Lit:
        return;
      case Kind::Join:
        a = make(lhs, neg, counter);
        a->start();
        b = make(rhs, neg, counter);
        b->start();
        return;
      case Kind::Choice:
        a = make(lhs, neg, counter);
        a->start();
        return;
    }
  }

  bool advance() {
    switch (kind) {
      case Kind::Lit:
        return false;
      case Kind::Join:
        if (b->advance()) return true;
        if (a->advance()) {
          b = make(rhs, neg, counter);
          b->start();
          return true;
        }
        return false;
      case Kind::Choice:
        if (!on_second) {
          if (a->advance()) return true;
          on_second = true;
          a.reset();
          b = make(rhs, neg, counter);
          b->start();
          return true;
        }
        return b->advance();
    }
    return false;
  }

  void emit(std::vector<FormulaPtr>& out) const {
    switch (kind) {
      case Kind::Lit:
        out.push_back(literal);
        return;
      case Kind::Join:
        a->emit(out);
        b->emit(out);
        return;
      case Kind::Choice:
        (on_second ? b : a)->emit(out);
        return;
    }
  }
};

DnfCursor::DnfCursor(FormulaPtr f) : root_(std::move(f)) {
  top_ = Node::make(root_, false, &expansions_);
  top_->start();
  collect();
}

DnfCursor::~DnfCursor() = default;
DnfCursor::DnfCursor(DnfCursor&&) noexcept = default;
DnfCursor& DnfCursor::operator=(DnfCursor&&) noexcept = default;

void DnfCursor::collect() {
  std::vector<FormulaPtr> raw;
  top_->emit(raw);
  current_.clear();
  for (const FormulaPtr& lit : raw) {
    bool dup = false;
    for (const FormulaPtr& seen : current_)
      if (formula_equal(lit, seen)) {
        dup = true;
        break;
      }
    if (!dup) current_.push_back(lit);
  }
}

void DnfCursor::advance() {
  if (done_) return;
  if (top_->advance())
    collect();
  else
    done_ = true;
}

// ---------------------------------------------------------------------------
// eliminate_negative_quantifiers
// ---------------------------------------------------------------------------

NormalizedConjunction eliminate_negative_quantifiers(
    const std::vector<FormulaPtr>& conj, FreshSupply& supply) {
  NormalizedConjunction out;
  for (const FormulaPtr& lit : conj) {
    if (lit->kind == FKind::Not && lit->a->kind == FKind::Forall) {
      const FormulaPtr& pu = lit->a;
      std::map<Var, Var> witnesses;
      for (const Var& v : pu->bound) {
        Var w = supply.fresh(v.sort);
        witnesses[v] = w;
        out.fresh_vars.push_back(w);
      }
      out.literals.push_back(mnot(substitute(pu->a, witnesses)));
    } else {
      out.literals.push_back(lit);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// NormalizeCursor
// ---------------------------------------------------------------------------

namespace {

void add_literal(std::vector<FormulaPtr>& literals, const FormulaPtr& lit) {
  for (const FormulaPtr& seen : literals)
    if (formula_equal(lit, seen)) return;
  literals.push_back(lit);
}

} // namespace

NormalizeCursor::NormalizeCursor(FormulaPtr f) {
  std::vector<FragmentDiagnostic> diags;
  if (!is_4lqsr(f, &diags)) {
    std::string msg = "formula is outside 4LQS^R";
    if (!diags.empty()) msg += ": " + diags.front().message;
    throw FragmentError(msg);
  }
  FormulaPtr apart = rename_apart(f, supply_);
  stack_.push_back(State{{apart}, {}, {}});
  run();
}

void NormalizeCursor::run() {
  while (!stack_.empty()) {
    State s = std::move(stack_.back());
    stack_.pop_back();
    while (!s.pending.empty()) {
      FormulaPtr f = std::move(s.pending.back());
      s.pending.pop_back();
      switch (f->kind) {
        case FKind::Atom:
        case FKind::Forall:
          add_literal(s.literals, f);
          break;
        case FKind::And:
          s.pending.push_back(f->b);
          s.pending.push_back(f->a);
          break;
        case FKind::Or: {
          State right = s;
          right.pending.push_back(f->b);
          s.pending.push_back(f->a);
          stack_.push_back(std::move(right));
          break;
        }
        case FKind::Not: {
          const FormulaPtr& g = f->a;
          switch (g->kind) {
            case FKind::Atom:
              add_literal(s.literals, f);
              break;
            case FKind::Not:
              s.pending.push_back(g->a);
              break;
            case FKind::And: {
              State right = s;
              right.pending.push_back(mnot(g->b));
              s.pending.push_back(mnot(g->a));
              stack_.push_back(std::move(right));
              break;
            }
            case FKind::Or:
              s.pending.push_back(mnot(g->b));
              s.pending.push_back(mnot(g->a));
              break;
            case FKind::Forall: {
              // Witness the refuted universal with fresh variables; the
              // negated matrix goes back on the worklist because it need
              // not be a literal yet.
              std::map<Var, Var> witnesses;
              for (const Var& v : g->bound) {
                Var w = supply_.fresh(v.sort);
                witnesses[v] = w;
                s.fresh_vars.push_back(w);
              }
              s.pending.push_back(mnot(substitute(g->a, witnesses)));
              break;
            }
          }
          break;
        }
      }
    }
    // Defense in depth: elimination must not have produced a conjunction
    // whose remaining universals violate the restrictions.
    if (!s.literals.empty() && !is_4lqsr(mand_all(s.literals)))
      throw FragmentError(
          "normalization produced a conjunction outside 4LQS^R");
    current_ = NormalizedConjunction{std::move(s.literals),
                                     std::move(s.fresh_vars)};
    return;
  }
  done_ = true;
}

void NormalizeCursor::advance() {
  if (!done_) run();
}

std::vector<NormalizedConjunction> normalize_all(const FormulaPtr& f,
                                                 std::size_t limit) {
  std::vector<NormalizedConjunction> out;
  for (NormalizeCursor c = normalize(f); !c.done() && out.size() < limit;
       c.advance())
    out.push_back(c.current());
  return out;
}

} // namespace syllog
