#include "syllog/modal.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <stdexcept>

#include "syllog/builders.hpp"

namespace syllog {

namespace {

const ModalFormula& req(const ModalPtr& f, const char* who) {
  if (!f) throw std::invalid_argument(std::string(who) + ": null formula");
  return *f;
}

} // namespace

// ---------------------------------------------------------------------------
// Constructors and structural helpers
// ---------------------------------------------------------------------------

ModalPtr mletter(int i) {
  if (i < 1) throw std::invalid_argument("mletter: letters are numbered from 1");
  auto f = std::make_shared<ModalFormula>();
  f->kind = MKind::Letter;
  f->letter = i;
  return f;
}

namespace {

ModalPtr munary(MKind kind, const ModalPtr& a, const char* who) {
  req(a, who);
  auto f = std::make_shared<ModalFormula>();
  f->kind = kind;
  f->a = a;
  return f;
}

ModalPtr mbinary(MKind kind, const ModalPtr& a, const ModalPtr& b,
                 const char* who) {
  req(a, who);
  req(b, who);
  auto f = std::make_shared<ModalFormula>();
  f->kind = kind;
  f->a = a;
  f->b = b;
  return f;
}

} // namespace

ModalPtr mnot(const ModalPtr& a) { return munary(MKind::Not, a, "mnot"); }
ModalPtr mbox(const ModalPtr& a) { return munary(MKind::Box, a, "mbox"); }
ModalPtr mdia(const ModalPtr& a) { return munary(MKind::Diamond, a, "mdia"); }

ModalPtr mand(const ModalPtr& a, const ModalPtr& b) {
  return mbinary(MKind::And, a, b, "mand");
}

ModalPtr mor(const ModalPtr& a, const ModalPtr& b) {
  return mbinary(MKind::Or, a, b, "mor");
}

bool modal_equal(const ModalPtr& a, const ModalPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case MKind::Letter:
      return a->letter == b->letter;
    case MKind::Not:
    case MKind::Box:
    case MKind::Diamond:
      return modal_equal(a->a, b->a);
    case MKind::And:
    case MKind::Or:
      return modal_equal(a->a, b->a) && modal_equal(a->b, b->b);
  }
  return false;
}

int modal_size(const ModalPtr& f) {
  const ModalFormula& m = req(f, "modal_size");
  switch (m.kind) {
    case MKind::Letter:
      return 1;
    case MKind::Not:
    case MKind::Box:
    case MKind::Diamond:
      return 1 + modal_size(m.a);
    case MKind::And:
    case MKind::Or:
      return 1 + modal_size(m.a) + modal_size(m.b);
  }
  return 1;
}

int modal_depth(const ModalPtr& f) {
  const ModalFormula& m = req(f, "modal_depth");
  switch (m.kind) {
    case MKind::Letter:
      return 0;
    case MKind::Not:
      return modal_depth(m.a);
    case MKind::Box:
    case MKind::Diamond:
      return 1 + modal_depth(m.a);
    case MKind::And:
    case MKind::Or:
      return std::max(modal_depth(m.a), modal_depth(m.b));
  }
  return 0;
}

namespace {

void collect_letters(const ModalPtr& f, std::set<int>& out) {
  switch (f->kind) {
    case MKind::Letter:
      out.insert(f->letter);
      return;
    case MKind::Not:
    case MKind::Box:
    case MKind::Diamond:
      collect_letters(f->a, out);
      return;
    case MKind::And:
    case MKind::Or:
      collect_letters(f->a, out);
      collect_letters(f->b, out);
      return;
  }
}

} // namespace

std::vector<int> modal_letters(const ModalPtr& f) {
  req(f, "modal_letters");
  std::set<int> seen;
  collect_letters(f, seen);
  return std::vector<int>(seen.begin(), seen.end());
}

// ---------------------------------------------------------------------------
// Printing and parsing
// ---------------------------------------------------------------------------

namespace {

// Precedence: | is 1, & is 2, unary operators 3, letters 4. Right operands
// of & and | require strictly higher precedence so the printed form
// reparses to the same tree (chains are left-associative).
int modal_prec(MKind k) {
  switch (k) {
    case MKind::Or:
      return 1;
    case MKind::And:
      return 2;
    case MKind::Not:
    case MKind::Box:
    case MKind::Diamond:
      return 3;
    case MKind::Letter:
      return 4;
  }
  return 4;
}

void print_modal_rec(const ModalPtr& f, int min_prec, std::string& out) {
  int prec = modal_prec(f->kind);
  bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (f->kind) {
    case MKind::Letter:
      out += 'p';
      out += std::to_string(f->letter);
      break;
    case MKind::Not:
      out += '~';
      print_modal_rec(f->a, 3, out);
      break;
    case MKind::Box:
      out += "[]";
      print_modal_rec(f->a, 3, out);
      break;
    case MKind::Diamond:
      out += "<>";
      print_modal_rec(f->a, 3, out);
      break;
    case MKind::And:
      print_modal_rec(f->a, 2, out);
      out += " & ";
      print_modal_rec(f->b, 3, out);
      break;
    case MKind::Or:
      print_modal_rec(f->a, 1, out);
      out += " | ";
      print_modal_rec(f->b, 2, out);
      break;
  }
  if (parens) out += ')';
}

} // namespace

std::string print_modal(const ModalPtr& f) {
  req(f, "print_modal");
  std::string out;
  print_modal_rec(f, 0, out);
  return out;
}

namespace {

enum class MTok { Letter, Not, And, Or, Impl, Iff, Box, Dia, LParen, RParen, End };

struct ModalLexer {
  std::string_view text;
  std::size_t pos = 0;
  MTok tok = MTok::End;
  int letter = 0;
  std::size_t tok_pos = 0;

  explicit ModalLexer(std::string_view t) : text(t) { next(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("parse_modal: " + msg + " at offset " +
                             std::to_string(tok_pos));
  }

  void next() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    tok_pos = pos;
    if (pos >= text.size()) {
      tok = MTok::End;
      return;
    }
    char c = text[pos];
    switch (c) {
      case '(': ++pos; tok = MTok::LParen; return;
      case ')': ++pos; tok = MTok::RParen; return;
      case '~': ++pos; tok = MTok::Not; return;
      case '&': ++pos; tok = MTok::And; return;
      case '|': ++pos; tok = MTok::Or; return;
      case '-':
        if (pos + 1 < text.size() && text[pos + 1] == '>') {
          pos += 2;
          tok = MTok::Impl;
          return;
        }
        fail("expected '->'");
      case '<':
        if (pos + 2 < text.size() && text[pos + 1] == '-' &&
            text[pos + 2] == '>') {
          pos += 3;
          tok = MTok::Iff;
          return;
        }
        if (pos + 1 < text.size() && text[pos + 1] == '>') {
          pos += 2;
          tok = MTok::Dia;
          return;
        }
        fail("expected '<->' or '<>'");
      case '[':
        if (pos + 1 < text.size() && text[pos + 1] == ']') {
          pos += 2;
          tok = MTok::Box;
          return;
        }
        fail("expected '[]'");
      case 'p': {
        std::size_t end = pos + 1;
        while (end < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[end]))) {
          ++end;
        }
        if (end == pos + 1) fail("letter needs an index, like p1");
        int value = 0;
        for (std::size_t i = pos + 1; i < end; ++i) {
          value = value * 10 + (text[i] - '0');
          if (value > 1'000'000) fail("letter index too large");
        }
        if (value < 1) fail("letters are numbered from 1");
        pos = end;
        tok = MTok::Letter;
        letter = value;
        return;
      }
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }
};

struct ModalParser {
  ModalLexer lex;

  explicit ModalParser(std::string_view t) : lex(t) {}

  ModalPtr parse_iff() {
    ModalPtr a = parse_impl();
    if (lex.tok == MTok::Iff) {
      lex.next();
      ModalPtr b = parse_iff();
      return mand(mor(mnot(a), b), mor(mnot(b), a));
    }
    return a;
  }

  ModalPtr parse_impl() {
    ModalPtr a = parse_or();
    if (lex.tok == MTok::Impl) {
      lex.next();
      ModalPtr b = parse_impl();
      return mor(mnot(a), b);
    }
    return a;
  }

  ModalPtr parse_or() {
    ModalPtr a = parse_and();
    while (lex.tok == MTok::Or) {
      lex.next();
      a = mor(a, parse_and());
    }
    return a;
  }

  ModalPtr parse_and() {
    ModalPtr a = parse_unary();
    while (lex.tok == MTok::And) {
      lex.next();
      a = mand(a, parse_unary());
    }
    return a;
  }

  ModalPtr parse_unary() {
    switch (lex.tok) {
      case MTok::Not:
        lex.next();
        return mnot(parse_unary());
      case MTok::Box:
        lex.next();
        return mbox(parse_unary());
      case MTok::Dia:
        lex.next();
        return mdia(parse_unary());
      default:
        return parse_primary();
    }
  }

  ModalPtr parse_primary() {
    if (lex.tok == MTok::Letter) {
      ModalPtr f = mletter(lex.letter);
      lex.next();
      return f;
    }
    if (lex.tok == MTok::LParen) {
      lex.next();
      ModalPtr f = parse_iff();
      if (lex.tok != MTok::RParen) lex.fail("expected ')'");
      lex.next();
      return f;
    }
    lex.fail("expected a letter, '(', or a unary operator");
  }
};

} // namespace

ModalPtr parse_modal(const std::string& text) {
  ModalParser p(text);
  ModalPtr f = p.parse_iff();
  if (p.lex.tok != MTok::End) p.lex.fail("trailing input");
  return f;
}

// ---------------------------------------------------------------------------
// Kripke semantics
// ---------------------------------------------------------------------------

namespace {

bool has_predecessor(const KripkeModel& K, int v) {
  for (const auto& [a, b] : K.rel) {
    (void)a;
    if (b == v) return true;
  }
  return false;
}

} // namespace

bool kripke_eval(const KripkeModel& K, int w, const ModalPtr& f) {
  const ModalFormula& m = req(f, "kripke_eval");
  if (w < 0 || w >= K.worlds) {
    throw std::invalid_argument("kripke_eval: world " + std::to_string(w) +
                                " is outside the model");
  }
  switch (m.kind) {
    case MKind::Letter: {
      auto it = K.val.find(m.letter);
      return it != K.val.end() && it->second.count(w) != 0;
    }
    case MKind::Not:
      return !kripke_eval(K, w, m.a);
    case MKind::And:
      return kripke_eval(K, w, m.a) && kripke_eval(K, w, m.b);
    case MKind::Or:
      return kripke_eval(K, w, m.a) || kripke_eval(K, w, m.b);
    case MKind::Box:
      // Holds iff the operand holds at every world with a predecessor;
      // independent of w.
      for (int v = 0; v < K.worlds; ++v) {
        if (has_predecessor(K, v) && !kripke_eval(K, v, m.a)) return false;
      }
      return true;
    case MKind::Diamond:
      for (int v = 0; v < K.worlds; ++v) {
        if (has_predecessor(K, v) && kripke_eval(K, v, m.a)) return true;
      }
      return false;
  }
  return false;
}

std::set<std::pair<int, int>> transitive_euclidean_closure(
    std::set<std::pair<int, int>> rel) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::pair<int, int>> add;
    for (const auto& [a, b] : rel) {
      for (const auto& [c, d] : rel) {
        if (b == c && rel.count({a, d}) == 0) add.push_back({a, d});
        if (a == c && rel.count({b, d}) == 0) add.push_back({b, d});
      }
    }
    for (const auto& p : add) changed |= rel.insert(p).second;
  }
  return rel;
}

std::optional<std::pair<KripkeModel, int>> kripke_oracle_sat(
    const ModalPtr& f, int max_worlds) {
  req(f, "kripke_oracle_sat");
  if (max_worlds > 4) {
    throw CapacityError("kripke_oracle_sat: world bound above 4");
  }
  std::vector<int> letters = modal_letters(f);
  for (int n = 1; n <= max_worlds; ++n) {
    // Every transitive euclidean relation on n worlds is its own closure,
    // so closing every seed relation and deduplicating reaches all of them.
    std::vector<std::pair<int, int>> cells;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) cells.push_back({a, b});
    }
    std::set<std::set<std::pair<int, int>>> frames;
    for (std::uint64_t mask = 0; mask < (1ull << cells.size()); ++mask) {
      std::set<std::pair<int, int>> seed;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (mask & (1ull << i)) seed.insert(cells[i]);
      }
      frames.insert(transitive_euclidean_closure(std::move(seed)));
    }
    for (const auto& rel : frames) {
      std::vector<std::uint32_t> vm(letters.size(), 0);
      while (true) {
        KripkeModel K;
        K.worlds = n;
        K.rel = rel;
        for (std::size_t i = 0; i < letters.size(); ++i) {
          std::set<int>& ws = K.val[letters[i]];
          for (int w = 0; w < n; ++w) {
            if (vm[i] & (1u << w)) ws.insert(w);
          }
        }
        for (int w = 0; w < n; ++w) {
          if (kripke_eval(K, w, f)) return std::make_pair(K, w);
        }
        std::size_t i = 0;
        for (; i < vm.size(); ++i) {
          if (++vm[i] < (1u << n)) break;
          vm[i] = 0;
        }
        if (i == vm.size()) break;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Translation into the h = 3 fragment
// ---------------------------------------------------------------------------

namespace {

// Builds the defining conjuncts bottom-up, memoizing the set variable per
// distinct subformula so shared subformulae are defined exactly once.
// Letters get stable names Xp<i>; compounds get Xf<k> in discovery order.
struct SubformulaTable {
  Var xr{"XR", 3};
  Var x{"x", 0};
  Var z{"z", 0};
  Var z1{"z1", 0};
  Var z2{"z2", 0};
  std::map<std::string, Var> memo;
  std::map<int, Var> letters;
  std::vector<FormulaPtr> defs;
  int next_id = 0;

  FormulaPtr in1(const Var& a, const Var& X) {
    return matom(ain(tvar(a), tvar(X)));
  }

  FormulaPtr edge(const Var& from, const Var& to) {
    return matom(ain(tpair(from, to), tvar(xr)));
  }

  Var var_for(const ModalPtr& f) {
    if (f->kind == MKind::Letter) {
      auto it = letters.find(f->letter);
      if (it != letters.end()) return it->second;
      Var v{"Xp" + std::to_string(f->letter), 1};
      letters.emplace(f->letter, v);
      return v; // letters carry no defining conjunct
    }
    std::string key = print_modal(f);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Var self{"Xf" + std::to_string(next_id++), 1};
    switch (f->kind) {
      case MKind::Not: {
        Var a = var_for(f->a);
        defs.push_back(
            mforall({z}, miff(in1(z, self), mnot(in1(z, a)))));
        break;
      }
      case MKind::And: {
        Var a = var_for(f->a);
        Var b = var_for(f->b);
        defs.push_back(
            mforall({z}, miff(in1(z, self), mand(in1(z, a), in1(z, b)))));
        break;
      }
      case MKind::Or: {
        Var a = var_for(f->a);
        Var b = var_for(f->b);
        defs.push_back(
            mforall({z}, miff(in1(z, self), mor(in1(z, a), in1(z, b)))));
        break;
      }
      case MKind::Box: {
        Var a = var_for(f->a);
        // All-or-nothing: if every world with a predecessor is in the
        // operand's set, self is everything; if some such world is not,
        // self is empty.
        FormulaPtr all_in =
            mforall({z1, z2}, mimpl(edge(z2, z1), in1(z1, a)));
        FormulaPtr self_full = mforall({z}, in1(z, self));
        FormulaPtr some_out = mnot(mforall(
            {z1, z2}, mnot(mand(edge(z2, z1), mnot(in1(z1, a))))));
        FormulaPtr self_empty = mforall({z}, mnot(in1(z, self)));
        defs.push_back(mand(mimpl(all_in, self_full),
                            mimpl(some_out, self_empty)));
        break;
      }
      case MKind::Diamond: {
        Var a = var_for(f->a);
        FormulaPtr some_in = mnot(
            mforall({z1, z2}, mnot(mand(edge(z2, z1), in1(z1, a)))));
        FormulaPtr self_full = mforall({z}, in1(z, self));
        FormulaPtr none_in =
            mforall({z1, z2}, mimpl(edge(z2, z1), mnot(in1(z1, a))));
        FormulaPtr self_empty = mforall({z}, mnot(in1(z, self)));
        defs.push_back(mand(mimpl(some_in, self_full),
                            mimpl(none_in, self_empty)));
        break;
      }
      case MKind::Letter:
        break; // unreachable
    }
    memo.emplace(std::move(key), self);
    return self;
  }
};

} // namespace

TranslationResult translate_k45(const ModalPtr& f) {
  req(f, "translate_k45");
  TranslationResult out;
  SubformulaTable t;
  out.phi_var = t.var_for(f);
  out.query_var = t.x;
  out.relation_var = t.xr;
  out.letter_vars = t.letters;
  out.tau_defs = t.defs;

  DesignatedNames names;
  Var z1{"z1", 0}, z2{"z2", 0}, z3{"z3", 0}, Z{"Z", 2};
  auto edge = [&](const Var& from, const Var& to) {
    return matom(ain(tpair(from, to), tvar(t.xr)));
  };

  // Every pair over the domain lives in the bounded pool.
  out.chi1 =
      mforall({z1, z2}, matom(ain(tpair(z1, z2), tvar(names.bounded3))));
  // Members of the relation are pair-shaped. Deliberately one-way: the
  // converse would combine with chi1 to force every pair into the
  // relation, leaving only the total relation on each domain.
  out.chi2 = mforall(
      {Z},
      mimpl(matom(ain(tvar(Z), tvar(names.bounded3))),
            mimpl(matom(ain(tvar(Z), tvar(t.xr))),
                  mnot(mforall({z1, z2},
                               mnot(matom(aeq(tpair(z1, z2), tvar(Z)))))))));
  out.chi3 = mforall({z1, z2, z3}, mimpl(mand(edge(z1, z2), edge(z2, z3)),
                                         edge(z1, z3)));
  out.chi4 = mforall({z1, z2, z3}, mimpl(mand(edge(z1, z2), edge(z1, z3)),
                                         edge(z2, z3)));

  std::vector<FormulaPtr> parts = {out.chi1, out.chi2, out.chi3, out.chi4};
  parts.insert(parts.end(), t.defs.begin(), t.defs.end());
  parts.push_back(matom(ain(tvar(t.x), tvar(out.phi_var))));
  out.formula = make_h_shell(mand_all(parts), 3, names);

  DecomposeResult dec = decompose_h(out.formula, 3, names);
  if (!dec.ok() || dec.decomposition->psi3.size() != 1) {
    throw std::logic_error(
        "translate_k45: shell assembly failed: " +
        (dec.diagnostics.empty() ? std::string("unexpected psi conjuncts")
                                 : dec.diagnostics.front().message));
  }
  out.xi_w1 = dec.decomposition->xi1;
  out.xi_lt2 = dec.decomposition->xi2;
  out.xi_lt3 = dec.decomposition->xi3;
  out.psi12 = dec.decomposition->psi3.front().conjunct;
  return out;
}

// ---------------------------------------------------------------------------
// Decision procedure
// ---------------------------------------------------------------------------

ModalVerdict decide_k45(const ModalPtr& f, const SolveHOptions& opts) {
  TranslationResult tr = translate_k45(f);
  ModalVerdict out;
  out.verdict = solve_h(tr.formula, 3, opts);
  if (out.verdict.status != SolveStatus::SAT) return out;

  const Interpretation& m = *out.verdict.model;
  // Domain ids need not be contiguous; worlds are positions in domain order.
  std::map<int, int> pos;
  for (std::size_t i = 0; i < m.domain.size(); ++i) {
    pos[m.domain[i]] = static_cast<int>(i);
  }
  KripkeModel K;
  K.worlds = static_cast<int>(m.domain.size());
  DecodedRelation rel = decode_relation(m.value(tr.relation_var));
  if (rel.stray_members != 0) {
    throw std::logic_error(
        "decide_k45: relation value contains non-pair members");
  }
  for (const auto& [a, b] : rel.pairs) K.rel.insert({pos.at(a), pos.at(b)});
  for (const auto& [letter, var] : tr.letter_vars) {
    std::set<int>& ws = K.val[letter];
    for (int id : m.value(var).elems) ws.insert(pos.at(id));
  }
  int w = pos.at(m.value0(tr.query_var));
  if (!kripke_eval(K, w, f)) {
    throw std::logic_error(
        "decide_k45: decoded Kripke model fails re-verification");
  }
  out.kripke = std::move(K);
  out.world = w;
  return out;
}

} // namespace syllog
