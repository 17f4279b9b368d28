#include "syllog/syntax.hpp"

#include <cctype>

namespace syllog {

namespace {

enum class Tok {
  Ident,   // variable name, sort already resolved from the ^k suffix
  Forall,
  In,
  Tilde,
  Amp,
  Pipe,
  Arrow,
  Iff,
  Eq,
  LParen,
  RParen,
  Lt,
  Gt,
  Comma,
  Dot,
  End,
};

struct Token {
  Tok kind = Tok::End;
  SourceSpan span;
  std::string text; // identifier name without suffix
  int sort = 0;     // identifier sort
};

struct ParseAbort {}; // unwinds to parse() after a diagnostic is recorded

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;
  std::vector<ParseDiagnostic>& diags;

  [[noreturn]] void fail(SourceSpan span, std::string message) {
    diags.push_back({span, std::move(message), ParseDiagnostic::Error});
    throw ParseAbort{};
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
  }
  static bool ident_char(char c) {
    return ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
  }

  void skip_trivia() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  Token next() {
    skip_trivia();
    Token t;
    t.span = {pos, pos};
    if (pos >= src.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = src[pos];
    auto one = [&](Tok k) {
      t.kind = k;
      t.span = {pos, pos + 1};
      ++pos;
      return t;
    };
    if (src.substr(pos, 3) == "<->") {
      t.kind = Tok::Iff;
      t.span = {pos, pos + 3};
      pos += 3;
      return t;
    }
    if (src.substr(pos, 2) == "->") {
      t.kind = Tok::Arrow;
      t.span = {pos, pos + 2};
      pos += 2;
      return t;
    }
    switch (c) {
      case '~': return one(Tok::Tilde);
      case '&': return one(Tok::Amp);
      case '|': return one(Tok::Pipe);
      case '=': return one(Tok::Eq);
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case '<': return one(Tok::Lt);
      case '>': return one(Tok::Gt);
      case ',': return one(Tok::Comma);
      case '.': return one(Tok::Dot);
      default: break;
    }
    if (!ident_start(c))
      fail({pos, pos + 1}, std::string("unknown token '") + c + "'");
    std::size_t begin = pos;
    while (pos < src.size() && ident_char(src[pos])) ++pos;
    t.text = std::string(src.substr(begin, pos - begin));
    t.sort = 0;
    if (pos < src.size() && src[pos] == '^') {
      std::size_t caret = pos;
      ++pos;
      std::size_t dbegin = pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
        ++pos;
      std::string digits(src.substr(dbegin, pos - dbegin));
      if (digits != "1" && digits != "2" && digits != "3")
        fail({caret, pos},
             "unknown sort suffix ^" + digits + " (expected ^1, ^2, or ^3)");
      t.sort = digits[0] - '0';
    }
    t.span = {begin, pos};
    if (t.text == "forall") {
      if (t.sort != 0) fail(t.span, "'forall' is a keyword, not a variable");
      t.kind = Tok::Forall;
    } else if (t.text == "in") {
      if (t.sort != 0) fail(t.span, "'in' is a keyword, not a variable");
      t.kind = Tok::In;
    } else {
      t.kind = Tok::Ident;
    }
    return t;
  }
};

struct Parser {
  Lexer lex;
  Token tok; // one-token lookahead

  explicit Parser(std::string_view src, std::vector<ParseDiagnostic>& diags)
      : lex{src, 0, diags} {
    tok = lex.next();
  }

  [[noreturn]] void fail(SourceSpan span, std::string message) {
    lex.fail(span, std::move(message));
  }

  Token eat() {
    Token t = tok;
    tok = lex.next();
    return t;
  }

  Token expect(Tok kind, const char* what) {
    if (tok.kind != kind) fail(tok.span, std::string("expected ") + what);
    return eat();
  }

  Var parse_var() {
    Token t = expect(Tok::Ident, "a variable");
    return Var{t.text, t.sort};
  }

  // term := var | `<` var `,` var `>`
  std::pair<Term, SourceSpan> parse_term() {
    if (tok.kind == Tok::Lt) {
      Token open = eat();
      Var left = parse_var();
      expect(Tok::Comma, "','");
      Var right = parse_var();
      Token close = expect(Tok::Gt, "'>'");
      SourceSpan span{open.span.start, close.span.end};
      if (left.sort != 0 || right.sort != 0)
        fail(span, "pair components must be sort-0 variables");
      return {tpair(std::move(left), std::move(right)), span};
    }
    Token t = expect(Tok::Ident, "a term");
    return {tvar(Var{t.text, t.sort}), t.span};
  }

  FormulaPtr parse_atom() {
    auto [lhs, lspan] = parse_term();
    bool is_eq;
    if (tok.kind == Tok::Eq) {
      is_eq = true;
    } else if (tok.kind == Tok::In) {
      is_eq = false;
    } else {
      fail(tok.span, "expected '=' or 'in' after a term");
    }
    eat();
    auto [rhs, rspan] = parse_term();
    SourceSpan span{lspan.start, rspan.end};
    try {
      return matom(is_eq ? aeq(std::move(lhs), std::move(rhs))
                         : ain(std::move(lhs), std::move(rhs)));
    } catch (const SortError& e) {
      fail(span, e.what());
    }
  }

  FormulaPtr parse_primary() {
    if (tok.kind == Tok::LParen) {
      eat();
      FormulaPtr f = parse_formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (tok.kind == Tok::Forall) {
      Token kw = eat();
      std::vector<Var> bound;
      bound.push_back(parse_var());
      while (tok.kind == Tok::Comma) {
        eat();
        bound.push_back(parse_var());
      }
      expect(Tok::Dot, "'.' after the quantifier prefix");
      FormulaPtr body = parse_formula(); // maximal scope
      try {
        return mforall(std::move(bound), std::move(body));
      } catch (const SortError& e) {
        fail(kw.span, e.what());
      }
    }
    return parse_atom();
  }

  FormulaPtr parse_unary() {
    if (tok.kind == Tok::Tilde) {
      eat();
      return mnot(parse_unary());
    }
    return parse_primary();
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_unary();
    while (tok.kind == Tok::Amp) {
      eat();
      f = mand(std::move(f), parse_unary());
    }
    return f;
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (tok.kind == Tok::Pipe) {
      eat();
      f = mor(std::move(f), parse_and());
    }
    return f;
  }

  FormulaPtr parse_impl() {
    FormulaPtr f = parse_or();
    if (tok.kind == Tok::Arrow) {
      eat();
      return mimpl(std::move(f), parse_impl());
    }
    return f;
  }

  FormulaPtr parse_formula() {
    FormulaPtr f = parse_impl();
    if (tok.kind == Tok::Iff) {
      eat();
      return miff(std::move(f), parse_formula());
    }
    return f;
  }

  FormulaPtr parse_whole() {
    FormulaPtr f = parse_formula();
    if (tok.kind != Tok::End) fail(tok.span, "unexpected trailing input");
    return f;
  }
};

} // namespace

ParseResult parse(std::string_view text) {
  ParseResult result;
  try {
    Parser p(text, result.diagnostics);
    result.formula = p.parse_whole();
  } catch (const ParseAbort&) {
    result.formula = nullptr; // diagnostic already recorded
  }
  return result;
}

FormulaPtr must_parse(std::string_view text) {
  ParseResult r = parse(text);
  if (!r.ok())
    throw std::runtime_error("parse error: " + (r.diagnostics.empty()
                                                    ? std::string("unknown")
                                                    : r.diagnostics[0].message));
  return r.formula;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// Binding strength used for parenthesization; higher binds tighter.
int prec(FKind k) {
  switch (k) {
    case FKind::Forall: return 0;
    case FKind::Or: return 2;
    case FKind::And: return 3;
    case FKind::Not: return 4;
    case FKind::Atom: return 5;
  }
  return 5;
}

void render(const FormulaPtr& f, std::string& out);

void render_child(const FormulaPtr& child, int parent_prec, bool is_right,
                  std::string& out) {
  int cp = prec(child->kind);
  bool parens = cp < parent_prec || (cp == parent_prec && is_right);
  if (parens) out += '(';
  render(child, out);
  if (parens) out += ')';
}

void render(const FormulaPtr& f, std::string& out) {
  switch (f->kind) {
    case FKind::Atom: {
      const Atom& a = *f->atom;
      out += term_display(a.lhs);
      out += a.kind == AtomKind::Eq ? " = " : " in ";
      out += term_display(a.rhs);
      return;
    }
    case FKind::Not:
      out += '~';
      // ~ applies to a primary; its operand needs parens unless it is
      // another negation or an atom.
      if (f->a->kind == FKind::Not || f->a->kind == FKind::Atom) {
        render(f->a, out);
      } else {
        out += '(';
        render(f->a, out);
        out += ')';
      }
      return;
    case FKind::And:
      render_child(f->a, prec(FKind::And), false, out);
      out += " & ";
      render_child(f->b, prec(FKind::And), true, out);
      return;
    case FKind::Or:
      render_child(f->a, prec(FKind::Or), false, out);
      out += " | ";
      render_child(f->b, prec(FKind::Or), true, out);
      return;
    case FKind::Forall: {
      out += "forall ";
      for (std::size_t i = 0; i < f->bound.size(); ++i) {
        if (i) out += ',';
        out += var_display(f->bound[i]);
      }
      out += " . ";
      render(f->a, out); // maximal scope, never needs parens
      return;
    }
  }
}

} // namespace

std::string print(const FormulaPtr& f) {
  std::string out;
  render(f, out);
  return out;
}

} // namespace syllog
