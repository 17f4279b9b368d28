#pragma once

// Concrete text syntax for formulae and finite-model certificates.
//
// Formula grammar (one formula per file, `#` starts a line comment):
//
//   formula  := iff
//   iff      := impl (`<->` iff)?                    right-associative
//   impl     := or (`->` impl)?                      right-associative
//   or       := and (`|` and)*
//   and      := unary (`&` unary)*
//   unary    := `~` unary | primary
//   primary  := `(` formula `)` | `forall` var(`,`var)* `.` formula | atom
//   atom     := term `=` term | term `in` var
//   term     := var | `<` var `,` var `>`
//   var      := ident (`^` 1|2|3)?                   bare idents are sort 0
//
// `forall` extends as far right as possible. Precedence is ~ > & > | > ->
// > <->. `->` and `<->` are desugared at parse time (A -> B becomes ~A | B),
// so printed output never contains them.

#include <string>
#include <string_view>
#include <vector>

#include "syllog/core.hpp"

namespace syllog {

struct SourceSpan {
  std::size_t start = 0; // byte offsets into the input, start <= end
  std::size_t end = 0;
};

struct ParseDiagnostic {
  SourceSpan span;
  std::string message;
  enum Severity { Error, Warning } severity = Error;
};

struct ParseResult {
  FormulaPtr formula; // null iff there is at least one error diagnostic
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return formula != nullptr; }
};

ParseResult parse(std::string_view text);

// Renders with minimal parentheses; output reparses to a structurally
// identical formula.
std::string print(const FormulaPtr& f);

// Convenience for programmatic construction sites that feed known-good
// text; throws std::runtime_error carrying the first diagnostic.
FormulaPtr must_parse(std::string_view text);

// ---------------------------------------------------------------------------
// Model certificates
// ---------------------------------------------------------------------------

// Malformed model document (empty domain, non-hereditary set, unknown sort
// suffix, nesting depth not matching the variable sort, ...).
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSON schema: {"domain":["name",...],
//               "assign":{"x":"name", "X^1":["name",...],
//                          "X^2":[[...],...], "X^3":[[[...]],...]}}
// Element ids are assigned by domain order; nesting depth must equal the
// variable's sort. Sets are canonicalized (sorted, deduplicated) on load.
Interpretation parse_model(const std::string& json_text);
std::string print_model(const Interpretation& interp);

} // namespace syllog
