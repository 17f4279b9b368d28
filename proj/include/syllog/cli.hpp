// Command-line surface tying the toolkit together for batch use: fragment
// checking, normalization, the brute-force oracle, the h-fragment decision
// procedure, schema emission, the K45 translation pipeline, and the
// small-model audit.
//
// Exit codes are the machine contract:
//   0  SAT / accepted
//   1  UNSAT / rejected (including fragment violations)
//   2  capped / unknown (a budget or cap truncated the search)
//   3  usage or parse error
//
// `--json` switches the human text on stdout to JSON; diagnostics always go
// to stderr. File arguments accept "-" for stdin.

#pragma once

#include <iosfwd>

namespace syllog {

// Runs one invocation: argv[0] is the program name, argv[1] the subcommand.
// All output is written to the given streams, so tests can drive the CLI
// in-process. Returns the exit code described above.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

} // namespace syllog
