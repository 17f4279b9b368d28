#include "syllog/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "syllog/builders.hpp"
#include "syllog/core.hpp"
#include "syllog/fragment.hpp"
#include "syllog/syntax.hpp"

using namespace syllog;
using nlohmann::json;

namespace {

// One in-process invocation: argv plus captured stdout/stderr.
struct CliRun {
  int code = -1;
  std::string out, err;
};

CliRun run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("syllog");
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Writes content to a unique temp file; removed on destruction.
struct TempFile {
  std::filesystem::path path;

  explicit TempFile(const std::string& content, const char* tag = "f") {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("syllog_cli_" + std::string(tag) + "_" +
            std::to_string(counter++) + ".txt");
    std::ofstream f(path);
    f << content;
  }
  ~TempFile() { std::filesystem::remove(path); }

  std::string str() const { return path.string(); }
};

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("cli rejects bad usage with exit 3") {
  CHECK(run({}).code == 3);
  CHECK(run({"no-such-command"}).code == 3);
  CHECK(run({"check"}).code == 3);           // missing file
  CHECK(run({"solve", "/no/such/file"}).code == 3);
  CHECK(run({"solve", "--max-domain", "0", "x"}).code == 3);
  CHECK(run({"emit"}).code == 3);            // no kind, no --list
  CHECK(run({"emit", "frobnicate", "R"}).code == 3);
  CHECK(run({"artifacts"}).code == 3);       // neither file nor --random

  CliRun help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(contains(help.out, "solve-k45"));
  CHECK(contains(help.out, "artifacts"));
}

TEST_CASE("cli check classifies formulae and emits diagnostics") {
  TempFile good("x = y & x in X^1");
  CliRun r = run({"check", good.str()});
  CHECK(r.code == 0);
  CHECK(r.out == "accepted\n");

  // A sort-1 prefix whose matrix negates an unlinked level-1 universal.
  TempFile bad("forall Z^1. ~(forall z. z in X^1)");
  r = run({"check", bad.str()});
  CHECK(r.code == 1);
  CHECK(r.out == "rejected\n");
  CHECK(contains(r.err, "RestrI"));

  r = run({"check", "--json", bad.str()});
  CHECK(r.code == 1);
  json doc = json::parse(r.out);
  CHECK(doc["accepted"] == false);
  REQUIRE(!doc["diagnostics"].empty());
  bool restr1 = false;
  for (const json& d : doc["diagnostics"]) restr1 |= d["rule"] == "RestrI";
  CHECK(restr1);

  TempFile garbled("x = = y");
  CHECK(run({"check", garbled.str()}).code == 3);
}

TEST_CASE("cli check --h accepts a shell and reads designated overrides") {
  FormulaPtr chi = matom(ain(tvar(Var{"x", 0}), tvar(Var{"X", 1})));
  TempFile shell(print(make_h_shell(chi, 2)));
  CHECK(run({"check", "--h", "2", shell.str()}).code == 0);
  CHECK(run({"check", "--h", "3", shell.str()}).code == 1); // wrong level
  CHECK(run({"check", "--h", "1", shell.str()}).code == 3);

  DesignatedNames names;
  names.universe = Var{"W", 1};
  TempFile renamed(print(make_h_shell(chi, 2, names)));
  CHECK(run({"check", "--h", "2", renamed.str()}).code == 1);
  CHECK(run({"check", "--h", "2", "--universe-var", "W", renamed.str()})
            .code == 0);
}

TEST_CASE("cli normalize lists branches and honors --limit") {
  TempFile f("(x = y | x in X^1) & ~(forall z. z in X^1)");
  CliRun r = run({"normalize", "--json", f.str()});
  CHECK(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["truncated"] == false);
  REQUIRE(doc["branches"].size() == 2);
  // Each branch carries the witness for the negated universal.
  for (const json& b : doc["branches"]) {
    CHECK(b["literals"].size() == 2);
    CHECK(b["fresh_vars"].size() == 1);
  }

  r = run({"normalize", "--limit", "1", f.str()});
  CHECK(r.code == 2);
  CHECK(contains(r.out, "truncated"));
  CHECK(contains(r.out, "branch 0:"));
  CHECK(!contains(r.out, "branch 1:"));

  TempFile bad("forall Z^2. ~(forall z. z in X^1)");
  r = run({"normalize", bad.str()});
  CHECK(r.code == 1);
  CHECK(contains(r.err, "rejected"));
}

TEST_CASE("cli solve maps verdicts to exit codes") {
  TempFile sat("x = x");
  CliRun r = run({"solve", "--json", sat.str()});
  CHECK(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["status"] == "SAT");
  CHECK(doc.contains("model"));
  CHECK(doc["stats"].contains("nodes"));

  TempFile unsat("~(x = x)");
  r = run({"solve", unsat.str()});
  CHECK(r.code == 1);
  CHECK(r.out == "UNSAT\n");

  // A free sort-3 variable makes the capped enumeration incomplete, so an
  // empty search is CAPPED rather than UNSAT; lifting the caps on a domain
  // of size 1 makes the space exhaustible again.
  TempFile unsat3("S^2 in R^3 & ~(x = x)");
  r = run({"solve", unsat3.str()});
  CHECK(r.code == 2);
  CHECK(r.out == "CAPPED\n");
  r = run({"solve", "--no-caps", "--max-domain", "1", unsat3.str()});
  CHECK(r.code == 1);
}

TEST_CASE("cli solve reads stdin when the file is -") {
  std::istringstream input("x = x & x in X^1");
  std::streambuf* saved = std::cin.rdbuf(input.rdbuf());
  CliRun r = run({"solve", "-"});
  std::cin.rdbuf(saved);
  CHECK(r.code == 0);
  CHECK(contains(r.out, "SAT"));
}

TEST_CASE("cli solve-h decides shelled formulae and rejects strays") {
  FormulaPtr chi = matom(ain(tvar(Var{"x", 0}), tvar(Var{"X", 1})));
  TempFile shelled(print(make_h_shell(chi, 2)));
  CliRun r = run({"solve-h", "--json", shelled.str()});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["status"] == "SAT");

  TempFile bare("x = y");
  r = run({"solve-h", bare.str()});
  CHECK(r.code == 1);
  CHECK(contains(r.err, "rejected"));

  CHECK(run({"solve-h", "--h", "1", shelled.str()}).code == 3);
}

TEST_CASE("cli emit prints schemas that match the builders") {
  CliRun listing = run({"emit", "--list"});
  CHECK(listing.code == 0);
  CHECK(contains(listing.out, "transitive"));
  CHECK(contains(listing.out, "pow-star"));
  CHECK(contains(listing.out, "set-former"));

  CliRun r = run({"emit", "transitive", "R"});
  CHECK(r.code == 0);
  CHECK(r.out == print(relation_property(RelationProperty::Transitive,
                                         Var{"R", 3})) +
                     "\n");

  r = run({"emit", "union", "T", "R", "S"});
  CHECK(r.code == 0);
  CHECK(r.out == print(boolean_op(BoolOpKind::Union, Var{"T", 3},
                                  Var{"R", 3}, Var{"S", 3})) +
                     "\n");

  r = run({"emit", "--json", "pow", "P", "A", "--h", "3"});
  CHECK(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["kind"] == "pow");
  CHECK(doc["formula"] == print(pow_lt_h(Var{"P", 2}, Var{"A", 1}, 3)));

  r = run({"emit", "unordered-product", "C", "A", "B"});
  CHECK(r.code == 0);
  CHECK(r.out == print(unordered_product(Var{"C", 2},
                                         {Var{"A", 1}, Var{"B", 1}})) +
                     "\n");

  TempFile body("z in A^1 & z in B^1");
  r = run({"emit", "set-former", "T^1", "z", "--body", body.str()});
  CHECK(r.code == 0);
  CHECK(r.out ==
        print(set_former(Var{"T", 1}, Var{"z", 0},
                         must_parse("z in A^1 & z in B^1"))) +
            "\n");

  // Usage slips: arity, missing explicit sort, missing body.
  CHECK(run({"emit", "transitive"}).code == 3);
  CHECK(run({"emit", "set-former", "T", "z", "--body", body.str()}).code == 3);
  CHECK(run({"emit", "set-former", "T^1", "z"}).code == 3);
  CHECK(run({"emit", "pow", "P", "A", "--h", "1"}).code == 3);
}

TEST_CASE("cli translate-k45 output round-trips through check --h 3") {
  TempFile modal("# query\n[]p1 & <>p2\n");
  CliRun tr = run({"translate-k45", "--json", modal.str()});
  CHECK(tr.code == 0);
  json doc = json::parse(tr.out);
  CHECK(doc["query_var"] == "x");
  CHECK(doc["relation_var"] == "XR^3");
  CHECK(doc["letter_vars"].size() == 2);
  CHECK(doc["subformula_defs"].get<int>() >= 2);

  TempFile dump(doc["formula"].get<std::string>());
  CHECK(run({"check", "--h", "3", dump.str()}).code == 0);
  CHECK(run({"check", dump.str()}).code == 0);

  TempFile broken("p1 &");
  CHECK(run({"translate-k45", broken.str()}).code == 3);
}

TEST_CASE("cli solve-k45 decides modal formulae") {
  TempFile contradiction("p1 & ~p1");
  CliRun r = run({"solve-k45", "--json", contradiction.str()});
  CHECK(r.code == 1);
  json doc = json::parse(r.out);
  CHECK(doc["status"] == "UNSAT");
  CHECK(!doc.contains("kripke"));

  TempFile sat("<>p1 & <>~p1");
  r = run({"solve-k45", "--json", sat.str()});
  CHECK(r.code == 0);
  doc = json::parse(r.out);
  CHECK(doc["status"] == "SAT");
  CHECK(doc["kripke"]["worlds"].get<int>() >= 2);
  CHECK(doc["kripke"].contains("rel"));
  CHECK(doc["kripke"]["val"].contains("p1"));

  TempFile letter("p1");
  r = run({"solve-k45", letter.str()});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "SAT"));
  CHECK(contains(r.out, "worlds: 1"));
}

TEST_CASE("cli artifacts audits a formula against an oracle model") {
  TempFile f("x in X^1 & ~(forall z. z in X^1)");
  TempFile sink("", "artifacts");
  CliRun r = run({"artifacts", "--json", "--emit-artifacts", sink.str(),
                  f.str()});
  CHECK(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["status"] == "ok");
  CHECK(doc["properties_ok"] == true);
  CHECK(doc["relativized_satisfies"] == true);
  CHECK(doc["within_bound"] == true);
  CHECK(doc["artifacts"].contains("Dstar"));

  std::ifstream emitted(sink.path);
  json arts = json::parse(emitted);
  CHECK(arts == doc["artifacts"]);

  TempFile unsat("~(x = x)");
  CHECK(run({"artifacts", unsat.str()}).code == 1);
}

TEST_CASE("cli artifacts accepts an explicit model file") {
  TempFile f("x in X^1");
  TempFile model(R"({"domain":["a","b"],"assign":{"x":"a","X^1":["a"]}})");
  CliRun r = run({"artifacts", "--json", f.str(), model.str()});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["status"] == "ok");

  // A model that does not satisfy the formula is reported, not crashed on.
  TempFile miss(R"({"domain":["a"],"assign":{"x":"a","X^1":[]}})");
  r = run({"artifacts", f.str(), miss.str()});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "branch"));

  TempFile junk("not json");
  CHECK(run({"artifacts", f.str(), junk.str()}).code == 3);
}

TEST_CASE("cli artifacts --random audits a deterministic corpus") {
  CliRun r = run({"artifacts", "--json", "--random", "8", "--seed", "7"});
  json doc = json::parse(r.out);
  CHECK(doc["total"] == 8);
  CHECK(doc["seed"] == 7);
  int accounted = doc["ok"].get<int>() + doc["failed"].get<int>() +
                  doc["unsat"].get<int>() + doc["capped"].get<int>();
  CHECK(accounted == 8);
  CHECK(doc["failed"] == 0);
  CHECK(doc["ok"].get<int>() >= 1);
  CHECK(r.code == (doc["capped"].get<int>() > 0 ? 2 : 0));

  CliRun again = run({"artifacts", "--json", "--random", "8", "--seed", "7"});
  CHECK(again.out == r.out);

  CHECK(run({"artifacts", "--random", "2", "x"}).code == 3);
  CHECK(run({"artifacts", "--random", "2", "--emit-artifacts", "x"}).code ==
        3);
}
