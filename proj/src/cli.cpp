#include "syllog/cli.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "syllog/builders.hpp"
#include "syllog/core.hpp"
#include "syllog/fragment.hpp"
#include "syllog/modal.hpp"
#include "syllog/normalize.hpp"
#include "syllog/smallmodel.hpp"
#include "syllog/solver.hpp"
#include "syllog/syntax.hpp"

namespace syllog {

namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::SAT: return 0;
    case SolveStatus::UNSAT: return 1;
    case SolveStatus::CAPPED: return 2;
  }
  return 3;
}

// Whole file, or stdin when path is "-".
std::optional<std::string> read_text(const std::string& path,
                                     std::ostream& err) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot open '" << path << "'\n";
    return std::nullopt;
  }
  buf << in.rdbuf();
  return buf.str();
}

// Null iff the text has parse errors; diagnostics go to err either way.
FormulaPtr parse_or_report(const std::string& path, const std::string& text,
                           std::ostream& err) {
  ParseResult pr = parse(text);
  for (const ParseDiagnostic& d : pr.diagnostics)
    err << path << ":" << d.span.start << ": "
        << (d.severity == ParseDiagnostic::Error ? "error" : "warning") << ": "
        << d.message << "\n";
  return pr.formula;
}

// The modal lexer has no comment syntax of its own, so the CLI strips
// '#'-to-end-of-line before handing the text over.
std::string strip_hash_comments(const std::string& text) {
  std::string r;
  r.reserve(text.size());
  bool in_comment = false;
  for (char c : text) {
    if (c == '\n') in_comment = false;
    if (c == '#') in_comment = true;
    if (!in_comment) r.push_back(c);
  }
  return r;
}

void report_fragment_diags(const std::vector<FragmentDiagnostic>& diags,
                           std::ostream& err) {
  for (const FragmentDiagnostic& d : diags) {
    err << d.rule << " at /";
    for (std::size_t i = 0; i < d.path.size(); ++i)
      err << (i ? "/" : "") << d.path[i];
    err << ": " << d.message << "\n";
  }
}

// "name" takes the slot's default sort; "name^k" picks k explicitly.
// default_sort -1 means the token must carry an explicit sort.
std::optional<Var> parse_var_token(const std::string& tok, int default_sort,
                                   std::ostream& err) {
  std::string name = tok;
  int sort = default_sort;
  auto caret = tok.rfind('^');
  if (caret != std::string::npos) {
    std::string suffix = tok.substr(caret + 1);
    if (suffix.size() != 1 || suffix[0] < '0' || suffix[0] > '3') {
      err << "error: bad sort suffix in '" << tok << "' (use ^0..^3)\n";
      return std::nullopt;
    }
    sort = suffix[0] - '0';
    name = tok.substr(0, caret);
  } else if (default_sort < 0) {
    err << "error: '" << tok << "' needs an explicit sort (name^k)\n";
    return std::nullopt;
  }
  if (name.empty()) {
    err << "error: empty variable name in '" << tok << "'\n";
    return std::nullopt;
  }
  return Var{name, sort};
}

DesignatedNames names_from(const std::string& u, const std::string& b2,
                           const std::string& b3) {
  DesignatedNames n;
  if (!u.empty()) n.universe = Var{u, 1};
  if (!b2.empty()) n.bounded2 = Var{b2, 2};
  if (!b3.empty()) n.bounded3 = Var{b3, 3};
  return n;
}

void print_verdict(const Verdict& v, bool json_mode, std::ostream& out) {
  if (json_mode) {
    out << verdict_json(v) << "\n";
    return;
  }
  out << to_string(v.status) << "\n";
  if (v.model) out << print_model(*v.model) << "\n";
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

int cmd_check(const std::string& path, int h, const DesignatedNames& names,
              bool json_mode, std::ostream& out, std::ostream& err) {
  auto text = read_text(path, err);
  if (!text) return 3;
  FormulaPtr f = parse_or_report(path, *text, err);
  if (!f) return 3;

  bool ok;
  std::vector<FragmentDiagnostic> diags;
  if (h == 0) {
    ok = is_4lqsr(f, &diags);
  } else {
    if (h < 2) {
      err << "error: --h must be at least 2\n";
      return 3;
    }
    DecomposeResult dr = decompose_h(f, h, names);
    ok = dr.ok();
    diags = dr.diagnostics;
  }

  if (json_mode) {
    json doc;
    doc["accepted"] = ok;
    if (h != 0) doc["h"] = h;
    doc["diagnostics"] = json::parse(diagnostics_json(diags));
    out << doc.dump() << "\n";
  } else {
    out << (ok ? "accepted" : "rejected") << "\n";
    report_fragment_diags(diags, err);
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// normalize
// ---------------------------------------------------------------------------

int cmd_normalize(const std::string& path, long limit, bool json_mode,
                  std::ostream& out, std::ostream& err) {
  auto text = read_text(path, err);
  if (!text) return 3;
  FormulaPtr f = parse_or_report(path, *text, err);
  if (!f) return 3;

  NormalizeCursor cur(f);
  std::vector<NormalizedConjunction> branches;
  bool truncated = false;
  for (; !cur.done(); cur.advance()) {
    if (static_cast<long>(branches.size()) == limit) {
      truncated = true;
      break;
    }
    branches.push_back(cur.current());
  }

  if (json_mode) {
    json bs = json::array();
    for (const NormalizedConjunction& nc : branches) {
      json lits = json::array();
      for (const FormulaPtr& l : nc.literals) lits.push_back(print(l));
      json fresh = json::array();
      for (const Var& v : nc.fresh_vars) fresh.push_back(var_display(v));
      bs.push_back(json{{"literals", lits}, {"fresh_vars", fresh}});
    }
    out << json{{"branches", bs}, {"truncated", truncated}}.dump() << "\n";
  } else {
    for (std::size_t i = 0; i < branches.size(); ++i) {
      out << "branch " << i << ":\n";
      for (const FormulaPtr& l : branches[i].literals)
        out << "  " << print(l) << "\n";
      if (!branches[i].fresh_vars.empty()) {
        out << "  fresh:";
        for (const Var& v : branches[i].fresh_vars)
          out << " " << var_display(v);
        out << "\n";
      }
    }
    if (truncated) out << "(truncated at " << limit << " branches)\n";
  }
  return truncated ? 2 : 0;
}

// ---------------------------------------------------------------------------
// solve / solve-h
// ---------------------------------------------------------------------------

int cmd_solve(const std::string& path, int max_domain, int member_cap,
              bool no_caps, bool json_mode, std::ostream& out,
              std::ostream& err) {
  auto text = read_text(path, err);
  if (!text) return 3;
  FormulaPtr f = parse_or_report(path, *text, err);
  if (!f) return 3;

  OracleOptions opts;
  opts.member_cap2 = member_cap;
  opts.member_cap3 = member_cap;
  opts.no_caps = no_caps;
  Verdict v = oracle_sat(f, max_domain, opts);
  print_verdict(v, json_mode, out);
  return exit_code(v.status);
}

int cmd_solve_h(const std::string& path, int h, int sat_cap, bool full_bound,
                int jobs, const DesignatedNames& names, bool json_mode,
                std::ostream& out, std::ostream& err) {
  auto text = read_text(path, err);
  if (!text) return 3;
  FormulaPtr f = parse_or_report(path, *text, err);
  if (!f) return 3;
  if (h < 2) {
    err << "error: --h must be at least 2\n";
    return 3;
  }

  SolveHOptions opts;
  opts.sat_cap = sat_cap;
  opts.full_bound = full_bound;
  opts.jobs = jobs;
  opts.names = names;
  Verdict v = solve_h(f, h, opts);
  print_verdict(v, json_mode, out);
  return exit_code(v.status);
}

// ---------------------------------------------------------------------------
// emit
// ---------------------------------------------------------------------------

int cmd_emit(bool list, const std::string& kind,
             const std::vector<std::string>& toks, int h,
             const std::string& body_path, bool json_mode, std::ostream& out,
             std::ostream& err) {
  if (list) {
    for (RelationProperty p : all_relation_properties())
      out << to_string(p) << "\n";
    for (BoolOpKind k : all_bool_ops()) out << to_string(k) << "\n";
    out << "inverse\npow\nunordered-product\npow-star\nset-former\n";
    return 0;
  }
  if (kind.empty()) {
    err << "error: give a schema kind or --list\n";
    return 3;
  }

  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (toks.size() >= lo && toks.size() <= hi) return true;
    err << "error: '" << kind << "' takes " << lo
        << (hi == lo ? "" : " or more") << " variable token(s), got "
        << toks.size() << "\n";
    return false;
  };
  auto tok = [&](std::size_t i, int def) {
    return parse_var_token(toks[i], def, err);
  };
  // First token sort-2, remaining tokens sort-1 factors.
  auto factor_list = [&](std::optional<Var>* head, std::vector<Var>* factors) {
    *head = tok(0, 2);
    if (!*head) return false;
    for (std::size_t i = 1; i < toks.size(); ++i) {
      auto f = tok(i, 1);
      if (!f) return false;
      factors->push_back(*f);
    }
    return true;
  };

  FormulaPtr f;
  if (auto rp = relation_property_from_string(kind)) {
    if (!arity(1, 1)) return 3;
    auto r = tok(0, 3);
    if (!r) return 3;
    f = relation_property(*rp, *r);
  } else if (auto bo = bool_op_from_string(kind)) {
    if (*bo == BoolOpKind::Complement) {
      if (!arity(2, 2)) return 3;
      auto o = tok(0, 3), l = tok(1, 3);
      if (!o || !l) return 3;
      f = boolean_op(*bo, *o, *l, *l); // rhs is ignored
    } else if (*bo == BoolOpKind::Inclusion) {
      if (!arity(2, 2)) return 3;
      auto l = tok(0, 3), r = tok(1, 3);
      if (!l || !r) return 3;
      f = boolean_op(*bo, *l, *l, *r); // out is ignored
    } else {
      if (!arity(3, 3)) return 3;
      auto o = tok(0, 3), l = tok(1, 3), r = tok(2, 3);
      if (!o || !l || !r) return 3;
      f = boolean_op(*bo, *o, *l, *r);
    }
  } else if (kind == "inverse") {
    if (!arity(2, 2)) return 3;
    auto r1 = tok(0, 3), r2 = tok(1, 3);
    if (!r1 || !r2) return 3;
    f = inverse_relation(*r1, *r2);
  } else if (kind == "pow") {
    if (!arity(2, 2)) return 3;
    auto x2 = tok(0, 2), x1 = tok(1, 1);
    if (!x2 || !x1) return 3;
    f = pow_lt_h(*x2, *x1, h);
  } else if (kind == "unordered-product" || kind == "pow-star") {
    if (!arity(2, static_cast<std::size_t>(-1))) return 3;
    std::optional<Var> head;
    std::vector<Var> factors;
    if (!factor_list(&head, &factors)) return 3;
    f = kind == "pow-star" ? pow_star(*head, factors)
                           : unordered_product(*head, factors);
  } else if (kind == "set-former") {
    if (!arity(2, 2)) return 3;
    auto target = parse_var_token(toks[0], -1, err); // sort is meaningful
    if (!target) return 3;
    auto member = tok(1, target->sort - 1);
    if (!member) return 3;
    if (body_path.empty()) {
      err << "error: set-former needs --body FILE\n";
      return 3;
    }
    auto btext = read_text(body_path, err);
    if (!btext) return 3;
    FormulaPtr body = parse_or_report(body_path, *btext, err);
    if (!body) return 3;
    f = set_former(*target, *member, body);
  } else {
    err << "error: unknown schema kind '" << kind << "' (try --list)\n";
    return 3;
  }

  if (json_mode)
    out << json{{"kind", kind}, {"formula", print(f)}}.dump() << "\n";
  else
    out << print(f) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// translate-k45 / solve-k45
// ---------------------------------------------------------------------------

ModalPtr parse_modal_file(const std::string& path, std::ostream& err) {
  auto text = read_text(path, err);
  if (!text) return nullptr;
  try {
    return parse_modal(strip_hash_comments(*text));
  } catch (const std::runtime_error& e) {
    err << path << ": " << e.what() << "\n";
    return nullptr;
  }
}

int cmd_translate_k45(const std::string& path, bool json_mode,
                      std::ostream& out, std::ostream& err) {
  ModalPtr mf = parse_modal_file(path, err);
  if (!mf) return 3;
  TranslationResult tr = translate_k45(mf);

  if (json_mode) {
    json letters = json::object();
    for (const auto& [i, v] : tr.letter_vars)
      letters["p" + std::to_string(i)] = var_display(v);
    json doc = {{"formula", print(tr.formula)},
                {"phi_var", var_display(tr.phi_var)},
                {"query_var", var_display(tr.query_var)},
                {"relation_var", var_display(tr.relation_var)},
                {"letter_vars", letters},
                {"subformula_defs", tr.tau_defs.size()},
                {"node_count", tr.formula->node_count}};
    out << doc.dump() << "\n";
  } else {
    out << print(tr.formula) << "\n";
  }
  return 0;
}

int cmd_solve_k45(const std::string& path, int sat_cap, bool full_bound,
                  int jobs, bool json_mode, std::ostream& out,
                  std::ostream& err) {
  ModalPtr mf = parse_modal_file(path, err);
  if (!mf) return 3;

  SolveHOptions opts;
  opts.sat_cap = sat_cap;
  opts.full_bound = full_bound;
  opts.jobs = jobs;
  ModalVerdict mv = decide_k45(mf, opts);

  if (json_mode) {
    json doc;
    doc["status"] = to_string(mv.verdict.status);
    doc["stats"] = {{"nodes", mv.verdict.stats.nodes},
                    {"max_domain", mv.verdict.stats.max_domain},
                    {"branches", mv.verdict.stats.branches}};
    if (mv.kripke) {
      json rel = json::array();
      for (const auto& [a, b] : mv.kripke->rel)
        rel.push_back(json::array({a, b}));
      json val = json::object();
      for (const auto& [letter, worlds] : mv.kripke->val) {
        json ws = json::array();
        for (int w : worlds) ws.push_back(w);
        val["p" + std::to_string(letter)] = ws;
      }
      doc["kripke"] = {{"worlds", mv.kripke->worlds},
                       {"rel", rel},
                       {"val", val},
                       {"world", mv.world}};
    }
    out << doc.dump() << "\n";
  } else {
    out << to_string(mv.verdict.status) << "\n";
    if (mv.kripke) {
      out << "worlds: " << mv.kripke->worlds << "\n";
      out << "rel:";
      for (const auto& [a, b] : mv.kripke->rel)
        out << " (" << a << "," << b << ")";
      out << "\n";
      for (const auto& [letter, worlds] : mv.kripke->val) {
        out << "p" << letter << ":";
        for (int w : worlds) out << " " << w;
        out << "\n";
      }
      out << "query world: " << mv.world << "\n";
    }
  }
  return exit_code(mv.verdict.status);
}

// ---------------------------------------------------------------------------
// artifacts
// ---------------------------------------------------------------------------

// Candidate values for an unassigned variable, drawn from the model domain.
// Empty result: the space is too large to even materialize (sort-3 values
// over a pool with more subsets than any search budget tolerates).
std::vector<HSet> set_candidates(const std::vector<int>& domain, int sort) {
  std::vector<HSet> level1 = enumerate_level1(domain);
  if (sort == 1) return level1;
  std::vector<HSet> level2 = enumerate_subsets(2, level1);
  if (sort == 2) return level2;
  if (level2.size() > 17) return {};
  return enumerate_subsets(3, level2);
}

bool satisfies_all(const Interpretation& m,
                   const std::vector<FormulaPtr>& lits) {
  for (const FormulaPtr& l : lits)
    if (!eval(m, l)) return false;
  return true;
}

// Extends `model` over nc.fresh_vars (the witnesses normalization introduced
// for negated universals) so every literal holds, by brute force over values
// from the model's domain. Sets *capped when the candidate space is too
// large to search instead of failing silently.
bool extend_over_fresh(Interpretation& model, const NormalizedConjunction& nc,
                       bool* capped) {
  if (nc.fresh_vars.empty()) return satisfies_all(model, nc.literals);

  const long long kExtendBudget = 200'000;
  std::vector<std::vector<HSet>> sets;   // per fresh var of sort >= 1
  std::vector<const Var*> set_vars, elem_vars;
  long long space = 1;
  for (const Var& v : nc.fresh_vars) {
    if (v.sort == 0) {
      if (model.domain.empty()) return false;
      elem_vars.push_back(&v);
      space *= static_cast<long long>(model.domain.size());
    } else {
      set_vars.push_back(&v);
      sets.push_back(set_candidates(model.domain, v.sort));
      if (sets.back().empty()) {
        *capped = true;
        return false;
      }
      space *= static_cast<long long>(sets.back().size());
    }
    if (space > kExtendBudget) {
      *capped = true;
      return false;
    }
  }

  // Odometer over element choices then set choices.
  std::vector<std::size_t> epos(elem_vars.size(), 0), spos(set_vars.size(), 0);
  for (;;) {
    for (std::size_t i = 0; i < elem_vars.size(); ++i)
      model.assign0[*elem_vars[i]] = model.domain[epos[i]];
    for (std::size_t i = 0; i < set_vars.size(); ++i) {
      auto it = model.assign.find(*set_vars[i]);
      if (it == model.assign.end())
        model.assign.emplace(*set_vars[i], sets[i][spos[i]]);
      else
        it->second = sets[i][spos[i]];
    }
    if (satisfies_all(model, nc.literals)) return true;

    std::size_t k = 0;
    for (; k < epos.size(); ++k) {
      if (++epos[k] < model.domain.size()) break;
      epos[k] = 0;
    }
    if (k < epos.size()) continue;
    for (k = 0; k < spos.size(); ++k) {
      if (++spos[k] < sets[k].size()) break;
      spos[k] = 0;
    }
    if (k == spos.size()) return false;
  }
}

struct AuditReport {
  int code = 1;
  json doc;
  std::string artifacts_text; // artifacts_json when an audit ran
  std::vector<std::string> notes;
};

// One audit: find a normalized branch the model satisfies (extending it over
// the branch's witnesses), run the small-model pipeline, and re-check the
// relativized model.
AuditReport audit_model(const FormulaPtr& f, const Interpretation& model) {
  AuditReport rep;
  NormalizeCursor cur(f);

  const long kBranchCap = 64;
  bool any_capped = false;
  long tried = 0, branch_idx = -1;
  Interpretation chosen;
  NormalizedConjunction nc;
  for (; !cur.done(); cur.advance()) {
    if (tried == kBranchCap) {
      any_capped = true;
      break;
    }
    Interpretation ext = model;
    bool capped = false;
    if (extend_over_fresh(ext, cur.current(), &capped)) {
      nc = cur.current();
      chosen = std::move(ext);
      branch_idx = tried;
      break;
    }
    if (capped) any_capped = true;
    ++tried;
  }

  if (branch_idx < 0) {
    rep.code = any_capped ? 2 : 1;
    const char* status = any_capped ? "capped" : "unsatisfied";
    rep.doc = json{{"status", status}};
    rep.notes.push_back(
        any_capped ? "audit capped: some branch was too large to check"
                   : "model does not satisfy any normalized branch");
    return rep;
  }

  SizeBudget budget = compute_bound(nc);
  UniverseArtifacts arts = build_universe(chosen, nc);
  Interpretation rel = relativize(chosen, arts, default_dstar_pick(arts),
                                  arts.v1_free, arts.V1F, arts.v2_free);
  std::vector<std::string> pdiags;
  bool props = verify_properties_abc(chosen, arts, &pdiags);
  bool sat_after = satisfies_all(rel, nc.literals);
  bool within = static_cast<long long>(arts.Dstar.size()) <= budget.bound;
  bool ok = props && sat_after && within;

  rep.code = ok ? 0 : 1;
  rep.artifacts_text = artifacts_json(arts, chosen);
  rep.doc = json{{"status", ok ? "ok" : "failed"},
                 {"branch", branch_idx},
                 {"bound", budget.bound},
                 {"dstar_size", arts.Dstar.size()},
                 {"within_bound", within},
                 {"properties_ok", props},
                 {"property_diagnostics", pdiags},
                 {"relativized_satisfies", sat_after},
                 {"artifacts", json::parse(rep.artifacts_text)},
                 {"relativized_model", json::parse(print_model(rel))}};

  std::ostringstream line;
  line << "branch " << branch_idx << ": satisfied ("
       << nc.fresh_vars.size() << " witness variable(s) assigned)";
  rep.notes.push_back(line.str());
  line.str("");
  line << "bound: " << budget.bound << "  |D*|: " << arts.Dstar.size()
       << "  within bound: " << (within ? "yes" : "NO");
  rep.notes.push_back(line.str());
  rep.notes.push_back(std::string("separation properties: ") +
                      (props ? "ok" : "FAILED"));
  for (const std::string& d : pdiags) rep.notes.push_back("  " + d);
  rep.notes.push_back(std::string("relativized model satisfies: ") +
                      (sat_after ? "yes" : "NO"));
  return rep;
}

int report_audit(const AuditReport& rep, const std::string& emit_path,
                 bool json_mode, std::ostream& out, std::ostream& err) {
  if (!emit_path.empty() && !rep.artifacts_text.empty()) {
    std::ofstream of(emit_path, std::ios::binary);
    if (!of) {
      err << "error: cannot write '" << emit_path << "'\n";
      return 3;
    }
    of << rep.artifacts_text << "\n";
  }
  if (json_mode) {
    out << rep.doc.dump() << "\n";
  } else {
    for (const std::string& n : rep.notes) out << n << "\n";
    if (!rep.artifacts_text.empty()) out << rep.artifacts_text << "\n";
  }
  return rep.code;
}

int cmd_artifacts_single(const std::string& path, const std::string& model_path,
                         int max_domain, int member_cap, bool no_caps,
                         const std::string& emit_path, bool json_mode,
                         std::ostream& out, std::ostream& err) {
  auto text = read_text(path, err);
  if (!text) return 3;
  FormulaPtr f = parse_or_report(path, *text, err);
  if (!f) return 3;

  Interpretation model;
  if (!model_path.empty()) {
    auto mtext = read_text(model_path, err);
    if (!mtext) return 3;
    model = parse_model(*mtext);
  } else {
    OracleOptions opts;
    opts.member_cap2 = member_cap;
    opts.member_cap3 = member_cap;
    opts.no_caps = no_caps;
    Verdict v = oracle_sat(f, max_domain, opts);
    if (v.status != SolveStatus::SAT) {
      err << "no source model: oracle returned " << to_string(v.status)
          << "\n";
      if (json_mode)
        out << json{{"status", v.status == SolveStatus::UNSAT ? "unsat"
                                                              : "capped"}}
                   .dump()
            << "\n";
      return exit_code(v.status);
    }
    model = std::move(*v.model);
  }

  return report_audit(audit_model(f, model), emit_path, json_mode, out, err);
}

// A quantifier-free conjunction with occasional level-1 universals and
// negated universals, over a fixed small variable pool; every output is in
// the fragment by construction.
FormulaPtr random_conjunction(std::mt19937& rng) {
  const Var x{"x", 0}, y{"y", 0}, X{"X", 1}, Y{"Y", 1}, S{"S", 2};
  auto pick = [&](int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
  };
  std::vector<FormulaPtr> lits;
  int n = 2 + pick(4);
  for (int i = 0; i < n; ++i) {
    FormulaPtr a;
    switch (pick(6)) {
      case 0: a = matom(aeq(tvar(x), tvar(y))); break;
      case 1:
        a = matom(ain(tvar(pick(2) ? x : y), tvar(pick(2) ? X : Y)));
        break;
      case 2: a = matom(aeq(tvar(X), tvar(Y))); break;
      case 3: a = matom(ain(tvar(pick(2) ? X : Y), tvar(S))); break;
      case 4: a = matom(aeq(tpair(x, y), tvar(S))); break;
      default: {
        Var z{"z", 0};
        a = mforall({z}, mor(mnot(matom(ain(tvar(z), tvar(X)))),
                             matom(ain(tvar(z), tvar(Y)))));
        break;
      }
    }
    if (pick(3) == 0) a = mnot(a);
    lits.push_back(a);
  }
  return mand_all(lits);
}

int cmd_artifacts_random(int count, unsigned seed, int max_domain,
                         int member_cap, bool no_caps, bool json_mode,
                         std::ostream& out, std::ostream& err) {
  std::mt19937 rng(seed);
  int ok = 0, failed = 0, unsat = 0, capped = 0;
  for (int i = 0; i < count; ++i) {
    FormulaPtr f = random_conjunction(rng);
    OracleOptions opts;
    opts.member_cap2 = member_cap;
    opts.member_cap3 = member_cap;
    opts.no_caps = no_caps;
    Verdict v = oracle_sat(f, max_domain, opts);
    if (v.status == SolveStatus::UNSAT) {
      ++unsat;
      continue;
    }
    if (v.status == SolveStatus::CAPPED) {
      ++capped;
      continue;
    }
    AuditReport rep = audit_model(f, *v.model);
    if (rep.code == 0) {
      ++ok;
    } else if (rep.code == 2) {
      ++capped;
    } else {
      ++failed;
      err << "failed: " << print(f) << "\n";
    }
  }

  if (json_mode)
    out << json{{"total", count}, {"seed", seed},       {"ok", ok},
                {"failed", failed}, {"unsat", unsat}, {"capped", capped}}
               .dump()
        << "\n";
  else
    out << "audited " << count << ": ok " << ok << ", failed " << failed
        << ", unsat " << unsat << ", capped " << capped << "\n";
  return failed > 0 ? 1 : capped > 0 ? 2 : 0;
}

} // namespace

// ---------------------------------------------------------------------------
// run_cli
// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"4LQS^R satisfiability toolkit", "syllog"};
  app.require_subcommand(1);
  // "--h" names the fragment level throughout, so help is "--help" only.
  app.set_help_flag("--help", "print this help and exit");
  auto subcommand = [&app](const char* name, const char* desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->set_help_flag("--help", "print this help and exit");
    return s;
  };

  std::string check_file, check_u, check_b2, check_b3;
  int check_h = 0;
  bool check_json = false;
  CLI::App* check =
      subcommand("check", "Fragment membership of a formula file");
  check->add_option("file", check_file, "formula file, - for stdin")
      ->required();
  check->add_option("--h", check_h,
                    "check the h-fragment decomposition for this h (>= 2)");
  check->add_option("--universe-var", check_u, "universe variable name");
  check->add_option("--b2-var", check_b2, "bounded sort-2 pool name");
  check->add_option("--b3-var", check_b3, "bounded sort-3 pool name");
  check->add_flag("--json", check_json, "JSON output");

  std::string norm_file;
  long norm_limit = 16;
  bool norm_json = false;
  CLI::App* normalize = subcommand(
      "normalize", "Normalized conjunctions of a formula, one per branch");
  normalize->add_option("file", norm_file, "formula file, - for stdin")
      ->required();
  normalize->add_option("--limit", norm_limit, "branch cap (default 16)")
      ->check(CLI::PositiveNumber);
  normalize->add_flag("--json", norm_json, "JSON output");

  std::string solve_file;
  int solve_max_domain = 3, solve_member_cap = 3;
  bool solve_no_caps = false, solve_json = false;
  CLI::App* solve =
      subcommand("solve", "Brute-force oracle over small domains");
  solve->add_option("file", solve_file, "formula file, - for stdin")
      ->required();
  solve->add_option("--max-domain", solve_max_domain,
                    "largest domain size tried (default 3)")
      ->check(CLI::PositiveNumber);
  solve->add_option("--member-cap", solve_member_cap,
                    "member cap for sort-2/3 values (default 3)")
      ->check(CLI::NonNegativeNumber);
  solve->add_flag("--no-caps", solve_no_caps,
                  "enumerate uncapped value spaces");
  solve->add_flag("--json", solve_json, "JSON output");

  std::string sh_file, sh_u, sh_b2, sh_b3;
  int sh_h = 2, sh_sat_cap = 6, sh_jobs = 1;
  bool sh_full = false, sh_json = false;
  CLI::App* solveh =
      subcommand("solve-h", "Decision procedure for the h-fragment");
  solveh->add_option("file", sh_file, "formula file, - for stdin")->required();
  solveh->add_option("--h", sh_h, "fragment level (default 2)");
  solveh->add_option("--sat-cap", sh_sat_cap,
                     "largest universe searched for models (default 6)")
      ->check(CLI::PositiveNumber);
  solveh->add_flag("--i-know-this-is-huge", sh_full,
                   "search up to the full small-model bound");
  solveh->add_option("--jobs", sh_jobs, "worker threads (default 1)")
      ->check(CLI::PositiveNumber);
  solveh->add_option("--universe-var", sh_u, "universe variable name");
  solveh->add_option("--b2-var", sh_b2, "bounded sort-2 pool name");
  solveh->add_option("--b3-var", sh_b3, "bounded sort-3 pool name");
  solveh->add_flag("--json", sh_json, "JSON output");

  bool emit_list = false, emit_json = false;
  std::string emit_kind, emit_body;
  std::vector<std::string> emit_vars;
  int emit_h = 2;
  CLI::App* emit = subcommand("emit", "Emit a builder schema");
  emit->add_flag("--list", emit_list, "list schema kinds");
  emit->add_option("kind", emit_kind, "schema kind (see --list)");
  emit->add_option("vars", emit_vars,
                   "variable tokens name[^sort], sorts default per slot");
  emit->add_option("--h", emit_h, "cardinality bound for pow (default 2)");
  emit->add_option("--body", emit_body, "set-former body file");
  emit->add_flag("--json", emit_json, "JSON output");

  std::string tr_file;
  bool tr_json = false;
  CLI::App* translate = subcommand(
      "translate-k45", "Translate a modal formula into the h = 3 fragment");
  translate->add_option("file", tr_file, "modal formula file, - for stdin")
      ->required();
  translate->add_flag("--json", tr_json, "JSON output");

  std::string sk_file;
  int sk_sat_cap = 6, sk_jobs = 1;
  bool sk_full = false, sk_json = false;
  CLI::App* solvek =
      subcommand("solve-k45", "Decide a modal formula over K45");
  solvek->add_option("file", sk_file, "modal formula file, - for stdin")
      ->required();
  solvek->add_option("--sat-cap", sk_sat_cap,
                     "largest universe searched for models (default 6)")
      ->check(CLI::PositiveNumber);
  solvek->add_flag("--i-know-this-is-huge", sk_full,
                   "search up to the full small-model bound");
  solvek->add_option("--jobs", sk_jobs, "worker threads (default 1)")
      ->check(CLI::PositiveNumber);
  solvek->add_flag("--json", sk_json, "JSON output");

  std::string art_file, art_model, art_emit;
  int art_max_domain = 3, art_member_cap = 3, art_random = 0;
  unsigned art_seed = 0;
  bool art_no_caps = false, art_json = false;
  CLI::App* artifacts = subcommand(
      "artifacts", "Audit the small-model construction on a formula");
  artifacts->add_option("file", art_file, "formula file, - for stdin");
  artifacts->add_option("model", art_model,
                        "JSON model file (default: ask the oracle)");
  artifacts->add_option("--max-domain", art_max_domain,
                        "oracle domain cap (default 3)")
      ->check(CLI::PositiveNumber);
  artifacts->add_option("--member-cap", art_member_cap,
                        "oracle member cap (default 3)")
      ->check(CLI::NonNegativeNumber);
  artifacts->add_flag("--no-caps", art_no_caps, "uncapped oracle enumeration");
  artifacts->add_option("--random", art_random,
                        "audit this many generated conjunctions instead")
      ->check(CLI::NonNegativeNumber);
  artifacts->add_option("--seed", art_seed, "corpus generation seed");
  artifacts->add_option("--emit-artifacts", art_emit,
                        "write the artifacts JSON to this file");
  artifacts->add_flag("--json", art_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (check->parsed())
      return cmd_check(check_file, check_h,
                       names_from(check_u, check_b2, check_b3), check_json,
                       out, err);
    if (normalize->parsed())
      return cmd_normalize(norm_file, norm_limit, norm_json, out, err);
    if (solve->parsed())
      return cmd_solve(solve_file, solve_max_domain, solve_member_cap,
                       solve_no_caps, solve_json, out, err);
    if (solveh->parsed())
      return cmd_solve_h(sh_file, sh_h, sh_sat_cap, sh_full, sh_jobs,
                         names_from(sh_u, sh_b2, sh_b3), sh_json, out, err);
    if (emit->parsed())
      return cmd_emit(emit_list, emit_kind, emit_vars, emit_h, emit_body,
                      emit_json, out, err);
    if (translate->parsed())
      return cmd_translate_k45(tr_file, tr_json, out, err);
    if (solvek->parsed())
      return cmd_solve_k45(sk_file, sk_sat_cap, sk_full, sk_jobs, sk_json,
                           out, err);
    if (artifacts->parsed()) {
      if (art_random > 0 && !art_file.empty()) {
        err << "error: give a formula file or --random N, not both\n";
        return 3;
      }
      if (art_random <= 0 && art_file.empty()) {
        err << "error: give a formula file or --random N\n";
        return 3;
      }
      if (art_random > 0 && !art_emit.empty()) {
        err << "error: --emit-artifacts needs a single-file audit\n";
        return 3;
      }
      if (art_random > 0)
        return cmd_artifacts_random(art_random, art_seed, art_max_domain,
                                    art_member_cap, art_no_caps, art_json,
                                    out, err);
      return cmd_artifacts_single(art_file, art_model, art_max_domain,
                                  art_member_cap, art_no_caps, art_emit,
                                  art_json, out, err);
    }
  } catch (const FragmentError& e) {
    err << "rejected: " << e.what() << "\n";
    return 1;
  } catch (const CapacityError& e) {
    err << "capped: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}

} // namespace syllog
