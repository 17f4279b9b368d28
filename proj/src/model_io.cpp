#include <map>

#include "json.hpp"
#include "syllog/syntax.hpp"

namespace syllog {

namespace {

using nlohmann::json;

// "x" -> sort 0, "X^1"/"X^2"/"X^3" -> sorts 1..3.
Var parse_var_key(const std::string& key) {
  auto caret = key.rfind('^');
  if (caret == std::string::npos) return Var{key, 0};
  std::string suffix = key.substr(caret + 1);
  if (suffix != "1" && suffix != "2" && suffix != "3")
    throw ModelError("unknown sort suffix in variable '" + key + "'");
  std::string name = key.substr(0, caret);
  if (name.empty()) throw ModelError("empty variable name in '" + key + "'");
  return Var{name, suffix[0] - '0'};
}

int elem_id(const std::map<std::string, int>& ids, const json& j) {
  if (!j.is_string())
    throw ModelError("expected a domain element name, got " + j.dump());
  auto it = ids.find(j.get<std::string>());
  if (it == ids.end())
    throw ModelError("element '" + j.get<std::string>() +
                     "' is not in the domain (sets must be hereditarily "
                     "over the domain)");
  return it->second;
}

HSet parse_hset(const std::map<std::string, int>& ids, const json& j,
                int level) {
  if (!j.is_array())
    throw ModelError("expected a level-" + std::to_string(level) +
                     " set (a JSON array), got " + j.dump());
  if (level == 1) {
    std::vector<int> elems;
    for (const json& e : j) elems.push_back(elem_id(ids, e));
    return HSet::make1(std::move(elems));
  }
  std::vector<HSet> members;
  for (const json& m : j) members.push_back(parse_hset(ids, m, level - 1));
  return HSet::make(level, std::move(members));
}

json hset_to_json(const Interpretation& interp, const HSet& s) {
  json out = json::array();
  if (s.level == 1) {
    for (int id : s.elems) out.push_back(interp.elem_name(id));
  } else {
    for (const HSet& m : s.members) out.push_back(hset_to_json(interp, m));
  }
  return out;
}

} // namespace

Interpretation parse_model(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("domain"))
    throw ModelError("model document must be an object with a 'domain' key");

  const json& dom = doc["domain"];
  if (!dom.is_array() || dom.empty()) throw ModelError("empty domain");

  Interpretation interp;
  std::map<std::string, int> ids;
  for (const json& name_j : dom) {
    if (!name_j.is_string())
      throw ModelError("domain elements must be strings");
    std::string name = name_j.get<std::string>();
    if (ids.count(name))
      throw ModelError("duplicate domain element '" + name + "'");
    int id = static_cast<int>(interp.elem_names.size());
    ids.emplace(name, id);
    interp.elem_names.push_back(std::move(name));
    interp.domain.push_back(id);
  }

  if (doc.contains("assign")) {
    const json& assign = doc["assign"];
    if (!assign.is_object())
      throw ModelError("'assign' must be an object keyed by variable");
    for (auto it = assign.begin(); it != assign.end(); ++it) {
      Var v = parse_var_key(it.key());
      if (v.sort == 0) {
        interp.assign0[v] = elem_id(ids, it.value());
      } else {
        interp.assign.emplace(v, parse_hset(ids, it.value(), v.sort));
      }
    }
  }
  return interp;
}

std::string print_model(const Interpretation& interp) {
  json doc;
  doc["domain"] = json::array();
  for (int id : interp.domain) doc["domain"].push_back(interp.elem_name(id));
  json assign = json::object();
  for (const auto& [v, id] : interp.assign0)
    assign[var_display(v)] = interp.elem_name(id);
  for (const auto& [v, s] : interp.assign)
    assign[var_display(v)] = hset_to_json(interp, s);
  doc["assign"] = std::move(assign);
  return doc.dump(2);
}

} // namespace syllog
