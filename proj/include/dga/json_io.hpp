#pragma once

#include <algorithm>
#include <array>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "dga/automaton.hpp"
#include "dga/graph.hpp"
#include "dga/guard.hpp"
#include "dga/language.hpp"
#include "dga/transforms.hpp"

namespace dga {
namespace io {

using json = nlohmann::ordered_json;

// ---- graphs ----

inline json graph_to_json(const LabeledGraph& g) {
  json j;
  j["sigma"] = g.sigma.symbols();
  j["gamma"] = g.gamma.symbols();
  json nodes = json::array();
  for (int v = 0; v < g.n; ++v)
    nodes.push_back(json{{"label", g.sigma.at(g.labels[v])}});
  j["nodes"] = nodes;
  json edges = json::object();
  for (int rel = 0; rel < g.gamma.size(); ++rel) {
    json list = json::array();
    for (int u = 0; u < g.n; ++u)
      for (int v = 0; v < g.n; ++v)
        if (g.has_edge(rel, u, v)) list.push_back(json::array({u, v}));
    edges[g.gamma.at(rel)] = list;
  }
  j["edges"] = edges;
  return j;
}

inline LabeledGraph graph_from_json(const json& j) {
  if (!j.is_object()) throw invalid_input("graph json must be an object");
  for (const char* key : {"sigma", "gamma", "nodes"})
    if (!j.contains(key))
      throw invalid_input(std::string("graph json misses ") + key);
  std::vector<std::string> sigma = j.at("sigma").get<std::vector<std::string>>();
  std::vector<std::string> gamma = j.at("gamma").get<std::vector<std::string>>();
  std::vector<std::string> labels;
  for (const json& node : j.at("nodes")) {
    if (!node.is_object() || !node.contains("label"))
      throw invalid_input("graph node entries need a label field");
    labels.push_back(node.at("label").get<std::string>());
  }
  std::vector<std::pair<std::string, std::pair<int, int>>> edges;
  if (j.contains("edges")) {
    if (!j.at("edges").is_object())
      throw invalid_input("graph edges must map relation names to pair lists");
    for (const auto& [rel, list] : j.at("edges").items()) {
      for (const json& e : list) {
        if (!e.is_array() || e.size() != 2)
          throw invalid_input("graph edge entries must be [u,v] pairs");
        edges.push_back({rel, {e[0].get<int>(), e[1].get<int>()}});
      }
    }
  }
  return make_graph(sigma, gamma, labels, edges);
}

// ---- accepting families ----

inline const char* card_token(CardRel rel) { return card_rel_token(rel); }

inline CardRel card_from_token(const std::string& tok) {
  if (tok == "<") return CardRel::lt;
  if (tok == "<=") return CardRel::le;
  if (tok == "=") return CardRel::eq;
  if (tok == ">=") return CardRel::ge;
  if (tok == ">") return CardRel::gt;
  throw invalid_input("unknown cardinality comparison " + tok);
}

inline json family_to_symbolic_json(const AcceptFamily& f) {
  using Op = AcceptFamily::Op;
  switch (f.op) {
    case Op::always: return json(true);
    case Op::never: return json(false);
    case Op::has: return json{{"has", f.state}};
    case Op::card:
      return json{{"card", json{{"cmp", card_token(f.cmp)}, {"bound", f.bound}}}};
    case Op::subset_of: return json{{"subset", f.subset}};
    case Op::explicit_list: {
      json sets = json::array();
      for (const auto& s : f.sets) sets.push_back(s);
      return sets;
    }
    case Op::complement:
      return json{{"not", family_to_symbolic_json(f.kids[0])}};
    case Op::conjunction:
    case Op::disjunction: {
      json kids = json::array();
      for (const auto& k : f.kids) kids.push_back(family_to_symbolic_json(k));
      return json{{f.op == Op::conjunction ? "all" : "any", kids}};
    }
    case Op::pair_proj: {
      json map = json::array();
      for (const auto& entry : f.pair_map)
        map.push_back(json::array({entry[0], entry[1], entry[2]}));
      return json{{"pairs",
                   json{{"mode", f.pmode == AcceptFamily::PairMode::both
                                     ? "both"
                                     : "either"},
                        {"map", map},
                        {"kids", json::array(
                                     {family_to_symbolic_json(f.kids[0]),
                                      family_to_symbolic_json(f.kids[1])})}}}};
    }
  }
  throw internal_error("unhandled accepting-family op");
}

/// Accepting families dump as the plain array-of-arrays form whenever the
/// permanent state count keeps the expansion small; richer families keep
/// their symbolic structure.
inline json family_to_json(const AcceptFamily& f,
                           const std::vector<std::string>& permanents) {
  if (f.op == AcceptFamily::Op::explicit_list || permanents.size() <= 10) {
    json sets = json::array();
    if (f.op == AcceptFamily::Op::explicit_list) {
      for (const auto& s : f.sets) sets.push_back(s);
    } else {
      for (const auto& s : f.materialize(permanents)) sets.push_back(s);
    }
    return sets;
  }
  return family_to_symbolic_json(f);
}

inline AcceptFamily family_from_json(const json& j) {
  if (j.is_boolean())
    return j.get<bool>() ? AcceptFamily::always() : AcceptFamily::never();
  if (j.is_array()) {
    std::vector<std::vector<std::string>> sets;
    for (const json& s : j) {
      std::vector<std::string> names = s.get<std::vector<std::string>>();
      std::sort(names.begin(), names.end());
      names.erase(std::unique(names.begin(), names.end()), names.end());
      sets.push_back(std::move(names));
    }
    return AcceptFamily::explicit_list(std::move(sets));
  }
  if (!j.is_object() || j.size() != 1)
    throw invalid_input("accepting family json must be an array, boolean, or "
                        "single-key object");
  const std::string key = j.begin().key();
  const json& val = j.begin().value();
  if (key == "has") return AcceptFamily::has(val.get<std::string>());
  if (key == "card")
    return AcceptFamily::card(card_from_token(val.at("cmp").get<std::string>()),
                              val.at("bound").get<int>());
  if (key == "subset") {
    std::vector<std::string> names = val.get<std::vector<std::string>>();
    std::sort(names.begin(), names.end());
    return AcceptFamily::subset_of(std::move(names));
  }
  if (key == "not") return AcceptFamily::complement(family_from_json(val));
  if (key == "all" || key == "any") {
    std::vector<AcceptFamily> kids;
    for (const json& k : val) kids.push_back(family_from_json(k));
    return key == "all" ? AcceptFamily::conjunction(std::move(kids))
                        : AcceptFamily::disjunction(std::move(kids));
  }
  if (key == "pairs") {
    std::vector<std::array<std::string, 3>> map;
    for (const json& e : val.at("map")) {
      if (!e.is_array() || e.size() != 3)
        throw invalid_input("pair map entries must be [pair,left,right]");
      map.push_back({e[0].get<std::string>(), e[1].get<std::string>(),
                     e[2].get<std::string>()});
    }
    std::string mode = val.at("mode").get<std::string>();
    if (mode != "both" && mode != "either")
      throw invalid_input("pair mode must be both or either");
    const json& kids = val.at("kids");
    if (!kids.is_array() || kids.size() != 2)
      throw invalid_input("pair families need exactly two component families");
    return AcceptFamily::pair_proj(mode == "both"
                                       ? AcceptFamily::PairMode::both
                                       : AcceptFamily::PairMode::either,
                                   std::move(map), family_from_json(kids[0]),
                                   family_from_json(kids[1]));
  }
  throw invalid_input("unknown accepting family key " + key);
}

// ---- automata ----

inline json automaton_to_json(const Automaton& a) {
  json j;
  j["sigma"] = a.sigma.symbols();
  j["gamma"] = a.gamma.symbols();
  json states = json::array();
  for (const State& s : a.states)
    states.push_back(json{{"name", s.name},
                          {"kind", std::string(1, kind_letter(s.kind))}});
  j["states"] = states;
  json init = json::object();
  for (int s = 0; s < a.sigma.size(); ++s)
    init[a.sigma.at(s)] = a.name_of(a.init[s]);
  j["init"] = init;
  json rules = json::array();
  auto namer = [&](int q) { return a.name_of(q); };
  for (const Rule& r : a.rules) {
    json rule;
    rule["from"] = a.name_of(r.from);
    rule["guard"] = guard_text::render(r.guard, namer, a.gamma);
    json to = json::array();
    for (int t : r.to) to.push_back(a.name_of(t));
    rule["to"] = to;
    rules.push_back(rule);
  }
  j["rules"] = rules;
  j["accepting"] = family_to_json(a.accepting, a.permanent_names());
  return j;
}

inline Automaton automaton_from_json(const json& j) {
  if (!j.is_object()) throw invalid_input("automaton json must be an object");
  for (const char* key : {"sigma", "gamma", "states", "init", "accepting"})
    if (!j.contains(key))
      throw invalid_input(std::string("automaton json misses ") + key);
  Alphabet sigma(j.at("sigma").get<std::vector<std::string>>());
  Alphabet gamma(j.at("gamma").get<std::vector<std::string>>());
  std::vector<State> states;
  for (const json& s : j.at("states")) {
    std::string kind = s.at("kind").get<std::string>();
    StateKind k;
    if (kind == "E") {
      k = StateKind::existential;
    } else if (kind == "A") {
      k = StateKind::universal;
    } else if (kind == "P") {
      k = StateKind::permanent;
    } else {
      throw invalid_input("state kind must be E, A, or P, got " + kind);
    }
    states.push_back({s.at("name").get<std::string>(), k});
  }
  auto id_of = [&](const std::string& name) {
    for (int q = 0; q < (int)states.size(); ++q)
      if (states[q].name == name) return q;
    return -1;
  };
  std::vector<int> init(sigma.size(), -1);
  for (const auto& [label, state] : j.at("init").items()) {
    int s = sigma.index(label);
    if (s < 0) throw invalid_input("init maps unknown label " + label);
    init[s] = id_of(state.get<std::string>());
    if (init[s] < 0)
      throw invalid_input("init maps " + label + " to an unknown state");
  }
  for (int s = 0; s < sigma.size(); ++s)
    if (init[s] < 0)
      throw invalid_input("init misses label " + sigma.at(s));
  std::vector<Rule> rules;
  if (j.contains("rules")) {
    for (const json& r : j.at("rules")) {
      Rule rule;
      rule.from = id_of(r.at("from").get<std::string>());
      if (rule.from < 0)
        throw invalid_input("rule from unknown state " +
                            r.at("from").get<std::string>());
      auto lookup = [&](const std::string& name) { return id_of(name); };
      rule.guard =
          guard_text::parse(r.at("guard").get<std::string>(), lookup, gamma);
      for (const json& t : r.at("to")) {
        int q = id_of(t.get<std::string>());
        if (q < 0)
          throw invalid_input("rule targets unknown state " +
                              t.get<std::string>());
        rule.to.push_back(q);
      }
      rules.push_back(std::move(rule));
    }
  }
  AcceptFamily fam = family_from_json(j.at("accepting"));
  return Automaton::build(sigma, gamma, std::move(states), std::move(init),
                          std::move(rules), std::move(fam));
}

// ---- reports and verdicts ----

inline json report_to_json(const TransformReport& r) {
  json j;
  j["op"] = r.op;
  json inputs = json::array();
  for (const auto& in : r.inputs)
    inputs.push_back(json{{"siz", in[0]}, {"len", in[1]}});
  j["inputs"] = inputs;
  j["siz"] = r.siz;
  j["len"] = r.len;
  j["fresh_states"] = r.fresh_states;
  j["removed_states"] = r.removed_states;
  j["notes"] = r.notes;
  return j;
}

inline json verdict_to_json(const EmptinessVerdict& v) {
  json j;
  j["status"] = emptiness_status_name(v.status);
  j["bound_used"] = v.bound_used;
  j["theoretical_bound"] = v.theoretical_bound;
  j["undirected"] = v.undirected;
  if (v.witness) {
    j["witness"] = graph_to_json(*v.witness);
    json run = json::array();
    for (const auto& q : *v.witness_run) run.push_back(q);
    j["witness_run_states"] = run;
  }
  return j;
}

inline json nonblocking_report_to_json(const NonblockingReport& r) {
  json j;
  j["status"] = r.status == NonblockingReport::Status::blocking
                    ? "blocking"
                : r.status == NonblockingReport::Status::syntactically_complete
                    ? "syntactically_complete"
                    : "verified_up_to_cap";
  j["node_cap"] = r.node_cap;
  if (!r.detail.empty()) j["detail"] = r.detail;
  if (r.witness) j["witness"] = graph_to_json(*r.witness);
  return j;
}

inline json classification_to_json(const Classification& c) {
  json j;
  j["alternating"] = c.alternating;
  j["determinism"] = c.determinism == Determinism::deterministic
                         ? "deterministic"
                     : c.determinism == Determinism::nondeterministic
                         ? "nondeterministic"
                         : "unverified";
  j["nonblocking"] = nonblocking_report_to_json(c.nonblocking);
  j["ddga"] = c.ddga;
  return j;
}

inline json diagnostics_to_json(const std::vector<Diagnostic>& ds) {
  json list = json::array();
  for (const Diagnostic& d : ds)
    list.push_back(json{{"code", d.code}, {"message", d.message}});
  return list;
}

}  // namespace io
}  // namespace dga
