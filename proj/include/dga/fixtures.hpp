#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dga/automaton.hpp"
#include "dga/graph.hpp"
#include "dga/transforms.hpp"

namespace dga {
namespace fixtures {

inline Alphabet blank_alphabet() { return Alphabet({"_"}); }

/// Graph restriction an automaton's language statement is made under.
enum class GraphRestriction { none, connected, undirected };

inline const char* restriction_name(GraphRestriction r) {
  switch (r) {
    case GraphRestriction::none: return "none";
    case GraphRestriction::connected: return "connected";
    case GraphRestriction::undirected: return "undirected";
  }
  return "?";
}

/// Accepts the 3-colorable blank graphs: every node existentially picks a
/// color, then checks that no incoming neighbor picked the same one.
inline Automaton make_3color() {
  Alphabet sigma = blank_alphabet(), gamma = blank_alphabet();
  std::vector<State> st = {
      {"q_ini", StateKind::existential}, {"q_red", StateKind::existential},
      {"q_green", StateKind::existential}, {"q_blue", StateKind::existential},
      {"q_yes", StateKind::permanent},   {"q_no", StateKind::permanent},
  };
  std::vector<Rule> rules;
  rules.push_back({0, Guard::truth(), {1, 2, 3}});
  for (int c = 1; c <= 3; ++c) {
    rules.push_back({c, Guard::member(0, c), {5}});
    rules.push_back({c, Guard::negation(Guard::member(0, c)), {4}});
  }
  return Automaton::build(sigma, gamma, std::move(st), {0}, std::move(rules),
                          AcceptFamily::explicit_list({{"q_yes"}}));
}

/// Accepts the non-3-colorable blank graphs: same shape as the 3-coloring
/// automaton with all choices universal, so every coloring must expose a
/// conflict.
inline Automaton make_not3color() {
  Automaton base = make_3color();
  std::vector<State> st = base.states;
  for (auto& s : st)
    if (s.kind == StateKind::existential) s.kind = StateKind::universal;
  return Automaton::build(base.sigma, base.gamma, std::move(st), base.init,
                          base.rules,
                          AcceptFamily::explicit_list({{"q_no"}, {"q_no", "q_yes"}}));
}

/// Accepts {a,b,c}-labeled graphs with properly label-colored edges where a
/// unique a-node sits at the center: all its neighbors are b-nodes and at
/// least two of them point at it. b-neighbors split over two marker states
/// so the center can detect two distinct ones; the center splits over two
/// permanent markers so a second center would expose itself.
inline Automaton make_centric() {
  Alphabet sigma({"a", "b", "c"});
  Alphabet gamma = blank_alphabet();
  std::vector<State> st = {
      {"q_a", StateKind::existential},  {"q_b", StateKind::existential},
      {"q_c", StateKind::existential},  {"q_a1", StateKind::universal},
      {"q_bkr", StateKind::universal},  {"q_bk", StateKind::universal},
      {"q_center1", StateKind::permanent}, {"q_center2", StateKind::permanent},
      {"q_yes", StateKind::permanent},  {"q_no", StateKind::permanent},
  };
  std::vector<Rule> rules;
  rules.push_back({0, Guard::truth(), {3}});
  rules.push_back({1, Guard::member(0, 1), {9}});
  rules.push_back({1, Guard::negation(Guard::member(0, 1)), {4, 5}});
  rules.push_back({2, Guard::disjunction({Guard::member(0, 2), Guard::member(0, 0)}),
                   {9}});
  rules.push_back({2,
                   Guard::conjunction({Guard::negation(Guard::member(0, 2)),
                                       Guard::negation(Guard::member(0, 0))}),
                   {8}});
  rules.push_back({3, Guard::equals(0, {4, 5}), {6, 7}});
  rules.push_back({3, Guard::negation(Guard::equals(0, {4, 5})), {9}});
  rules.push_back({4, Guard::truth(), {8}});
  rules.push_back({5, Guard::truth(), {8}});
  return Automaton::build(sigma, gamma, std::move(st), {0, 1, 2}, std::move(rules),
                          AcceptFamily::explicit_list(
                              {{"q_center1", "q_yes"}, {"q_center2", "q_yes"}}));
}

/// Accepts the weakly connected graphs over the given alphabets: an
/// adversarial two-sided node coloring either stays one-sided or some node
/// receives the opposite side, which cannot be avoided iff no cut splits the
/// graph.
inline Automaton make_connected(const Alphabet& sigma, const Alphabet& gamma) {
  std::vector<State> st = {
      {"q_ini", StateKind::universal},    {"q_left", StateKind::universal},
      {"q_right", StateKind::universal},  {"q_leftend", StateKind::permanent},
      {"q_rightend", StateKind::permanent}, {"q_meet", StateKind::permanent},
  };
  auto sees = [&](int state) {
    std::vector<Guard> per_rel;
    for (int rel = 0; rel < gamma.size(); ++rel)
      per_rel.push_back(Guard::member(rel, state));
    return Guard::disjunction(std::move(per_rel));
  };
  std::vector<Rule> rules;
  rules.push_back({0, Guard::truth(), {1, 2}});
  rules.push_back({1, Guard::negation(sees(2)), {3}});
  rules.push_back({1, sees(2), {5}});
  rules.push_back({2, Guard::negation(sees(1)), {4}});
  rules.push_back({2, sees(1), {5}});
  std::vector<int> init(sigma.size(), 0);
  return Automaton::build(sigma, gamma, std::move(st), std::move(init),
                          std::move(rules),
                          AcceptFamily::disjunction(
                              {AcceptFamily::explicit_list(
                                   {{"q_leftend"}, {"q_rightend"}}),
                               AcceptFamily::has("q_meet")}));
}

inline Automaton make_connected() {
  return make_connected(blank_alphabet(), blank_alphabet());
}

/// Accepts, among connected blank graphs, the rooted trees with all edges
/// directed away from the root: one node has no incoming edge, everyone else
/// exactly one. Degree-two detection uses adversarial marker splitting, root
/// uniqueness the permanent marker pair.
inline Automaton make_tree() {
  Alphabet sigma = blank_alphabet(), gamma = blank_alphabet();
  std::vector<State> st = {
      {"q_ini", StateKind::existential}, {"q_atroot", StateKind::universal},
      {"q_inner", StateKind::universal}, {"q_mark1", StateKind::existential},
      {"q_mark2", StateKind::existential}, {"q_root1", StateKind::permanent},
      {"q_root2", StateKind::permanent}, {"q_yes", StateKind::permanent},
      {"q_no", StateKind::permanent},
  };
  std::vector<Rule> rules;
  rules.push_back({0, Guard::card(0, CardRel::eq, 0), {1}});
  rules.push_back({0, Guard::card(0, CardRel::ge, 1), {2}});
  rules.push_back({1, Guard::truth(), {5, 6}});
  rules.push_back({2, Guard::truth(), {3, 4}});
  for (int m : {3, 4}) {
    rules.push_back({m, Guard::card(0, CardRel::eq, 1), {7}});
    rules.push_back({m, Guard::card(0, CardRel::ge, 2), {8}});
  }
  return Automaton::build(sigma, gamma, std::move(st), {0}, std::move(rules),
                          AcceptFamily::explicit_list({{"q_root1"},
                                                       {"q_root2"},
                                                       {"q_root1", "q_yes"},
                                                       {"q_root2", "q_yes"}}));
}

/// Accepts the undirected graphs over the given alphabets: an adversarially
/// chosen set of nodes pings over all relations, receivers record over which
/// relations a ping arrived, and each pinger checks that every incoming
/// neighbor over a relation got its ping back over that same relation.
inline Automaton make_undirected(const Alphabet& sigma, const Alphabet& gamma) {
  int m = gamma.size();
  std::vector<State> st = {
      {"q_ini", StateKind::universal},
      {"q_ping", StateKind::universal},
      {"q_idle", StateKind::universal},
      {"q_ping2", StateKind::universal},
  };
  // receipt state per subset of relations, permanent
  int rcv_base = (int)st.size();
  std::vector<std::string> rcv_names;
  for (int t = 0; t < (1 << m); ++t) {
    std::string name = "q_rcv{";
    bool first = true;
    for (int rel = 0; rel < m; ++rel)
      if ((t >> rel) & 1) {
        if (!first) name += ",";
        name += gamma.at(rel);
        first = false;
      }
    name += "}";
    rcv_names.push_back(name);
    st.push_back({name, StateKind::permanent});
  }
  int ok = (int)st.size();
  st.push_back({"q_ok", StateKind::permanent});
  int bad = (int)st.size();
  st.push_back({"q_bad", StateKind::permanent});

  std::vector<Rule> rules;
  rules.push_back({0, Guard::truth(), {1, 2}});
  rules.push_back({1, Guard::truth(), {3}});
  for (int t = 0; t < (1 << m); ++t) {
    std::vector<Guard> parts;
    for (int rel = 0; rel < m; ++rel) {
      Guard atom = Guard::member(rel, 1);
      parts.push_back(((t >> rel) & 1) ? atom : Guard::negation(atom));
    }
    rules.push_back({2, Guard::conjunction(std::move(parts)), {rcv_base + t}});
  }
  std::vector<Guard> echo_parts;
  for (int rel = 0; rel < m; ++rel)
    for (int t = 0; t < (1 << m); ++t)
      if (!((t >> rel) & 1))
        echo_parts.push_back(Guard::negation(Guard::member(rel, rcv_base + t)));
  Guard echo = Guard::conjunction(echo_parts);
  rules.push_back({3, echo, {ok}});
  rules.push_back({3, Guard::negation(echo), {bad}});

  std::vector<std::string> good = rcv_names;
  good.push_back("q_ok");
  std::vector<int> init(sigma.size(), 0);
  return Automaton::build(sigma, gamma, std::move(st), std::move(init),
                          std::move(rules), AcceptFamily::subset_of(std::move(good)));
}

inline Automaton make_undirected() {
  return make_undirected(blank_alphabet(), blank_alphabet());
}

/// Accepts the undirected blank graphs containing a triangle minor: nodes
/// are existentially split into three witness sets (or left out), each set
/// proves itself nonempty and adjacent to the next, and adversarial
/// two-coloring fails to split any set without exposing an internal edge.
inline Automaton make_minor_k3() {
  Alphabet sigma = blank_alphabet(), gamma = blank_alphabet();
  std::vector<State> st;
  st.push_back({"q_ini", StateKind::existential});
  for (int i = 1; i <= 3; ++i)
    st.push_back({"q_set" + std::to_string(i), StateKind::universal});
  st.push_back({"q_out", StateKind::permanent});
  // level-2 marker states, two per set
  int mark_base = (int)st.size();
  for (int i = 1; i <= 3; ++i)
    for (const char* m : {"x", "y"})
      st.push_back({"q_s" + std::to_string(i) + m, StateKind::existential});
  int meet = (int)st.size();
  st.push_back({"q_meet", StateKind::permanent});
  int final_base = (int)st.size();
  for (int i = 1; i <= 3; ++i)
    for (const char* m : {"x", "y"})
      for (const char* f : {"_in", "_no"})
        st.push_back({"q_s" + std::to_string(i) + m + f, StateKind::permanent});

  auto mark = [&](int set, int m) { return mark_base + (set - 1) * 2 + m; };
  auto fin = [&](int set, int m, int in) {
    return final_base + (set - 1) * 4 + m * 2 + (1 - in);
  };

  std::vector<Rule> rules;
  rules.push_back({0, Guard::truth(), {1, 2, 3, 4}});
  for (int i = 1; i <= 3; ++i)
    rules.push_back({i, Guard::truth(), {mark(i, 0), mark(i, 1)}});
  for (int i = 1; i <= 3; ++i) {
    int next = i % 3 + 1;
    for (int m = 0; m < 2; ++m) {
      Guard other = Guard::member(0, mark(i, 1 - m));
      Guard from_next = Guard::disjunction(
          {Guard::member(0, mark(next, 0)), Guard::member(0, mark(next, 1))});
      rules.push_back({mark(i, m), other, {meet}});
      rules.push_back({mark(i, m),
                       Guard::conjunction({Guard::negation(other), from_next}),
                       {fin(i, m, 1)}});
      rules.push_back({mark(i, m),
                       Guard::conjunction({Guard::negation(other),
                                           Guard::negation(from_next)}),
                       {fin(i, m, 0)}});
    }
  }

  auto side_present = [&](int set, int m) {
    return AcceptFamily::disjunction(
        {AcceptFamily::has(st[fin(set, m, 1)].name),
         AcceptFamily::has(st[fin(set, m, 0)].name)});
  };
  std::vector<AcceptFamily> clauses;
  for (int i = 1; i <= 3; ++i) {
    AcceptFamily one_sided = AcceptFamily::complement(
        AcceptFamily::conjunction({side_present(i, 0), side_present(i, 1)}));
    AcceptFamily touches_next = AcceptFamily::disjunction(
        {AcceptFamily::has(st[fin(i, 0, 1)].name),
         AcceptFamily::has(st[fin(i, 1, 1)].name)});
    clauses.push_back(
        AcceptFamily::conjunction({std::move(one_sided), std::move(touches_next)}));
  }
  AcceptFamily fam = AcceptFamily::disjunction(
      {AcceptFamily::has("q_meet"), AcceptFamily::conjunction(std::move(clauses))});

  return Automaton::build(sigma, gamma, std::move(st), {0}, std::move(rules),
                          std::move(fam));
}

/// Accepts the blank graphs with at most two nodes: markers are assigned
/// adversarially, and three nodes can always be told apart.
inline Automaton make_max2() {
  Alphabet sigma = blank_alphabet(), gamma = blank_alphabet();
  std::vector<State> st = {
      {"q_ini", StateKind::universal},
      {"q_m1", StateKind::permanent},
      {"q_m2", StateKind::permanent},
      {"q_m3", StateKind::permanent},
  };
  std::vector<Rule> rules{{0, Guard::truth(), {1, 2, 3}}};
  return Automaton::build(sigma, gamma, std::move(st), {0}, std::move(rules),
                          AcceptFamily::card(CardRel::le, 2));
}

/// Accepts the blank graphs with at least three nodes; built as the dual of
/// the at-most-two automaton.
inline Automaton make_min3() { return dual(make_max2()).automaton; }

/// Accepts the {a,b,c}-labeled graphs where each of the three labels occurs:
/// states only record the own label, the accepting family wants all three.
inline Automaton make_occur_abc() {
  Alphabet sigma({"a", "b", "c"});
  Alphabet gamma = blank_alphabet();
  std::vector<State> st = {
      {"q_seen_a", StateKind::permanent},
      {"q_seen_b", StateKind::permanent},
      {"q_seen_c", StateKind::permanent},
  };
  return Automaton::build(sigma, gamma, std::move(st), {0, 1, 2}, {},
                          AcceptFamily::explicit_list(
                              {{"q_seen_a", "q_seen_b", "q_seen_c"}}));
}

// ---- example graphs ----

inline LabeledGraph triangle() {
  return make_graph({"_"}, {"_"}, {"_", "_", "_"},
                    {{"_", {0, 1}}, {"_", {1, 0}}, {"_", {1, 2}},
                     {"_", {2, 1}}, {"_", {0, 2}}, {"_", {2, 0}}});
}

inline LabeledGraph edgeless4() {
  return make_graph({"_"}, {"_"}, {"_", "_", "_", "_"}, {});
}

/// In the centric language: one a-node with two b-nodes pointing at it.
inline LabeledGraph centric_in() {
  return make_graph({"a", "b", "c"}, {"_"}, {"a", "b", "b"},
                    {{"_", {1, 0}}, {"_", {2, 0}}});
}

/// Outside the centric language: two a-nodes sharing their b-neighbors.
inline LabeledGraph centric_out() {
  return make_graph({"a", "b", "c"}, {"_"}, {"a", "b", "a", "b"},
                    {{"_", {1, 0}}, {"_", {1, 2}}, {"_", {3, 0}}, {"_", {3, 2}}});
}

/// Three-node labeled cycle used in the mirroring demos.
inline LabeledGraph mirror_abc() {
  return make_graph({"a", "b", "c"}, {"_"}, {"a", "b", "c"},
                    {{"_", {0, 1}}, {"_", {1, 2}}, {"_", {2, 0}}});
}

// ---- oracles ----

inline bool oracle_centric(const LabeledGraph& g) {
  int a = g.sigma.index("a"), b = g.sigma.index("b");
  // no edge between equally labeled nodes, in either direction
  for (auto [u, v] : g.edges(0))
    if (g.labels[u] == g.labels[v]) return false;
  int center = -1, count = 0;
  for (int v = 0; v < g.n; ++v)
    if (g.labels[v] == a) {
      center = v;
      ++count;
    }
  if (count != 1) return false;
  int indeg = 0;
  for (int u = 0; u < g.n; ++u) {
    if (g.has_edge(0, u, center)) {
      if (g.labels[u] != b) return false;
      ++indeg;
    }
    if (g.has_edge(0, center, u) && g.labels[u] != b) return false;
  }
  return indeg >= 2;
}

inline bool oracle_tree(const LabeledGraph& g) {
  int roots = 0;
  for (int v = 0; v < g.n; ++v) {
    int indeg = 0;
    for (int u = 0; u < g.n; ++u)
      if (g.has_edge(0, u, v)) ++indeg;
    if (indeg == 0)
      ++roots;
    else if (indeg != 1)
      return false;
  }
  return roots == 1;
}

inline bool oracle_occur_abc(const LabeledGraph& g) {
  std::vector<bool> seen(g.sigma.size(), false);
  for (int v = 0; v < g.n; ++v) seen[g.labels[v]] = true;
  for (bool s : seen)
    if (!s) return false;
  return true;
}

// ---- registry ----

struct AutomatonFixture {
  std::string name;
  Automaton automaton;
  GraphRestriction restriction;
  std::function<bool(const LabeledGraph&)> oracle;
  std::string about;
};

struct GraphFixture {
  std::string name;
  LabeledGraph graph;
  std::string about;
};

inline const std::vector<AutomatonFixture>& automaton_fixtures() {
  static const std::vector<AutomatonFixture> all = [] {
    std::vector<AutomatonFixture> v;
    v.push_back({"A_3color", make_3color(), GraphRestriction::none,
                 [](const LabeledGraph& g) { return is_k_colorable(g, 3); },
                 "3-colorable blank graphs"});
    v.push_back({"A_not3color", make_not3color(), GraphRestriction::none,
                 [](const LabeledGraph& g) { return !is_k_colorable(g, 3); },
                 "non-3-colorable blank graphs"});
    v.push_back({"A_centric", make_centric(), GraphRestriction::none,
                 oracle_centric,
                 "properly labeled graphs with a unique a-center fed by two "
                 "b-nodes"});
    v.push_back({"A_conn", make_connected(), GraphRestriction::none,
                 [](const LabeledGraph& g) { return is_connected(g); },
                 "weakly connected blank graphs"});
    v.push_back({"A_tree", make_tree(), GraphRestriction::connected, oracle_tree,
                 "rooted trees with edges directed away from the root "
                 "(connected inputs)"});
    v.push_back({"A_undir", make_undirected(), GraphRestriction::none,
                 [](const LabeledGraph& g) { return is_undirected(g); },
                 "undirected blank graphs"});
    v.push_back({"A_minor_K3", make_minor_k3(), GraphRestriction::undirected,
                 [](const LabeledGraph& g) { return has_minor(g, triangle()); },
                 "undirected blank graphs with a triangle minor"});
    v.push_back({"A_max2", make_max2(), GraphRestriction::none,
                 [](const LabeledGraph& g) { return g.n <= 2; },
                 "blank graphs with at most two nodes"});
    v.push_back({"A_min3", make_min3(), GraphRestriction::none,
                 [](const LabeledGraph& g) { return g.n >= 3; },
                 "blank graphs with at least three nodes"});
    v.push_back({"A_occur_abc", make_occur_abc(), GraphRestriction::none,
                 oracle_occur_abc, "graphs where each of a, b, c occurs"});
    return v;
  }();
  return all;
}

inline const AutomatonFixture& automaton_fixture(const std::string& name) {
  std::string wanted = name == "A_occur" ? "A_occur_abc" : name;
  for (const auto& f : automaton_fixtures())
    if (f.name == wanted) return f;
  throw invalid_input("unknown fixture automaton: " + name);
}

inline const std::vector<GraphFixture>& graph_fixtures() {
  static const std::vector<GraphFixture> all = [] {
    std::vector<GraphFixture> v;
    v.push_back({"G_centric_in", centric_in(),
                 "in the centric language: a-center with two b-feeders"});
    v.push_back({"G_centric_out", centric_out(),
                 "outside the centric language: two a-centers"});
    v.push_back({"G_triangle", triangle(), "undirected blank triangle"});
    v.push_back({"G_edgeless4", edgeless4(), "four isolated blank nodes"});
    v.push_back({"G_mirror_abc", mirror_abc(), "labeled 3-cycle for mirroring"});
    return v;
  }();
  return all;
}

inline const GraphFixture& graph_fixture(const std::string& name) {
  for (const auto& f : graph_fixtures())
    if (f.name == name) return f;
  throw invalid_input("unknown fixture graph: " + name);
}

}  // namespace fixtures
}  // namespace dga
