#pragma once

#include <string>

#include "dga/automaton.hpp"
#include "dga/game.hpp"
#include "dga/graph.hpp"

namespace dga {
namespace dot {

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::string graph_to_dot(const LabeledGraph& g) {
  std::string out = "digraph graph_view {\n  rankdir=LR;\n";
  for (int v = 0; v < g.n; ++v)
    out += "  n" + std::to_string(v) + " [label=\"" + std::to_string(v) + ": " +
           escape(g.sigma.at(g.labels[v])) + "\"];\n";
  for (int rel = 0; rel < g.gamma.size(); ++rel)
    for (int u = 0; u < g.n; ++u)
      for (int v = 0; v < g.n; ++v) {
        if (!g.has_edge(rel, u, v)) continue;
        out += "  n" + std::to_string(u) + " -> n" + std::to_string(v);
        if (g.gamma.size() > 1)
          out += " [label=\"" + escape(g.gamma.at(rel)) + "\"]";
        out += ";\n";
      }
  out += "}\n";
  return out;
}

/// The full acceptance game. Positions carry the configuration as a state
/// tuple, accepting sinks are double circled, and the edges of the winner's
/// positional strategy are drawn in red.
inline std::string game_to_dot(const Automaton& a, const GameAnalysis& ga) {
  bool automaton_wins = ga.automaton_wins();
  std::string out = "digraph acceptance_game {\n  rankdir=TB;\n  label=\"winner: ";
  out += automaton_wins ? "automaton" : "pathfinder";
  out += "\";\n  labelloc=t;\n";
  for (size_t id = 0; id < ga.positions.size(); ++id) {
    const auto& p = ga.positions[id];
    const char* shape = "circle";
    switch (p.type) {
      case PositionType::existential: shape = "diamond"; break;
      case PositionType::universal: shape = "box"; break;
      case PositionType::accepting_sink: shape = "doublecircle"; break;
      case PositionType::rejecting_sink: shape = "circle"; break;
    }
    out += "  p" + std::to_string(id) + " [shape=" + shape + ", label=\"" +
           escape(ga.config_text(a, (int)id)) + "\"";
    if (id == 0) out += ", style=bold";
    out += "];\n";
  }
  for (size_t id = 0; id < ga.positions.size(); ++id) {
    const auto& p = ga.positions[id];
    // the strategy edge belongs to the game's winner only where that winner
    // also wins the position it moves from
    bool owner_is_automaton = p.type == PositionType::existential;
    bool strategy_edge_is_winners =
        p.strategy >= 0 && owner_is_automaton == automaton_wins &&
        p.automaton_wins == automaton_wins;
    for (int s : p.succ) {
      out += "  p" + std::to_string(id) + " -> p" + std::to_string(s);
      if (strategy_edge_is_winners && s == p.strategy)
        out += " [color=red, penwidth=2]";
      out += ";\n";
    }
  }
  out += "}\n";
  return out;
}

/// An accepting run laid out as a DAG of configurations.
inline std::string run_to_dot(const Automaton& a, const RunDag& run) {
  std::string out = "digraph accepting_run {\n  rankdir=TB;\n";
  for (size_t id = 0; id < run.configs.size(); ++id) {
    std::string label = "(";
    for (size_t v = 0; v < run.configs[id].size(); ++v) {
      if (v) label += ",";
      label += a.name_of(run.configs[id][v]);
    }
    label += ")";
    bool final = run.types[id] == PositionType::accepting_sink;
    out += "  c" + std::to_string(id) + " [shape=" +
           (final ? "doublecircle" : "ellipse") + ", label=\"" + escape(label) +
           "\"];\n";
  }
  for (size_t id = 0; id < run.edges.size(); ++id)
    for (int s : run.edges[id])
      out += "  c" + std::to_string(id) + " -> c" + std::to_string(s) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace dot
}  // namespace dga
