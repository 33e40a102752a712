#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "dga/dga.hpp"

namespace testutil {

inline void for_each_graph(
    int n_max, const dga::Alphabet& sigma, const dga::Alphabet& gamma,
    const std::function<void(const dga::LabeledGraph&)>& fn) {
  dga::GraphEnumeration en(n_max, sigma, gamma);
  while (auto g = en.next()) fn(*g);
}

inline bool passes_restriction(dga::fixtures::GraphRestriction r,
                               const dga::LabeledGraph& g) {
  switch (r) {
    case dga::fixtures::GraphRestriction::none: return true;
    case dga::fixtures::GraphRestriction::connected: return dga::is_connected(g);
    case dga::fixtures::GraphRestriction::undirected: return dga::is_undirected(g);
  }
  return true;
}

inline dga::LabeledGraph blank(int n,
                               std::vector<std::pair<int, int>> edges = {}) {
  std::vector<std::string> labels(n, "_");
  std::vector<std::pair<std::string, std::pair<int, int>>> es;
  for (auto [u, v] : edges) es.push_back({"_", {u, v}});
  return dga::make_graph({"_"}, {"_"}, labels, es);
}

/// Complete blank digraph without loops: both directions of every pair.
inline dga::LabeledGraph clique(int n) {
  std::vector<std::pair<int, int>> es;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) es.push_back({u, v});
  return blank(n, std::move(es));
}

}  // namespace testutil
