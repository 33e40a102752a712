#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dga/alphabet.hpp"
#include "dga/base.hpp"

namespace dga {

/// Node- and edge-labeled finite digraph. Nodes are dense indices 0..n-1,
/// each carrying one symbol of `sigma`; for every symbol of `gamma` there is
/// one edge relation with at most one edge per ordered node pair. Self-loops
/// are allowed, the node set is never empty. Treat instances as immutable
/// values: surgery helpers return fresh graphs.
struct LabeledGraph {
  Alphabet sigma;
  Alphabet gamma;
  int n = 0;
  std::vector<int> labels;                     // node -> sigma index
  std::vector<std::vector<uint64_t>> out_row;  // [gamma][node] successor mask
  std::vector<std::vector<uint64_t>> in_row;   // [gamma][node] predecessor mask

  LabeledGraph() = default;

  LabeledGraph(Alphabet sigma_, Alphabet gamma_, std::vector<int> labels_,
               const std::vector<std::vector<std::pair<int, int>>>& edges_by_gamma)
      : sigma(std::move(sigma_)), gamma(std::move(gamma_)), labels(std::move(labels_)) {
    n = (int)labels.size();
    if (n < 1) throw invalid_input("graph must have at least one node");
    if (n > 64) throw invalid_input("graphs above 64 nodes are unsupported");
    for (int l : labels)
      if (l < 0 || l >= sigma.size()) throw invalid_input("node label out of range");
    if ((int)edges_by_gamma.size() != gamma.size())
      throw invalid_input("edge relation count must match gamma");
    out_row.assign(gamma.size(), std::vector<uint64_t>(n, 0));
    in_row.assign(gamma.size(), std::vector<uint64_t>(n, 0));
    for (int g = 0; g < gamma.size(); ++g) {
      for (auto [u, v] : edges_by_gamma[g]) {
        if (u < 0 || u >= n || v < 0 || v >= n)
          throw invalid_input("edge endpoint out of range");
        out_row[g][u] |= uint64_t(1) << v;
        in_row[g][v] |= uint64_t(1) << u;
      }
    }
  }

  bool has_edge(int g, int u, int v) const {
    return (out_row[g][u] >> v) & 1;
  }

  /// Predecessors of v under relation g, as a node mask.
  uint64_t in_mask(int g, int v) const { return in_row[g][v]; }
  uint64_t out_mask(int g, int u) const { return out_row[g][u]; }

  const std::string& label_of(int v) const { return sigma.at(labels[v]); }

  /// Edges of one relation in lexicographic (u,v) order.
  std::vector<std::pair<int, int>> edges(int g) const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (has_edge(g, u, v)) out.emplace_back(u, v);
    return out;
  }

  size_t edge_count() const {
    size_t c = 0;
    for (int g = 0; g < gamma.size(); ++g)
      for (int u = 0; u < n; ++u) c += __builtin_popcountll(out_row[g][u]);
    return c;
  }
};

inline LabeledGraph make_graph(const std::vector<std::string>& sigma,
                               const std::vector<std::string>& gamma,
                               const std::vector<std::string>& node_labels,
                               const std::vector<std::pair<std::string, std::pair<int, int>>>& edges) {
  Alphabet s(sigma), g(gamma);
  std::vector<int> labels;
  labels.reserve(node_labels.size());
  for (const auto& l : node_labels) {
    int i = s.index(l);
    if (i < 0) throw invalid_input("unknown node label: " + l);
    labels.push_back(i);
  }
  std::vector<std::vector<std::pair<int, int>>> by_gamma(g.size());
  for (const auto& [rel, e] : edges) {
    int gi = g.index(rel);
    if (gi < 0) throw invalid_input("unknown edge relation: " + rel);
    by_gamma[gi].push_back(e);
  }
  return LabeledGraph(std::move(s), std::move(g), std::move(labels), by_gamma);
}

/// Weak connectivity: every node reachable from node 0 ignoring directions.
inline bool is_connected(const LabeledGraph& g) {
  uint64_t seen = 1, frontier = 1;
  while (frontier) {
    uint64_t next = 0;
    for (int v = 0; v < g.n; ++v) {
      if (!((frontier >> v) & 1)) continue;
      for (int rel = 0; rel < g.gamma.size(); ++rel)
        next |= g.out_row[rel][v] | g.in_row[rel][v];
    }
    frontier = next & ~seen;
    seen |= next;
  }
  uint64_t all = (g.n == 64) ? ~uint64_t(0) : ((uint64_t(1) << g.n) - 1);
  return (seen & all) == all;
}

/// Every relation is symmetric: u -> v implies v -> u.
inline bool is_undirected(const LabeledGraph& g) {
  for (int rel = 0; rel < g.gamma.size(); ++rel)
    for (int u = 0; u < g.n; ++u)
      for (int v = 0; v < g.n; ++v)
        if (g.has_edge(rel, u, v) != g.has_edge(rel, v, u)) return false;
  return true;
}

/// The node labels, read as colors, never repeat across an edge.
/// A self-loop makes the coloring invalid.
inline bool is_valid_coloring(const LabeledGraph& g) {
  for (int rel = 0; rel < g.gamma.size(); ++rel)
    for (int u = 0; u < g.n; ++u)
      for (int v = 0; v < g.n; ++v)
        if (g.has_edge(rel, u, v) && g.labels[u] == g.labels[v]) return false;
  return true;
}

/// Does any assignment of k colors to the nodes avoid monochromatic edges?
inline bool is_k_colorable(const LabeledGraph& g, int k) {
  std::vector<int> color(g.n, 0);
  while (true) {
    bool ok = true;
    for (int rel = 0; rel < g.gamma.size() && ok; ++rel)
      for (int u = 0; u < g.n && ok; ++u)
        for (int v = 0; v < g.n && ok; ++v)
          if (g.has_edge(rel, u, v) && color[u] == color[v]) ok = false;
    if (ok) return true;
    int i = 0;
    while (i < g.n && color[i] == k - 1) color[i++] = 0;
    if (i == g.n) return false;
    ++color[i];
  }
}

inline LabeledGraph apply_permutation(const LabeledGraph& g, const std::vector<int>& perm) {
  // perm[old] = new position
  std::vector<int> labels(g.n);
  std::vector<std::vector<std::pair<int, int>>> edges(g.gamma.size());
  for (int v = 0; v < g.n; ++v) labels[perm[v]] = g.labels[v];
  for (int rel = 0; rel < g.gamma.size(); ++rel)
    for (int u = 0; u < g.n; ++u)
      for (int v = 0; v < g.n; ++v)
        if (g.has_edge(rel, u, v)) edges[rel].emplace_back(perm[u], perm[v]);
  return LabeledGraph(g.sigma, g.gamma, std::move(labels), edges);
}

namespace detail {

/// Packed comparison key of one node ordering: labels first, then the
/// permuted adjacency rows of every relation.
inline void form_key(const LabeledGraph& g, const std::vector<int>& perm,
                     std::vector<uint64_t>& key) {
  key.clear();
  std::vector<int> inv(g.n);
  for (int v = 0; v < g.n; ++v) inv[perm[v]] = v;
  for (int p = 0; p < g.n; ++p) key.push_back((uint64_t)g.labels[inv[p]]);
  for (int rel = 0; rel < g.gamma.size(); ++rel)
    for (int p = 0; p < g.n; ++p) {
      uint64_t row = 0;
      for (int q = 0; q < g.n; ++q)
        if (g.has_edge(rel, inv[p], inv[q])) row |= uint64_t(1) << q;
      key.push_back(row);
    }
}

constexpr int kCanonicalNodeCap = 9;

}  // namespace detail

/// Minimal comparison key over all node permutations. Two graphs over the
/// same alphabets are isomorphic iff their canonical keys are equal.
inline std::vector<uint64_t> canonical_key(const LabeledGraph& g) {
  if (g.n > detail::kCanonicalNodeCap)
    throw resource_cap("canonical form is limited to graphs with at most 9 nodes");
  std::vector<int> perm(g.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<uint64_t> best, cur;
  detail::form_key(g, perm, best);
  while (std::next_permutation(perm.begin(), perm.end())) {
    detail::form_key(g, perm, cur);
    if (cur < best) best = cur;
  }
  best.insert(best.begin(), (uint64_t)g.n);
  return best;
}

inline bool isomorphic(const LabeledGraph& a, const LabeledGraph& b) {
  if (a.sigma != b.sigma || a.gamma != b.gamma)
    throw invalid_input("isomorphism is only defined over one pair of alphabets");
  if (a.n != b.n) return false;
  return canonical_key(a) == canonical_key(b);
}

/// Streams every graph over the given alphabets with 1..n_max nodes, one
/// representative per isomorphism class, in a deterministic order: ascending
/// node count, then lexicographic label vector, then ascending edge-bit
/// counter. A graph is emitted iff it equals its own canonical representative.
class GraphEnumeration {
public:
  GraphEnumeration(int n_max, Alphabet sigma, Alphabet gamma)
      : n_max_(n_max), sigma_(std::move(sigma)), gamma_(std::move(gamma)) {
    if (n_max_ < 1) throw invalid_input("enumeration needs n_max >= 1");
    if (n_max_ > detail::kCanonicalNodeCap)
      throw resource_cap("enumeration is limited to 9 nodes");
    start_size(1);
  }

  std::optional<LabeledGraph> next() {
    while (n_ <= n_max_) {
      if (edge_counter_ > edge_max_) {
        if (!bump_labels()) {
          if (n_ == n_max_) break;
          start_size(n_ + 1);
        }
        continue;
      }
      uint64_t bits = edge_counter_++;
      if (self_canonical(bits)) return build(bits);
    }
    return std::nullopt;
  }

private:
  void start_size(int n) {
    n_ = n;
    labels_.assign(n_, 0);
    reset_edges();
  }

  void reset_edges() {
    edge_counter_ = 0;
    int bits = gamma_.size() * n_ * n_;
    if (bits >= 62) throw resource_cap("edge space too large to enumerate");
    edge_max_ = (uint64_t(1) << bits) - 1;
  }

  bool bump_labels() {
    int i = n_ - 1;
    while (i >= 0 && labels_[i] == sigma_.size() - 1) labels_[i--] = 0;
    if (i < 0) return false;
    ++labels_[i];
    reset_edges();
    return true;
  }

  bool edge_bit(uint64_t bits, int rel, int u, int v) const {
    return (bits >> (((uint64_t)rel * n_ + u) * n_ + v)) & 1;
  }

  /// True iff no permutation produces a strictly smaller (labels, edges) form.
  bool self_canonical(uint64_t bits) const {
    std::array<int, detail::kCanonicalNodeCap> perm{};
    for (int i = 0; i < n_; ++i) perm[i] = i;
    int nrel = gamma_.size();
    while (std::next_permutation(perm.begin(), perm.begin() + n_)) {
      // perm[new] = old; compare permuted form against the identity form
      int cmp = 0;
      for (int p = 0; p < n_ && cmp == 0; ++p)
        cmp = labels_[perm[p]] - labels_[p];
      for (int rel = 0; rel < nrel && cmp == 0; ++rel)
        for (int p = 0; p < n_ && cmp == 0; ++p)
          for (int q = 0; q < n_ && cmp == 0; ++q)
            cmp = (int)edge_bit(bits, rel, perm[p], perm[q]) -
                  (int)edge_bit(bits, rel, p, q);
      if (cmp < 0) return false;
    }
    return true;
  }

  LabeledGraph build(uint64_t bits) const {
    std::vector<std::vector<std::pair<int, int>>> edges(gamma_.size());
    for (int rel = 0; rel < gamma_.size(); ++rel)
      for (int u = 0; u < n_; ++u)
        for (int v = 0; v < n_; ++v)
          if (edge_bit(bits, rel, u, v)) edges[rel].emplace_back(u, v);
    return LabeledGraph(sigma_, gamma_, labels_, edges);
  }

  int n_max_;
  Alphabet sigma_, gamma_;
  int n_ = 1;
  std::vector<int> labels_;
  uint64_t edge_counter_ = 0, edge_max_ = 0;
};

struct MirrorResult {
  LabeledGraph graph;
  std::vector<int> copy_of;  ///< original node -> its copy, or -1 outside U
};

/// Duplicates the nodes of U. A copied node keeps its label; edges fall into
/// three fresh groups: into-U edges are repeated toward the copy, out-of-U
/// edges are repeated from the copy, and U-internal edges are repeated
/// between copies. Original edges all survive.
inline MirrorResult mirror(const LabeledGraph& g, const std::vector<int>& u_nodes) {
  std::vector<int> u_sorted(u_nodes);
  std::sort(u_sorted.begin(), u_sorted.end());
  u_sorted.erase(std::unique(u_sorted.begin(), u_sorted.end()), u_sorted.end());
  for (int v : u_sorted)
    if (v < 0 || v >= g.n) throw invalid_input("mirror set contains an unknown node");
  if (g.n + (int)u_sorted.size() > 64)
    throw invalid_input("mirror result would exceed the 64 node limit");

  std::vector<int> copy_of(g.n, -1);
  std::vector<int> labels = g.labels;
  for (size_t i = 0; i < u_sorted.size(); ++i) {
    copy_of[u_sorted[i]] = g.n + (int)i;
    labels.push_back(g.labels[u_sorted[i]]);
  }
  auto in_u = [&](int v) { return copy_of[v] >= 0; };

  std::vector<std::vector<std::pair<int, int>>> edges(g.gamma.size());
  for (int rel = 0; rel < g.gamma.size(); ++rel)
    for (int u = 0; u < g.n; ++u)
      for (int v = 0; v < g.n; ++v) {
        if (!g.has_edge(rel, u, v)) continue;
        edges[rel].emplace_back(u, v);
        if (!in_u(u) && in_u(v)) edges[rel].emplace_back(u, copy_of[v]);
        if (in_u(u) && !in_u(v)) edges[rel].emplace_back(copy_of[u], v);
        if (in_u(u) && in_u(v)) edges[rel].emplace_back(copy_of[u], copy_of[v]);
      }
  return MirrorResult{LabeledGraph(g.sigma, g.gamma, std::move(labels), edges),
                      std::move(copy_of)};
}

enum class MergeMode { asymmetric, symmetric };

/// Removes node `drop` and lets node `keep` take over its role: outgoing
/// edges of `drop` are re-sourced at `keep`; in symmetric mode incoming
/// edges of `drop` are re-targeted at `keep` as well. Surviving nodes are
/// renumbered densely, preserving their relative order.
inline LabeledGraph merge_nodes(const LabeledGraph& g, int keep, int drop,
                                MergeMode mode) {
  if (keep == drop) throw invalid_input("merge needs two distinct nodes");
  if (keep < 0 || keep >= g.n || drop < 0 || drop >= g.n)
    throw invalid_input("merge node out of range");
  if (g.n < 2) throw invalid_input("merge needs at least two nodes");
  auto remap = [&](int v) { return v - (v > drop ? 1 : 0); };

  std::vector<int> labels;
  for (int v = 0; v < g.n; ++v)
    if (v != drop) labels.push_back(g.labels[v]);

  std::vector<std::vector<std::pair<int, int>>> edges(g.gamma.size());
  for (int rel = 0; rel < g.gamma.size(); ++rel) {
    for (int u = 0; u < g.n; ++u)
      for (int v = 0; v < g.n; ++v) {
        if (!g.has_edge(rel, u, v)) continue;
        if (u != drop && v != drop) edges[rel].emplace_back(remap(u), remap(v));
        if (u == drop && v != drop) edges[rel].emplace_back(remap(keep), remap(v));
        if (mode == MergeMode::symmetric && v == drop && u != drop)
          edges[rel].emplace_back(remap(u), remap(keep));
      }
    std::sort(edges[rel].begin(), edges[rel].end());
    edges[rel].erase(std::unique(edges[rel].begin(), edges[rel].end()),
                     edges[rel].end());
  }
  return LabeledGraph(g.sigma, g.gamma, std::move(labels), edges);
}

/// Minor inclusion by exhaustive witness search: a partial map of g's nodes
/// onto h's nodes whose classes are nonempty, each induces a connected
/// subgraph, and every h-edge has some g-edge between the matching classes.
/// Both graphs must be undirected with a single edge relation; h loop-free.
inline bool has_minor(const LabeledGraph& g, const LabeledGraph& h) {
  if (g.gamma.size() != 1 || h.gamma.size() != 1)
    throw invalid_input("minor inclusion needs a single edge relation");
  if (!is_undirected(g) || !is_undirected(h))
    throw invalid_input("minor inclusion is defined for undirected graphs");
  for (int v = 0; v < h.n; ++v)
    if (h.has_edge(0, v, v)) throw invalid_input("minor pattern must be loop-free");
  if (h.n > g.n) return false;

  double space = 1;
  for (int i = 0; i < g.n; ++i) space *= (h.n + 1);
  if (space > 5e8) throw resource_cap("minor search space too large");

  std::vector<int> assign(g.n, 0);  // 0 = unused, 1..h.n = class
  while (true) {
    bool ok = true;
    for (int c = 1; c <= h.n && ok; ++c) {
      uint64_t cls = 0;
      for (int v = 0; v < g.n; ++v)
        if (assign[v] == c) cls |= uint64_t(1) << v;
      if (!cls) { ok = false; break; }
      // connectivity of the induced class
      uint64_t seen = cls & (~cls + 1), frontier = seen;
      while (frontier) {
        uint64_t next = 0;
        for (int v = 0; v < g.n; ++v)
          if ((frontier >> v) & 1) next |= g.out_row[0][v] | g.in_row[0][v];
        frontier = (next & cls) & ~seen;
        seen |= frontier;
      }
      if (seen != cls) ok = false;
    }
    if (ok) {
      for (int a = 0; a < h.n && ok; ++a)
        for (int b = 0; b < h.n && ok; ++b) {
          if (!(a < b) || !h.has_edge(0, a, b)) continue;
          bool found = false;
          for (int u = 0; u < g.n && !found; ++u)
            for (int v = 0; v < g.n && !found; ++v)
              if (assign[u] == a + 1 && assign[v] == b + 1 && g.has_edge(0, u, v))
                found = true;
          if (!found) ok = false;
        }
      if (ok) return true;
    }
    int i = 0;
    while (i < g.n && assign[i] == h.n) assign[i++] = 0;
    if (i == g.n) return false;
    ++assign[i];
  }
}

/// Uniformly random graph with 1..n_max nodes; every label and edge choice
/// drawn independently from the given engine.
inline LabeledGraph random_graph(std::mt19937& rng, int n_max,
                                 const Alphabet& sigma, const Alphabet& gamma) {
  std::uniform_int_distribution<int> nd(1, n_max);
  int n = nd(rng);
  std::uniform_int_distribution<int> ld(0, sigma.size() - 1);
  std::vector<int> labels(n);
  for (auto& l : labels) l = ld(rng);
  std::uniform_int_distribution<int> bd(0, 1);
  std::vector<std::vector<std::pair<int, int>>> edges(gamma.size());
  for (int rel = 0; rel < gamma.size(); ++rel)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (bd(rng)) edges[rel].emplace_back(u, v);
  return LabeledGraph(sigma, gamma, std::move(labels), edges);
}

/// Random undirected graph (every edge mirrored).
inline LabeledGraph random_undirected_graph(std::mt19937& rng, int n_max,
                                            const Alphabet& sigma,
                                            const Alphabet& gamma) {
  std::uniform_int_distribution<int> nd(1, n_max);
  int n = nd(rng);
  std::uniform_int_distribution<int> ld(0, sigma.size() - 1);
  std::vector<int> labels(n);
  for (auto& l : labels) l = ld(rng);
  std::uniform_int_distribution<int> bd(0, 1);
  std::vector<std::vector<std::pair<int, int>>> edges(gamma.size());
  for (int rel = 0; rel < gamma.size(); ++rel)
    for (int u = 0; u < n; ++u)
      for (int v = u; v < n; ++v)
        if (bd(rng)) {
          edges[rel].emplace_back(u, v);
          if (u != v) edges[rel].emplace_back(v, u);
        }
  return LabeledGraph(sigma, gamma, std::move(labels), edges);
}

}  // namespace dga
