#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dga/automaton.hpp"
#include "dga/game.hpp"
#include "dga/graph.hpp"

namespace dga {

using RunSequence = std::vector<std::vector<int>>;

/// What one node observes over a whole run: its own state and, per relation,
/// the set of states among its incoming neighbors, round by round.
struct LocalView {
  struct Entry {
    int state;
    std::vector<std::vector<int>> received;  // per relation, sorted states
    bool operator==(const Entry&) const = default;
  };
  std::vector<Entry> entries;
  bool operator==(const LocalView&) const = default;
};

inline LocalView local_view(const Automaton& a, const LabeledGraph& g,
                            const RunSequence& run, int v) {
  if (v < 0 || v >= g.n) throw invalid_input("local view of an unknown node");
  LocalView out;
  for (const auto& q : run) {
    LocalView::Entry e;
    e.state = q[v];
    for (int rel = 0; rel < g.gamma.size(); ++rel) {
      Bits seen(a.siz());
      uint64_t mask = g.in_mask(rel, v);
      for (int u = 0; u < g.n; ++u)
        if ((mask >> u) & 1) seen.set(q[u]);
      e.received.push_back(seen.members());
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

/// Replays a configuration sequence: starts at the initial configuration,
/// every step is a legal cloud successor, the last configuration is
/// permanent and its state set is accepting.
inline bool verify_accepting_run(const Automaton& a, const LabeledGraph& g,
                                 const RunSequence& run) {
  detail::check_same_interface(a, g);
  if (run.empty() || run.front() != initial_configuration(a, g)) return false;
  for (size_t i = 0; i + 1 < run.size(); ++i) {
    if ((int)run[i].size() != g.n || (int)run[i + 1].size() != g.n)
      return false;
    auto received = detail::received_sets(a, g, run[i]);
    for (int v = 0; v < g.n; ++v) {
      Bits allowed = a.local_successors(run[i][v], received[v]);
      if (!allowed.test(run[i + 1][v])) return false;
    }
  }
  Bits final_states(a.siz());
  for (int s : run.back()) {
    if (!a.is_permanent(s)) return false;
    final_states.set(s);
  }
  return a.accepting_contains(final_states);
}

// ---- mirroring ----

struct MirrorEvidence {
  bool original_accepted = false;
  MirrorResult mirrored;
  std::optional<RunSequence> run;        // on the original graph
  std::optional<RunSequence> imitation;  // on the mirrored graph
  bool imitation_accepted = false;
};

/// For an automaton without universal states: if the graph is accepted,
/// builds the imitation run on the mirrored graph, where every copy repeats
/// its original's states, and verifies it is accepting.
inline MirrorEvidence check_mirroring(const Automaton& a, const LabeledGraph& g,
                                      const std::vector<int>& u_nodes,
                                      GameLimits limits = {}) {
  MirrorEvidence ev;
  ev.mirrored = mirror(g, u_nodes);
  auto run = ndga_accepts_path(a, g, limits);
  if (!run) return ev;
  ev.original_accepted = true;
  ev.run = *run;
  // copy_of maps original -> copy; invert it so copies look up their source
  std::vector<int> original_of(ev.mirrored.graph.n);
  for (int v = 0; v < g.n; ++v) original_of[v] = v;
  for (int v = 0; v < g.n; ++v)
    if (ev.mirrored.copy_of[v] >= 0) original_of[ev.mirrored.copy_of[v]] = v;
  RunSequence imitation;
  for (const auto& q : *run) {
    std::vector<int> iq(ev.mirrored.graph.n);
    for (int v = 0; v < ev.mirrored.graph.n; ++v) iq[v] = q[original_of[v]];
    imitation.push_back(std::move(iq));
  }
  ev.imitation_accepted = verify_accepting_run(a, ev.mirrored.graph, imitation);
  ev.imitation = std::move(imitation);
  return ev;
}

// ---- merging ----

struct MergeEvidence {
  int keep = -1;
  int drop = -1;
  MergeMode mode = MergeMode::asymmetric;
  LabeledGraph merged;
  RunSequence merged_run;
  bool replay_ok = false;
};

/// Pigeonhole step of the language-size bound: finds two nodes whose state
/// sequences (asymmetric) or full local views (symmetric) coincide along the
/// run, merges them, and replays the shrunken run on the merged graph.
inline std::optional<MergeEvidence> find_merge_pair(const Automaton& a,
                                                    const LabeledGraph& g,
                                                    const RunSequence& run,
                                                    MergeMode mode) {
  if (run.empty()) throw invalid_input("merge search needs a run");
  auto matches = [&](int w, int w2) {
    if (mode == MergeMode::asymmetric) {
      for (const auto& q : run)
        if (q[w] != q[w2]) return false;
      return true;
    }
    return local_view(a, g, run, w) == local_view(a, g, run, w2);
  };
  for (int w = 0; w < g.n; ++w) {
    for (int w2 = w + 1; w2 < g.n; ++w2) {
      if (!matches(w, w2)) continue;
      MergeEvidence ev;
      ev.keep = w;
      ev.drop = w2;
      ev.mode = mode;
      ev.merged = merge_nodes(g, w, w2, mode);
      for (const auto& q : run) {
        std::vector<int> mq;
        for (int v = 0; v < g.n; ++v)
          if (v != w2) mq.push_back(q[v]);
        ev.merged_run.push_back(std::move(mq));
      }
      ev.replay_ok = verify_accepting_run(a, ev.merged, ev.merged_run);
      return ev;
    }
  }
  return std::nullopt;
}

inline uint64_t sat_mul(uint64_t a, uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

inline uint64_t sat_pow(uint64_t base, uint64_t exp) {
  uint64_t out = 1;
  for (uint64_t i = 0; i < exp; ++i) out = sat_mul(out, base);
  return out;
}

/// Node-count bound above which some accepted graph must contain a mergeable
/// pair: |Q|^(len+1) for asymmetric merging, (|Q| * 2^(|Γ| * |Q|))^(len+1)
/// for symmetric merging (which preserves undirectedness).
inline uint64_t merging_bound(const Automaton& a,
                              MergeMode mode = MergeMode::asymmetric) {
  uint64_t siz = (uint64_t)a.siz();
  uint64_t per_node =
      mode == MergeMode::asymmetric
          ? siz
          : sat_mul(siz, sat_pow(2, sat_mul((uint64_t)a.gamma.size(), siz)));
  return sat_pow(per_node, (uint64_t)a.len + 1);
}

// ---- bounded emptiness ----

struct EmptinessVerdict {
  enum class Status { non_empty, empty_up_to, empty_proven };
  Status status = Status::empty_up_to;
  std::optional<LabeledGraph> witness;
  std::optional<RunSequence> witness_run;
  uint64_t bound_used = 0;
  uint64_t theoretical_bound = 0;
  bool undirected = false;
};

inline const char* emptiness_status_name(EmptinessVerdict::Status s) {
  switch (s) {
    case EmptinessVerdict::Status::non_empty: return "NonEmpty";
    case EmptinessVerdict::Status::empty_up_to: return "EmptyUpTo";
    case EmptinessVerdict::Status::empty_proven: return "EmptyProven";
  }
  return "?";
}

/// Searches for an accepted graph by increasing node count. Exhausting the
/// merging-lemma bound proves emptiness; exhausting only the cap reports how
/// far the sweep went. The undirected variant looks for undirected witnesses
/// under the symmetric-merging bound.
inline EmptinessVerdict ndga_emptiness(const Automaton& a, uint64_t cap = 4,
                                       bool undirected = false,
                                       GameLimits limits = {}) {
  if (a.has_universal_states())
    throw invalid_input(
        "emptiness is undecidable with universal states; run search covers "
        "only nondeterministic automata");
  EmptinessVerdict verdict;
  verdict.undirected = undirected;
  verdict.theoretical_bound = merging_bound(
      a, undirected ? MergeMode::symmetric : MergeMode::asymmetric);
  uint64_t n_max = std::min(cap, verdict.theoretical_bound);
  if (n_max == 0) throw invalid_input("emptiness search needs a nonzero cap");
  if (n_max > 9)
    throw resource_cap("emptiness sweep to " + std::to_string(n_max) +
                       " nodes exceeds the 9-node enumeration range; lower "
                       "the cap");

  GraphEnumeration en((int)n_max, a.sigma, a.gamma);
  while (auto g = en.next()) {
    if (undirected && !is_undirected(*g)) continue;
    if (auto run = ndga_accepts_path(a, *g, limits)) {
      verdict.status = EmptinessVerdict::Status::non_empty;
      verdict.witness = *g;
      verdict.witness_run = *run;
      verdict.bound_used = (uint64_t)g->n;
      return verdict;
    }
  }
  verdict.bound_used = n_max;
  verdict.status = n_max >= verdict.theoretical_bound
                       ? EmptinessVerdict::Status::empty_proven
                       : EmptinessVerdict::Status::empty_up_to;
  return verdict;
}

// ---- bounded equivalence ----

struct BoundedEquality {
  bool equal = true;
  std::optional<LabeledGraph> counterexample;
  bool first_accepts = false;
  bool second_accepts = false;
};

/// Compares accepted languages over every graph up to n_max nodes, modulo an
/// optional restriction predicate on the inputs.
inline BoundedEquality bounded_language_equal(
    const Automaton& a1, const Automaton& a2, int n_max,
    const std::function<bool(const LabeledGraph&)>& restriction = {},
    GameLimits limits = {}) {
  if (a1.sigma != a2.sigma || a1.gamma != a2.gamma)
    throw invalid_input("language comparison needs matching alphabets");
  GraphEnumeration en(n_max, a1.sigma, a1.gamma);
  while (auto g = en.next()) {
    if (restriction && !restriction(*g)) continue;
    bool x = accepts(a1, *g, limits);
    bool y = accepts(a2, *g, limits);
    if (x != y) {
      BoundedEquality out;
      out.equal = false;
      out.counterexample = *g;
      out.first_accepts = x;
      out.second_accepts = y;
      return out;
    }
  }
  return {};
}

}  // namespace dga
