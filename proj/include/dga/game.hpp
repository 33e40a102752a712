#pragma once

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dga/automaton.hpp"
#include "dga/base.hpp"
#include "dga/graph.hpp"

namespace dga {

inline uint64_t default_position_cap() {
  if (const char* env = std::getenv("DGA_POSITION_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return (uint64_t)v;
  }
  return 1000000;
}

struct GameLimits {
  uint64_t position_cap = default_position_cap();
};

enum class PositionType {
  existential,        // automaton picks the successor
  universal,          // pathfinder picks the successor
  accepting_sink,     // permanent configuration accepted by the family
  rejecting_sink,     // permanent configuration outside the family
};

inline const char* position_type_name(PositionType t) {
  switch (t) {
    case PositionType::existential: return "existential";
    case PositionType::universal: return "universal";
    case PositionType::accepting_sink: return "accepting";
    case PositionType::rejecting_sink: return "rejecting";
  }
  return "?";
}

namespace detail {

inline void check_same_interface(const Automaton& a, const LabeledGraph& g) {
  if (!(a.sigma == g.sigma) || !(a.gamma == g.gamma))
    throw invalid_input("automaton and graph use different alphabets");
}

/// Per-node sets of states received over each relation in configuration `q`.
inline std::vector<std::vector<Bits>> received_sets(const Automaton& a,
                                                    const LabeledGraph& g,
                                                    const std::vector<int>& q) {
  std::vector<std::vector<Bits>> rec(g.n, std::vector<Bits>(a.gamma.size(), Bits(a.siz())));
  for (int v = 0; v < g.n; ++v)
    for (int rel = 0; rel < a.gamma.size(); ++rel) {
      uint64_t m = g.in_mask(rel, v);
      while (m) {
        int u = __builtin_ctzll(m);
        m &= m - 1;
        rec[v][rel].set(q[u]);
      }
    }
  return rec;
}

/// Per-node successor choices. Any empty entry blocks the whole round.
inline std::vector<std::vector<int>> node_choices(const Automaton& a,
                                                  const LabeledGraph& g,
                                                  const std::vector<int>& q) {
  auto rec = received_sets(a, g, q);
  std::vector<std::vector<int>> choices(g.n);
  for (int v = 0; v < g.n; ++v)
    choices[v] = a.local_successors(q[v], rec[v]).members();
  return choices;
}

}  // namespace detail

inline std::vector<int> initial_configuration(const Automaton& a,
                                              const LabeledGraph& g) {
  detail::check_same_interface(a, g);
  std::vector<int> q(g.n);
  for (int v = 0; v < g.n; ++v) q[v] = a.init[g.labels[v]];
  return q;
}

/// Classify a configuration that is reachable from the initial one. All
/// nonpermanent nodes of such a configuration share one level, hence one
/// kind.
inline PositionType classify_configuration(const Automaton& a,
                                           const std::vector<int>& q) {
  int active = -1;
  for (int s : q)
    if (!a.is_permanent(s)) {
      if (active >= 0 && a.kind_of(active) != a.kind_of(s))
        throw internal_error("configuration mixes state kinds");
      active = s;
    }
  if (active < 0) {
    Bits occupied(a.siz());
    for (int s : q) occupied.set(s);
    return a.accepting_contains(occupied) ? PositionType::accepting_sink
                                          : PositionType::rejecting_sink;
  }
  return a.kind_of(active) == StateKind::existential ? PositionType::existential
                                                     : PositionType::universal;
}

/// Lazy odometer over the product of per-node choices. Yields successor
/// configurations in lexicographic choice order; empty if any node is
/// blocked.
class SuccessorCursor {
public:
  SuccessorCursor(std::vector<std::vector<int>> choices)
      : choices_(std::move(choices)), idx_(choices_.size(), 0) {
    for (const auto& c : choices_)
      if (c.empty()) done_ = true;
  }

  bool done() const { return done_; }

  std::vector<int> current() const {
    std::vector<int> q(choices_.size());
    for (size_t v = 0; v < choices_.size(); ++v) q[v] = choices_[v][idx_[v]];
    return q;
  }

  void advance() {
    for (size_t v = choices_.size(); v-- > 0;) {
      if (++idx_[v] < choices_[v].size()) return;
      idx_[v] = 0;
    }
    done_ = true;
  }

private:
  std::vector<std::vector<int>> choices_;
  std::vector<size_t> idx_;
  bool done_ = false;
};

/// Memoized backward induction over the configuration DAG, generating
/// successors lazily and short-circuiting on the deciding branch. Returns
/// true when the automaton has a winning strategy from `q`.
class GameSolver {
public:
  GameSolver(const Automaton& a, const LabeledGraph& g, GameLimits limits = {})
      : a_(a), g_(g), limits_(limits) {
    detail::check_same_interface(a, g);
  }

  bool automaton_wins(const std::vector<int>& q) {
    auto it = memo_.find(q);
    if (it != memo_.end()) return it->second;
    if ((uint64_t)memo_.size() >= limits_.position_cap)
      throw resource_cap("game exceeds the position cap of " +
                         std::to_string(limits_.position_cap) +
                         " (set DGA_POSITION_CAP to raise it)");
    // reserve the slot first: the DAG has no cycles, so the placeholder is
    // never read back
    PositionType type = classify_configuration(a_, q);
    bool win;
    if (type == PositionType::accepting_sink) {
      win = true;
    } else if (type == PositionType::rejecting_sink) {
      win = false;
    } else {
      memo_.emplace(q, false);
      SuccessorCursor cur(detail::node_choices(a_, g_, q));
      bool existential = type == PositionType::existential;
      // a blocked existential position loses, a blocked universal one wins
      win = !existential;
      for (; !cur.done(); cur.advance()) {
        bool sub = automaton_wins(cur.current());
        if (existential && sub) {
          win = true;
          break;
        }
        if (!existential && !sub) {
          win = false;
          break;
        }
      }
    }
    memo_[q] = win;
    return win;
  }

  size_t positions_explored() const { return memo_.size(); }

private:
  const Automaton& a_;
  const LabeledGraph& g_;
  GameLimits limits_;
  std::map<std::vector<int>, bool> memo_;
};

inline bool accepts(const Automaton& a, const LabeledGraph& g, GameLimits limits = {}) {
  GameSolver solver(a, g, limits);
  return solver.automaton_wins(initial_configuration(a, g));
}

/// Fully expanded game: every reachable position, every move, the winner of
/// each position, and positional strategies for both players.
struct GameAnalysis {
  struct Position {
    std::vector<int> q;
    PositionType type;
    std::vector<int> succ;    // position ids, deduplicated, discovery order
    bool automaton_wins;
    // winning move for whoever owns the position and wins it, else -1
    int strategy = -1;
  };

  std::vector<Position> positions;  // 0 = initial
  bool automaton_wins() const { return positions[0].automaton_wins; }

  std::string config_text(const Automaton& a, int id) const {
    std::string out = "(";
    for (size_t v = 0; v < positions[id].q.size(); ++v) {
      if (v) out += ",";
      out += a.name_of(positions[id].q[v]);
    }
    return out + ")";
  }
};

inline GameAnalysis analyze_game(const Automaton& a, const LabeledGraph& g,
                                 GameLimits limits = {}) {
  detail::check_same_interface(a, g);
  GameAnalysis out;
  std::map<std::vector<int>, int> ids;

  std::vector<int> stack;
  auto intern = [&](const std::vector<int>& q) {
    auto it = ids.find(q);
    if (it != ids.end()) return it->second;
    if ((uint64_t)out.positions.size() >= limits.position_cap)
      throw resource_cap("game exceeds the position cap of " +
                         std::to_string(limits.position_cap) +
                         " (set DGA_POSITION_CAP to raise it)");
    int id = (int)out.positions.size();
    ids.emplace(q, id);
    out.positions.push_back({q, classify_configuration(a, q), {}, false, -1});
    stack.push_back(id);
    return id;
  };

  intern(initial_configuration(a, g));
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    PositionType type = out.positions[id].type;
    if (type == PositionType::accepting_sink || type == PositionType::rejecting_sink)
      continue;
    std::vector<int> qs = out.positions[id].q;
    SuccessorCursor cur(detail::node_choices(a, g, qs));
    std::vector<int> succ;
    std::set<int> seen_succ;
    for (; !cur.done(); cur.advance()) {
      int sid = intern(cur.current());
      if (seen_succ.insert(sid).second) succ.push_back(sid);
    }
    out.positions[id].succ = std::move(succ);
  }

  // backward induction: positions form a DAG (nonpermanent levels strictly
  // increase), so iterate in reverse topological order via post-order DFS
  std::vector<int> order;
  std::vector<int> state(out.positions.size(), 0);
  std::vector<std::pair<int, size_t>> dfs{{0, 0}};
  while (!dfs.empty()) {
    auto& [id, child] = dfs.back();
    if (child == 0 && state[id] == 2) {
      dfs.pop_back();
      continue;
    }
    state[id] = 1;
    if (child < out.positions[id].succ.size()) {
      int next = out.positions[id].succ[child++];
      if (state[next] == 0) dfs.push_back({next, 0});
    } else {
      state[id] = 2;
      order.push_back(id);
      dfs.pop_back();
    }
  }

  for (int id : order) {
    auto& p = out.positions[id];
    switch (p.type) {
      case PositionType::accepting_sink:
        p.automaton_wins = true;
        break;
      case PositionType::rejecting_sink:
        p.automaton_wins = false;
        break;
      case PositionType::existential: {
        p.automaton_wins = false;
        for (int s : p.succ)
          if (out.positions[s].automaton_wins) {
            p.automaton_wins = true;
            p.strategy = s;
            break;
          }
        break;
      }
      case PositionType::universal: {
        p.automaton_wins = true;
        for (int s : p.succ)
          if (!out.positions[s].automaton_wins) {
            p.automaton_wins = false;
            p.strategy = s;
            break;
          }
        break;
      }
    }
    // a blocked position is decided by who is stuck
    if (p.succ.empty() && p.type == PositionType::existential) p.automaton_wins = false;
    if (p.succ.empty() && p.type == PositionType::universal) p.automaton_wins = true;
  }
  return out;
}

/// Replays a positional strategy against every opposing move and reports
/// whether it secures the win it claims. `for_automaton` selects whose
/// strategy is driven.
struct ReplayReport {
  bool consistent = true;     // strategy defined wherever its owner must move
  bool always_wins = true;    // every strategy-play ends in the owner's win
  int plays = 0;              // maximal plays traced
  int positions_visited = 0;
};

inline ReplayReport replay_strategy(const GameAnalysis& ga, bool for_automaton) {
  ReplayReport rep;
  std::vector<char> seen(ga.positions.size(), 0);
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if (seen[id]) continue;
    seen[id] = 1;
    ++rep.positions_visited;
    const auto& p = ga.positions[id];
    bool sink = p.type == PositionType::accepting_sink ||
                p.type == PositionType::rejecting_sink || p.succ.empty();
    if (sink) {
      ++rep.plays;
      bool automaton_won = p.type == PositionType::accepting_sink ||
                           (p.succ.empty() && p.type == PositionType::universal);
      if (automaton_won != for_automaton) rep.always_wins = false;
      continue;
    }
    bool owners_move = (p.type == PositionType::existential) == for_automaton;
    if (owners_move) {
      if (p.strategy < 0) {
        rep.consistent = false;
        rep.always_wins = false;
        continue;
      }
      stack.push_back(p.strategy);
    } else {
      for (int s : p.succ) stack.push_back(s);
    }
  }
  return rep;
}

/// Run of the automaton induced by its winning strategy: existential
/// positions keep exactly the chosen move, universal positions keep every
/// move, and permanent configurations are the sinks.
struct RunDag {
  std::vector<std::vector<int>> configs;
  std::vector<std::vector<int>> edges;  // indices into configs
  std::vector<PositionType> types;
  bool accepting = true;
};

inline RunDag extract_run(const GameAnalysis& ga) {
  if (!ga.automaton_wins())
    throw invalid_input("no accepting run: the automaton loses this game");
  RunDag run;
  std::map<int, int> remap;
  std::vector<int> stack;
  auto intern = [&](int pid) {
    auto it = remap.find(pid);
    if (it != remap.end()) return it->second;
    int id = (int)run.configs.size();
    remap.emplace(pid, id);
    run.configs.push_back(ga.positions[pid].q);
    run.types.push_back(ga.positions[pid].type);
    run.edges.emplace_back();
    stack.push_back(pid);
    return id;
  };
  intern(0);
  std::vector<char> expanded(ga.positions.size(), 0);
  while (!stack.empty()) {
    int pid = stack.back();
    stack.pop_back();
    if (expanded[pid]) continue;
    expanded[pid] = 1;
    const auto& p = ga.positions[pid];
    int self = remap.at(pid);
    // intern may grow run.edges, so take the child id before indexing
    if (p.type == PositionType::existential && p.strategy >= 0) {
      int child = intern(p.strategy);
      run.edges[self].push_back(child);
    } else if (p.type == PositionType::universal) {
      for (int s : p.succ) {
        int child = intern(s);
        run.edges[self].push_back(child);
      }
    } else if (p.type == PositionType::rejecting_sink) {
      run.accepting = false;
    }
  }
  return run;
}

/// Depth-first search for an accepting configuration sequence of an
/// automaton without universal states. Runs of such automata are plain
/// sequences, so presence of one is equivalent to acceptance.
inline std::optional<std::vector<std::vector<int>>> ndga_accepts_path(
    const Automaton& a, const LabeledGraph& g, GameLimits limits = {}) {
  if (a.has_universal_states())
    throw invalid_input("run sequences exist only without universal states");
  detail::check_same_interface(a, g);
  std::map<std::vector<int>, bool> failed;
  std::vector<std::vector<int>> path;
  uint64_t visited = 0;

  std::function<bool(const std::vector<int>&)> dfs =
      [&](const std::vector<int>& q) -> bool {
    if (failed.count(q)) return false;
    if (++visited > limits.position_cap)
      throw resource_cap("run search exceeds the position cap of " +
                         std::to_string(limits.position_cap) +
                         " (set DGA_POSITION_CAP to raise it)");
    path.push_back(q);
    PositionType type = classify_configuration(a, q);
    if (type == PositionType::accepting_sink) return true;
    if (type != PositionType::rejecting_sink) {
      for (SuccessorCursor cur(detail::node_choices(a, g, q)); !cur.done();
           cur.advance())
        if (dfs(cur.current())) return true;
    }
    path.pop_back();
    failed.emplace(q, true);
    return false;
  };

  if (dfs(initial_configuration(a, g))) return path;
  return std::nullopt;
}

}  // namespace dga
