#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dga/alphabet.hpp"
#include "dga/base.hpp"
#include "dga/family.hpp"
#include "dga/guard.hpp"

namespace dga {

enum class StateKind { existential, universal, permanent };

inline char kind_letter(StateKind k) {
  switch (k) {
    case StateKind::existential: return 'E';
    case StateKind::universal: return 'A';
    case StateKind::permanent: return 'P';
  }
  return '?';
}

struct State {
  std::string name;
  StateKind kind;
};

/// One guarded transition: when the guard matches the received sets, every
/// state in `to` is a possible successor. The full transition relation of a
/// state is the union over its matching rules.
struct Rule {
  int from;
  Guard guard;
  std::vector<int> to;  // sorted, nonempty
};

struct Diagnostic {
  std::string code;
  std::string message;
};

class ValidationError : public Error {
public:
  ValidationError(std::vector<Diagnostic> diagnostics, std::string summary)
      : Error(ErrorKind::invalid_input, std::move(summary)),
        diagnostics_(std::move(diagnostics)) {}

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
  std::vector<Diagnostic> diagnostics_;
};

/// Alternating distributed graph automaton. States are synchronized in
/// rounds: nonpermanent states are stratified into levels 0..len-1, every
/// transition moves one level up, and permanent states (level len) loop
/// forever. States of one level share one kind, and the initialization maps
/// node labels to level-0 or permanent states. Treat instances as immutable.
struct Automaton {
  Alphabet sigma;
  Alphabet gamma;
  std::vector<State> states;
  std::vector<int> init;    // sigma index -> state id
  std::vector<Rule> rules;
  AcceptFamily accepting;

  // derived by build():
  std::vector<int> level;   // per state; permanent states sit at len
  int len = 0;              // level of the permanent states
  std::vector<std::vector<int>> rules_from;

  int siz() const { return (int)states.size(); }

  int state_id(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
  }

  const std::string& name_of(int q) const { return states[q].name; }
  StateKind kind_of(int q) const { return states[q].kind; }
  bool is_permanent(int q) const { return states[q].kind == StateKind::permanent; }

  bool has_universal_states() const {
    for (const auto& s : states)
      if (s.kind == StateKind::universal) return true;
    return false;
  }

  std::vector<int> permanent_states() const {
    std::vector<int> out;
    for (int q = 0; q < siz(); ++q)
      if (is_permanent(q)) out.push_back(q);
    return out;
  }

  std::vector<std::string> permanent_names() const {
    std::vector<std::string> out;
    for (int q : permanent_states()) out.push_back(states[q].name);
    return out;
  }

  /// Nonpermanent states of one level.
  std::vector<int> level_states(int lvl) const {
    std::vector<int> out;
    for (int q = 0; q < siz(); ++q)
      if (!is_permanent(q) && level[q] == lvl) out.push_back(q);
    return out;
  }

  /// States a node can meet in its received sets during round lvl -> lvl+1:
  /// the nonpermanent states of that level plus every permanent state.
  std::vector<int> round_states(int lvl) const {
    std::vector<int> out = level_states(lvl);
    for (int q : permanent_states()) out.push_back(q);
    return out;
  }

  /// Local transition: all successor states of `q` given the received sets.
  /// Permanent states loop; a nonpermanent state without matching rule is
  /// blocked (empty result).
  Bits local_successors(int q, std::span<const Bits> received) const {
    Bits out(siz());
    if (is_permanent(q)) {
      out.set(q);
      return out;
    }
    for (int r : rules_from[q])
      if (rules[r].guard.eval(received))
        for (int t : rules[r].to) out.set(t);
    return out;
  }

  /// Does the accepting family contain the given set of permanent states?
  bool accepting_contains(const Bits& permanent_set) const {
    std::vector<std::string> names;
    for (int q = 0; q < siz(); ++q)
      if (permanent_set.test(q)) names.push_back(states[q].name);
    std::sort(names.begin(), names.end());
    return accepting.member(names);
  }

  static std::vector<Diagnostic> check(const Alphabet& sigma, const Alphabet& gamma,
                                       const std::vector<State>& states,
                                       const std::vector<int>& init,
                                       const std::vector<Rule>& rules,
                                       const AcceptFamily& accepting,
                                       std::vector<int>* levels_out = nullptr,
                                       int* len_out = nullptr);

  static Automaton build(Alphabet sigma, Alphabet gamma, std::vector<State> states,
                         std::vector<int> init, std::vector<Rule> rules,
                         AcceptFamily accepting);

private:
  std::unordered_map<std::string, int> index_;
};

inline std::vector<Diagnostic> Automaton::check(
    const Alphabet& sigma, const Alphabet& gamma, const std::vector<State>& states,
    const std::vector<int>& init, const std::vector<Rule>& rules,
    const AcceptFamily& accepting, std::vector<int>* levels_out, int* len_out) {
  std::vector<Diagnostic> diags;
  auto bad = [&](std::string code, std::string msg) {
    diags.push_back({std::move(code), std::move(msg)});
  };

  int n = (int)states.size();
  std::set<std::string> seen_names;
  bool any_permanent = false;
  for (const auto& s : states) {
    if (s.name.empty()) bad("empty-state-name", "state with empty name");
    if (!seen_names.insert(s.name).second)
      bad("duplicate-state", "state name repeats: " + s.name);
    if (s.kind == StateKind::permanent) any_permanent = true;
  }
  if (!any_permanent)
    bad("no-permanent-state", "automaton needs at least one permanent state");

  if ((int)init.size() != sigma.size())
    bad("init-incomplete", "initialization must cover every node label");
  for (size_t i = 0; i < init.size(); ++i)
    if (init[i] < 0 || init[i] >= n)
      bad("init-unknown-state", "initialization of '" + sigma.at((int)i) +
                                    "' names no state");

  std::vector<bool> has_incoming(n, false);
  for (const auto& r : rules) {
    if (r.from < 0 || r.from >= n) {
      bad("rule-unknown-state", "rule from unknown state");
      continue;
    }
    if (states[r.from].kind == StateKind::permanent)
      bad("rule-from-permanent",
          "permanent state has an outgoing rule: " + states[r.from].name);
    if (r.to.empty())
      bad("rule-empty-successors",
          "rule without successors from " + states[r.from].name);
    for (int t : r.to) {
      if (t < 0 || t >= n) {
        bad("rule-unknown-state", "rule names an unknown successor");
        continue;
      }
      if (states[t].kind != StateKind::permanent) has_incoming[t] = true;
    }
    std::vector<int> mentioned;
    r.guard.collect_states(mentioned);
    for (int q : mentioned)
      if (q < 0 || q >= n) bad("guard-unknown-state", "guard names an unknown state");
    // relation indices are resolved against gamma at parse time; here we
    // only defend against hand-built guards
    struct RelCheck {
      const Alphabet& gamma;
      std::vector<Diagnostic>& diags;
      void walk(const Guard& g) {
        if ((g.op == Guard::Op::member || g.op == Guard::Op::equals ||
             g.op == Guard::Op::card) &&
            (g.rel < 0 || g.rel >= gamma.size()))
          diags.push_back({"guard-unknown-relation", "guard uses an unknown relation"});
        for (const auto& k : g.kids) walk(k);
      }
    } rc{gamma, diags};
    rc.walk(r.guard);
  }
  if (!diags.empty()) {
    if (levels_out) levels_out->assign(n, 0);
    if (len_out) *len_out = 0;
    return diags;
  }

  // level fixpoint: nonpermanent states without incoming rules sit at level
  // 0; every rule pushes its nonpermanent successors one level above its
  // source. Conflicting or underivable levels are structural errors.
  std::vector<int> level(n, -1);
  for (int q = 0; q < n; ++q)
    if (states[q].kind != StateKind::permanent && !has_incoming[q]) level[q] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rules) {
      if (level[r.from] < 0 || states[r.from].kind == StateKind::permanent) continue;
      for (int t : r.to) {
        if (states[t].kind == StateKind::permanent) continue;
        int want = level[r.from] + 1;
        if (level[t] < 0) {
          level[t] = want;
          changed = true;
        } else if (level[t] != want) {
          bad("level-conflict", "state " + states[t].name +
                                    " is reached from several levels");
        }
      }
    }
    if (!diags.empty()) break;
  }
  if (diags.empty()) {
    for (int q = 0; q < n; ++q)
      if (states[q].kind != StateKind::permanent && level[q] < 0)
        bad("level-cycle", "state " + states[q].name +
                               " has no derivable level (cyclic rules?)");
  }

  int len = 0;
  if (diags.empty()) {
    for (int q = 0; q < n; ++q)
      if (states[q].kind != StateKind::permanent) len = std::max(len, level[q] + 1);
    for (int q = 0; q < n; ++q)
      if (states[q].kind == StateKind::permanent) level[q] = len;

    std::map<int, StateKind> level_kind;
    for (int q = 0; q < n; ++q) {
      if (states[q].kind == StateKind::permanent) continue;
      auto [it, fresh] = level_kind.emplace(level[q], states[q].kind);
      if (!fresh && it->second != states[q].kind)
        bad("mixed-kind-level", "level " + std::to_string(level[q]) +
                                    " mixes existential and universal states");
    }

    for (size_t i = 0; i < init.size(); ++i)
      if (states[init[i]].kind != StateKind::permanent && level[init[i]] != 0)
        bad("init-target-has-incoming",
            "initial state " + states[init[i]].name + " is not on level 0");

    std::vector<std::string> mentioned;
    accepting.collect_states(mentioned);
    for (const auto& name : mentioned) {
      bool found_permanent = false;
      for (const auto& s : states)
        if (s.name == name && s.kind == StateKind::permanent) found_permanent = true;
      if (!found_permanent)
        bad("accepting-nonpermanent",
            "accepting family mentions a non-permanent state: " + name);
    }
  }

  if (levels_out) *levels_out = level;
  if (len_out) *len_out = len;
  return diags;
}

inline Automaton Automaton::build(Alphabet sigma, Alphabet gamma,
                                  std::vector<State> states, std::vector<int> init,
                                  std::vector<Rule> rules, AcceptFamily accepting) {
  std::vector<int> levels;
  int len = 0;
  auto diags = check(sigma, gamma, states, init, rules, accepting, &levels, &len);
  if (!diags.empty()) {
    std::string summary = "invalid automaton:";
    for (const auto& d : diags) summary += " [" + d.code + "] " + d.message + ";";
    throw ValidationError(std::move(diags), std::move(summary));
  }
  Automaton a;
  a.sigma = std::move(sigma);
  a.gamma = std::move(gamma);
  a.states = std::move(states);
  a.init = std::move(init);
  a.rules = std::move(rules);
  a.accepting = std::move(accepting);
  a.level = std::move(levels);
  a.len = len;
  a.rules_from.assign(a.states.size(), {});
  for (size_t i = 0; i < a.rules.size(); ++i) {
    std::sort(a.rules[i].to.begin(), a.rules[i].to.end());
    a.rules[i].to.erase(std::unique(a.rules[i].to.begin(), a.rules[i].to.end()),
                        a.rules[i].to.end());
    a.rules_from[a.rules[i].from].push_back((int)i);
  }
  for (int q = 0; q < a.siz(); ++q) a.index_[a.states[q].name] = q;
  return a;
}

/// Result of the bounded determinism analysis.
enum class Determinism { deterministic, nondeterministic, unverified };

/// Checks |delta(q, S)| <= 1 for every nonpermanent q over the received-set
/// families that can actually occur: sets drawn from q's level plus the
/// permanent states. Enumeration is capped; beyond the cap the answer is
/// `unverified`.
inline Determinism check_determinism(const Automaton& a, uint64_t cap = 1 << 16) {
  for (int q = 0; q < a.siz(); ++q) {
    if (a.is_permanent(q)) continue;
    std::vector<int> pool = a.round_states(a.level[q]);
    int bits = (int)pool.size() * a.gamma.size();
    if (bits >= 63 || (uint64_t(1) << bits) > cap) return Determinism::unverified;
    uint64_t total = uint64_t(1) << bits;
    std::vector<Bits> received(a.gamma.size(), Bits(a.siz()));
    for (uint64_t m = 0; m < total; ++m) {
      for (int rel = 0; rel < a.gamma.size(); ++rel) {
        received[rel] = Bits(a.siz());
        for (size_t i = 0; i < pool.size(); ++i)
          if ((m >> (rel * pool.size() + i)) & 1) received[rel].set(pool[i]);
      }
      if (a.local_successors(q, received).count() > 1)
        return Determinism::nondeterministic;
    }
  }
  return Determinism::deterministic;
}

/// Is the disjunction of q's rule guards a tautology over arbitrary received
/// sets? Exact via atom-basis enumeration; nullopt when the basis is too
/// large to enumerate under the cap.
inline std::optional<bool> guards_total(const Automaton& a, int q,
                                        uint64_t cap = 1 << 16) {
  bool set_atoms = false;
  std::vector<int> mentioned;
  for (int r : a.rules_from[q]) {
    if (a.rules[r].guard.has_set_atoms()) set_atoms = true;
    a.rules[r].guard.collect_states(mentioned);
  }
  std::vector<int> pool;
  if (set_atoms) {
    for (int s = 0; s < a.siz(); ++s) pool.push_back(s);
  } else {
    std::sort(mentioned.begin(), mentioned.end());
    mentioned.erase(std::unique(mentioned.begin(), mentioned.end()), mentioned.end());
    pool = mentioned;
  }
  int bits = (int)pool.size() * a.gamma.size();
  if (bits >= 63 || (uint64_t(1) << bits) > cap) return std::nullopt;
  uint64_t total = uint64_t(1) << bits;
  std::vector<Bits> received(a.gamma.size(), Bits(a.siz()));
  for (uint64_t m = 0; m < total; ++m) {
    for (int rel = 0; rel < a.gamma.size(); ++rel) {
      received[rel] = Bits(a.siz());
      for (size_t i = 0; i < pool.size(); ++i)
        if ((m >> (rel * pool.size() + i)) & 1) received[rel].set(pool[i]);
    }
    bool any = false;
    for (int r : a.rules_from[q])
      if (a.rules[r].guard.eval(received)) {
        any = true;
        break;
      }
    if (!any) return false;
  }
  return true;
}

}  // namespace dga
