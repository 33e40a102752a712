#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dga/automaton.hpp"
#include "dga/game.hpp"
#include "dga/graph.hpp"

namespace dga {

/// Construction record handed back next to every transformed automaton. The
/// size laws of the constructions hold with respect to the input sizes
/// recorded here, which are taken after any internal normalization.
struct TransformReport {
  std::string op;
  std::vector<std::array<int, 2>> inputs;  // (siz, len) per input as consumed
  int siz = 0;
  int len = 0;
  std::vector<std::string> fresh_states;
  std::vector<std::string> removed_states;
  std::vector<std::string> notes;
};

struct TransformResult {
  Automaton automaton;
  TransformReport report;
};

inline std::string fresh_name(std::string base, std::set<std::string>& taken) {
  while (taken.count(base)) base += "'";
  taken.insert(base);
  return base;
}

inline StateKind level_kind(const Automaton& a, int lvl) {
  for (int q = 0; q < a.siz(); ++q)
    if (!a.is_permanent(q) && a.level[q] == lvl) return a.kind_of(q);
  throw internal_error("empty level " + std::to_string(lvl));
}

namespace detail {

inline void stamp_sizes(TransformReport& rep, const Automaton& out) {
  rep.siz = out.siz();
  rep.len = out.len;
}

inline std::set<std::string> name_set(const Automaton& a) {
  std::set<std::string> s;
  for (const auto& st : a.states) s.insert(st.name);
  return s;
}

}  // namespace detail

/// Swaps existential and universal states and complements the accepting
/// family. By determinacy of the acceptance game this complements the
/// recognized language; applying it twice restores the original automaton.
inline TransformResult dual(const Automaton& a) {
  std::vector<State> st = a.states;
  for (auto& s : st) {
    if (s.kind == StateKind::existential)
      s.kind = StateKind::universal;
    else if (s.kind == StateKind::universal)
      s.kind = StateKind::existential;
  }
  TransformResult res{Automaton::build(a.sigma, a.gamma, std::move(st), a.init,
                                       a.rules, AcceptFamily::complement(a.accepting)),
                      {}};
  res.report.op = "dual";
  res.report.inputs = {{a.siz(), a.len}};
  detail::stamp_sizes(res.report, res.automaton);
  return res;
}

/// Adds escape transitions so that no node can ever get stuck: a node whose
/// guards all fail moves into a permanent stop state instead. Plays that
/// formerly ended by blocking are decided by the stop markers: the earliest
/// stop level determines the winner, universal levels in the automaton's
/// favor. When all levels share one kind a single merged stop state
/// suffices, otherwise each level gets its own, so siz grows by at most len.
inline TransformResult make_nonblocking(const Automaton& a) {
  TransformReport rep;
  rep.op = "make_nonblocking";
  rep.inputs = {{a.siz(), a.len}};

  if (a.len == 0) {
    rep.notes.push_back("no nonpermanent states, automaton is trivially nonblocking");
    TransformResult res{a, rep};
    detail::stamp_sizes(res.report, res.automaton);
    return res;
  }

  std::vector<StateKind> kind_of_level(a.len);
  for (int i = 0; i < a.len; ++i) kind_of_level[i] = level_kind(a, i);
  bool single_kind = true;
  for (int i = 1; i < a.len; ++i)
    if (kind_of_level[i] != kind_of_level[0]) single_kind = false;

  std::set<std::string> taken = detail::name_set(a);
  std::vector<State> st = a.states;
  std::vector<int> stop_of_level(a.len);
  std::vector<std::string> stop_names;
  if (single_kind) {
    std::string name = fresh_name("#stop", taken);
    stop_names.push_back(name);
    st.push_back({name, StateKind::permanent});
    for (int i = 0; i < a.len; ++i) stop_of_level[i] = (int)st.size() - 1;
  } else {
    for (int i = 0; i < a.len; ++i) {
      std::string name = fresh_name("#stop" + std::to_string(i), taken);
      stop_names.push_back(name);
      st.push_back({name, StateKind::permanent});
      stop_of_level[i] = (int)st.size() - 1;
    }
  }
  rep.fresh_states = stop_names;

  std::vector<Rule> rules = a.rules;
  for (int q = 0; q < a.siz(); ++q) {
    if (a.is_permanent(q)) continue;
    std::vector<Guard> guards;
    for (int r : a.rules_from[q]) guards.push_back(a.rules[r].guard);
    rules.push_back({q, Guard::negation(Guard::disjunction(std::move(guards))),
                     {stop_of_level[a.level[q]]}});
  }

  // original final sets keep their verdict; sets with stop markers are
  // decided by the kind of the earliest stopped level
  AcceptFamily base = AcceptFamily::conjunction(
      {AcceptFamily::subset_of(a.permanent_names()), a.accepting});
  std::vector<AcceptFamily> branches{std::move(base)};
  if (single_kind) {
    if (kind_of_level[0] == StateKind::universal)
      branches.push_back(AcceptFamily::has(stop_names[0]));
  } else {
    for (int i = 0; i < a.len; ++i) {
      if (kind_of_level[i] != StateKind::universal) continue;
      std::vector<AcceptFamily> ands{AcceptFamily::has(stop_names[i])};
      for (int j = 0; j < i; ++j)
        ands.push_back(AcceptFamily::complement(AcceptFamily::has(stop_names[j])));
      branches.push_back(AcceptFamily::conjunction(std::move(ands)));
    }
  }

  TransformResult res{Automaton::build(a.sigma, a.gamma, std::move(st), a.init,
                                       std::move(rules),
                                       AcceptFamily::disjunction(std::move(branches))),
                      rep};
  if (single_kind && a.len > 1)
    res.report.notes.push_back("levels share one kind, stop states merged");
  detail::stamp_sizes(res.report, res.automaton);
  return res;
}

namespace detail {

/// Can the guard fire for some family of received sets drawn from `pool`?
/// Exact for small pools, otherwise assumed satisfiable (which only makes
/// trimming less aggressive, never wrong).
inline bool guard_satisfiable(const Guard& g, const std::vector<int>& pool,
                              int universe, int relations, bool* exact) {
  int bits = (int)pool.size() * relations;
  if (pool.size() > 12 || bits > 24) {
    *exact = false;
    return true;
  }
  uint64_t total = uint64_t(1) << bits;
  std::vector<Bits> received(relations, Bits(universe));
  for (uint64_t m = 0; m < total; ++m) {
    for (int rel = 0; rel < relations; ++rel) {
      received[rel] = Bits(universe);
      for (size_t i = 0; i < pool.size(); ++i)
        if ((m >> (rel * pool.size() + i)) & 1) received[rel].set(pool[i]);
    }
    if (g.eval(received)) return true;
  }
  return false;
}

}  // namespace detail

/// Removes states that cannot occur in any configuration reachable from an
/// initial one: reachability is propagated level by level, keeping a rule
/// only if its source is reachable and its guard is satisfiable over the
/// states present in that round. Guards of kept rules have atoms over
/// removed states rewritten to their constant value.
inline TransformResult trim(const Automaton& a) {
  TransformReport rep;
  rep.op = "trim";
  rep.inputs = {{a.siz(), a.len}};

  std::vector<char> reach(a.siz(), 0);
  // earliest round a permanent state can be occupied from
  std::vector<int> stamp(a.siz(), -1);
  for (int q : a.init) {
    reach[q] = 1;
    if (a.is_permanent(q)) stamp[q] = 0;
  }
  std::vector<char> keep_rule(a.rules.size(), 0);
  bool exact = true;
  for (int lvl = 0; lvl < a.len; ++lvl) {
    std::vector<int> pool;
    for (int q = 0; q < a.siz(); ++q) {
      if (!reach[q]) continue;
      if (!a.is_permanent(q) && a.level[q] == lvl) pool.push_back(q);
      if (a.is_permanent(q) && stamp[q] >= 0 && stamp[q] <= lvl) pool.push_back(q);
    }
    for (size_t r = 0; r < a.rules.size(); ++r) {
      const Rule& rule = a.rules[r];
      if (!reach[rule.from] || a.is_permanent(rule.from) || a.level[rule.from] != lvl)
        continue;
      if (!detail::guard_satisfiable(rule.guard, pool, a.siz(), a.gamma.size(),
                                     &exact))
        continue;
      keep_rule[r] = 1;
      for (int t : rule.to) {
        reach[t] = 1;
        if (a.is_permanent(t) && (stamp[t] < 0 || stamp[t] > lvl + 1))
          stamp[t] = lvl + 1;
      }
    }
  }
  if (!exact)
    rep.notes.push_back(
        "guard satisfiability over-approximated for rounds with more than 12 "
        "candidate states");

  bool any_permanent = false;
  for (int q = 0; q < a.siz(); ++q)
    if (reach[q] && a.is_permanent(q)) any_permanent = true;
  if (!any_permanent) {
    for (int q = 0; q < a.siz(); ++q)
      if (a.is_permanent(q)) {
        reach[q] = 1;
        rep.notes.push_back("kept unreachable permanent state " + a.name_of(q) +
                            " to satisfy the shape requirements");
        break;
      }
  }

  std::vector<int> remap(a.siz(), -1);
  std::vector<State> st;
  std::set<std::string> removed;
  for (int q = 0; q < a.siz(); ++q) {
    if (reach[q]) {
      remap[q] = (int)st.size();
      st.push_back(a.states[q]);
    } else {
      removed.insert(a.name_of(q));
      rep.removed_states.push_back(a.name_of(q));
    }
  }
  std::vector<int> init;
  for (int q : a.init) init.push_back(remap[q]);
  std::vector<Rule> rules;
  for (size_t r = 0; r < a.rules.size(); ++r) {
    if (!keep_rule[r]) continue;
    Rule rule = a.rules[r];
    rule.from = remap[rule.from];
    rule.guard = rule.guard.remap_states(remap);
    for (int& t : rule.to) t = remap[t];
    rules.push_back(std::move(rule));
  }
  TransformResult res{Automaton::build(a.sigma, a.gamma, std::move(st),
                                       std::move(init), std::move(rules),
                                       a.accepting.drop_states(removed)),
                      rep};
  detail::stamp_sizes(res.report, res.automaton);
  return res;
}

/// Alternation normal form: whenever two adjacent levels share a kind, a
/// level of opposite-kind forwarding copies is inserted between them, so
/// kinds strictly alternate along the levels. Copies have a single
/// unconditional move back to their original, which neither player can
/// exploit. Grows siz to below 2*siz and len to below 2*len.
inline TransformResult to_anf(const Automaton& a) {
  TransformReport rep;
  rep.op = "to_anf";
  rep.inputs = {{a.siz(), a.len}};

  if (a.len <= 1) {
    rep.notes.push_back("at most one level, already alternation-normal");
    TransformResult res{a, rep};
    detail::stamp_sizes(res.report, res.automaton);
    return res;
  }

  std::vector<StateKind> kind_of_level(a.len);
  for (int i = 0; i < a.len; ++i) kind_of_level[i] = level_kind(a, i);

  std::set<std::string> taken = detail::name_set(a);
  std::vector<State> st = a.states;
  // copy_of[q] = id of the forwarding copy of q, when level[q] needs one
  std::vector<int> copy_of(a.siz(), -1);
  std::vector<char> level_copied(a.len, 0);
  for (int i = 0; i + 1 < a.len; ++i) {
    if (kind_of_level[i] != kind_of_level[i + 1]) continue;
    level_copied[i + 1] = 1;
    StateKind opposite = kind_of_level[i] == StateKind::existential
                             ? StateKind::universal
                             : StateKind::existential;
    for (int q = 0; q < a.siz(); ++q) {
      if (a.is_permanent(q) || a.level[q] != i + 1) continue;
      std::string name = fresh_name(a.name_of(q) + "#c1", taken);
      copy_of[q] = (int)st.size();
      st.push_back({name, opposite});
      rep.fresh_states.push_back(name);
    }
  }

  std::vector<Rule> rules;
  for (const Rule& r : a.rules) {
    int lvl = a.level[r.from];
    bool via_copies = lvl + 1 < a.len ? level_copied[lvl + 1] : false;
    if (!via_copies) {
      rules.push_back(r);
      continue;
    }
    Rule moved = r;
    for (int& t : moved.to)
      if (!a.is_permanent(t)) t = copy_of[t];
    rules.push_back(std::move(moved));
  }
  for (int q = 0; q < a.siz(); ++q)
    if (copy_of[q] >= 0) rules.push_back({copy_of[q], Guard::truth(), {q}});

  TransformResult res{Automaton::build(a.sigma, a.gamma, std::move(st), a.init,
                                       std::move(rules), a.accepting),
                      rep};
  detail::stamp_sizes(res.report, res.automaton);
  return res;
}

namespace detail {

/// Prepends one forwarding level in front of an automaton so that its level
/// kinds start with the opposite phase. One dummy per distinct initial
/// state; the initialization is rerouted through the dummies.
inline TransformResult prepend_dummy_level(const Automaton& a,
                                           StateKind dummy_kind) {
  TransformReport rep;
  rep.op = "prepend_dummy_level";
  rep.inputs = {{a.siz(), a.len}};
  std::set<std::string> taken = name_set(a);
  std::vector<State> st = a.states;
  std::map<int, int> dummy_of;  // original init target -> dummy id
  std::vector<Rule> rules = a.rules;
  std::vector<int> init = a.init;
  for (int& q : init) {
    auto it = dummy_of.find(q);
    if (it == dummy_of.end()) {
      std::string name = fresh_name("#d0_" + a.name_of(q), taken);
      int id = (int)st.size();
      st.push_back({name, dummy_kind});
      rules.push_back({id, Guard::truth(), {q}});
      rep.fresh_states.push_back(name);
      it = dummy_of.emplace(q, id).first;
    }
    q = it->second;
  }
  TransformResult res{Automaton::build(a.sigma, a.gamma, std::move(st),
                                       std::move(init), std::move(rules),
                                       a.accepting),
                      rep};
  stamp_sizes(res.report, res.automaton);
  return res;
}

/// Shared construction for union and intersection. Operands are normalized
/// to nonblocking alternation normal form and phase-aligned; a fresh level 0
/// lets one player distribute the nodes over the operands, and purity
/// escapes cut off plays that mix them.
inline TransformResult combine_adga(const Automaton& a1, const Automaton& a2,
                                    bool for_union) {
  if (!(a1.sigma == a2.sigma) || !(a1.gamma == a2.gamma))
    throw invalid_input("operands must share both alphabets");

  TransformReport rep;
  rep.op = for_union ? "union" : "intersection";

  auto normalize = [&](const Automaton& x, const char* which) {
    TransformResult nb = make_nonblocking(x);
    TransformResult tr = trim(nb.automaton);
    TransformResult anf = to_anf(tr.automaton);
    for (const auto& n : nb.report.notes)
      rep.notes.push_back(std::string(which) + " nonblocking: " + n);
    for (const auto& n : anf.report.notes)
      rep.notes.push_back(std::string(which) + " anf: " + n);
    return anf.automaton;
  };
  Automaton b1 = normalize(a1, "first operand");
  Automaton b2 = normalize(a2, "second operand");

  if (b1.len > 0 && b2.len > 0 && level_kind(b1, 0) != level_kind(b2, 0)) {
    StateKind dk = level_kind(b1, 0);
    TransformResult shifted = detail::prepend_dummy_level(b2, dk);
    b2 = shifted.automaton;
    for (const auto& f : shifted.report.fresh_states) rep.fresh_states.push_back(f);
    rep.notes.push_back("second operand shifted by one forwarding level to align kinds");
  }

  rep.inputs = {{b1.siz(), b1.len}, {b2.siz(), b2.len}};

  const Alphabet& sigma = a1.sigma;
  std::set<std::string> taken;
  std::vector<State> st;
  std::vector<std::string> u_names;
  StateKind chooser = for_union ? StateKind::existential : StateKind::universal;
  for (int i = 0; i < sigma.size(); ++i) {
    std::string name = fresh_name("#u_" + sigma.at(i), taken);
    u_names.push_back(name);
    st.push_back({name, chooser});
    rep.fresh_states.push_back(name);
  }

  int base1 = (int)st.size();
  std::map<std::string, std::string> ren1, ren2;
  for (const auto& s : b1.states) {
    std::string name = fresh_name(s.name, taken);
    if (name != s.name) ren1[s.name] = name;
    st.push_back({name, s.kind});
  }
  int base2 = (int)st.size();
  for (const auto& s : b2.states) {
    std::string name = fresh_name(s.name, taken);
    if (name != s.name) ren2[s.name] = name;
    st.push_back({name, s.kind});
  }
  int escape = (int)st.size();
  std::string escape_name = fresh_name(for_union ? "#rej" : "#acc", taken);
  st.push_back({escape_name, StateKind::permanent});
  rep.fresh_states.push_back(escape_name);

  std::vector<int> map1(b1.siz()), map2(b2.siz());
  for (int q = 0; q < b1.siz(); ++q) map1[q] = base1 + q;
  for (int q = 0; q < b2.siz(); ++q) map2[q] = base2 + q;

  // purity: no state of the other operand (and no escape marker) received
  // over any relation
  auto purity = [&](int other_base, int other_size) {
    std::vector<Guard> per_rel;
    for (int rel = 0; rel < a1.gamma.size(); ++rel) {
      std::vector<Guard> foreign;
      for (int q = 0; q < other_size; ++q)
        foreign.push_back(Guard::member(rel, other_base + q));
      foreign.push_back(Guard::member(rel, escape));
      per_rel.push_back(Guard::negation(Guard::disjunction(std::move(foreign))));
    }
    return Guard::conjunction(std::move(per_rel));
  };
  Guard pure1 = purity(base2, b2.siz());
  Guard pure2 = purity(base1, b1.siz());

  std::vector<Rule> rules;
  for (int i = 0; i < sigma.size(); ++i) {
    std::vector<int> to{map1[b1.init[i]], map2[b2.init[i]]};
    rules.push_back({i, Guard::truth(), std::move(to)});
  }
  auto translate = [&](const Automaton& b, const std::vector<int>& map,
                       const Guard& pure) {
    for (const Rule& r : b.rules) {
      Rule nr;
      nr.from = map[r.from];
      nr.guard = Guard::conjunction({r.guard.remap_states(map), pure});
      for (int t : r.to) nr.to.push_back(map[t]);
      rules.push_back(std::move(nr));
    }
    for (int q = 0; q < b.siz(); ++q) {
      if (b.is_permanent(q)) continue;
      rules.push_back({map[q], Guard::negation(pure), {escape}});
    }
  };
  translate(b1, map1, pure1);
  translate(b2, map2, pure2);

  std::vector<int> init;
  for (int i = 0; i < sigma.size(); ++i) init.push_back(i);

  auto renamed_names = [&](const Automaton& b,
                           const std::map<std::string, std::string>& ren) {
    std::vector<std::string> out;
    for (int q : b.permanent_states()) {
      auto it = ren.find(b.name_of(q));
      out.push_back(it == ren.end() ? b.name_of(q) : it->second);
    }
    return out;
  };
  std::vector<std::string> p1 = renamed_names(b1, ren1);
  std::vector<std::string> p2 = renamed_names(b2, ren2);
  AcceptFamily f1 = b1.accepting.renamed(ren1);
  AcceptFamily f2 = b2.accepting.renamed(ren2);
  AcceptFamily pure_branch1 =
      AcceptFamily::conjunction({AcceptFamily::subset_of(p1), std::move(f1)});
  AcceptFamily pure_branch2 =
      AcceptFamily::conjunction({AcceptFamily::subset_of(p2), std::move(f2)});
  std::vector<AcceptFamily> branches{std::move(pure_branch1), std::move(pure_branch2)};
  if (!for_union)
    branches.push_back(AcceptFamily::conjunction(
        {AcceptFamily::complement(AcceptFamily::subset_of(p1)),
         AcceptFamily::complement(AcceptFamily::subset_of(p2))}));

  TransformResult res{Automaton::build(sigma, a1.gamma, std::move(st),
                                       std::move(init), std::move(rules),
                                       AcceptFamily::disjunction(std::move(branches))),
                      rep};
  detail::stamp_sizes(res.report, res.automaton);
  return res;
}

}  // namespace detail

inline TransformResult union_of(const Automaton& a1, const Automaton& a2) {
  return detail::combine_adga(a1, a2, true);
}

inline TransformResult intersection_of(const Automaton& a1, const Automaton& a2) {
  return detail::combine_adga(a1, a2, false);
}

/// Projects the language through a relabeling of the node alphabet:
/// `new_label_of[i]` is the index in `sigma_new` that the old label `i` maps
/// to. A fresh existential level 0 guesses a preimage label per node; labels
/// of `sigma_new` without preimage have no move and reject.
inline TransformResult project(const Automaton& a, const Alphabet& sigma_new,
                               const std::vector<int>& new_label_of) {
  if ((int)new_label_of.size() != a.sigma.size())
    throw invalid_input("projection map must cover every old label");
  for (int b : new_label_of)
    if (b < 0 || b >= sigma_new.size())
      throw invalid_input("projection map names an unknown new label");

  TransformReport rep;
  rep.op = "project";
  Automaton b = trim(a).automaton;
  rep.inputs = {{b.siz(), b.len}};

  std::set<std::string> taken = detail::name_set(b);
  std::vector<State> st;
  std::vector<std::string> gnames;
  for (int i = 0; i < sigma_new.size(); ++i) {
    std::string name = fresh_name("#p_" + sigma_new.at(i), taken);
    gnames.push_back(name);
    st.push_back({name, StateKind::existential});
    rep.fresh_states.push_back(name);
  }
  int base = (int)st.size();
  for (const auto& s : b.states) st.push_back(s);

  std::vector<int> remap(b.siz());
  for (int q = 0; q < b.siz(); ++q) remap[q] = base + q;

  std::vector<Rule> rules;
  for (int nb = 0; nb < sigma_new.size(); ++nb) {
    std::vector<int> to;
    for (int old = 0; old < a.sigma.size(); ++old)
      if (new_label_of[old] == nb) to.push_back(remap[b.init[old]]);
    std::sort(to.begin(), to.end());
    to.erase(std::unique(to.begin(), to.end()), to.end());
    if (!to.empty()) rules.push_back({nb, Guard::truth(), std::move(to)});
  }
  for (const Rule& r : b.rules) {
    Rule nr;
    nr.from = remap[r.from];
    nr.guard = r.guard.remap_states(remap);
    for (int t : r.to) nr.to.push_back(remap[t]);
    rules.push_back(std::move(nr));
  }

  std::vector<int> init;
  for (int i = 0; i < sigma_new.size(); ++i) init.push_back(i);

  TransformResult res{Automaton::build(sigma_new, a.gamma, std::move(st),
                                       std::move(init), std::move(rules),
                                       b.accepting),
                      rep};
  detail::stamp_sizes(res.report, res.automaton);
  return res;
}

/// Reinterprets the automaton over a richer node alphabet: `old_label_of[i]`
/// names the old label that the new label `i` behaves as. States, rules, and
/// the accepting family stay untouched.
inline TransformResult extend_alphabet(const Automaton& a, const Alphabet& sigma_new,
                                       const std::vector<int>& old_label_of) {
  if ((int)old_label_of.size() != sigma_new.size())
    throw invalid_input("alphabet extension must cover every new label");
  std::vector<int> init;
  for (int old : old_label_of) {
    if (old < 0 || old >= a.sigma.size())
      throw invalid_input("alphabet extension names an unknown old label");
    init.push_back(a.init[old]);
  }
  TransformReport rep;
  rep.op = "extend_alphabet";
  rep.inputs = {{a.siz(), a.len}};
  TransformResult res{Automaton::build(sigma_new, a.gamma, a.states, std::move(init),
                                       a.rules, a.accepting),
                      rep};
  detail::stamp_sizes(res.report, res.automaton);
  return res;
}

/// How blocking was ruled out (or found).
struct NonblockingReport {
  enum class Status { blocking, syntactically_complete, verified_up_to_cap };
  Status status = Status::verified_up_to_cap;
  std::optional<LabeledGraph> witness;  // a graph with a reachable stuck node
  int node_cap = 0;
  std::string detail;
};

/// Decides whether some reachable configuration can get stuck. First tries
/// to prove every state's guards exhaustive; failing that, searches all
/// graphs up to `node_cap` nodes for a reachable blocked configuration.
inline NonblockingReport is_nonblocking(const Automaton& a, int node_cap = 3,
                                        GameLimits limits = {}) {
  NonblockingReport rep;
  bool all_total = true;
  for (int q = 0; q < a.siz(); ++q) {
    if (a.is_permanent(q)) continue;
    std::optional<bool> t = guards_total(a, q);
    if (!t.has_value() || !*t) {
      all_total = false;
      break;
    }
  }
  if (all_total) {
    rep.status = NonblockingReport::Status::syntactically_complete;
    rep.detail = "every nonpermanent state has exhaustive guards";
    return rep;
  }

  GraphEnumeration en(node_cap, a.sigma, a.gamma);
  while (auto g = en.next()) {
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> todo{initial_configuration(a, *g)};
    seen.insert(todo[0]);
    while (!todo.empty()) {
      std::vector<int> q = std::move(todo.back());
      todo.pop_back();
      PositionType type = classify_configuration(a, q);
      if (type == PositionType::accepting_sink || type == PositionType::rejecting_sink)
        continue;
      auto choices = detail::node_choices(a, *g, q);
      for (int v = 0; v < g->n; ++v) {
        if (!a.is_permanent(q[v]) && choices[v].empty()) {
          rep.status = NonblockingReport::Status::blocking;
          rep.witness = *g;
          rep.detail = "node " + std::to_string(v) + " in state " +
                       a.name_of(q[v]) + " has no matching rule";
          return rep;
        }
      }
      for (SuccessorCursor cur(std::move(choices)); !cur.done(); cur.advance()) {
        std::vector<int> next = cur.current();
        if ((uint64_t)seen.size() >= limits.position_cap)
          throw resource_cap("blocking search exceeds the position cap");
        if (seen.insert(next).second) todo.push_back(std::move(next));
      }
    }
  }
  rep.status = NonblockingReport::Status::verified_up_to_cap;
  rep.node_cap = node_cap;
  rep.detail = "no reachable blocked configuration on graphs with up to " +
               std::to_string(node_cap) + " nodes";
  return rep;
}

/// Flips the accepting family of a deterministic automaton. Requires an
/// automaton with a single run per graph: no universal states, at most one
/// successor per received family, no reachable blocking.
inline TransformResult complement_ddga(const Automaton& a, int node_cap = 3) {
  if (a.has_universal_states())
    throw invalid_input("complement by flipping final sets needs a deterministic "
                        "automaton, but there are universal states");
  TransformReport rep;
  rep.op = "complement_ddga";
  rep.inputs = {{a.siz(), a.len}};
  Determinism det = check_determinism(a);
  if (det == Determinism::nondeterministic)
    throw invalid_input("complement by flipping final sets needs a deterministic "
                        "automaton, but some state has several successors for one "
                        "received family");
  if (det == Determinism::unverified)
    rep.notes.push_back("determinism not verified, received-set families exceed "
                        "the enumeration cap");
  NonblockingReport nb = is_nonblocking(a, node_cap);
  if (nb.status == NonblockingReport::Status::blocking)
    throw invalid_input("complement by flipping final sets needs a nonblocking "
                        "automaton: " + nb.detail);
  if (nb.status == NonblockingReport::Status::verified_up_to_cap)
    rep.notes.push_back(nb.detail);
  TransformResult res{Automaton::build(a.sigma, a.gamma, a.states, a.init, a.rules,
                                       AcceptFamily::complement(a.accepting)),
                      rep};
  detail::stamp_sizes(res.report, res.automaton);
  return res;
}

enum class PairMode { both, either };

namespace detail {

struct PairSpace {
  // (q1, q2) -> pair id, only for round-consistent pairs
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> pairs;
};

/// Round-consistent pairs: both permanent, or sharing a level, or one
/// permanent next to a nonpermanent one (the permanent side idles).
inline PairSpace build_pairs(const Automaton& b1, const Automaton& b2) {
  PairSpace ps;
  for (int q1 = 0; q1 < b1.siz(); ++q1)
    for (int q2 = 0; q2 < b2.siz(); ++q2) {
      bool p1 = b1.is_permanent(q1), p2 = b2.is_permanent(q2);
      if (!p1 && !p2 && b1.level[q1] != b2.level[q2]) continue;
      ps.id[{q1, q2}] = (int)ps.pairs.size();
      ps.pairs.push_back({q1, q2});
    }
  return ps;
}

/// Rewrites a guard of one component over the pair states: membership turns
/// into a disjunction over the pairs carrying the state, set equality into
/// the full conjunction describing the projection, and cardinality into a
/// disjunction over the projections of admissible size.
struct PairGuardTranslator {
  const PairSpace& ps;
  bool first;                    // translate first-component guards?
  const std::vector<int>& pool;  // component states possible in this round
  uint64_t subset_cap;

  Guard component_has(int rel, int q) const {
    std::vector<Guard> alts;
    for (size_t i = 0; i < ps.pairs.size(); ++i) {
      int c = first ? ps.pairs[i].first : ps.pairs[i].second;
      if (c == q) alts.push_back(Guard::member(rel, (int)i));
    }
    return Guard::disjunction(std::move(alts));
  }

  Guard projection_equals(int rel, const std::vector<int>& set) const {
    std::vector<Guard> parts;
    for (int q : set) parts.push_back(component_has(rel, q));
    for (int q : pool) {
      if (std::find(set.begin(), set.end(), q) != set.end()) continue;
      parts.push_back(Guard::negation(component_has(rel, q)));
    }
    return Guard::conjunction(std::move(parts));
  }

  Guard translate(const Guard& g) const {
    switch (g.op) {
      case Guard::Op::truth:
        return Guard::truth();
      case Guard::Op::member:
        return component_has(g.rel, g.state);
      case Guard::Op::equals:
        return projection_equals(g.rel, g.set);
      case Guard::Op::card: {
        if (pool.size() >= 63 || (uint64_t(1) << pool.size()) > subset_cap)
          throw resource_cap("cardinality guard translation exceeds the subset cap");
        std::vector<Guard> alts;
        for (uint64_t m = 0; m < (uint64_t(1) << pool.size()); ++m) {
          int size = __builtin_popcountll(m);
          if (!card_rel_holds(g.cmp, size, g.bound)) continue;
          std::vector<int> set;
          for (size_t i = 0; i < pool.size(); ++i)
            if ((m >> i) & 1) set.push_back(pool[i]);
          alts.push_back(projection_equals(g.rel, set));
        }
        return Guard::disjunction(std::move(alts));
      }
      case Guard::Op::negation:
        return Guard::negation(translate(g.kids[0]));
      case Guard::Op::conjunction: {
        std::vector<Guard> kids;
        for (const auto& k : g.kids) kids.push_back(translate(k));
        return Guard::conjunction(std::move(kids));
      }
      case Guard::Op::disjunction: {
        std::vector<Guard> kids;
        for (const auto& k : g.kids) kids.push_back(translate(k));
        return Guard::disjunction(std::move(kids));
      }
    }
    return Guard::truth();
  }
};

}  // namespace detail

/// Synchronous product of two automata without universal states, run on the
/// same graph. Components are made nonblocking first, so every play
/// completes and the accepting family can combine the component verdicts:
/// `both` accepts when the projections satisfy both families, `either` when
/// one suffices. Deterministic inputs give a deterministic product.
inline TransformResult product_of(const Automaton& a1, const Automaton& a2,
                                  PairMode mode = PairMode::both,
                                  uint64_t subset_cap = uint64_t(1) << 16) {
  if (a1.has_universal_states() || a2.has_universal_states())
    throw invalid_input("product requires automata without universal states");
  if (!(a1.sigma == a2.sigma) || !(a1.gamma == a2.gamma))
    throw invalid_input("operands must share both alphabets");

  TransformReport rep;
  rep.op = mode == PairMode::both ? "product_and" : "product_or";
  Automaton b1 = make_nonblocking(a1).automaton;
  Automaton b2 = make_nonblocking(a2).automaton;
  rep.inputs = {{b1.siz(), b1.len}, {b2.siz(), b2.len}};

  detail::PairSpace ps = detail::build_pairs(b1, b2);
  std::set<std::string> taken;
  std::vector<State> st;
  for (auto [q1, q2] : ps.pairs) {
    bool perm = b1.is_permanent(q1) && b2.is_permanent(q2);
    std::string name =
        fresh_name("(" + b1.name_of(q1) + "," + b2.name_of(q2) + ")", taken);
    st.push_back({name, perm ? StateKind::permanent : StateKind::existential});
  }

  std::vector<int> init;
  for (int i = 0; i < a1.sigma.size(); ++i)
    init.push_back(ps.id.at({b1.init[i], b2.init[i]}));

  std::vector<Rule> rules;
  for (size_t p = 0; p < ps.pairs.size(); ++p) {
    auto [q1, q2] = ps.pairs[p];
    bool p1 = b1.is_permanent(q1), p2 = b2.is_permanent(q2);
    if (p1 && p2) continue;
    int lvl = p1 ? b2.level[q2] : b1.level[q1];
    std::vector<int> pool1 = b1.round_states(lvl);
    std::vector<int> pool2 = b2.round_states(lvl);
    detail::PairGuardTranslator t1{ps, true, pool1, subset_cap};
    detail::PairGuardTranslator t2{ps, false, pool2, subset_cap};
    auto cross = [&](const Guard& g, const std::vector<int>& to1,
                     const std::vector<int>& to2) {
      std::vector<int> to;
      for (int s1 : to1)
        for (int s2 : to2) {
          auto it = ps.id.find({s1, s2});
          if (it == ps.id.end())
            throw internal_error("product successor pair is not round-consistent");
          to.push_back(it->second);
        }
      rules.push_back({(int)p, g, std::move(to)});
    };
    if (!p1 && !p2) {
      for (int r1 : b1.rules_from[q1])
        for (int r2 : b2.rules_from[q2])
          cross(Guard::conjunction({t1.translate(b1.rules[r1].guard),
                                    t2.translate(b2.rules[r2].guard)}),
                b1.rules[r1].to, b2.rules[r2].to);
    } else if (!p1) {
      for (int r1 : b1.rules_from[q1])
        cross(t1.translate(b1.rules[r1].guard), b1.rules[r1].to, {q2});
    } else {
      for (int r2 : b2.rules_from[q2])
        cross(t2.translate(b2.rules[r2].guard), {q1}, b2.rules[r2].to);
    }
  }

  std::vector<std::array<std::string, 3>> pair_map;
  for (size_t p = 0; p < ps.pairs.size(); ++p) {
    auto [q1, q2] = ps.pairs[p];
    if (b1.is_permanent(q1) && b2.is_permanent(q2))
      pair_map.push_back({st[p].name, b1.name_of(q1), b2.name_of(q2)});
  }
  AcceptFamily fam = AcceptFamily::pair_proj(
      mode == PairMode::both ? AcceptFamily::PairMode::both
                             : AcceptFamily::PairMode::either,
      std::move(pair_map), b1.accepting, b2.accepting);

  TransformResult res{Automaton::build(a1.sigma, a1.gamma, std::move(st),
                                       std::move(init), std::move(rules),
                                       std::move(fam)),
                      rep};
  detail::stamp_sizes(res.report, res.automaton);
  return res;
}

/// Summary of the structural checks that separate the automaton classes.
struct Classification {
  bool alternating = false;  // has universal states
  Determinism determinism = Determinism::unverified;
  NonblockingReport nonblocking;
  // deterministic verdict modulo the caps recorded above
  bool ddga = false;
};

inline Classification classify(const Automaton& a, int node_cap = 3) {
  Classification c;
  c.alternating = a.has_universal_states();
  c.determinism = check_determinism(a);
  c.nonblocking = is_nonblocking(a, node_cap);
  c.ddga = !c.alternating && c.determinism != Determinism::nondeterministic &&
           c.nonblocking.status != NonblockingReport::Status::blocking;
  return c;
}

}  // namespace dga
