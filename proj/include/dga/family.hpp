#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dga/base.hpp"

namespace dga {

/// Family of accepting state sets, kept symbolic so that complements,
/// cardinality conditions, and product projections stay cheap. Members are
/// referenced by state name; a family is a predicate over sets of permanent
/// states. `member` expects its argument sorted and duplicate-free.
struct AcceptFamily {
  enum class Op {
    always, never, has, card, subset_of, explicit_list,
    complement, conjunction, disjunction, pair_proj
  };
  enum class PairMode { both, either };

  Op op = Op::never;
  std::string state;                         // has
  CardRel cmp = CardRel::ge;                 // card
  int bound = 0;                             // card
  std::vector<std::string> subset;           // subset_of, sorted
  std::vector<std::vector<std::string>> sets;  // explicit_list, each sorted
  std::vector<AcceptFamily> kids;            // complement/conjunction/disjunction
  PairMode pmode = PairMode::both;           // pair_proj
  // pair_proj: pair state name -> (left component name, right component name)
  std::vector<std::array<std::string, 3>> pair_map;

  static AcceptFamily always() { AcceptFamily f; f.op = Op::always; return f; }
  static AcceptFamily never() { return AcceptFamily{}; }

  static AcceptFamily has(std::string state) {
    AcceptFamily f;
    f.op = Op::has;
    f.state = std::move(state);
    return f;
  }

  static AcceptFamily card(CardRel cmp, int bound) {
    AcceptFamily f;
    f.op = Op::card;
    f.cmp = cmp;
    f.bound = bound;
    return f;
  }

  static AcceptFamily subset_of(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    AcceptFamily f;
    f.op = Op::subset_of;
    f.subset = std::move(names);
    return f;
  }

  static AcceptFamily explicit_list(std::vector<std::vector<std::string>> sets) {
    for (auto& s : sets) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    AcceptFamily f;
    f.op = Op::explicit_list;
    f.sets = std::move(sets);
    return f;
  }

  static AcceptFamily complement(AcceptFamily inner) {
    // double complement unwraps so that dualizing twice restores the original
    if (inner.op == Op::complement) return std::move(inner.kids[0]);
    AcceptFamily f;
    f.op = Op::complement;
    f.kids.push_back(std::move(inner));
    return f;
  }

  static AcceptFamily conjunction(std::vector<AcceptFamily> kids) {
    if (kids.size() == 1) return std::move(kids[0]);
    AcceptFamily f;
    f.op = Op::conjunction;
    f.kids = std::move(kids);
    return f;
  }

  static AcceptFamily disjunction(std::vector<AcceptFamily> kids) {
    if (kids.size() == 1) return std::move(kids[0]);
    AcceptFamily f;
    f.op = Op::disjunction;
    f.kids = std::move(kids);
    return f;
  }

  static AcceptFamily pair_proj(PairMode mode,
                                std::vector<std::array<std::string, 3>> map,
                                AcceptFamily left, AcceptFamily right) {
    AcceptFamily f;
    f.op = Op::pair_proj;
    f.pmode = mode;
    f.pair_map = std::move(map);
    f.kids.push_back(std::move(left));
    f.kids.push_back(std::move(right));
    return f;
  }

  bool member(const std::vector<std::string>& set_sorted) const {
    switch (op) {
      case Op::always:
        return true;
      case Op::never:
        return false;
      case Op::has:
        return std::binary_search(set_sorted.begin(), set_sorted.end(), state);
      case Op::card:
        return card_rel_holds(cmp, (int)set_sorted.size(), bound);
      case Op::subset_of:
        for (const auto& s : set_sorted)
          if (!std::binary_search(subset.begin(), subset.end(), s)) return false;
        return true;
      case Op::explicit_list:
        return std::find(sets.begin(), sets.end(), set_sorted) != sets.end();
      case Op::complement:
        return !kids[0].member(set_sorted);
      case Op::conjunction:
        for (const auto& k : kids)
          if (!k.member(set_sorted)) return false;
        return true;
      case Op::disjunction:
        for (const auto& k : kids)
          if (k.member(set_sorted)) return true;
        return false;
      case Op::pair_proj: {
        std::set<std::string> left, right;
        for (const auto& s : set_sorted)
          for (const auto& [pair, l, r] : pair_map)
            if (pair == s) {
              left.insert(l);
              right.insert(r);
            }
        std::vector<std::string> lv(left.begin(), left.end());
        std::vector<std::string> rv(right.begin(), right.end());
        bool a = kids[0].member(lv), b = kids[1].member(rv);
        return pmode == PairMode::both ? (a && b) : (a || b);
      }
    }
    return false;
  }

  /// State names mentioned anywhere in the family (not the pair components).
  void collect_states(std::vector<std::string>& out) const {
    switch (op) {
      case Op::has:
        out.push_back(state);
        break;
      case Op::subset_of:
        out.insert(out.end(), subset.begin(), subset.end());
        break;
      case Op::explicit_list:
        for (const auto& s : sets) out.insert(out.end(), s.begin(), s.end());
        break;
      case Op::pair_proj:
        for (const auto& [pair, l, r] : pair_map) out.push_back(pair);
        return;  // children live in the component name spaces
      default:
        break;
    }
    for (const auto& k : kids) k.collect_states(out);
  }

  /// Restricts the family to sets over the surviving states: sets that would
  /// mention a removed state become non-members automatically, and removed
  /// names are purged from the representation.
  AcceptFamily drop_states(const std::set<std::string>& removed) const {
    switch (op) {
      case Op::has:
        return removed.count(state) ? never() : *this;
      case Op::subset_of: {
        std::vector<std::string> kept;
        for (const auto& s : subset)
          if (!removed.count(s)) kept.push_back(s);
        return subset_of(std::move(kept));
      }
      case Op::explicit_list: {
        std::vector<std::vector<std::string>> kept;
        for (const auto& s : sets) {
          bool hit = false;
          for (const auto& q : s)
            if (removed.count(q)) { hit = true; break; }
          if (!hit) kept.push_back(s);
        }
        return explicit_list(std::move(kept));
      }
      case Op::pair_proj: {
        AcceptFamily f = *this;
        std::erase_if(f.pair_map, [&](const auto& e) { return removed.count(e[0]); });
        return f;
      }
      default: {
        AcceptFamily f = *this;
        for (auto& k : f.kids) k = k.drop_states(removed);
        return f;
      }
    }
  }

  /// Applies a state renaming. Names without an entry stay as they are; pair
  /// component names are left alone (they live in the operand name spaces).
  AcceptFamily renamed(const std::map<std::string, std::string>& map) const {
    auto subst = [&](const std::string& s) {
      auto it = map.find(s);
      return it == map.end() ? s : it->second;
    };
    AcceptFamily f = *this;
    switch (op) {
      case Op::has:
        f.state = subst(state);
        break;
      case Op::subset_of:
        for (auto& s : f.subset) s = subst(s);
        break;
      case Op::explicit_list:
        for (auto& set : f.sets)
          for (auto& s : set) s = subst(s);
        break;
      case Op::pair_proj:
        for (auto& e : f.pair_map) e[0] = subst(e[0]);
        return f;
      default:
        break;
    }
    for (auto& k : f.kids) k = k.renamed(map);
    return f;
  }

  /// All member sets over the given permanent states, in subset-counter
  /// order. Throws when 2^|universe| would exceed `cap`.
  std::vector<std::vector<std::string>> materialize(
      const std::vector<std::string>& universe, uint64_t cap = 1 << 16) const {
    if (universe.size() >= 63 || (uint64_t(1) << universe.size()) > cap)
      throw resource_cap("accepting family expansion exceeds cap");
    std::vector<std::string> sorted(universe);
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<std::string>> out;
    for (uint64_t m = 0; m < (uint64_t(1) << sorted.size()); ++m) {
      std::vector<std::string> s;
      for (size_t i = 0; i < sorted.size(); ++i)
        if ((m >> i) & 1) s.push_back(sorted[i]);
      if (member(s)) out.push_back(std::move(s));
    }
    return out;
  }
};

}  // namespace dga
