#pragma once

#include <algorithm>
#include <cctype>
#include <cstring>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dga/alphabet.hpp"
#include "dga/base.hpp"

namespace dga {

/// Boolean condition over the family of state sets a node receives from its
/// incoming neighborhoods, one set per edge relation. Atoms test membership
/// of a single state, overlap with a fixed set, equality with a fixed set,
/// or the set's cardinality.
struct Guard {
  enum class Op { truth, member, meets, equals, card, negation, conjunction, disjunction };

  Op op = Op::truth;
  int rel = -1;            // relation index for member/meets/equals/card
  int state = -1;          // member
  std::vector<int> set;    // meets/equals, sorted ascending
  CardRel cmp = CardRel::ge;
  int bound = 0;           // card
  std::vector<Guard> kids;

  static Guard truth() { return Guard{}; }

  static Guard member(int rel, int state) {
    Guard g;
    g.op = Op::member;
    g.rel = rel;
    g.state = state;
    return g;
  }

  /// The received set intersects `set`. One atom regardless of the set's
  /// size, unlike the equivalent disjunction of member atoms.
  static Guard meets(int rel, std::vector<int> set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (set.empty()) return negation(truth());
    if (set.size() == 1) return member(rel, set[0]);
    Guard g;
    g.op = Op::meets;
    g.rel = rel;
    g.set = std::move(set);
    return g;
  }

  static Guard equals(int rel, std::vector<int> set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    Guard g;
    g.op = Op::equals;
    g.rel = rel;
    g.set = std::move(set);
    return g;
  }

  static Guard card(int rel, CardRel cmp, int bound) {
    Guard g;
    g.op = Op::card;
    g.rel = rel;
    g.cmp = cmp;
    g.bound = bound;
    return g;
  }

  /// The canonical unsatisfiable guard is a negated truth.
  static bool is_falsity(const Guard& g) {
    return g.op == Op::negation && g.kids[0].op == Op::truth;
  }

  static Guard negation(Guard inner) {
    if (inner.op == Op::negation) return std::move(inner.kids[0]);
    Guard g;
    g.op = Op::negation;
    g.kids.push_back(std::move(inner));
    return g;
  }

  /// Connective factories keep guards flat: same-op kids are spliced in and
  /// constant kids folded away, so repeated composition cannot nest.
  static Guard conjunction(std::vector<Guard> kids) {
    std::vector<Guard> flat;
    for (Guard& k : kids) {
      if (is_falsity(k)) return negation(truth());
      if (k.op == Op::truth) continue;
      if (k.op == Op::conjunction)
        for (Guard& g : k.kids) flat.push_back(std::move(g));
      else
        flat.push_back(std::move(k));
    }
    if (flat.empty()) return truth();
    if (flat.size() == 1) return std::move(flat[0]);
    Guard g;
    g.op = Op::conjunction;
    g.kids = std::move(flat);
    return g;
  }

  static Guard disjunction(std::vector<Guard> kids) {
    std::vector<Guard> flat;
    for (Guard& k : kids) {
      if (k.op == Op::truth) return truth();
      if (is_falsity(k)) continue;
      if (k.op == Op::disjunction)
        for (Guard& g : k.kids) flat.push_back(std::move(g));
      else
        flat.push_back(std::move(k));
    }
    if (flat.empty()) return negation(truth());  // unsatisfiable
    if (flat.size() == 1) return std::move(flat[0]);
    Guard g;
    g.op = Op::disjunction;
    g.kids = std::move(flat);
    return g;
  }

  bool eval(std::span<const Bits> received) const {
    switch (op) {
      case Op::truth:
        return true;
      case Op::member:
        return received[rel].test(state);
      case Op::meets: {
        for (int s : set)
          if (received[rel].test(s)) return true;
        return false;
      }
      case Op::equals: {
        if (received[rel].count() != (int)set.size()) return false;
        for (int s : set)
          if (!received[rel].test(s)) return false;
        return true;
      }
      case Op::card:
        return card_rel_holds(cmp, received[rel].count(), bound);
      case Op::negation:
        return !kids[0].eval(received);
      case Op::conjunction:
        for (const Guard& k : kids)
          if (!k.eval(received)) return false;
        return true;
      case Op::disjunction:
        for (const Guard& k : kids)
          if (k.eval(received)) return true;
        return false;
    }
    return false;
  }

  /// All state ids mentioned by atoms of this guard.
  void collect_states(std::vector<int>& out) const {
    if (op == Op::member) out.push_back(state);
    if (op == Op::meets || op == Op::equals)
      out.insert(out.end(), set.begin(), set.end());
    for (const Guard& k : kids) k.collect_states(out);
  }

  /// True when some atom constrains the full set content (equality or
  /// cardinality), so satisfiability cannot be judged from mentioned
  /// states alone.
  bool has_set_atoms() const {
    if (op == Op::equals || op == Op::card) return true;
    for (const Guard& k : kids)
      if (k.has_set_atoms()) return true;
    return false;
  }

  /// Rewrites state ids through `map`; atoms mentioning a state mapped to -1
  /// are replaced per `drop_to` (member -> false, equals -> false, meets
  /// drops the state from its set).
  Guard remap_states(const std::vector<int>& map) const {
    Guard g;
    g.op = op;
    g.rel = rel;
    g.cmp = cmp;
    g.bound = bound;
    if (op == Op::member) {
      if (map[state] < 0) return negation(truth());
      g.state = map[state];
      return g;
    }
    if (op == Op::meets) {
      std::vector<int> mapped;
      for (int s : set)
        if (map[s] >= 0) mapped.push_back(map[s]);
      return meets(rel, std::move(mapped));
    }
    if (op == Op::equals) {
      for (int s : set) {
        if (map[s] < 0) return negation(truth());
        g.set.push_back(map[s]);
      }
      std::sort(g.set.begin(), g.set.end());
      return g;
    }
    for (const Guard& k : kids) g.kids.push_back(k.remap_states(map));
    return g;
  }
};

namespace detail {

inline bool is_guard_atom(const Guard& g) {
  return g.op == Guard::Op::member || g.op == Guard::Op::meets ||
         g.op == Guard::Op::equals || g.op == Guard::Op::card;
}

/// Structural identity key for an atom; two atoms with the same key test the
/// same condition.
inline std::string atom_key(const Guard& g) {
  std::string k = std::to_string((int)g.op) + ":" + std::to_string(g.rel) + ":" +
                  std::to_string(g.state) + ":" + std::to_string((int)g.cmp) + ":" +
                  std::to_string(g.bound);
  for (int s : g.set) k += "," + std::to_string(s);
  return k;
}

/// Rebuilds `g` with one atom fixed to a constant; the factories fold the
/// constant away as the tree reassembles.
inline Guard fix_atom(const Guard& g, const std::string& key, bool value) {
  if (is_guard_atom(g)) {
    if (atom_key(g) != key) return g;
    return value ? Guard::truth() : Guard::negation(Guard::truth());
  }
  std::vector<Guard> kids;
  for (const Guard& k : g.kids) kids.push_back(fix_atom(k, key, value));
  switch (g.op) {
    case Guard::Op::negation:
      return Guard::negation(std::move(kids[0]));
    case Guard::Op::conjunction:
      return Guard::conjunction(std::move(kids));
    case Guard::Op::disjunction:
      return Guard::disjunction(std::move(kids));
    default:
      return g;  // truth
  }
}

inline void count_atoms(const Guard& g, std::map<std::string, int>& counts) {
  if (is_guard_atom(g)) {
    ++counts[atom_key(g)];
    return;
  }
  for (const Guard& k : g.kids) count_atoms(k, counts);
}

struct TautSearch {
  int budget;

  bool taut(const Guard& g) {
    if (g.op == Guard::Op::truth) return true;
    if (Guard::is_falsity(g)) return false;
    if (--budget < 0) return false;
    std::map<std::string, int> counts;
    count_atoms(g, counts);
    const std::string* pick = nullptr;
    int best = 0;
    for (const auto& [key, count] : counts) {
      if (count > best) {
        best = count;
        pick = &key;
      }
    }
    if (!pick) return false;
    return taut(fix_atom(g, *pick, false)) && taut(fix_atom(g, *pick, true));
  }
};

}  // namespace detail

/// Sound, incomplete check that the disjunction of `guards` holds for every
/// received family. Distinct atoms are case-split as independent booleans
/// under a step budget, so `true` is definitive while `false` only means no
/// proof was found. Splitting on the most frequent atom first settles the
/// guard shapes the transforms produce in a handful of steps.
inline bool guard_tautology(const std::vector<Guard>& guards, int budget = 2048) {
  detail::TautSearch search{budget};
  return search.taut(Guard::disjunction(guards));
}

namespace guard_text {

/// Renders a guard using state and relation names. The relation tag is
/// omitted when the edge alphabet has a single symbol.
inline std::string render(const Guard& g,
                          const std::function<std::string(int)>& state_name,
                          const Alphabet& gamma) {
  auto tag = [&](int rel) {
    return gamma.size() == 1 ? std::string() : "@" + gamma.at(rel);
  };
  switch (g.op) {
    case Guard::Op::truth:
      return "true";
    case Guard::Op::member:
      return "has(" + state_name(g.state) + ")" + tag(g.rel);
    case Guard::Op::meets: {
      std::string s = "meets({";
      for (size_t i = 0; i < g.set.size(); ++i) {
        if (i) s += ",";
        s += state_name(g.set[i]);
      }
      return s + "})" + tag(g.rel);
    }
    case Guard::Op::equals: {
      std::string s = "eq({";
      for (size_t i = 0; i < g.set.size(); ++i) {
        if (i) s += ",";
        s += state_name(g.set[i]);
      }
      return s + "})" + tag(g.rel);
    }
    case Guard::Op::card:
      return "card" + tag(g.rel) + " " + card_rel_token(g.cmp) + " " +
             std::to_string(g.bound);
    case Guard::Op::negation: {
      const Guard& k = g.kids[0];
      bool atom = k.op != Guard::Op::conjunction && k.op != Guard::Op::disjunction;
      return atom ? "!" + render(k, state_name, gamma)
                  : "!(" + render(k, state_name, gamma) + ")";
    }
    case Guard::Op::conjunction: {
      std::string s;
      for (size_t i = 0; i < g.kids.size(); ++i) {
        if (i) s += " & ";
        bool wrap = g.kids[i].op == Guard::Op::disjunction;
        s += wrap ? "(" + render(g.kids[i], state_name, gamma) + ")"
                  : render(g.kids[i], state_name, gamma);
      }
      return s;
    }
    case Guard::Op::disjunction: {
      if (g.kids.empty()) return "!true";
      std::string s;
      for (size_t i = 0; i < g.kids.size(); ++i) {
        if (i) s += " | ";
        s += render(g.kids[i], state_name, gamma);
      }
      return s;
    }
  }
  return "true";
}

class Parser {
public:
  Parser(std::string_view text, std::function<int(const std::string&)> state_id,
         const Alphabet& gamma)
      : text_(text), state_id_(std::move(state_id)), gamma_(gamma) {}

  Guard parse() {
    Guard g = disjunction();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input after guard");
    return g;
  }

private:
  Guard disjunction() {
    std::vector<Guard> kids{conjunction()};
    while (eat('|')) kids.push_back(conjunction());
    return kids.size() == 1 ? std::move(kids[0]) : Guard::disjunction(std::move(kids));
  }

  Guard conjunction() {
    std::vector<Guard> kids{unary()};
    while (eat('&')) kids.push_back(unary());
    return kids.size() == 1 ? std::move(kids[0]) : Guard::conjunction(std::move(kids));
  }

  Guard unary() {
    skip_ws();
    if (eat('!')) return Guard::negation(unary());
    if (eat('(')) {
      Guard g = disjunction();
      if (!eat(')')) fail("expected ')'");
      return g;
    }
    return atom();
  }

  Guard atom() {
    skip_ws();
    if (word("true")) return Guard::truth();
    if (word("has")) {
      if (!eat('(')) fail("expected '(' after has");
      std::string name = balanced_until(')');
      return Guard::member(relation_tag(), resolve(name));
    }
    if (word("meets")) {
      if (!eat('(')) fail("expected '(' after meets");
      skip_ws();
      if (!eat('{')) fail("expected '{' in meets");
      std::vector<int> set;
      for (const std::string& name : set_elements())
        set.push_back(resolve(name));
      if (!eat(')')) fail("expected ')' after meets set");
      return Guard::meets(relation_tag(), std::move(set));
    }
    if (word("eq")) {
      if (!eat('(')) fail("expected '(' after eq");
      skip_ws();
      if (!eat('{')) fail("expected '{' in eq");
      std::vector<int> set;
      for (const std::string& name : set_elements())
        set.push_back(resolve(name));
      if (!eat(')')) fail("expected ')' after eq set");
      return Guard::equals(relation_tag(), std::move(set));
    }
    if (word("card")) {
      int rel = relation_tag();
      CardRel cmp = relation_op();
      return Guard::card(rel, cmp, integer());
    }
    fail("expected guard atom");
    return Guard::truth();
  }

  // -- lexing helpers ------------------------------------------------------

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) != w) return false;
    size_t end = pos_ + w.size();
    if (end < text_.size() && (isalnum((unsigned char)text_[end]) || text_[end] == '_'))
      return false;
    pos_ = end;
    return true;
  }

  /// Consumes up to the matching `close`, tracking (), {} nesting so that
  /// state names containing those characters survive verbatim.
  std::string balanced_until(char close) {
    skip_ws();
    std::string out;
    int paren = 0, brace = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (paren == 0 && brace == 0 && c == close) {
        ++pos_;
        return trim(out);
      }
      if (c == '(') ++paren;
      if (c == ')') --paren;
      if (c == '{') ++brace;
      if (c == '}') --brace;
      out += c;
      ++pos_;
    }
    fail("unterminated name");
    return out;
  }

  std::vector<std::string> set_elements() {
    std::vector<std::string> out;
    std::string cur;
    int paren = 0, brace = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (paren == 0 && brace == 0) {
        if (c == '}') {
          ++pos_;
          if (!trim(cur).empty()) out.push_back(trim(cur));
          return out;
        }
        if (c == ',') {
          out.push_back(trim(cur));
          cur.clear();
          ++pos_;
          continue;
        }
      }
      if (c == '(') ++paren;
      if (c == ')') --paren;
      if (c == '{') ++brace;
      if (c == '}') --brace;
      cur += c;
      ++pos_;
    }
    fail("unterminated set");
    return out;
  }

  int relation_tag() {
    if (!eat('@')) {
      if (gamma_.size() != 1)
        fail("relation tag '@' required with several edge relations");
      return 0;
    }
    skip_ws();
    std::string name;
    while (pos_ < text_.size() && !strchr(" \t\n\r&|!()<>=", text_[pos_]))
      name += text_[pos_++];
    int rel = gamma_.index(name);
    if (rel < 0) fail("unknown edge relation: " + name);
    return rel;
  }

  CardRel relation_op() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected comparison");
    char a = text_[pos_];
    char b = pos_ + 1 < text_.size() ? text_[pos_ + 1] : 0;
    if (a == '<' && b == '=') { pos_ += 2; return CardRel::le; }
    if (a == '>' && b == '=') { pos_ += 2; return CardRel::ge; }
    if (a == '=' && b == '=') { pos_ += 2; return CardRel::eq; }
    if (a == '<') { ++pos_; return CardRel::lt; }
    if (a == '>') { ++pos_; return CardRel::gt; }
    if (a == '=') { ++pos_; return CardRel::eq; }
    fail("expected comparison operator");
    return CardRel::eq;
  }

  int integer() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() && isdigit((unsigned char)text_[pos_])) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  int resolve(const std::string& name) {
    int id = state_id_(name);
    if (id < 0) fail("unknown state in guard: " + name);
    return id;
  }

  static std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\n\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\n\r");
    return s.substr(a, b - a + 1);
  }

  [[noreturn]] void fail(const std::string& why) {
    throw invalid_input("guard parse error at offset " + std::to_string(pos_) +
                        ": " + why);
  }

  std::string_view text_;
  std::function<int(const std::string&)> state_id_;
  const Alphabet& gamma_;
  size_t pos_ = 0;
};

inline Guard parse(std::string_view text,
                   const std::function<int(const std::string&)>& state_id,
                   const Alphabet& gamma) {
  return Parser(text, state_id, gamma).parse();
}

}  // namespace guard_text

}  // namespace dga
