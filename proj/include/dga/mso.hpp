#pragma once

#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dga/automaton.hpp"
#include "dga/graph.hpp"
#include "dga/transforms.hpp"

namespace dga {
namespace mso {

enum class FOp {
  lab,
  edge,
  eq,
  in_set,
  lnot,
  land,
  lor,
  implies,
  iff,
  exists_node,
  forall_node,
  exists_set,
  forall_set,
};

/// Set variables start with an uppercase letter, node variables do not.
inline bool is_set_variable(const std::string& name) {
  return !name.empty() && std::isupper((unsigned char)name[0]);
}

struct Formula {
  FOp op = FOp::eq;
  std::string label;                // lab
  std::optional<std::string> rel;   // edge; empty means the sole relation
  std::string v1, v2;               // operands; quantifiers bind v1
  std::vector<Formula> kids;

  bool operator==(const Formula&) const = default;

  static Formula f_lab(std::string a, std::string x) {
    Formula f;
    f.op = FOp::lab;
    f.label = std::move(a);
    f.v1 = std::move(x);
    return f;
  }
  static Formula f_edge(std::string x, std::optional<std::string> rel,
                        std::string y) {
    Formula f;
    f.op = FOp::edge;
    f.v1 = std::move(x);
    f.rel = std::move(rel);
    f.v2 = std::move(y);
    return f;
  }
  static Formula f_eq(std::string x, std::string y) {
    Formula f;
    f.op = FOp::eq;
    f.v1 = std::move(x);
    f.v2 = std::move(y);
    return f;
  }
  static Formula f_in(std::string x, std::string big_x) {
    Formula f;
    f.op = FOp::in_set;
    f.v1 = std::move(x);
    f.v2 = std::move(big_x);
    return f;
  }
  static Formula f_not(Formula k) {
    Formula f;
    f.op = FOp::lnot;
    f.kids.push_back(std::move(k));
    return f;
  }
  static Formula binary(FOp op, Formula a, Formula b) {
    Formula f;
    f.op = op;
    f.kids.push_back(std::move(a));
    f.kids.push_back(std::move(b));
    return f;
  }
  static Formula quantifier(FOp op, std::string var, Formula body) {
    Formula f;
    f.op = op;
    f.v1 = std::move(var);
    f.kids.push_back(std::move(body));
    return f;
  }
};

/// Conjunction with flattening conventions: empty is valid ("every node
/// equals itself"), a single conjunct stands alone.
inline Formula f_true() {
  return Formula::quantifier(FOp::forall_node, "t0",
                             Formula::f_eq("t0", "t0"));
}
inline Formula f_false() {
  return Formula::quantifier(FOp::exists_node, "t0",
                             Formula::f_not(Formula::f_eq("t0", "t0")));
}
inline Formula nary(FOp op, Formula fallback, std::vector<Formula> kids) {
  // splice same-op kids so "a & b & c" has one shape however it was built
  std::vector<Formula> flat;
  for (Formula& k : kids) {
    if (k.op == op)
      for (Formula& g : k.kids) flat.push_back(std::move(g));
    else
      flat.push_back(std::move(k));
  }
  if (flat.empty()) return fallback;
  if (flat.size() == 1) return std::move(flat[0]);
  Formula f;
  f.op = op;
  f.kids = std::move(flat);
  return f;
}
inline Formula conj(std::vector<Formula> kids) {
  return nary(FOp::land, f_true(), std::move(kids));
}
inline Formula disj(std::vector<Formula> kids) {
  return nary(FOp::lor, f_false(), std::move(kids));
}

inline void collect_free(const Formula& f, std::set<std::string>& bound,
                         std::set<std::string>& out) {
  switch (f.op) {
    case FOp::lab:
      if (!bound.count(f.v1)) out.insert(f.v1);
      return;
    case FOp::edge:
    case FOp::eq:
    case FOp::in_set:
      if (!bound.count(f.v1)) out.insert(f.v1);
      if (!bound.count(f.v2)) out.insert(f.v2);
      return;
    case FOp::exists_node:
    case FOp::forall_node:
    case FOp::exists_set:
    case FOp::forall_set: {
      bool was = bound.count(f.v1) > 0;
      bound.insert(f.v1);
      collect_free(f.kids[0], bound, out);
      if (!was) bound.erase(f.v1);
      return;
    }
    default:
      for (const Formula& k : f.kids) collect_free(k, bound, out);
      return;
  }
}

inline std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

inline bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

// ---- parsing ----

namespace detail {

struct Parser {
  std::string_view text;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw invalid_input("formula parse error at offset " + std::to_string(pos) +
                        ": " + msg);
  }
  void skip_ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  }
  bool eat(std::string_view tok) {
    skip_ws();
    if (text.substr(pos, tok.size()) == tok) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  bool peek(std::string_view tok) {
    skip_ws();
    return text.substr(pos, tok.size()) == tok;
  }
  static bool ident_start(char c) {
    return std::isalpha((unsigned char)c) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum((unsigned char)c) || c == '_' || c == '\'';
  }
  std::optional<std::string> try_ident() {
    skip_ws();
    if (pos >= text.size() || !ident_start(text[pos])) return std::nullopt;
    size_t start = pos;
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    return std::string(text.substr(start, pos - start));
  }
  std::string expect_ident(const std::string& what) {
    auto id = try_ident();
    if (!id) fail("expected " + what);
    return *id;
  }
  std::string bracket_text() {
    // raw text between [ and ], labels and relations may hold punctuation
    if (!eat("[")) fail("expected [");
    size_t start = pos;
    while (pos < text.size() && text[pos] != ']') ++pos;
    if (pos >= text.size()) fail("unterminated [");
    std::string inner(text.substr(start, pos - start));
    ++pos;
    if (inner.empty()) fail("empty brackets");
    return inner;
  }
  static bool keyword(const std::string& id) {
    return id == "exists" || id == "forall" || id == "in" || id == "lab";
  }
  std::string expect_var(bool want_set, const std::string& ctx) {
    std::string id = expect_ident("variable in " + ctx);
    if (keyword(id)) fail("keyword used as variable in " + ctx);
    if (is_set_variable(id) != want_set)
      fail(std::string(want_set ? "set" : "node") + " variable expected in " +
           ctx + ", got " + id);
    return id;
  }

  Formula parse_formula() { return parse_iff(); }

  Formula parse_iff() {
    Formula left = parse_implies();
    while (peek("<=>")) {
      eat("<=>");
      left = Formula::binary(FOp::iff, std::move(left), parse_implies());
    }
    return left;
  }
  Formula parse_implies() {
    Formula left = parse_or();
    skip_ws();
    if (peek("=>") && !peek("=>>")) {
      eat("=>");
      return Formula::binary(FOp::implies, std::move(left), parse_implies());
    }
    return left;
  }
  // & and | chains come back as one flat node, the same shape conj and disj
  // build, so parse(render(f)) reproduces constructed formulas exactly
  Formula parse_or() {
    std::vector<Formula> kids;
    kids.push_back(parse_and());
    while (true) {
      skip_ws();
      if (pos < text.size() && text[pos] == '|') {
        ++pos;
        kids.push_back(parse_and());
      } else {
        return disj(std::move(kids));
      }
    }
  }
  Formula parse_and() {
    std::vector<Formula> kids;
    kids.push_back(parse_unary());
    while (eat("&")) kids.push_back(parse_unary());
    return conj(std::move(kids));
  }
  Formula parse_unary() {
    if (eat("!")) return Formula::f_not(parse_unary());
    return parse_primary();
  }
  Formula parse_primary() {
    skip_ws();
    if (eat("(")) {
      Formula f = parse_formula();
      if (!eat(")")) fail("expected )");
      return f;
    }
    size_t before = pos;
    auto id = try_ident();
    if (!id) fail("expected a formula");
    if (*id == "exists" || *id == "forall") {
      bool ex = *id == "exists";
      std::vector<std::string> vars;
      do {
        std::string v = expect_ident("quantified variable");
        if (keyword(v)) fail("keyword used as variable");
        vars.push_back(v);
      } while (eat(","));
      if (!eat("(")) fail("expected ( after quantifier variables");
      Formula body = parse_formula();
      if (!eat(")")) fail("expected ) closing quantifier body");
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        FOp op = is_set_variable(*it)
                     ? (ex ? FOp::exists_set : FOp::forall_set)
                     : (ex ? FOp::exists_node : FOp::forall_node);
        body = Formula::quantifier(op, *it, std::move(body));
      }
      return body;
    }
    if (*id == "lab") {
      std::string label = bracket_text();
      if (!eat("(")) fail("expected ( after lab[...]");
      std::string x = expect_var(false, "lab atom");
      if (!eat(")")) fail("expected ) after lab argument");
      return Formula::f_lab(label, x);
    }
    if (keyword(*id)) {
      pos = before;
      fail("unexpected keyword " + *id);
    }
    if (is_set_variable(*id)) fail("set variable cannot start an atom");
    // infix atoms: = , -> , in
    if (eat("=")) return Formula::f_eq(*id, expect_var(false, "equality"));
    skip_ws();
    if (text.substr(pos, 2) == "->") {
      pos += 2;
      std::optional<std::string> rel;
      skip_ws();
      if (pos < text.size() && text[pos] == '[') rel = bracket_text();
      return Formula::f_edge(*id, rel, expect_var(false, "edge atom"));
    }
    auto kw = try_ident();
    if (kw && *kw == "in")
      return Formula::f_in(*id, expect_var(true, "membership"));
    fail("expected =, ->, or in after variable " + *id);
  }
};

}  // namespace detail

inline Formula parse(std::string_view text) {
  detail::Parser p{text};
  Formula f = p.parse_formula();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return f;
}

// ---- rendering ----

namespace detail {

inline int precedence(FOp op) {
  switch (op) {
    case FOp::iff: return 1;
    case FOp::implies: return 2;
    case FOp::lor: return 3;
    case FOp::land: return 4;
    case FOp::lnot: return 5;
    default: return 6;
  }
}

inline void render_to(const Formula& f, std::string& out);

inline void render_child(const Formula& k, int parent_prec, bool tight,
                         std::string& out) {
  int kp = precedence(k.op);
  bool parens = kp < parent_prec || (tight && kp == parent_prec);
  if (parens) out += "(";
  render_to(k, out);
  if (parens) out += ")";
}

inline void render_to(const Formula& f, std::string& out) {
  switch (f.op) {
    case FOp::lab:
      out += "lab[" + f.label + "](" + f.v1 + ")";
      return;
    case FOp::edge:
      out += f.v1 + " ->" + (f.rel ? "[" + *f.rel + "]" : "") + " " + f.v2;
      return;
    case FOp::eq:
      out += f.v1 + " = " + f.v2;
      return;
    case FOp::in_set:
      out += f.v1 + " in " + f.v2;
      return;
    case FOp::lnot: {
      // parenthesize the operand unless it is self-delimiting; "!x = y"
      // reads as a negated variable even though the grammar says otherwise
      const Formula& k = f.kids[0];
      bool bare = k.op == FOp::lab || k.op == FOp::lnot;
      out += bare ? "!" : "!(";
      render_to(k, out);
      if (!bare) out += ")";
      return;
    }
    case FOp::land:
    case FOp::lor:
    case FOp::iff: {
      const char* sep = f.op == FOp::land ? " & "
                        : f.op == FOp::lor ? " | "
                                           : " <=> ";
      int prec = precedence(f.op);
      for (size_t i = 0; i < f.kids.size(); ++i) {
        if (i) out += sep;
        render_child(f.kids[i], prec, i > 0, out);
      }
      return;
    }
    case FOp::implies: {
      int prec = precedence(FOp::implies);
      render_child(f.kids[0], prec, true, out);
      out += " => ";
      render_child(f.kids[1], prec, false, out);
      return;
    }
    case FOp::exists_node:
    case FOp::forall_node:
    case FOp::exists_set:
    case FOp::forall_set: {
      bool ex = f.op == FOp::exists_node || f.op == FOp::exists_set;
      out += ex ? "exists " : "forall ";
      const Formula* body = &f;
      bool first = true;
      while (true) {
        bool bex = body->op == FOp::exists_node || body->op == FOp::exists_set;
        bool quant = body->op == FOp::exists_node ||
                     body->op == FOp::forall_node ||
                     body->op == FOp::exists_set || body->op == FOp::forall_set;
        if (!quant || bex != ex) break;
        if (!first) out += ", ";
        out += body->v1;
        first = false;
        body = &body->kids[0];
      }
      out += " (";
      render_to(*body, out);
      out += ")";
      return;
    }
  }
}

}  // namespace detail

inline std::string render(const Formula& f) {
  std::string out;
  detail::render_to(f, out);
  return out;
}

// ---- evaluation ----

struct Assignment {
  std::map<std::string, int> nodes;
  std::map<std::string, uint64_t> sets;  // bit i = node i
};

namespace detail {

struct Evaluator {
  const LabeledGraph& g;
  Assignment alpha;

  int node_of(const std::string& v) const {
    auto it = alpha.nodes.find(v);
    if (it == alpha.nodes.end())
      throw invalid_input("unassigned node variable " + v);
    return it->second;
  }
  uint64_t set_of(const std::string& v) const {
    auto it = alpha.sets.find(v);
    if (it == alpha.sets.end())
      throw invalid_input("unassigned set variable " + v);
    return it->second;
  }
  int relation_of(const std::optional<std::string>& rel) const {
    if (!rel) {
      if (g.gamma.size() != 1)
        throw invalid_input("edge atom needs an explicit relation name");
      return 0;
    }
    int r = g.gamma.index(*rel);
    if (r < 0) throw invalid_input("unknown edge relation " + *rel);
    return r;
  }

  bool eval(const Formula& f) {
    switch (f.op) {
      case FOp::lab: {
        int a = g.sigma.index(f.label);
        if (a < 0) throw invalid_input("unknown node label " + f.label);
        return g.labels[node_of(f.v1)] == a;
      }
      case FOp::edge:
        return g.has_edge(relation_of(f.rel), node_of(f.v1), node_of(f.v2));
      case FOp::eq:
        return node_of(f.v1) == node_of(f.v2);
      case FOp::in_set:
        return (set_of(f.v2) >> node_of(f.v1)) & 1;
      case FOp::lnot:
        return !eval(f.kids[0]);
      case FOp::land:
        for (const Formula& k : f.kids)
          if (!eval(k)) return false;
        return true;
      case FOp::lor:
        for (const Formula& k : f.kids)
          if (eval(k)) return true;
        return false;
      case FOp::implies:
        return !eval(f.kids[0]) || eval(f.kids[1]);
      case FOp::iff:
        return eval(f.kids[0]) == eval(f.kids[1]);
      case FOp::exists_node:
      case FOp::forall_node: {
        bool want = f.op == FOp::exists_node;
        auto old = alpha.nodes.find(f.v1) != alpha.nodes.end()
                       ? std::optional<int>(alpha.nodes[f.v1])
                       : std::nullopt;
        bool result = !want;
        for (int v = 0; v < g.n; ++v) {
          alpha.nodes[f.v1] = v;
          if (eval(f.kids[0]) == want) {
            result = want;
            break;
          }
        }
        if (old)
          alpha.nodes[f.v1] = *old;
        else
          alpha.nodes.erase(f.v1);
        return result;
      }
      case FOp::exists_set:
      case FOp::forall_set: {
        bool want = f.op == FOp::exists_set;
        if (g.n > 24)
          throw resource_cap("set quantifier over more than 24 nodes");
        auto old = alpha.sets.find(f.v1) != alpha.sets.end()
                       ? std::optional<uint64_t>(alpha.sets[f.v1])
                       : std::nullopt;
        bool result = !want;
        for (uint64_t m = 0; m < (uint64_t(1) << g.n); ++m) {
          alpha.sets[f.v1] = m;
          if (eval(f.kids[0]) == want) {
            result = want;
            break;
          }
        }
        if (old)
          alpha.sets[f.v1] = *old;
        else
          alpha.sets.erase(f.v1);
        return result;
      }
    }
    throw internal_error("unhandled formula op");
  }
};

}  // namespace detail

inline bool evaluate(const Formula& f, const LabeledGraph& g,
                     const Assignment& alpha = {}) {
  for (const std::string& v : free_vars(f)) {
    if (is_set_variable(v) ? !alpha.sets.count(v) : !alpha.nodes.count(v))
      throw invalid_input("free variable " + v + " not covered by assignment");
  }
  detail::Evaluator ev{g, alpha};
  return ev.eval(f);
}

// ---- assignment encoding into node labels ----

/// Scope order used everywhere a variable set becomes a label: node
/// variables first, then set variables, each alphabetically.
inline std::vector<std::string> sorted_scope(const std::set<std::string>& scope) {
  std::vector<std::string> out(scope.begin(), scope.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const std::string& a, const std::string& b) {
                     bool sa = is_set_variable(a), sb = is_set_variable(b);
                     if (sa != sb) return !sa;
                     return a < b;
                   });
  return out;
}

inline std::string pair_label(const std::string& base,
                              const std::vector<std::string>& vars) {
  if (vars.empty()) return base;
  std::string out = base + "|{";
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ",";
    out += vars[i];
  }
  return out + "}";
}

inline std::pair<std::string, std::vector<std::string>> split_pair_label(
    const std::string& sym) {
  size_t at = sym.find("|{");
  if (at == std::string::npos || sym.back() != '}') return {sym, {}};
  std::string base = sym.substr(0, at);
  std::vector<std::string> vars;
  std::string inner = sym.substr(at + 2, sym.size() - at - 3);
  size_t start = 0;
  while (start < inner.size()) {
    size_t comma = inner.find(',', start);
    if (comma == std::string::npos) comma = inner.size();
    vars.push_back(inner.substr(start, comma - start));
    start = comma + 1;
  }
  return {base, vars};
}

/// Alphabet of all (base label, variable subset) pairs for a scope.
inline Alphabet pair_alphabet(const Alphabet& base,
                              const std::vector<std::string>& scope) {
  if (scope.size() > 16) throw resource_cap("scope too large to encode");
  std::vector<std::string> symbols;
  for (int a = 0; a < base.size(); ++a) {
    for (uint64_t m = 0; m < (uint64_t(1) << scope.size()); ++m) {
      std::vector<std::string> vars;
      for (size_t i = 0; i < scope.size(); ++i)
        if ((m >> i) & 1) vars.push_back(scope[i]);
      symbols.push_back(pair_label(base.at(a), vars));
    }
  }
  return Alphabet(symbols);
}

inline LabeledGraph encode_assignment(const LabeledGraph& g,
                                      const Assignment& alpha,
                                      const std::set<std::string>& scope) {
  std::vector<std::string> order = sorted_scope(scope);
  Alphabet sigma_p = pair_alphabet(g.sigma, order);
  LabeledGraph out = g;
  out.sigma = sigma_p;
  for (int v = 0; v < g.n; ++v) {
    std::vector<std::string> carried;
    for (const std::string& var : order) {
      if (is_set_variable(var)) {
        auto it = alpha.sets.find(var);
        if (it == alpha.sets.end())
          throw invalid_input("assignment misses set variable " + var);
        if ((it->second >> v) & 1) carried.push_back(var);
      } else {
        auto it = alpha.nodes.find(var);
        if (it == alpha.nodes.end())
          throw invalid_input("assignment misses node variable " + var);
        if (it->second < 0 || it->second >= g.n)
          throw invalid_input("node variable " + var + " out of range");
        if (it->second == v) carried.push_back(var);
      }
    }
    out.labels[v] = sigma_p.index(pair_label(g.sigma.at(g.labels[v]), carried));
  }
  return out;
}

struct DecodedAssignment {
  LabeledGraph graph;
  Assignment alpha;
};

inline DecodedAssignment encode_inverse(const LabeledGraph& enc,
                                        const Alphabet& base_sigma) {
  DecodedAssignment out{enc, {}};
  out.graph.sigma = base_sigma;
  std::map<std::string, int> node_hits;
  for (int v = 0; v < enc.n; ++v) {
    auto [base, vars] = split_pair_label(enc.sigma.at(enc.labels[v]));
    int b = base_sigma.index(base);
    if (b < 0) throw invalid_input("encoded label has unknown base " + base);
    out.graph.labels[v] = b;
    for (const std::string& var : vars) {
      if (is_set_variable(var)) {
        out.alpha.sets[var] |= uint64_t(1) << v;
      } else {
        if (++node_hits[var] > 1)
          throw invalid_input("node variable " + var + " on several nodes");
        out.alpha.nodes[var] = v;
      }
    }
  }
  return out;
}

// ---- compilation to an automaton ----

struct CompileReport {
  std::vector<TransformReport> steps;
};

struct CompileResult {
  Automaton automaton;
  CompileReport report;
};

/// Accepts iff exactly one node carries the variable `var` in its label:
/// carriers split adversarially over two markers, so two carriers can be
/// driven apart while one cannot.
inline Automaton one_carrier_automaton(const Alphabet& sigma_pairs,
                                       const Alphabet& gamma,
                                       const std::string& var) {
  std::vector<State> st = {
      {"q_x", StateKind::universal},
      {"q_notx", StateKind::permanent},
      {"q_black", StateKind::permanent},
      {"q_white", StateKind::permanent},
  };
  std::vector<int> init;
  for (int s = 0; s < sigma_pairs.size(); ++s) {
    auto [base, vars] = split_pair_label(sigma_pairs.at(s));
    bool carries = std::find(vars.begin(), vars.end(), var) != vars.end();
    init.push_back(carries ? 0 : 1);
  }
  std::vector<Rule> rules{{0, Guard::truth(), {2, 3}}};
  return Automaton::build(sigma_pairs, gamma, std::move(st), std::move(init),
                          std::move(rules),
                          AcceptFamily::explicit_list({{"q_black"},
                                                       {"q_black", "q_notx"},
                                                       {"q_white"},
                                                       {"q_notx", "q_white"}}));
}

namespace detail {

/// Rewrites =>, <=>, and both universal quantifiers into !, &, |, exists.
inline Formula rewrite_for_compile(const Formula& f) {
  switch (f.op) {
    case FOp::implies: {
      Formula a = rewrite_for_compile(f.kids[0]);
      Formula b = rewrite_for_compile(f.kids[1]);
      return Formula::binary(FOp::lor, Formula::f_not(std::move(a)),
                             std::move(b));
    }
    case FOp::iff: {
      Formula a = rewrite_for_compile(f.kids[0]);
      Formula b = rewrite_for_compile(f.kids[1]);
      Formula left = Formula::binary(FOp::lor, Formula::f_not(a), b);
      Formula right = Formula::binary(FOp::lor, Formula::f_not(std::move(b)),
                                      std::move(a));
      return Formula::binary(FOp::land, std::move(left), std::move(right));
    }
    case FOp::forall_node:
    case FOp::forall_set: {
      FOp ex = f.op == FOp::forall_node ? FOp::exists_node : FOp::exists_set;
      return Formula::f_not(Formula::quantifier(
          ex, f.v1, Formula::f_not(rewrite_for_compile(f.kids[0]))));
    }
    default: {
      Formula out = f;
      for (Formula& k : out.kids) k = rewrite_for_compile(k);
      return out;
    }
  }
}

struct Compiler {
  const Alphabet& sigma;
  const Alphabet& gamma;
  CompileReport& report;

  Automaton noted(TransformResult r) {
    if (std::getenv("DGA_COMPILE_TRACE"))
      std::fprintf(stderr, "  %-12s siz=%-7d len=%d\n", r.report.op.c_str(),
                   r.automaton.siz(), r.automaton.len);
    report.steps.push_back(std::move(r.report));
    return std::move(r.automaton);
  }
  Automaton trimmed(TransformResult r) { return noted(trim(noted(std::move(r)))); }

  /// yes/no/maybe verdict automaton for a locally decidable atom.
  Automaton local_base(
      const std::vector<std::string>& scope,
      const std::function<int(const std::string&, const std::vector<std::string>&)>&
          pick) {
    Alphabet sp = pair_alphabet(sigma, scope);
    std::vector<State> st = {
        {"q_yes", StateKind::permanent},
        {"q_no", StateKind::permanent},
        {"q_maybe", StateKind::permanent},
    };
    std::vector<int> init;
    for (int s = 0; s < sp.size(); ++s) {
      auto [base, vars] = split_pair_label(sp.at(s));
      init.push_back(pick(base, vars));
    }
    return Automaton::build(sp, gamma, std::move(st), std::move(init), {},
                            AcceptFamily::explicit_list(
                                {{"q_yes"}, {"q_maybe", "q_yes"}}));
  }

  static bool carries(const std::vector<std::string>& vars,
                      const std::string& var) {
    return std::find(vars.begin(), vars.end(), var) != vars.end();
  }

  Automaton edge_base(const std::string& x, const std::optional<std::string>& rel,
                      const std::string& y) {
    int r;
    if (rel) {
      r = gamma.index(*rel);
      if (r < 0) throw invalid_input("unknown edge relation " + *rel);
    } else if (gamma.size() == 1) {
      r = 0;
    } else {
      throw invalid_input("edge atom needs an explicit relation name");
    }
    if (x == y) {
      // self-loop check: the carrier must receive its own state
      Alphabet sp = pair_alphabet(sigma, {x});
      std::vector<State> st = {
          {"q_xy", StateKind::existential},
          {"q_yes", StateKind::permanent},
          {"q_no", StateKind::permanent},
          {"q_maybe", StateKind::permanent},
      };
      std::vector<int> init;
      for (int s = 0; s < sp.size(); ++s) {
        auto [base, vars] = split_pair_label(sp.at(s));
        init.push_back(carries(vars, x) ? 0 : 3);
      }
      std::vector<Rule> rules;
      rules.push_back({0, Guard::member(r, 0), {1}});
      rules.push_back({0, Guard::negation(Guard::member(r, 0)), {2}});
      return Automaton::build(sp, gamma, std::move(st), std::move(init),
                              std::move(rules),
                              AcceptFamily::explicit_list(
                                  {{"q_yes"}, {"q_maybe", "q_yes"}}));
    }
    std::set<std::string> sc{x, y};
    Alphabet sp = pair_alphabet(sigma, sorted_scope(sc));
    std::vector<State> st = {
        {"q_x", StateKind::existential},  {"q_y", StateKind::existential},
        {"q_xy", StateKind::existential}, {"q_yes", StateKind::permanent},
        {"q_no", StateKind::permanent},   {"q_maybe", StateKind::permanent},
    };
    std::vector<int> init;
    for (int s = 0; s < sp.size(); ++s) {
      auto [base, vars] = split_pair_label(sp.at(s));
      bool cx = carries(vars, x), cy = carries(vars, y);
      init.push_back(cx && cy ? 2 : cx ? 0 : cy ? 1 : 5);
    }
    std::vector<Rule> rules;
    rules.push_back({0, Guard::truth(), {5}});
    rules.push_back({1, Guard::member(r, 0), {3}});
    rules.push_back({1, Guard::negation(Guard::member(r, 0)), {4}});
    rules.push_back({2, Guard::member(r, 2), {3}});
    rules.push_back({2, Guard::negation(Guard::member(r, 2)), {4}});
    return Automaton::build(sp, gamma, std::move(st), std::move(init),
                            std::move(rules),
                            AcceptFamily::explicit_list(
                                {{"q_yes"}, {"q_maybe", "q_yes"}}));
  }

  /// Reinterprets `a` (over the pair alphabet of `from`) over the pair
  /// alphabet of the larger scope `to`.
  Automaton widen(Automaton a, const std::vector<std::string>& from,
                  const std::vector<std::string>& to) {
    if (from == to) return a;
    Alphabet target = pair_alphabet(sigma, to);
    std::vector<int> old_of;
    for (int s = 0; s < target.size(); ++s) {
      auto [base, vars] = split_pair_label(target.at(s));
      std::vector<std::string> kept;
      for (const std::string& v : vars)
        if (carries(from, v)) kept.push_back(v);
      int old = a.sigma.index(pair_label(base, kept));
      if (old < 0) throw internal_error("scope widening misses a label");
      old_of.push_back(old);
    }
    return noted(extend_alphabet(a, target, old_of));
  }

  /// Projects away one variable from the automaton's pair alphabet.
  Automaton drop_variable(Automaton a, const std::vector<std::string>& scope,
                          const std::string& var) {
    std::vector<std::string> rest;
    for (const std::string& v : scope)
      if (v != var) rest.push_back(v);
    Alphabet target = pair_alphabet(sigma, rest);
    std::vector<int> new_of;
    for (int s = 0; s < a.sigma.size(); ++s) {
      auto [base, vars] = split_pair_label(a.sigma.at(s));
      std::vector<std::string> kept;
      for (const std::string& v : vars)
        if (v != var) kept.push_back(v);
      new_of.push_back(target.index(pair_label(base, kept)));
    }
    return noted(trim(noted(project(a, target, new_of))));
  }

  Automaton compile(const Formula& f) {
    std::vector<std::string> scope = sorted_scope(free_vars(f));
    switch (f.op) {
      case FOp::lab: {
        if (sigma.index(f.label) < 0)
          throw invalid_input("unknown node label " + f.label);
        return local_base(scope, [&](const std::string& base,
                                     const std::vector<std::string>& vars) {
          if (!carries(vars, f.v1)) return 2;
          return base == f.label ? 0 : 1;
        });
      }
      case FOp::eq: {
        if (f.v1 == f.v2)
          return local_base(scope, [&](const std::string&,
                                       const std::vector<std::string>& vars) {
            return carries(vars, f.v1) ? 0 : 2;
          });
        return local_base(scope, [&](const std::string&,
                                     const std::vector<std::string>& vars) {
          bool a = carries(vars, f.v1), b = carries(vars, f.v2);
          if (a && b) return 0;
          if (a || b) return 1;
          return 2;
        });
      }
      case FOp::in_set:
        return local_base(scope, [&](const std::string&,
                                     const std::vector<std::string>& vars) {
          if (!carries(vars, f.v1)) return 2;
          return carries(vars, f.v2) ? 0 : 1;
        });
      case FOp::edge:
        return edge_base(f.v1, f.rel, f.v2);
      case FOp::lnot:
        return noted(trim(noted(dual(compile(f.kids[0])))));
      case FOp::land:
      case FOp::lor: {
        // conj and disj build flat nodes, so fold over every kid
        Automaton acc = widen(compile(f.kids[0]),
                              sorted_scope(free_vars(f.kids[0])), scope);
        for (size_t i = 1; i < f.kids.size(); ++i) {
          Automaton b = widen(compile(f.kids[i]),
                              sorted_scope(free_vars(f.kids[i])), scope);
          TransformResult r = f.op == FOp::land ? intersection_of(acc, b)
                                                : union_of(acc, b);
          acc = noted(trim(noted(std::move(r))));
        }
        return acc;
      }
      case FOp::exists_set: {
        Automaton a = compile(f.kids[0]);
        std::set<std::string> inner = free_vars(f.kids[0]);
        if (!inner.count(f.v1)) return a;
        return drop_variable(std::move(a), sorted_scope(inner), f.v1);
      }
      case FOp::exists_node: {
        Automaton a = compile(f.kids[0]);
        std::set<std::string> inner = free_vars(f.kids[0]);
        if (!inner.count(f.v1)) return a;  // some node exists in every graph
        std::vector<std::string> si = sorted_scope(inner);
        Automaton one = one_carrier_automaton(a.sigma, gamma, f.v1);
        Automaton both = noted(trim(noted(intersection_of(a, one))));
        return drop_variable(std::move(both), si, f.v1);
      }
      default:
        throw internal_error("compile expects rewritten formulas");
    }
  }
};

}  // namespace detail

inline CompileResult compile(const Formula& f, const Alphabet& sigma,
                             const Alphabet& gamma) {
  CompileResult out{Automaton(), {}};
  Formula core = detail::rewrite_for_compile(f);
  detail::Compiler c{sigma, gamma, out.report};
  out.automaton = c.compile(core);
  return out;
}

// ---- translation from an automaton to a sentence ----

namespace detail {

struct SentenceBuilder {
  const Automaton& a;
  uint64_t family_cap;
  std::vector<std::vector<int>> occ;  // states occupiable at each round
  int rounds = 0;

  explicit SentenceBuilder(const Automaton& aut, uint64_t cap)
      : a(aut), family_cap(cap) {
    rounds = a.len;
    std::vector<char> cur(a.siz(), 0);
    for (int q : a.init) cur[q] = 1;
    for (int i = 0;; ++i) {
      std::vector<int> here;
      for (int q = 0; q < a.siz(); ++q)
        if (cur[q]) here.push_back(q);
      occ.push_back(here);
      if (i == rounds) break;
      std::vector<char> next(a.siz(), 0);
      for (int q : here) {
        if (a.is_permanent(q)) {
          next[q] = 1;
        } else {
          for (const Rule& r : a.rules)
            if (r.from == q)
              for (int t : r.to) next[t] = 1;
        }
      }
      cur = std::move(next);
    }
  }

  static std::string set_var(int round, int q) {
    return "U" + std::to_string(round) + "_" + std::to_string(q);
  }

  bool occupiable(int round, int q) const {
    const auto& v = occ[round];
    return std::find(v.begin(), v.end(), q) != v.end();
  }

  Formula member(int round, int q, const std::string& x) const {
    if (round == 0) {
      std::vector<Formula> alts;
      for (int s = 0; s < a.sigma.size(); ++s)
        if (a.init[s] == q) alts.push_back(Formula::f_lab(a.sigma.at(s), x));
      if (alts.empty()) return Formula::f_not(Formula::f_eq(x, x));
      return disj(std::move(alts));
    }
    if (!occupiable(round, q)) return Formula::f_not(Formula::f_eq(x, x));
    return Formula::f_in(x, set_var(round, q));
  }

  std::optional<std::string> rel_name(int r) const {
    if (a.gamma.size() == 1) return std::nullopt;
    return a.gamma.at(r);
  }

  /// The node x is in exactly one state of the given round.
  Formula exactly_one(int round, const std::string& x) const {
    std::vector<Formula> alts;
    for (int q : occ[round]) {
      std::vector<Formula> parts{member(round, q, x)};
      for (int p : occ[round])
        if (p != q) parts.push_back(Formula::f_not(member(round, p, x)));
      alts.push_back(conj(std::move(parts)));
    }
    return disj(std::move(alts));
  }

  /// The received view of x at `round` is exactly S (per-relation masks over
  /// occ[round], bit position = index into occ[round]).
  Formula neigh(int round, const std::vector<uint64_t>& s_masks,
                const std::string& x, const std::string& y) const {
    std::vector<Formula> parts;
    for (int r = 0; r < a.gamma.size(); ++r) {
      for (size_t k = 0; k < occ[round].size(); ++k) {
        int p = occ[round][k];
        Formula seen = Formula::quantifier(
            FOp::exists_node, y,
            conj({member(round, p, y), Formula::f_edge(y, rel_name(r), x)}));
        bool wanted = (s_masks[r] >> k) & 1;
        parts.push_back(wanted ? std::move(seen)
                               : Formula::f_not(std::move(seen)));
      }
    }
    return conj(std::move(parts));
  }

  Formula legal(int round, const std::string& x, const std::string& y) {
    std::vector<Formula> per_state;
    for (int q : occ[round]) {
      Formula next = Formula();
      if (a.is_permanent(q)) {
        next = member(round + 1, q, x);
      } else {
        size_t k = occ[round].size();
        int rels = a.gamma.size();
        double combos = 1;
        for (int r = 0; r < rels; ++r) combos *= double(uint64_t(1) << k);
        if (combos > double(1 << 16))
          throw resource_cap("received-view enumeration too large");
        std::vector<uint64_t> s_masks(rels, 0);
        std::vector<Formula> alts;
        while (true) {
          std::vector<Bits> received((size_t)rels, Bits(a.siz()));
          for (int r = 0; r < rels; ++r)
            for (size_t i = 0; i < k; ++i)
              if ((s_masks[r] >> i) & 1) received[r].set(occ[round][i]);
          Bits succ = a.local_successors(q, received);
          std::vector<Formula> targets;
          for (int t : succ.members())
            if (occupiable(round + 1, t))
              targets.push_back(member(round + 1, t, x));
          if (!targets.empty())
            alts.push_back(conj({neigh(round, s_masks, x, y),
                                 disj(std::move(targets))}));
          int r = 0;
          while (r < rels) {
            s_masks[r]++;
            if (s_masks[r] < (uint64_t(1) << k)) break;
            s_masks[r] = 0;
            ++r;
          }
          if (r == rels) break;
        }
        next = disj(std::move(alts));
      }
      per_state.push_back(Formula::binary(FOp::implies, member(round, q, x),
                                          std::move(next)));
    }
    std::vector<Formula> body{exactly_one(round + 1, x)};
    for (Formula& p : per_state) body.push_back(std::move(p));
    return Formula::quantifier(FOp::forall_node, x, conj(std::move(body)));
  }

  Formula accept_disjunction(const std::string& x) const {
    auto sets = a.accepting.materialize(a.permanent_names(), family_cap);
    std::vector<Formula> alts;
    for (const auto& set : sets) {
      std::vector<Formula> parts;
      std::vector<Formula> cover;
      for (const std::string& name : set) {
        int q = a.state_id(name);
        parts.push_back(Formula::quantifier(FOp::exists_node, x,
                                            member(rounds, q, x)));
        cover.push_back(member(rounds, q, x));
      }
      parts.push_back(Formula::quantifier(FOp::forall_node, x,
                                          disj(std::move(cover))));
      alts.push_back(conj(std::move(parts)));
    }
    return disj(std::move(alts));
  }

  Formula win(int round) {
    std::string x = "x" + std::to_string(round);
    if (round == rounds) return accept_disjunction(x);
    std::string y = "y" + std::to_string(round);
    Formula inner = win(round + 1);
    Formula lg = legal(round, x, y);
    bool universal = false;
    for (int q : occ[round])
      if (!a.is_permanent(q) && a.kind_of(q) == StateKind::universal)
        universal = true;
    Formula body = universal
                       ? Formula::binary(FOp::implies, std::move(lg),
                                         std::move(inner))
                       : conj({std::move(lg), std::move(inner)});
    FOp op = universal ? FOp::forall_set : FOp::exists_set;
    for (auto it = occ[round + 1].rbegin(); it != occ[round + 1].rend(); ++it)
      body = Formula::quantifier(op, set_var(round + 1, *it), std::move(body));
    return body;
  }
};

}  // namespace detail

inline Formula automaton_to_sentence(const Automaton& a,
                                     uint64_t family_cap = 1 << 16) {
  detail::SentenceBuilder b(a, family_cap);
  return b.win(0);
}

// ---- benchmark sentences ----

namespace benchmark {

inline std::string three_color_text() {
  return "exists R, G, B ("
         "forall x (x in R | x in G | x in B) & "
         "forall x, y (x -> y => "
         "!(x in R & y in R) & !(x in G & y in G) & !(x in B & y in B)))";
}

inline std::string centric_text() {
  return "forall x, y (x -> y => !(lab[a](x) & lab[a](y) | "
         "lab[b](x) & lab[b](y) | lab[c](x) & lab[c](y))) & "
         "exists x (lab[a](x) & forall y (lab[a](y) => x = y)) & "
         "forall x, y (lab[a](x) & (x -> y | y -> x) => lab[b](y)) & "
         "forall x (lab[a](x) => exists y, z (!(y = z) & y -> x & z -> x))";
}

/// Triangle-minor sentence for undirected blank graphs: three nonempty,
/// disjoint, connected, pairwise adjacent node sets.
inline std::string minor_k3_text() {
  auto conn = [](const std::string& x) {
    return "forall Y ((exists u (u in " + x + " & u in Y) & "
           "forall u, v ((u in Y & u in " + x + " & v in " + x +
           " & u -> v) => v in Y)) => forall w (w in " + x + " => w in Y))";
  };
  auto disjoint = [](const std::string& x, const std::string& y) {
    return "!(exists u (u in " + x + " & u in " + y + "))";
  };
  auto adjacent = [](const std::string& x, const std::string& y) {
    return "exists u, v (u in " + x + " & v in " + y + " & (u -> v | v -> u))";
  };
  return "exists X1, X2, X3 ("
         "exists u (u in X1) & exists u (u in X2) & exists u (u in X3) & " +
         disjoint("X1", "X2") + " & " + disjoint("X2", "X3") + " & " +
         disjoint("X1", "X3") + " & " + conn("X1") + " & " + conn("X2") +
         " & " + conn("X3") + " & " + adjacent("X1", "X2") + " & " +
         adjacent("X2", "X3") + " & " + adjacent("X1", "X3") + ")";
}

}  // namespace benchmark

}  // namespace mso
}  // namespace dga
