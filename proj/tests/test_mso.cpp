#include <catch2/catch_amalgamated.hpp>

#include "dga/dga.hpp"
#include "helpers.hpp"

using namespace dga;
using namespace dga::mso;
using testutil::blank;
using testutil::clique;

TEST_CASE("variable sorts are read off the first letter") {
  CHECK(is_set_variable("X"));
  CHECK(is_set_variable("Reds"));
  CHECK_FALSE(is_set_variable("x"));
  CHECK_FALSE(is_set_variable("_t"));
}

TEST_CASE("parsing round-trips through rendering") {
  const std::string texts[] = {
      "x = y",
      "x -> y",
      "x ->[r] y",
      "x in X",
      "lab[a](x)",
      "!(x = y) & y in X",
      "x = y | y = z | z = x",
      "a = b & (c = d | e = f)",
      "x = x => y = y => z = z",
      "(x = x => y = y) => z = z",
      "x = x <=> y = y",
      "!lab[a](x)",
      "exists x (lab[a](x))",
      "forall x, y (x -> y => y -> x)",
      "exists R, G, B (forall x (x in R | x in G | x in B))",
      "forall x (exists Y (x in Y))",
      benchmark::three_color_text(),
      benchmark::centric_text(),
  };
  for (const std::string& text : texts) {
    Formula f = parse(text);
    CHECK(render(f) == text);
    CHECK(parse(render(f)) == f);
  }
  // minor_k3_text carries redundant parentheses for readability, so the
  // rendered form differs as a string; only the trees must agree
  Formula minor = parse(benchmark::minor_k3_text());
  CHECK(parse(render(minor)) == minor);
}

TEST_CASE("malformed formulas are rejected with offsets") {
  for (const char* bad : {
           "x",
           "x =",
           "x in y",
           "X in Y",
           "lab[a](X)",
           "lab[](x)",
           "lab[a] x",
           "exists (x = x)",
           "exists in (x = x)",
           "x = y extra",
           "(x = y",
           "x -> Y",
       }) {
    CHECK_THROWS_MATCHES(parse(bad), Error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("parse error")));
  }
}

TEST_CASE("quantifier lists bind right to left") {
  Formula f = parse("exists x, Y (x in Y)");
  REQUIRE(f.op == FOp::exists_node);
  CHECK(f.v1 == "x");
  REQUIRE(f.kids[0].op == FOp::exists_set);
  CHECK(f.kids[0].v1 == "Y");
  CHECK(render(f) == "exists x, Y (x in Y)");
}

TEST_CASE("free variables respect binders") {
  Formula f = parse("exists x (x -> y & x in X)");
  CHECK(free_vars(f) == std::set<std::string>{"y", "X"});
  CHECK_FALSE(is_sentence(f));
  CHECK(is_sentence(parse("forall x (x = x)")));
}

TEST_CASE("evaluation matches hand-computed verdicts") {
  LabeledGraph cyc = fixtures::mirror_abc();  // a -> b -> c -> a
  CHECK(evaluate(parse("exists x (lab[a](x))"), cyc));
  CHECK_FALSE(evaluate(parse("forall x (lab[a](x))"), cyc));
  CHECK(evaluate(parse("exists x, y (lab[a](x) & x -> y & lab[b](y))"), cyc));
  CHECK_FALSE(evaluate(parse("exists x (x -> x)"), cyc));
  CHECK(evaluate(parse("exists x (lab[a](x) & forall y (lab[a](y) => x = y))"),
                 cyc));
  CHECK_FALSE(evaluate(parse("forall x, y (x -> y <=> y -> x)"), cyc));
  CHECK(evaluate(parse("forall x, y (x -> y <=> y -> x)"), fixtures::triangle()));
  CHECK(evaluate(parse("exists X (forall x (x in X))"), cyc));
  CHECK_FALSE(evaluate(parse("forall X (exists x (x in X))"), cyc));
}

TEST_CASE("evaluation needs assignments for free variables") {
  LabeledGraph g = blank(2);
  CHECK_THROWS_AS(evaluate(parse("x = x"), g), Error);
  Assignment alpha;
  alpha.nodes["x"] = 1;
  CHECK(evaluate(parse("x = x"), g, alpha));
  alpha.sets["X"] = 0b01;
  CHECK(evaluate(parse("x in X"), g, alpha) == false);
  alpha.sets["X"] = 0b10;
  CHECK(evaluate(parse("x in X"), g, alpha));
}

TEST_CASE("set quantification is capped") {
  CHECK_THROWS_AS(evaluate(parse("exists X (exists x (x in X))"), blank(25)),
                  Error);
}

TEST_CASE("the benchmark sentences describe their languages") {
  Alphabet blank_sigma({"_"});
  Formula c3 = parse(benchmark::three_color_text());
  CHECK(evaluate(c3, fixtures::triangle()));
  CHECK_FALSE(evaluate(c3, clique(4)));
  testutil::for_each_graph(3, blank_sigma, blank_sigma, [&](const LabeledGraph& g) {
    CHECK(evaluate(c3, g) == is_k_colorable(g, 3));
  });

  Formula centric = parse(benchmark::centric_text());
  CHECK(evaluate(centric, fixtures::centric_in()));
  CHECK_FALSE(evaluate(centric, fixtures::centric_out()));

  Formula minor = parse(benchmark::minor_k3_text());
  CHECK(evaluate(minor, fixtures::triangle()));
  CHECK_FALSE(evaluate(minor, fixtures::edgeless4()));
  CHECK_FALSE(evaluate(minor, blank(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}})));
}

TEST_CASE("pair labels encode variable sets") {
  CHECK(pair_label("a", {}) == "a");
  CHECK(pair_label("a", {"x", "X"}) == "a|{x,X}");
  auto [base, vars] = split_pair_label("b|{x,Y}");
  CHECK(base == "b");
  CHECK(vars == std::vector<std::string>{"x", "Y"});
  auto [plain, none] = split_pair_label("c");
  CHECK(plain == "c");
  CHECK(none.empty());

  CHECK(sorted_scope({"X", "b", "a", "Y"}) ==
        std::vector<std::string>{"a", "b", "X", "Y"});

  Alphabet p = pair_alphabet(Alphabet({"a", "b"}), {"x"});
  REQUIRE(p.size() == 4);
  CHECK(p.at(0) == "a");
  CHECK(p.at(1) == "a|{x}");
  CHECK(p.at(2) == "b");
  CHECK(p.at(3) == "b|{x}");

  std::vector<std::string> huge(17, "x");
  for (size_t i = 0; i < huge.size(); ++i) huge[i] += std::to_string(i);
  CHECK_THROWS_AS(pair_alphabet(Alphabet({"a"}), huge), Error);
}

TEST_CASE("assignments ride along as labels and decode back") {
  LabeledGraph g = fixtures::mirror_abc();
  Assignment alpha;
  alpha.nodes["x"] = 1;
  alpha.sets["X"] = 0b101;
  LabeledGraph enc = encode_assignment(g, alpha, {"x", "X"});
  CHECK(enc.sigma.at(enc.labels[0]) == "a|{X}");
  CHECK(enc.sigma.at(enc.labels[1]) == "b|{x}");
  CHECK(enc.sigma.at(enc.labels[2]) == "c|{X}");

  DecodedAssignment dec = encode_inverse(enc, g.sigma);
  CHECK(dec.graph.labels == g.labels);
  CHECK(dec.alpha.nodes.at("x") == 1);
  CHECK(dec.alpha.sets.at("X") == 0b101);

  Assignment missing;
  CHECK_THROWS_AS(encode_assignment(g, missing, {"x"}), Error);

  LabeledGraph twice = make_graph({"_", "_|{x}"}, {"_"}, {"_|{x}", "_|{x}"}, {});
  CHECK_THROWS_AS(encode_inverse(twice, Alphabet({"_"})), Error);
}

TEST_CASE("the one-carrier automaton counts carriers") {
  Alphabet sp = pair_alphabet(Alphabet({"_"}), {"x"});
  Automaton one = one_carrier_automaton(sp, Alphabet({"_"}), "x");
  auto carriers = [&](std::vector<std::string> labels) {
    return accepts(one, make_graph({"_", "_|{x}"}, {"_"}, labels, {}));
  };
  CHECK_FALSE(carriers({"_"}));
  CHECK(carriers({"_|{x}"}));
  CHECK(carriers({"_", "_|{x}"}));
  CHECK_FALSE(carriers({"_|{x}", "_|{x}"}));
  CHECK_FALSE(carriers({"_|{x}", "_|{x}", "_"}));
}

TEST_CASE("compiled sentences agree with direct evaluation") {
  Alphabet blank_sigma({"_"});
  Alphabet abc({"a", "b", "c"});

  struct Case {
    const char* text;
    Alphabet sigma;
    int n_max;
  };
  for (const Case& c : {
           Case{"exists x (lab[a](x))", abc, 2},
           Case{"exists x, y (!(x = y))", blank_sigma, 3},
           Case{"exists x (x -> x)", blank_sigma, 3},
           Case{"forall x, y (x -> y => y -> x)", blank_sigma, 3},
           Case{"forall x (exists y (y -> x))", blank_sigma, 3},
       }) {
    Formula f = parse(c.text);
    CompileResult r = compile(f, c.sigma, blank_sigma);
    CHECK_FALSE(r.report.steps.empty());
    testutil::for_each_graph(c.n_max, c.sigma, blank_sigma,
                             [&](const LabeledGraph& g) {
                               CHECK(accepts(r.automaton, g) == evaluate(f, g));
                             });
  }
}

TEST_CASE("automata translate back into equivalent sentences") {
  Automaton max2 = fixtures::make_max2();
  Formula s = automaton_to_sentence(max2);
  CHECK(is_sentence(s));
  CHECK(parse(render(s)) == s);
  CHECK(evaluate(s, blank(1)));
  CHECK(evaluate(s, blank(2)));
  CHECK_FALSE(evaluate(s, blank(3)));
  testutil::for_each_graph(3, max2.sigma, max2.gamma, [&](const LabeledGraph& g) {
    CHECK(evaluate(s, g) == accepts(max2, g));
  });

  Automaton occ = fixtures::make_occur_abc();
  Formula so = automaton_to_sentence(occ);
  testutil::for_each_graph(2, occ.sigma, occ.gamma, [&](const LabeledGraph& g) {
    CHECK(evaluate(so, g) == accepts(occ, g));
  });

  CHECK_THROWS_AS(automaton_to_sentence(max2, 2), Error);
}
