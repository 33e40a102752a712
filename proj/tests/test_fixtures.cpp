#include <catch2/catch_amalgamated.hpp>

#include "dga/dga.hpp"
#include "helpers.hpp"

using namespace dga;
using testutil::blank;
using testutil::clique;
using testutil::passes_restriction;

TEST_CASE("the registries expose the bundled automata and graphs") {
  CHECK(fixtures::automaton_fixtures().size() == 10);
  CHECK(fixtures::graph_fixtures().size() == 5);
  for (const auto& fx : fixtures::automaton_fixtures()) {
    CHECK_FALSE(fx.about.empty());
    CHECK(fx.oracle != nullptr);
  }
  CHECK(fixtures::automaton_fixture("A_3color").name == "A_3color");
  CHECK(fixtures::automaton_fixture("A_occur").name == "A_occur_abc");
  CHECK(fixtures::graph_fixture("G_triangle").name == "G_triangle");
  CHECK_THROWS_AS(fixtures::automaton_fixture("A_bogus"), Error);
  CHECK_THROWS_AS(fixtures::graph_fixture("G_bogus"), Error);
}

TEST_CASE("fixture sizes and round counts stay pinned") {
  auto dims = [](const char* name) {
    const Automaton& a = fixtures::automaton_fixture(name).automaton;
    return std::pair<int, int>(a.siz(), a.len);
  };
  CHECK(dims("A_3color") == std::pair(6, 2));
  CHECK(dims("A_not3color") == std::pair(6, 2));
  CHECK(dims("A_centric") == std::pair(10, 2));
  CHECK(dims("A_conn") == std::pair(6, 2));
  CHECK(dims("A_tree") == std::pair(9, 3));
  CHECK(dims("A_undir") == std::pair(8, 3));
  CHECK(dims("A_minor_K3") == std::pair(24, 3));
  CHECK(dims("A_max2") == std::pair(4, 1));
  CHECK(dims("A_min3") == std::pair(4, 1));
  CHECK(dims("A_occur_abc") == std::pair(3, 0));

  const Automaton& c3 = fixtures::automaton_fixture("A_3color").automaton;
  CHECK(c3.name_of(0) == "q_ini");
  CHECK(c3.name_of(5) == "q_no");
}

TEST_CASE("input restrictions are recorded where the language needs them") {
  using R = fixtures::GraphRestriction;
  CHECK(fixtures::automaton_fixture("A_tree").restriction == R::connected);
  CHECK(fixtures::automaton_fixture("A_minor_K3").restriction == R::undirected);
  CHECK(fixtures::automaton_fixture("A_3color").restriction == R::none);
  CHECK(fixtures::automaton_fixture("A_centric").restriction == R::none);
}

TEST_CASE("fixture graphs have the advertised shapes") {
  const LabeledGraph& tri = fixtures::graph_fixture("G_triangle").graph;
  CHECK(tri.n == 3);
  CHECK(is_undirected(tri));
  CHECK(is_connected(tri));

  const LabeledGraph& e4 = fixtures::graph_fixture("G_edgeless4").graph;
  CHECK(e4.n == 4);
  CHECK(e4.edges(0).empty());

  const LabeledGraph& mir = fixtures::graph_fixture("G_mirror_abc").graph;
  REQUIRE(mir.n == 3);
  CHECK(mir.sigma.at(mir.labels[0]) == "a");
  CHECK(mir.sigma.at(mir.labels[1]) == "b");
  CHECK(mir.sigma.at(mir.labels[2]) == "c");
}

TEST_CASE("oracles match hand-checked instances") {
  CHECK(is_k_colorable(fixtures::triangle(), 3));
  CHECK_FALSE(is_k_colorable(fixtures::triangle(), 2));
  CHECK_FALSE(is_k_colorable(clique(4), 3));
  CHECK_FALSE(is_k_colorable(blank(1, {{0, 0}}), 3));

  CHECK(fixtures::oracle_tree(blank(3, {{0, 1}, {1, 2}})));
  CHECK_FALSE(fixtures::oracle_tree(blank(3, {{0, 1}, {1, 2}, {2, 0}})));
  CHECK_FALSE(fixtures::oracle_tree(blank(3, {{0, 1}, {0, 2}, {1, 2}})));

  CHECK(has_minor(fixtures::triangle(), fixtures::triangle()));
  CHECK_FALSE(has_minor(blank(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}}),
                        fixtures::triangle()));
  CHECK(has_minor(
      blank(4, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 0}, {0, 3}}),
      fixtures::triangle()));

  CHECK(fixtures::oracle_centric(fixtures::centric_in()));
  CHECK_FALSE(fixtures::oracle_centric(fixtures::centric_out()));
  CHECK(fixtures::oracle_occur_abc(fixtures::mirror_abc()));
  CHECK_FALSE(fixtures::oracle_occur_abc(fixtures::centric_in()));
}

TEST_CASE("every fixture automaton agrees with its oracle on fixture graphs") {
  for (const auto& fx : fixtures::automaton_fixtures()) {
    for (const auto& gf : fixtures::graph_fixtures()) {
      if (fx.automaton.sigma.symbols() != gf.graph.sigma.symbols()) continue;
      if (fx.automaton.gamma.symbols() != gf.graph.gamma.symbols()) continue;
      if (!passes_restriction(fx.restriction, gf.graph)) continue;
      INFO(fx.name << " on " << gf.name);
      CHECK(accepts(fx.automaton, gf.graph) == fx.oracle(gf.graph));
    }
  }
}

TEST_CASE("acceptance spot checks beyond the shared registry graphs") {
  const Automaton& undir = fixtures::automaton_fixture("A_undir").automaton;
  CHECK(accepts(undir, fixtures::triangle()));
  CHECK_FALSE(accepts(undir, blank(2, {{0, 1}})));
  CHECK(accepts(undir, blank(1, {{0, 0}})));

  const Automaton& tree = fixtures::automaton_fixture("A_tree").automaton;
  CHECK(accepts(tree, blank(3, {{0, 1}, {1, 2}})));
  CHECK_FALSE(accepts(tree, blank(3, {{0, 1}, {1, 2}, {2, 0}})));
  CHECK_FALSE(accepts(tree, blank(3, {{0, 1}, {0, 2}, {1, 2}})));

  const Automaton& conn = fixtures::automaton_fixture("A_conn").automaton;
  CHECK(accepts(conn, blank(3, {{0, 1}, {2, 1}})));
  CHECK_FALSE(accepts(conn, blank(2)));

  const Automaton& minor = fixtures::automaton_fixture("A_minor_K3").automaton;
  CHECK(accepts(minor, fixtures::triangle()));
  CHECK_FALSE(accepts(minor, fixtures::edgeless4()));
}
