#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>

#include "dga/dga.hpp"
#include "helpers.hpp"

using namespace dga;
using testutil::blank;
using testutil::clique;

TEST_CASE("initial configuration follows the label map") {
  Automaton a = fixtures::make_centric();
  LabeledGraph g = fixtures::centric_in();
  std::vector<int> q0 = initial_configuration(a, g);
  REQUIRE(q0.size() == 3);
  CHECK(q0[0] == a.state_id("q_a"));
  CHECK(q0[1] == a.state_id("q_b"));
  CHECK(q0[2] == a.state_id("q_b"));
}

TEST_CASE("acceptance on the smallest cases") {
  Automaton max2 = fixtures::make_max2();
  Automaton min3 = fixtures::make_min3();
  CHECK(accepts(max2, blank(1)));
  CHECK(accepts(max2, blank(2)));
  CHECK_FALSE(accepts(max2, blank(3)));
  CHECK_FALSE(accepts(min3, blank(2)));
  CHECK(accepts(min3, blank(3)));

  Automaton c3 = fixtures::make_3color();
  CHECK_FALSE(accepts(c3, blank(1, {{0, 0}})));
  CHECK(accepts(c3, fixtures::triangle()));
  CHECK_FALSE(accepts(c3, clique(4)));
}

TEST_CASE("position count of the color game on two isolated nodes") {
  Automaton a = fixtures::make_3color();
  GameAnalysis ga = analyze_game(a, blank(2));
  // initial + 3x3 color choices + one shared all-yes permanent position
  CHECK(ga.positions.size() == 11);
  CHECK(ga.automaton_wins());
}

TEST_CASE("all-permanent start makes a one-position game") {
  Automaton a = fixtures::make_occur_abc();
  LabeledGraph g = make_graph({"a", "b", "c"}, {"_"}, {"a"}, {});
  GameAnalysis ga = analyze_game(a, g);
  CHECK(ga.positions.size() == 1);
  CHECK(ga.positions[0].succ.empty());
  CHECK_FALSE(ga.automaton_wins());  // only a occurs
}

TEST_CASE("analysis agrees with the lazy solver and replays cleanly") {
  Automaton a = fixtures::make_centric();
  for (const auto& gf : {fixtures::centric_in(), fixtures::centric_out()}) {
    GameAnalysis ga = analyze_game(a, gf);
    CHECK(ga.automaton_wins() == accepts(a, gf));
    ReplayReport rep = replay_strategy(ga, ga.automaton_wins());
    CHECK(rep.consistent);
    CHECK(rep.always_wins);
    CHECK(rep.plays >= 1);
  }
}

TEST_CASE("the accepting run of the centric automaton splits once") {
  Automaton a = fixtures::make_centric();
  GameAnalysis ga = analyze_game(a, fixtures::centric_in());
  REQUIRE(ga.automaton_wins());
  RunDag run = extract_run(ga);
  CHECK(run.accepting);
  REQUIRE(run.configs.size() == 4);
  CHECK(run.edges[0].size() == 1);
  int mid = run.edges[0][0];
  CHECK(run.edges[mid].size() == 2);
  int sinks = 0;
  for (size_t i = 0; i < run.configs.size(); ++i) {
    if (run.types[i] != PositionType::accepting_sink) continue;
    ++sinks;
    Bits set(a.siz());
    for (int q : run.configs[i]) set.set(q);
    CHECK(a.accepting_contains(set));
  }
  CHECK(sinks == 2);
}

TEST_CASE("extract_run refuses a lost game") {
  Automaton a = fixtures::make_centric();
  GameAnalysis ga = analyze_game(a, fixtures::centric_out());
  REQUIRE_FALSE(ga.automaton_wins());
  CHECK_THROWS_AS(extract_run(ga), Error);
}

TEST_CASE("position cap stops the expansion loudly") {
  Automaton a = fixtures::make_3color();
  GameLimits tight{2};
  CHECK_THROWS_MATCHES(
      accepts(a, fixtures::triangle(), tight), Error,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("DGA_POSITION_CAP")));
  CHECK_THROWS_AS(analyze_game(a, fixtures::triangle(), tight), Error);
}

TEST_CASE("the position cap env var feeds the default limits") {
  setenv("DGA_POSITION_CAP", "1234", 1);
  CHECK(default_position_cap() == 1234);
  unsetenv("DGA_POSITION_CAP");
  CHECK(default_position_cap() == 1000000);
}

TEST_CASE("run sequence search agrees with the game on nondeterministic input") {
  Automaton min3 = fixtures::make_min3();
  CHECK_FALSE(ndga_accepts_path(min3, blank(2)).has_value());
  auto path = ndga_accepts_path(min3, blank(3));
  REQUIRE(path.has_value());
  CHECK(path->size() == 2);
  CHECK(verify_accepting_run(min3, blank(3), *path));

  Automaton c3 = fixtures::make_3color();
  testutil::for_each_graph(3, c3.sigma, c3.gamma, [&](const LabeledGraph& g) {
    CHECK(ndga_accepts_path(c3, g).has_value() == accepts(c3, g));
  });

  CHECK_THROWS_AS(ndga_accepts_path(fixtures::make_max2(), blank(1)), Error);
}

TEST_CASE("levels along any move never decrease") {
  Automaton a = fixtures::make_tree();
  LabeledGraph g = blank(3, {{0, 1}, {1, 2}});
  GameAnalysis ga = analyze_game(a, g);
  auto min_level = [&](const std::vector<int>& q) {
    int best = a.len;
    for (int s : q)
      if (!a.is_permanent(s)) best = std::min(best, a.level[s]);
    return best;
  };
  for (const auto& p : ga.positions)
    for (int s : p.succ)
      CHECK(min_level(ga.positions[s].q) > min_level(p.q));
}
