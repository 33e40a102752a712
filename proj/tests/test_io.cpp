#include <catch2/catch_amalgamated.hpp>

#include "dga/dga.hpp"
#include "helpers.hpp"

using namespace dga;
using io::json;
using Catch::Matchers::MessageMatches;
using Catch::Matchers::ContainsSubstring;

namespace {

Automaton many_permanents() {
  std::vector<State> st;
  for (int i = 0; i < 11; ++i)
    st.push_back({"p" + std::to_string(i), StateKind::permanent});
  return Automaton::build(Alphabet({"_"}), Alphabet({"_"}), std::move(st), {0},
                          {}, AcceptFamily::card(CardRel::ge, 1));
}

Automaton two_relations() {
  std::vector<State> st{{"q0", StateKind::existential},
                        {"p_ok", StateKind::permanent}};
  Rule r;
  r.from = 0;
  r.guard = Guard::conjunction({Guard::card(0, CardRel::ge, 1),
                                Guard::negation(Guard::member(1, 0))});
  r.to = {1};
  return Automaton::build(Alphabet({"_"}), Alphabet({"r", "s"}), std::move(st),
                          {0}, {std::move(r)},
                          AcceptFamily::has("p_ok"));
}

}  // namespace

TEST_CASE("graph json uses labeled nodes and per-relation edge lists") {
  json j = io::graph_to_json(fixtures::centric_in());
  CHECK(j["sigma"] == json::array({"a", "b", "c"}));
  CHECK(j["gamma"] == json::array({"_"}));
  REQUIRE(j["nodes"].size() == 3);
  CHECK(j["nodes"][0]["label"] == "a");
  CHECK(j["nodes"][2]["label"] == "b");
  REQUIRE(j["edges"].contains("_"));
  CHECK(j["edges"]["_"] == json::parse("[[1,0],[2,0]]"));
}

TEST_CASE("graph json round trip is byte stable") {
  for (const auto& gf : fixtures::graph_fixtures()) {
    std::string once = io::graph_to_json(gf.graph).dump();
    std::string twice =
        io::graph_to_json(io::graph_from_json(json::parse(once))).dump();
    CHECK(once == twice);
  }
}

TEST_CASE("handwritten graph json parses") {
  json j = json::parse(R"({
    "sigma": ["a", "b"],
    "gamma": ["e"],
    "nodes": [{"label": "a"}, {"label": "b"}, {"label": "a"}],
    "edges": {"e": [[0, 1], [1, 2]]}
  })");
  LabeledGraph g = io::graph_from_json(j);
  CHECK(g.n == 3);
  CHECK(g.sigma.at(g.labels[1]) == "b");
  CHECK(g.has_edge(0, 0, 1));
  CHECK(g.has_edge(0, 1, 2));
  CHECK_FALSE(g.has_edge(0, 1, 0));

  json no_edges = j;
  no_edges.erase("edges");
  CHECK(io::graph_from_json(no_edges).n == 3);
}

TEST_CASE("malformed graph json is rejected") {
  CHECK_THROWS_MATCHES(io::graph_from_json(json::parse("[]")), Error,
                       MessageMatches(ContainsSubstring("must be an object")));
  CHECK_THROWS_MATCHES(
      io::graph_from_json(json::parse(R"({"sigma":["_"],"gamma":["_"]})")),
      Error, MessageMatches(ContainsSubstring("misses nodes")));
  CHECK_THROWS_MATCHES(
      io::graph_from_json(json::parse(
          R"({"sigma":["_"],"gamma":["_"],"nodes":[{"l":"_"}]})")),
      Error, MessageMatches(ContainsSubstring("label")));
  CHECK_THROWS_MATCHES(
      io::graph_from_json(json::parse(
          R"({"sigma":["_"],"gamma":["_"],"nodes":[{"label":"_"}],"edges":{"_":[[0]]}})")),
      Error, MessageMatches(ContainsSubstring("[u,v]")));
  // unknown label and out-of-range endpoint surface from graph construction
  CHECK_THROWS_AS(io::graph_from_json(json::parse(
                      R"({"sigma":["_"],"gamma":["_"],"nodes":[{"label":"x"}]})")),
                  Error);
  CHECK_THROWS_AS(
      io::graph_from_json(json::parse(
          R"({"sigma":["_"],"gamma":["_"],"nodes":[{"label":"_"}],"edges":{"_":[[0,4]]}})")),
      Error);
}

TEST_CASE("automaton json round trip is byte stable for every fixture") {
  for (const auto& fx : fixtures::automaton_fixtures()) {
    INFO(fx.name);
    std::string once = io::automaton_to_json(fx.automaton).dump();
    Automaton back = io::automaton_from_json(json::parse(once));
    CHECK(back.siz() == fx.automaton.siz());
    CHECK(back.len == fx.automaton.len);
    CHECK(io::automaton_to_json(back).dump() == once);
  }
}

TEST_CASE("small accepting families dump as explicit set lists") {
  json j = io::automaton_to_json(fixtures::make_max2());
  REQUIRE(j["accepting"].is_array());
  // subsets of {q_m1,q_m2,q_m3} with at most two members, in subset-counter order
  REQUIRE(j["accepting"].size() == 7);
  CHECK(j["accepting"][0] == json::array());
  CHECK(j["accepting"][1] == json::array({"q_m1"}));
  CHECK(j["accepting"][3] == json::array({"q_m1", "q_m2"}));
  CHECK(j["accepting"][6] == json::array({"q_m2", "q_m3"}));
}

TEST_CASE("large accepting families stay symbolic") {
  Automaton a = many_permanents();
  json j = io::automaton_to_json(a);
  REQUIRE(j["accepting"].is_object());
  CHECK(j["accepting"]["card"]["cmp"] == ">=");
  CHECK(j["accepting"]["card"]["bound"] == 1);
  std::string once = j.dump();
  CHECK(io::automaton_to_json(io::automaton_from_json(json::parse(once))).dump() ==
        once);

  // the triangle-minor fixture has more than ten permanents, same path
  json big = io::automaton_to_json(
      fixtures::automaton_fixture("A_minor_K3").automaton);
  CHECK_FALSE(big["accepting"].is_array());
}

TEST_CASE("symbolic family forms evaluate as written") {
  AcceptFamily f = io::family_from_json(json::parse(
      R"({"any":[{"has":"p"},{"card":{"cmp":">=","bound":2}}]})"));
  CHECK(f.member({"p"}));
  CHECK(f.member({"a", "b"}));
  CHECK_FALSE(f.member({"a"}));
  CHECK_FALSE(f.member({}));

  AcceptFamily all = io::family_from_json(json::parse(
      R"({"all":[{"subset":["a","b"]},{"not":{"card":{"cmp":"=","bound":0}}}]})"));
  CHECK(all.member({"a"}));
  CHECK(all.member({"a", "b"}));
  CHECK_FALSE(all.member({}));
  CHECK_FALSE(all.member({"a", "c"}));

  CHECK(io::family_from_json(json(true)).member({}));
  CHECK_FALSE(io::family_from_json(json(false)).member({"a"}));

  AcceptFamily list = io::family_from_json(json::parse(R"([["b","a"],[]])"));
  CHECK(list.member({"a", "b"}));
  CHECK(list.member({}));
  CHECK_FALSE(list.member({"a"}));

  AcceptFamily pairs = io::family_from_json(json::parse(R"({
    "pairs": {"mode": "both",
              "map": [["pp", "l", "r"], ["qq", "l2", "r2"]],
              "kids": [[["l"]], [["r"]]]}
  })"));
  CHECK(pairs.member({"pp"}));
  CHECK_FALSE(pairs.member({"qq"}));
  CHECK_FALSE(pairs.member({}));
}

TEST_CASE("malformed family json is rejected") {
  auto bad = [](const char* text) {
    CHECK_THROWS_AS(io::family_from_json(json::parse(text)), Error);
  };
  bad(R"({"has":"p","card":{"cmp":">=","bound":1}})");  // two keys
  bad(R"({"frob":"p"})");                               // unknown key
  bad(R"({"card":{"cmp":"~","bound":1}})");             // unknown comparison
  bad(R"({"pairs":{"mode":"xor","map":[],"kids":[true,true]}})");
  bad(R"({"pairs":{"mode":"both","map":[["p","l"]],"kids":[true,true]}})");
  bad(R"({"pairs":{"mode":"both","map":[],"kids":[true]}})");
  bad("3");
}

TEST_CASE("malformed automaton json is rejected") {
  json good = io::automaton_to_json(fixtures::make_occur_abc());
  CHECK_NOTHROW(io::automaton_from_json(good));

  json j = good;
  j.erase("init");
  CHECK_THROWS_MATCHES(io::automaton_from_json(j), Error,
                       MessageMatches(ContainsSubstring("misses init")));

  j = good;
  j["states"][0]["kind"] = "X";
  CHECK_THROWS_MATCHES(io::automaton_from_json(j), Error,
                       MessageMatches(ContainsSubstring("E, A, or P")));

  j = good;
  j["init"]["d"] = "q_seen_a";
  CHECK_THROWS_MATCHES(io::automaton_from_json(j), Error,
                       MessageMatches(ContainsSubstring("unknown label")));

  j = good;
  j["init"].erase("c");
  CHECK_THROWS_MATCHES(io::automaton_from_json(j), Error,
                       MessageMatches(ContainsSubstring("misses label c")));

  j = good;
  j["init"]["a"] = "q_missing";
  CHECK_THROWS_MATCHES(io::automaton_from_json(j), Error,
                       MessageMatches(ContainsSubstring("unknown state")));

  json rule = {{"from", "q_nowhere"}, {"guard", "true"}, {"to", json::array()}};
  j = good;
  j["rules"].push_back(rule);
  CHECK_THROWS_MATCHES(io::automaton_from_json(j), Error,
                       MessageMatches(ContainsSubstring("unknown state")));
}

TEST_CASE("guards carry relation tags for several edge relations") {
  Automaton a = two_relations();
  json j = io::automaton_to_json(a);
  std::string guard = j["rules"][0]["guard"].get<std::string>();
  CHECK(guard == "card@r >= 1 & !has(q0)@s");
  std::string once = j.dump();
  CHECK(io::automaton_to_json(io::automaton_from_json(json::parse(once))).dump() ==
        once);
}

TEST_CASE("transform reports serialize op, sizes, and state changes") {
  TransformResult d = dual(fixtures::make_3color());
  json j = io::report_to_json(d.report);
  CHECK(j["op"] == "dual");
  REQUIRE(j["inputs"].size() == 1);
  CHECK(j["inputs"][0]["siz"] == 6);
  CHECK(j["inputs"][0]["len"] == 2);
  CHECK(j["siz"] == 6);
  CHECK(j["len"] == 2);
  CHECK(j["fresh_states"] == json::array());
  CHECK(j["removed_states"] == json::array());
  CHECK(j["notes"].is_array());
}

TEST_CASE("emptiness verdicts serialize status, bounds, and any witness") {
  json j = io::verdict_to_json(ndga_emptiness(fixtures::make_min3(), 3));
  CHECK(j["status"] == "NonEmpty");
  CHECK(j["bound_used"] == 3);
  CHECK(j["theoretical_bound"] == 16);
  CHECK(j["undirected"] == false);
  REQUIRE(j.contains("witness"));
  CHECK(j["witness"]["nodes"].size() == 3);
  REQUIRE(j.contains("witness_run_states"));
  CHECK(j["witness_run_states"].size() == 2);

  // a never-accepting automaton proves emptiness at bound 1, no witness keys
  Automaton never =
      Automaton::build(Alphabet({"_"}), Alphabet({"_"}),
                       {{"p0", StateKind::permanent}}, {0}, {},
                       AcceptFamily::never());
  json k = io::verdict_to_json(ndga_emptiness(never, 3));
  CHECK(k["status"] == "EmptyProven");
  CHECK(k["bound_used"] == 1);
  CHECK_FALSE(k.contains("witness"));
  CHECK_FALSE(k.contains("witness_run_states"));
}

TEST_CASE("classifications serialize with nested nonblocking reports") {
  json j = io::classification_to_json(classify(fixtures::make_3color()));
  CHECK(j["alternating"] == false);
  CHECK(j["determinism"] == "nondeterministic");
  CHECK(j["ddga"] == false);
  CHECK(j["nonblocking"]["status"] == "syntactically_complete");
  CHECK(j["nonblocking"]["detail"] ==
        "every nonpermanent state has exhaustive guards");

  json k = io::classification_to_json(classify(fixtures::make_occur_abc()));
  CHECK(k["alternating"] == false);
  CHECK(k["determinism"] == "deterministic");
  CHECK(k["ddga"] == true);
}
