#include <catch2/catch_amalgamated.hpp>

#include "dga/dga.hpp"
#include "helpers.hpp"

using namespace dga;
using testutil::blank;

namespace {

bool same_language_upto(const Automaton& a, const Automaton& b, int n_max) {
  bool same = true;
  testutil::for_each_graph(n_max, a.sigma, a.gamma, [&](const LabeledGraph& g) {
    if (accepts(a, g) != accepts(b, g)) same = false;
  });
  return same;
}

// Blocks on any node without in-neighbors, accepts everything else.
Automaton needs_incoming() {
  return Automaton::build(
      Alphabet({"_"}), Alphabet({"_"}),
      {{"q0", StateKind::existential}, {"p_ok", StateKind::permanent}}, {0},
      {{0, Guard::card(0, CardRel::ge, 1), {1}}}, AcceptFamily::has("p_ok"));
}

// Deterministic one-round automaton with cardinality guards.
Automaton counts_neighbors() {
  return Automaton::build(
      Alphabet({"_"}), Alphabet({"_"}),
      {{"q0", StateKind::existential},
       {"p_few", StateKind::permanent},
       {"p_many", StateKind::permanent}},
      {0},
      {{0, Guard::card(0, CardRel::le, 1), {1}},
       {0, Guard::card(0, CardRel::ge, 2), {2}}},
      AcceptFamily::has("p_few"));
}

bool kinds_alternate(const Automaton& a) {
  for (int i = 1; i < a.len; ++i)
    if (level_kind(a, i) == level_kind(a, i - 1)) return false;
  return true;
}

}  // namespace

TEST_CASE("dual flips kinds, complements the language, and is an involution") {
  Automaton a = fixtures::make_3color();
  TransformResult d = dual(a);
  CHECK(d.report.op == "dual");
  CHECK(d.report.inputs == std::vector<std::array<int, 2>>{{6, 2}});
  CHECK(d.report.siz == a.siz());
  CHECK(d.report.len == a.len);
  for (int q = 0; q < a.siz(); ++q) {
    if (a.is_permanent(q)) {
      CHECK(d.automaton.kind_of(q) == StateKind::permanent);
    } else {
      CHECK(d.automaton.kind_of(q) != a.kind_of(q));
    }
  }
  testutil::for_each_graph(3, a.sigma, a.gamma, [&](const LabeledGraph& g) {
    CHECK(accepts(d.automaton, g) == !accepts(a, g));
  });
  Automaton dd = dual(d.automaton).automaton;
  for (int q = 0; q < a.siz(); ++q) CHECK(dd.kind_of(q) == a.kind_of(q));
  CHECK(same_language_upto(dd, a, 3));
}

TEST_CASE("blocking detection separates the three verdicts") {
  NonblockingReport complete = is_nonblocking(fixtures::make_3color());
  CHECK(complete.status == NonblockingReport::Status::syntactically_complete);

  NonblockingReport stuck = is_nonblocking(needs_incoming());
  REQUIRE(stuck.status == NonblockingReport::Status::blocking);
  REQUIRE(stuck.witness.has_value());
  CHECK(stuck.witness->n == 1);
  CHECK(stuck.detail.find("q0") != std::string::npos);

  // guards of the marker states miss the empty set, but that set is
  // unreachable, which only the search can see
  NonblockingReport searched = is_nonblocking(fixtures::make_tree());
  CHECK(searched.status == NonblockingReport::Status::verified_up_to_cap);
  CHECK(searched.node_cap == 3);
}

TEST_CASE("escape states remove blocking without changing the language") {
  Automaton a = needs_incoming();
  TransformResult fixed = make_nonblocking(a);
  CHECK(fixed.report.op == "make_nonblocking");
  CHECK(fixed.report.siz <= a.siz() + a.len);
  CHECK(fixed.report.fresh_states.size() == 1);
  CHECK(is_nonblocking(fixed.automaton).status !=
        NonblockingReport::Status::blocking);
  CHECK(same_language_upto(fixed.automaton, a, 3));

  // mixed level kinds get one stop state per level
  Automaton tree = fixtures::make_tree();
  TransformResult tfix = make_nonblocking(tree);
  CHECK(tfix.report.fresh_states.size() == (size_t)tree.len);
  CHECK(tfix.report.siz <= tree.siz() + tree.len);
  CHECK(same_language_upto(tfix.automaton, tree, 3));

  TransformResult noop = make_nonblocking(fixtures::make_occur_abc());
  CHECK(noop.report.siz == 3);
  CHECK(noop.report.fresh_states.empty());
}

TEST_CASE("trim drops unreachable states") {
  Automaton a = Automaton::build(
      Alphabet({"_"}), Alphabet({"_"}),
      {{"q0", StateKind::existential},
       {"q_dead", StateKind::existential},
       {"p_ok", StateKind::permanent},
       {"p_bad", StateKind::permanent}},
      {0}, {{0, Guard::truth(), {2}}, {1, Guard::truth(), {3}}},
      AcceptFamily::has("p_ok"));
  TransformResult t = trim(a);
  CHECK(t.report.removed_states ==
        std::vector<std::string>{"q_dead", "p_bad"});
  CHECK(t.report.siz == 2);
  CHECK(same_language_upto(t.automaton, a, 3));
}

TEST_CASE("trim sees through unsatisfiable guards") {
  Guard never = Guard::conjunction(
      {Guard::member(0, 0), Guard::negation(Guard::member(0, 0))});
  Automaton a = Automaton::build(
      Alphabet({"_"}), Alphabet({"_"}),
      {{"q0", StateKind::existential},
       {"q_mid", StateKind::existential},
       {"p_ok", StateKind::permanent}},
      {0},
      {{0, never, {1}}, {0, Guard::truth(), {2}}, {1, Guard::truth(), {2}}},
      AcceptFamily::has("p_ok"));
  REQUIRE(a.len == 2);
  TransformResult t = trim(a);
  CHECK(t.report.removed_states == std::vector<std::string>{"q_mid"});
  CHECK(t.report.len == 1);
  CHECK(same_language_upto(t.automaton, a, 3));
}

TEST_CASE("trim on the fixtures is a no-op") {
  for (const auto& name : {"A_3color", "A_centric", "A_tree"}) {
    const Automaton& a = fixtures::automaton_fixture(name).automaton;
    TransformResult t = trim(a);
    CHECK(t.report.removed_states.empty());
    CHECK(t.report.siz == a.siz());
  }
}

TEST_CASE("alternation normal form inserts forwarding levels") {
  Automaton conn = fixtures::make_connected();
  REQUIRE_FALSE(kinds_alternate(conn));
  TransformResult anf = to_anf(conn);
  CHECK(kinds_alternate(anf.automaton));
  CHECK(anf.report.siz < 2 * conn.siz());
  CHECK(anf.report.len < 2 * conn.len);
  CHECK(anf.report.len == conn.len + 1);
  CHECK(same_language_upto(anf.automaton, conn, 3));

  // already alternating: nothing to insert
  Automaton centric = fixtures::make_centric();
  TransformResult same = to_anf(centric);
  CHECK(same.report.fresh_states.empty());
  CHECK(same.report.siz == centric.siz());

  TransformResult flat = to_anf(fixtures::make_occur_abc());
  CHECK(flat.report.len == 0);
  CHECK(flat.report.notes.size() == 1);
}

TEST_CASE("union and intersection obey their size laws") {
  auto check_laws = [](const TransformResult& r, int sigma_size) {
    REQUIRE(r.report.inputs.size() == 2);
    CHECK(r.report.siz ==
          r.report.inputs[0][0] + r.report.inputs[1][0] + sigma_size + 1);
    CHECK(r.report.len ==
          std::max(r.report.inputs[0][1], r.report.inputs[1][1]) + 1);
  };
  TransformResult u = union_of(fixtures::make_max2(), fixtures::make_min3());
  CHECK(u.report.op == "union");
  check_laws(u, 1);
  TransformResult i =
      intersection_of(fixtures::make_3color(), fixtures::make_not3color());
  CHECK(i.report.op == "intersection");
  check_laws(i, 1);
  TransformResult mixed =
      union_of(fixtures::make_3color(), fixtures::make_connected());
  check_laws(mixed, 1);
}

TEST_CASE("union and intersection combine the languages") {
  Automaton max2 = fixtures::make_max2();
  Automaton min3 = fixtures::make_min3();
  Automaton all = union_of(max2, min3).automaton;
  Automaton none = intersection_of(max2, min3).automaton;
  testutil::for_each_graph(3, max2.sigma, max2.gamma, [&](const LabeledGraph& g) {
    CHECK(accepts(all, g));
    CHECK_FALSE(accepts(none, g));
  });

  Automaton c3 = fixtures::make_3color();
  Automaton conn = fixtures::make_connected();
  Automaton either = union_of(c3, conn).automaton;
  Automaton both = intersection_of(c3, conn).automaton;
  testutil::for_each_graph(3, c3.sigma, c3.gamma, [&](const LabeledGraph& g) {
    CHECK(accepts(either, g) == (accepts(c3, g) || accepts(conn, g)));
    CHECK(accepts(both, g) == (accepts(c3, g) && accepts(conn, g)));
  });

  CHECK_THROWS_AS(union_of(c3, fixtures::make_centric()), Error);
}

TEST_CASE("projection relabels the language image") {
  // forgetting the letters of the occurrence automaton leaves a size bound:
  // a blank graph has an {a,b,c}-labeling with every letter present exactly
  // when it has at least three nodes
  Automaton occ = fixtures::make_occur_abc();
  TransformResult p = project(occ, Alphabet({"_"}), {0, 0, 0});
  CHECK(p.report.op == "project");
  REQUIRE(p.report.inputs.size() == 1);
  CHECK(p.report.siz == p.report.inputs[0][0] + 1);
  CHECK(p.report.len == p.report.inputs[0][1] + 1);
  CHECK(same_language_upto(p.automaton, fixtures::make_min3(), 4));

  CHECK_THROWS_AS(project(occ, Alphabet({"_"}), {0, 0}), Error);
  CHECK_THROWS_AS(project(occ, Alphabet({"_"}), {0, 0, 1}), Error);
}

TEST_CASE("alphabet extension keeps the behavior per label") {
  Automaton c3 = fixtures::make_3color();
  TransformResult e = extend_alphabet(c3, Alphabet({"a", "b", "c"}), {0, 0, 0});
  CHECK(e.report.op == "extend_alphabet");
  CHECK(e.report.siz == c3.siz());
  CHECK(accepts(e.automaton, fixtures::mirror_abc()));
  CHECK_FALSE(accepts(e.automaton,
                      make_graph({"a", "b", "c"}, {"_"}, {"a"}, {{"_", {0, 0}}})));
  CHECK_THROWS_AS(extend_alphabet(c3, Alphabet({"a", "b"}), {0, 1}), Error);
}

TEST_CASE("products intersect or join nondeterministic languages") {
  Automaton c3 = fixtures::make_3color();
  Automaton min3 = fixtures::make_min3();
  Automaton both = product_of(c3, min3, PairMode::both).automaton;
  Automaton either = product_of(c3, min3, PairMode::either).automaton;
  CHECK_FALSE(both.has_universal_states());
  testutil::for_each_graph(3, c3.sigma, c3.gamma, [&](const LabeledGraph& g) {
    CHECK(accepts(both, g) == (accepts(c3, g) && accepts(min3, g)));
    CHECK(accepts(either, g) == (accepts(c3, g) || accepts(min3, g)));
  });

  CHECK_THROWS_AS(product_of(fixtures::make_max2(), min3), Error);
  CHECK_THROWS_AS(product_of(c3, fixtures::make_occur_abc()), Error);
  CHECK_THROWS_MATCHES(
      product_of(counts_neighbors(), counts_neighbors(), PairMode::both, 1),
      Error,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("subset cap")));
}

TEST_CASE("a deterministic product stays deterministic") {
  Automaton occ = fixtures::make_occur_abc();
  TransformResult p = product_of(occ, occ, PairMode::both);
  Classification c = classify(p.automaton);
  CHECK(c.ddga);
  CHECK(same_language_upto(p.automaton, occ, 2));
}

TEST_CASE("complementing a deterministic automaton flips the language") {
  Automaton occ = fixtures::make_occur_abc();
  TransformResult c = complement_ddga(occ);
  CHECK(c.report.op == "complement_ddga");
  CHECK(c.report.siz == occ.siz());
  CHECK_FALSE(accepts(c.automaton, fixtures::mirror_abc()));
  CHECK(accepts(c.automaton, make_graph({"a", "b", "c"}, {"_"}, {"a"}, {})));
  testutil::for_each_graph(2, occ.sigma, occ.gamma, [&](const LabeledGraph& g) {
    CHECK(accepts(c.automaton, g) == !accepts(occ, g));
  });

  CHECK_THROWS_AS(complement_ddga(fixtures::make_max2()), Error);       // universal
  CHECK_THROWS_AS(complement_ddga(fixtures::make_3color()), Error);     // branching
  CHECK_THROWS_AS(complement_ddga(needs_incoming()), Error);            // blocking
}

TEST_CASE("classification separates the automaton classes") {
  Classification nd = classify(fixtures::make_3color());
  CHECK_FALSE(nd.alternating);
  CHECK(nd.determinism == Determinism::nondeterministic);
  CHECK_FALSE(nd.ddga);

  Classification alt = classify(fixtures::make_max2());
  CHECK(alt.alternating);
  CHECK_FALSE(alt.ddga);

  Classification det = classify(fixtures::make_occur_abc());
  CHECK_FALSE(det.alternating);
  CHECK(det.determinism == Determinism::deterministic);
  CHECK(det.nonblocking.status ==
        NonblockingReport::Status::syntactically_complete);
  CHECK(det.ddga);
}

TEST_CASE("fresh names avoid the taken set") {
  std::set<std::string> taken{"x"};
  std::string x2 = fresh_name("x", taken);
  CHECK(x2 != "x");
  CHECK(taken.count(x2) == 1);
  CHECK(fresh_name("y", taken) == "y");
  CHECK(taken.count("y") == 1);
}

TEST_CASE("level kinds of the fixtures") {
  Automaton centric = fixtures::make_centric();
  CHECK(level_kind(centric, 0) == StateKind::existential);
  CHECK(level_kind(centric, 1) == StateKind::universal);
}
