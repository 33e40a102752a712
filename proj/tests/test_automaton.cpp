#include <catch2/catch_amalgamated.hpp>

#include "dga/dga.hpp"
#include "helpers.hpp"

using namespace dga;

namespace {

bool has_code(const std::vector<Diagnostic>& ds, const std::string& code) {
  for (const auto& d : ds)
    if (d.code == code) return true;
  return false;
}

Alphabet bl() { return Alphabet({"_"}); }

std::vector<Diagnostic> check_states(std::vector<State> st, std::vector<int> init,
                                     std::vector<Rule> rules,
                                     AcceptFamily fam = AcceptFamily::always()) {
  return Automaton::check(bl(), bl(), st, init, rules, fam);
}

}  // namespace

TEST_CASE("build derives levels and length") {
  Automaton a = fixtures::make_3color();
  CHECK(a.siz() == 6);
  CHECK(a.len == 2);
  CHECK(a.level[a.state_id("q_ini")] == 0);
  CHECK(a.level[a.state_id("q_red")] == 1);
  CHECK(a.level[a.state_id("q_yes")] == 2);
  CHECK(a.kind_of(a.state_id("q_ini")) == StateKind::existential);
  CHECK(a.is_permanent(a.state_id("q_no")));
  CHECK(a.level_states(0).size() == 1);
  CHECK(a.level_states(1).size() == 3);
  CHECK(a.permanent_states().size() == 2);
  CHECK(a.round_states(1).size() == 5);
  CHECK_FALSE(a.has_universal_states());
  CHECK(fixtures::make_not3color().has_universal_states());
}

TEST_CASE("validation reports each defect with its code") {
  State p{"q_p", StateKind::permanent};
  State e{"q_e", StateKind::existential};

  CHECK(has_code(check_states({{"", StateKind::permanent}}, {0}, {}),
                 "empty-state-name"));
  CHECK(has_code(check_states({p, p}, {0}, {}), "duplicate-state"));
  CHECK(has_code(check_states({e}, {0}, {{0, Guard::truth(), {0}}}),
                 "no-permanent-state"));
  CHECK(has_code(Automaton::check(bl(), bl(), {p}, {}, {},
                                  AcceptFamily::always()),
                 "init-incomplete"));
  CHECK(has_code(check_states({p}, {5}, {}), "init-unknown-state"));
  CHECK(has_code(check_states({e, p}, {0}, {{7, Guard::truth(), {1}}}),
                 "rule-unknown-state"));
  CHECK(has_code(check_states({e, p}, {0}, {{0, Guard::truth(), {9}}}),
                 "rule-unknown-state"));
  CHECK(has_code(check_states({e, p}, {0}, {{1, Guard::truth(), {1}}}),
                 "rule-from-permanent"));
  CHECK(has_code(check_states({e, p}, {0}, {{0, Guard::truth(), {}}}),
                 "rule-empty-successors"));
  CHECK(has_code(check_states({e, p}, {0}, {{0, Guard::member(0, 42), {1}}}),
                 "guard-unknown-state"));

  // q_b sits one step after q_a but is also an initial target
  State a{"q_a", StateKind::existential};
  State b{"q_b", StateKind::existential};
  CHECK(has_code(Automaton::check(Alphabet({"x", "y"}), bl(), {a, b, p}, {0, 1},
                                  {{0, Guard::truth(), {1}},
                                   {1, Guard::truth(), {2}}},
                                  AcceptFamily::always()),
                 "init-target-has-incoming"));

  // c reachable in one step from a and in two steps through b
  State c{"q_c", StateKind::existential};
  CHECK(has_code(check_states({a, b, c, p}, {0},
                              {{0, Guard::truth(), {1}},
                               {0, Guard::truth(), {2}},
                               {1, Guard::truth(), {2}},
                               {2, Guard::truth(), {3}}}),
                 "level-conflict"));

  CHECK(has_code(check_states({a, b, p}, {0},
                              {{0, Guard::truth(), {1}},
                               {1, Guard::truth(), {0}}}),
                 "level-cycle"));

  State u{"q_u", StateKind::universal};
  CHECK(has_code(Automaton::check(Alphabet({"x", "y"}), bl(), {a, u, p}, {0, 1},
                                  {{0, Guard::truth(), {2}},
                                   {1, Guard::truth(), {2}}},
                                  AcceptFamily::always()),
                 "mixed-kind-level"));

  CHECK(has_code(check_states({e, p}, {0}, {{0, Guard::truth(), {1}}},
                              AcceptFamily::explicit_list({{"q_e"}})),
                 "accepting-nonpermanent"));
}

TEST_CASE("build throws a ValidationError carrying the diagnostics") {
  try {
    Automaton::build(bl(), bl(), {{"q", StateKind::existential}}, {0}, {},
                     AcceptFamily::always());
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(!e.diagnostics().empty());
    CHECK(e.kind() == ErrorKind::invalid_input);
  }
}

TEST_CASE("local transitions follow guards and permanents loop") {
  Automaton a = fixtures::make_3color();
  int red = a.state_id("q_red");
  int yes = a.state_id("q_yes");
  int no = a.state_id("q_no");

  Bits none(a.siz());
  std::vector<Bits> quiet{none};
  Bits got_red(a.siz());
  got_red.set(red);
  std::vector<Bits> noisy{got_red};

  Bits out = a.local_successors(red, quiet);
  CHECK(out.test(yes));
  CHECK_FALSE(out.test(no));
  out = a.local_successors(red, noisy);
  CHECK(out.test(no));
  CHECK_FALSE(out.test(yes));
  out = a.local_successors(yes, noisy);
  CHECK(out.count() == 1);
  CHECK(out.test(yes));
}

TEST_CASE("accepting_contains consults the family on state names") {
  Automaton a = fixtures::make_3color();
  Bits s(a.siz());
  s.set(a.state_id("q_yes"));
  CHECK(a.accepting_contains(s));
  s.set(a.state_id("q_no"));
  CHECK_FALSE(a.accepting_contains(s));
}

TEST_CASE("determinism check distinguishes the fixtures") {
  CHECK(check_determinism(fixtures::make_occur_abc()) ==
        Determinism::deterministic);
  CHECK(check_determinism(fixtures::make_3color()) ==
        Determinism::nondeterministic);
}

TEST_CASE("state lookup by name") {
  Automaton a = fixtures::make_max2();
  CHECK(a.state_id("q_ini") >= 0);
  CHECK(a.state_id("nope") == -1);
  CHECK(a.name_of(a.state_id("q_m1")) == "q_m1");
}
