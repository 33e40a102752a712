// Round trip between the logic and the automata: compile a 3-colorability
// sentence, compare it with the handwritten automaton on all 3-node graphs,
// then translate a small automaton back into a sentence.

#include <iostream>

#include "dga/dga.hpp"

int main() {
  using namespace dga;
  mso::Formula three_color = mso::parse(mso::benchmark::three_color_text());
  Alphabet blank({"_"});
  mso::CompileResult compiled = mso::compile(three_color, blank, blank);
  std::cerr << "compiled 3-colorability: siz " << compiled.automaton.siz()
            << ", len " << compiled.automaton.len << ", "
            << compiled.report.steps.size() << " transform steps\n";

  const Automaton& handwritten = fixtures::automaton_fixture("A_3color").automaton;
  BoundedEquality eq = bounded_language_equal(compiled.automaton, handwritten, 3);
  std::cerr << "matches the handwritten automaton on all graphs up to 3 nodes: "
            << (eq.equal ? "yes" : "no") << "\n";

  const Automaton& max2 = fixtures::automaton_fixture("A_max2").automaton;
  std::cout << mso::render(mso::automaton_to_sentence(max2)) << "\n";
  return 0;
}
