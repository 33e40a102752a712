// Solves the acceptance game of the centric-language automaton on two small
// graphs and prints the full game of the accepted one as DOT.

#include <iostream>

#include "dga/dga.hpp"

int main() {
  using namespace dga;
  const Automaton& a = fixtures::automaton_fixture("A_centric").automaton;
  LabeledGraph in_lang = fixtures::centric_in();
  LabeledGraph out_lang = fixtures::centric_out();

  GameAnalysis ga = analyze_game(a, in_lang);
  std::cerr << "centric_in: " << (ga.automaton_wins() ? "accepted" : "rejected")
            << " across " << ga.positions.size() << " positions\n";
  std::cerr << "centric_out: "
            << (accepts(a, out_lang) ? "accepted" : "rejected") << "\n";

  std::cout << dot::game_to_dot(a, ga);
  return 0;
}
