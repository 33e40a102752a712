#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dga/dga.hpp"

using json = dga::io::json;

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw dga::invalid_input("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw dga::invalid_input(origin + " is not valid json: " + e.what());
  }
}

constexpr const char* kFixturePrefix = "fixtures:";

bool is_fixture_path(const std::string& path) {
  return path.rfind(kFixturePrefix, 0) == 0;
}

dga::Automaton load_automaton(const std::string& path) {
  if (is_fixture_path(path))
    return dga::fixtures::automaton_fixture(path.substr(9)).automaton;
  json j = parse_json(slurp(path), path);
  // accept the wrapped form that `transform` and `mso compile` emit, so the
  // commands compose through pipes
  if (j.is_object() && j.contains("automaton")) j = j.at("automaton");
  return dga::io::automaton_from_json(j);
}

dga::LabeledGraph load_graph(const std::string& path) {
  if (is_fixture_path(path))
    return dga::fixtures::graph_fixture(path.substr(9)).graph;
  json j = parse_json(slurp(path), path);
  // accept an `empty` verdict so its witness can be piped straight back in
  if (j.is_object() && j.contains("witness")) j = j.at("witness");
  return dga::io::graph_from_json(j);
}

dga::mso::Formula load_formula(const std::string& arg) {
  if (arg == "-") return dga::mso::parse(slurp("-"));
  if (arg.rfind("file:", 0) == 0) return dga::mso::parse(slurp(arg.substr(5)));
  return dga::mso::parse(arg);
}

std::vector<std::string> split_list(const std::string& csv,
                                    const std::string& flag) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  for (const auto& s : out)
    if (s.empty())
      throw dga::invalid_input(flag + " needs a comma list of symbols");
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw dga::invalid_input("cannot write " + path);
  out << content;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

dga::Automaton apply_restriction(const dga::Automaton& a,
                                 const std::string& restrict_kind) {
  if (restrict_kind.empty()) return a;
  dga::Automaton guard_aut =
      restrict_kind == "conn" ? dga::fixtures::make_connected(a.sigma, a.gamma)
                              : dga::fixtures::make_undirected(a.sigma, a.gamma);
  return dga::intersection_of(a, guard_aut).automaton;
}

std::pair<dga::Alphabet, std::vector<int>> load_label_map(
    const std::string& path, const dga::Alphabet& sigma_old) {
  json j = parse_json(slurp(path), path);
  json mapping = j;
  std::vector<std::string> target;
  bool explicit_sigma = false;
  if (j.is_object() && j.contains("map")) {
    mapping = j.at("map");
    if (j.contains("sigma")) {
      target = j.at("sigma").get<std::vector<std::string>>();
      explicit_sigma = true;
    }
  }
  if (!mapping.is_object())
    throw dga::invalid_input("label map must be a json object of old: new");
  if (!explicit_sigma)
    for (const auto& [from, to] : mapping.items())
      target.push_back(to.get<std::string>());
  dga::Alphabet sigma_new(target);
  std::vector<int> new_label_of(sigma_old.size(), -1);
  for (const auto& [from, to] : mapping.items()) {
    int oi = sigma_old.index(from);
    if (oi < 0)
      throw dga::invalid_input("label map mentions unknown label " + from);
    int ni = sigma_new.index(to.get<std::string>());
    if (ni < 0)
      throw dga::invalid_input("label map target " + to.get<std::string>() +
                               " is missing from the target alphabet");
    new_label_of[oi] = ni;
  }
  for (int i = 0; i < sigma_old.size(); ++i)
    if (new_label_of[i] < 0)
      throw dga::invalid_input("label map misses source label " +
                               sigma_old.at(i));
  return {std::move(sigma_new), std::move(new_label_of)};
}

int cmd_validate(const std::string& aut_path) {
  dga::Automaton a = load_automaton(aut_path);
  json out;
  out["valid"] = true;
  out["siz"] = a.siz();
  out["len"] = a.len;
  out["classification"] = dga::io::classification_to_json(dga::classify(a));
  emit(out);
  return 0;
}

int cmd_accept(const std::string& aut_path, const std::string& graph_path,
               const std::string& run_dot, const std::string& game_dot,
               const std::string& restrict_kind) {
  dga::Automaton a = apply_restriction(load_automaton(aut_path), restrict_kind);
  dga::LabeledGraph g = load_graph(graph_path);
  bool accepted;
  json out;
  if (run_dot.empty() && game_dot.empty()) {
    accepted = dga::accepts(a, g);
  } else {
    dga::GameAnalysis ga = dga::analyze_game(a, g);
    accepted = ga.automaton_wins();
    out["game_positions"] = ga.positions.size();
    if (!game_dot.empty()) write_file(game_dot, dga::dot::game_to_dot(a, ga));
    if (!run_dot.empty()) {
      if (accepted) {
        write_file(run_dot, dga::dot::run_to_dot(a, dga::extract_run(ga)));
      } else {
        std::cerr << "no accepting run to export: the automaton rejects\n";
      }
    }
  }
  out["accepted"] = accepted;
  emit(out);
  return accepted ? 0 : 1;
}

int cmd_transform(const std::string& op, const std::string& aut_path,
                  const std::string& aut2_path, const std::string& map_path) {
  dga::Automaton a = load_automaton(aut_path);
  auto need_second = [&]() {
    if (aut2_path.empty())
      throw dga::invalid_input("transform " + op + " needs a second automaton");
    return load_automaton(aut2_path);
  };
  dga::TransformResult res;
  if (op == "dual") {
    res = dga::dual(a);
  } else if (op == "nonblocking") {
    res = dga::make_nonblocking(a);
  } else if (op == "trim") {
    res = dga::trim(a);
  } else if (op == "anf") {
    res = dga::to_anf(a);
  } else if (op == "union") {
    res = dga::union_of(a, need_second());
  } else if (op == "intersection") {
    res = dga::intersection_of(a, need_second());
  } else if (op == "project") {
    if (map_path.empty())
      throw dga::invalid_input("transform project needs --map");
    auto [sigma_new, new_label_of] = load_label_map(map_path, a.sigma);
    res = dga::project(a, sigma_new, new_label_of);
  } else if (op == "product-and") {
    res = dga::product_of(a, need_second(), dga::PairMode::both);
  } else if (op == "product-or") {
    res = dga::product_of(a, need_second(), dga::PairMode::either);
  } else if (op == "complement-ddga") {
    res = dga::complement_ddga(a);
  } else {
    throw dga::invalid_input("unknown transform op " + op);
  }
  json out;
  out["automaton"] = dga::io::automaton_to_json(res.automaton);
  out["report"] = dga::io::report_to_json(res.report);
  emit(out);
  return 0;
}

int cmd_mso_eval(const std::string& formula_arg, const std::string& graph_path) {
  dga::mso::Formula f = load_formula(formula_arg);
  dga::LabeledGraph g = load_graph(graph_path);
  bool value = dga::mso::evaluate(f, g);
  emit(json{{"value", value}});
  return value ? 0 : 1;
}

int cmd_mso_compile(const std::string& formula_arg, const std::string& sigma_csv,
                    const std::string& gamma_csv) {
  dga::mso::Formula f = load_formula(formula_arg);
  if (!dga::mso::free_vars(f).empty())
    throw dga::invalid_input("only closed sentences compile to automata");
  dga::Alphabet sigma(split_list(sigma_csv, "--sigma"));
  dga::Alphabet gamma(split_list(gamma_csv, "--gamma"));
  dga::mso::CompileResult res = dga::mso::compile(f, sigma, gamma);
  json steps = json::array();
  for (const auto& r : res.report.steps)
    steps.push_back(dga::io::report_to_json(r));
  json out;
  out["automaton"] = dga::io::automaton_to_json(res.automaton);
  out["report"] = json{{"steps", steps}};
  emit(out);
  return 0;
}

int cmd_mso_from_automaton(const std::string& aut_path) {
  dga::Automaton a = load_automaton(aut_path);
  dga::mso::Formula f = dga::mso::automaton_to_sentence(a);
  emit(json{{"formula", dga::mso::render(f)}});
  return 0;
}

int cmd_empty(const std::string& aut_path, int cap, bool undirected) {
  dga::Automaton a = load_automaton(aut_path);
  dga::EmptinessVerdict v = dga::ndga_emptiness(a, cap, undirected);
  emit(dga::io::verdict_to_json(v));
  return v.status == dga::EmptinessVerdict::Status::non_empty ? 0 : 1;
}

int cmd_enumerate(int n, const std::string& sigma_csv,
                  const std::string& gamma_csv) {
  dga::Alphabet sigma(split_list(sigma_csv, "--sigma"));
  dga::Alphabet gamma(split_list(gamma_csv, "--gamma"));
  dga::GraphEnumeration en(n, sigma, gamma);
  uint64_t count = 0;
  while (auto g = en.next()) {
    std::cout << dga::io::graph_to_json(*g).dump() << "\n";
    ++count;
  }
  std::cerr << count << " graphs up to isomorphism with at most "
            << n << " nodes\n";
  return 0;
}

int cmd_fixtures_list() {
  json automata = json::array();
  for (const auto& f : dga::fixtures::automaton_fixtures())
    automata.push_back(json{{"name", f.name},
                            {"siz", f.automaton.siz()},
                            {"len", f.automaton.len},
                            {"restriction", dga::fixtures::restriction_name(f.restriction)},
                            {"about", f.about}});
  json graphs = json::array();
  for (const auto& f : dga::fixtures::graph_fixtures())
    graphs.push_back(json{{"name", f.name},
                          {"nodes", f.graph.n},
                          {"about", f.about}});
  emit(json{{"automata", automata}, {"graphs", graphs}});
  return 0;
}

int cmd_fixtures_dump(const std::string& name) {
  std::string wanted = name == "A_occur" ? "A_occur_abc" : name;
  for (const auto& f : dga::fixtures::automaton_fixtures())
    if (f.name == wanted) {
      emit(dga::io::automaton_to_json(f.automaton));
      return 0;
    }
  for (const auto& f : dga::fixtures::graph_fixtures())
    if (f.name == wanted) {
      emit(dga::io::graph_to_json(f.graph));
      return 0;
    }
  throw dga::invalid_input("unknown fixture: " + name);
}

int cmd_equiv(const std::string& aut1_path, const std::string& aut2_path,
              int n) {
  dga::Automaton a1 = load_automaton(aut1_path);
  dga::Automaton a2 = load_automaton(aut2_path);
  dga::BoundedEquality eq = dga::bounded_language_equal(a1, a2, n);
  json out;
  out["equal"] = eq.equal;
  out["n_max"] = n;
  if (!eq.equal) {
    out["counterexample"] = dga::io::graph_to_json(*eq.counterexample);
    out["first_accepts"] = eq.first_accepts;
    out["second_accepts"] = eq.second_accepts;
  }
  emit(out);
  return eq.equal ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed graph automata toolkit"};
  app.require_subcommand(1);
  std::string aut_path, aut2_path, graph_path, formula_arg, name, op;
  std::string run_dot, game_dot, restrict_kind, map_path, sigma_csv, gamma_csv;
  int cap = 4, n = 3;
  bool undirected = false;

  CLI::App* validate = app.add_subcommand("validate", "check an automaton and classify it");
  validate->add_option("automaton", aut_path, "automaton json, fixtures:<name>, or -")->required();

  CLI::App* accept = app.add_subcommand("accept", "solve the acceptance game on one graph");
  accept->add_option("automaton", aut_path)->required();
  accept->add_option("graph", graph_path)->required();
  accept->add_option("--run-dot", run_dot, "write the accepting run as DOT");
  accept->add_option("--game-dot", game_dot, "write the full game as DOT");
  accept->add_option("--restrict", restrict_kind, "conn or undir")
      ->check(CLI::IsMember({"conn", "undir"}));

  CLI::App* transform = app.add_subcommand("transform", "apply a language operation");
  transform->add_option("op", op)->required()
      ->check(CLI::IsMember({"dual", "nonblocking", "trim", "anf", "union",
                             "intersection", "project", "product-and",
                             "product-or", "complement-ddga"}));
  transform->add_option("automaton", aut_path)->required();
  transform->add_option("automaton2", aut2_path, "second operand for binary ops");
  transform->add_option("--map", map_path, "label map json for project");

  CLI::App* mso = app.add_subcommand("mso", "logic commands");
  mso->require_subcommand(1);
  CLI::App* mso_eval = mso->add_subcommand("eval", "evaluate a sentence on a graph");
  mso_eval->add_option("formula", formula_arg, "formula text, file:<path>, or -")->required();
  mso_eval->add_option("graph", graph_path)->required();
  CLI::App* mso_compile = mso->add_subcommand("compile", "compile a sentence to an automaton");
  mso_compile->add_option("formula", formula_arg, "formula text, file:<path>, or -")->required();
  mso_compile->add_option("--sigma", sigma_csv, "comma list of node labels")->required();
  mso_compile->add_option("--gamma", gamma_csv, "comma list of edge relations")->required();
  CLI::App* mso_from = mso->add_subcommand("from-automaton", "translate an automaton to a sentence");
  mso_from->add_option("automaton", aut_path)->required();

  CLI::App* empty = app.add_subcommand("empty", "search for a small accepted graph");
  empty->add_option("automaton", aut_path)->required();
  empty->add_option("--cap", cap, "largest node count to try")->check(CLI::PositiveNumber);
  empty->add_flag("--undirected", undirected, "restrict the search to undirected graphs");

  CLI::App* enumerate = app.add_subcommand("enumerate", "list graphs up to isomorphism");
  enumerate->add_option("--n", n, "maximum node count")->required()->check(CLI::PositiveNumber);
  enumerate->add_option("--sigma", sigma_csv, "comma list of node labels")->required();
  enumerate->add_option("--gamma", gamma_csv, "comma list of edge relations")->required();

  CLI::App* fixtures_cmd = app.add_subcommand("fixtures", "built-in automata and graphs");
  fixtures_cmd->require_subcommand(1);
  CLI::App* fx_list = fixtures_cmd->add_subcommand("list", "name every fixture");
  CLI::App* fx_dump = fixtures_cmd->add_subcommand("dump", "print one fixture as json");
  fx_dump->add_option("name", name)->required();

  CLI::App* equiv = app.add_subcommand("equiv", "compare two languages on all small graphs");
  equiv->add_option("automaton1", aut_path)->required();
  equiv->add_option("automaton2", aut2_path)->required();
  equiv->add_option("--n", n, "maximum node count")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(validate)) return cmd_validate(aut_path);
    if (app.got_subcommand(accept))
      return cmd_accept(aut_path, graph_path, run_dot, game_dot, restrict_kind);
    if (app.got_subcommand(transform))
      return cmd_transform(op, aut_path, aut2_path, map_path);
    if (app.got_subcommand(mso)) {
      if (mso->got_subcommand(mso_eval))
        return cmd_mso_eval(formula_arg, graph_path);
      if (mso->got_subcommand(mso_compile))
        return cmd_mso_compile(formula_arg, sigma_csv, gamma_csv);
      if (mso->got_subcommand(mso_from)) return cmd_mso_from_automaton(aut_path);
    }
    if (app.got_subcommand(empty)) return cmd_empty(aut_path, cap, undirected);
    if (app.got_subcommand(enumerate))
      return cmd_enumerate(n, sigma_csv, gamma_csv);
    if (app.got_subcommand(fixtures_cmd)) {
      if (fixtures_cmd->got_subcommand(fx_list)) return cmd_fixtures_list();
      if (fixtures_cmd->got_subcommand(fx_dump)) return cmd_fixtures_dump(name);
    }
    if (app.got_subcommand(equiv)) return cmd_equiv(aut_path, aut2_path, n);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const dga::ValidationError& e) {
    json err;
    err["error"] = e.what();
    err["diagnostics"] = dga::io::diagnostics_to_json(e.diagnostics());
    std::cerr << err.dump(2) << "\n";
    return 3;
  } catch (const dga::Error& e) {
    std::cerr << json{{"error", e.what()}}.dump(2) << "\n";
    return e.kind() == dga::ErrorKind::resource_cap ? 4 : 3;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump(2) << "\n";
    return 3;
  }
}
