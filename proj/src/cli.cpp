#include "teamcheck/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "teamcheck/compile.hpp"
#include "teamcheck/error.hpp"
#include "teamcheck/gadgets.hpp"
#include "teamcheck/satcore.hpp"

namespace teamcheck::cli {

namespace {

constexpr std::pair<Strategy, std::string_view> kStrategyNames[] = {
    {Strategy::Auto, "auto"},     {Strategy::Brute, "brute"},       {Strategy::Universal, "universal"},
    {Strategy::Width2, "width2"}, {Strategy::TwoSat, "twosat"},     {Strategy::DualHorn, "dualhorn"},
    {Strategy::Cnf, "cnf"},
};

// Largest tuple universe |A|^r for which auto hands a General formula to the
// CNF backend; independence atoms make that encoding cubic in the universe.
constexpr double kCnfUniverse = 64;

std::size_t quantifier_depth(const Formula& f) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < f.child_count(); ++i) d = std::max(d, quantifier_depth(*f.child(i)));
  return d + (f.is_quantifier() ? 1 : 0);
}

void require_free_vars(const Team& X, const Formula& phi) {
  for (const auto& v : free_variables(phi))
    if (!X.find_column(v)) throw UnknownName("free variable '" + v + "' is not in the team domain");
}

}  // namespace

std::string_view to_string(Strategy s) {
  for (auto [k, name] : kStrategyNames)
    if (k == s) return name;
  return "auto";
}

std::optional<Strategy> strategy_from(std::string_view name) {
  for (auto [k, n] : kStrategyNames)
    if (n == name) return k;
  return std::nullopt;
}

Strategy auto_strategy(const Structure& A, const Team& X, const FormulaPtr& phi) {
  switch (classify(phi)) {
    case FragmentTag::UniversalConj: return Strategy::Universal;
    case FragmentTag::WidthOneQF:
    case FragmentTag::WidthTwoQF_D: return Strategy::Width2;
    case FragmentTag::BcSplitIndep: return Strategy::TwoSat;
    case FragmentTag::InclusionOnly: return Strategy::DualHorn;
    case FragmentTag::General: break;
  }
  const double universe = std::pow(static_cast<double>(A.size()),
                                   static_cast<double>(X.vars().size() + quantifier_depth(*phi)));
  return universe <= kCnfUniverse ? Strategy::Cnf : Strategy::Brute;
}

namespace {

CheckReport run_one(const Structure& A, const Team& X, const FormulaPtr& phi, Strategy s,
                    const EvalBudget& budget) {
  CheckReport r;
  r.strategy = s;
  r.team_size = X.size();
  if (X.size() > budget.max_team_size)
    throw BudgetExceeded("team of " + std::to_string(X.size()) + " rows exceeds the size budget");
  const auto t0 = std::chrono::steady_clock::now();
  auto solved = [&](const Cnf& f, SatResult res) {
    r.variables = static_cast<std::size_t>(f.num_vars());
    r.clauses = f.size();
    r.verdict = res.sat;
  };
  switch (s) {
    case Strategy::Brute: {
      EvalStats stats;
      r.verdict = check_brute(A, X, *phi, budget, &stats);
      r.search_nodes = stats.search_nodes;
      break;
    }
    case Strategy::Universal:
      r.verdict = check_universal_conj(A, X, *phi);
      break;
    case Strategy::Width2:
      r.verdict = check_width2_D(A, X, *phi, budget);
      break;
    case Strategy::TwoSat: {
      auto parts = split_bc_disjunction(phi);
      if (!parts) throw FragmentError("formula is not a disjunction of two BC(perp, FO) formulas");
      require_free_vars(X, *phi);
      auto c = compile_split_2sat(A, X, parts->first, parts->second);
      solved(c.cnf, solve_2sat(c.cnf));
      break;
    }
    case Strategy::DualHorn: {
      auto c = compile_dualhorn(A, X, *phi);
      solved(c.cnf, solve_dual_horn(c.cnf));
      break;
    }
    case Strategy::Cnf: {
      auto c = compile_cnf_general(A, X, *phi);
      solved(c.cnf, solve_dpll(c.cnf));
      break;
    }
    case Strategy::Auto:
      throw PreconditionError("auto must be resolved first");
  }
  r.solver_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

CheckReport run_check(const Structure& A, const Team& X, const FormulaPtr& phi, Strategy s,
                      const EvalBudget& budget) {
  if (s != Strategy::Auto) return run_one(A, X, phi, s, budget);
  const Strategy chosen = auto_strategy(A, X, phi);
  try {
    return run_one(A, X, phi, chosen, budget);
  } catch (const BudgetExceeded&) {
    if (chosen == Strategy::Brute) throw;
  }
  return run_one(A, X, phi, Strategy::Brute, budget);
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

// A formula argument is either the formula text or @path.
FormulaPtr load_formula(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return parse(read_file(arg.substr(1)));
  return parse(arg);
}

struct Globals {
  std::size_t budget_team = EvalBudget{}.max_team_size;
  long budget_time_ms = static_cast<long>(EvalBudget{}.time_limit.count());
  std::string report;

  EvalBudget budget() const {
    EvalBudget b;
    b.max_team_size = budget_team;
    b.time_limit = std::chrono::milliseconds(budget_time_ms);
    return b;
  }
};

class Reporter {
 public:
  Reporter(const std::string& path, std::ostream& out) : path_(path), out_(out) {}

  void emit(const nlohmann::json& j) const {
    if (path_.empty()) return;
    if (path_ == "-") {
      out_ << j.dump() << '\n';
      return;
    }
    std::ofstream f(path_, std::ios::app);
    if (!f) throw Error("cannot write report '" + path_ + "'");
    f << j.dump() << '\n';
  }

 private:
  std::string path_;
  std::ostream& out_;
};

nlohmann::json report_json(const CheckReport& r) {
  return {{"verdict", r.verdict},          {"strategy", std::string(to_string(r.strategy))},
          {"team_size", r.team_size},      {"variables", r.variables},
          {"clauses", r.clauses},          {"solver_ms", r.solver_ms},
          {"search_nodes", r.search_nodes}};
}

const char* verdict_line(bool v) { return v ? "SAT-TEAM" : "NOT-SAT-TEAM"; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model checking for team semantics", "teamcheck"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--budget-team", g.budget_team, "Largest team (rows) the search may build");
  app.add_option("--budget-time", g.budget_time_ms, "Time limit for search, in milliseconds");
  app.add_option("--report", g.report, "Append JSON-lines reports to this file ('-' for stdout)");

  std::function<int()> action;

  // check
  std::string formula_arg, instance_path, strategy_name = "auto";
  auto* check = app.add_subcommand("check", "Decide whether the team satisfies the formula");
  check->add_option("formula", formula_arg, "Formula text, or @file")->required();
  check->add_option("instance", instance_path, "Instance file")->required();
  check->add_option("-s,--strategy", strategy_name, "auto|brute|universal|width2|twosat|dualhorn|cnf");
  check->callback([&] {
    action = [&] {
      const auto strategy = strategy_from(strategy_name);
      if (!strategy) throw CLI::ValidationError("--strategy", "unknown strategy '" + strategy_name + "'");
      const auto phi = load_formula(formula_arg);
      const auto inst = parse_instance(read_file(instance_path));
      const auto r = run_check(inst.structure, inst.team, phi, *strategy, g.budget());
      out << verdict_line(r.verdict) << '\n';
      auto j = report_json(r);
      j["command"] = "check";
      j["fragment"] = std::string(teamcheck::to_string(classify(phi)));
      Reporter(g.report, out).emit(j);
      return kOk;
    };
  });

  // compile
  std::string target = "dualhorn", cnf_out, map_out;
  bool prune = false;
  auto* compile = app.add_subcommand("compile", "Compile a model-checking instance to CNF");
  compile->add_option("formula", formula_arg, "Formula text, or @file")->required();
  compile->add_option("instance", instance_path, "Instance file")->required();
  compile->add_option("-t,--target", target, "dualhorn|cnf|twosat");
  compile->add_option("-o,--output", cnf_out, "DIMACS output (default stdout)");
  compile->add_option("--map", map_out, "Variable manifest output");
  compile->add_flag("--prune", prune, "Drop variables unreachable from the seeds (dualhorn)");
  compile->callback([&] {
    action = [&] {
      const auto phi = load_formula(formula_arg);
      const auto inst = parse_instance(read_file(instance_path));
      const auto& A = inst.structure;
      const auto& X = inst.team;
      Compiled c;
      if (target == "dualhorn") {
        CompileOptions opts;
        opts.prune = prune;
        c = compile_dualhorn(A, X, *phi, opts);
      } else if (target == "cnf") {
        c = compile_cnf_general(A, X, *phi);
      } else if (target == "twosat") {
        auto parts = split_bc_disjunction(phi);
        if (!parts) throw FragmentError("formula is not a disjunction of two BC(perp, FO) formulas");
        require_free_vars(X, *phi);
        c = compile_split_2sat(A, X, parts->first, parts->second);
      } else {
        throw CLI::ValidationError("--target", "unknown target '" + target + "'");
      }
      const std::string dimacs = emit_dimacs(c.cnf);
      if (cnf_out.empty())
        out << dimacs;
      else
        write_file(cnf_out, dimacs);
      if (!map_out.empty()) write_file(map_out, emit_manifest(c.vars, A));
      if (!cnf_out.empty()) {
        out << "variables " << c.cnf.num_vars() << '\n' << "clauses " << c.cnf.size() << '\n';
      }
      Reporter(g.report, out)
          .emit({{"command", "compile"},
                 {"target", target},
                 {"variables", c.cnf.num_vars()},
                 {"clauses", c.cnf.size()}});
      return kOk;
    };
  });

  // width / classify
  auto* width = app.add_subcommand("width", "Print the disjunction width");
  width->add_option("formula", formula_arg, "Formula text, or @file")->required();
  width->callback([&] {
    action = [&] {
      out << disjunction_width(*load_formula(formula_arg)) << '\n';
      return kOk;
    };
  });
  auto* cls = app.add_subcommand("classify", "Print the fragment the formula belongs to");
  cls->add_option("formula", formula_arg, "Formula text, or @file")->required();
  cls->callback([&] {
    action = [&] {
      out << teamcheck::to_string(classify(load_formula(formula_arg))) << '\n';
      return kOk;
    };
  });

  // gadget
  std::string kind, source, inst_out, formula_out;
  std::size_t colors = 0;
  auto* gadget = app.add_subcommand("gadget", "Generate a hardness-reduction instance");
  gadget->add_option("kind", kind, "3sat|cliquecover|coloring")->required();
  gadget->add_option("source", source, "3-CNF (DIMACS) or graph file")->required();
  gadget->add_option("-o,--output", inst_out, "Instance output (default stdout)");
  gadget->add_option("-f,--formula", formula_out, "Formula output (default: a comment line on stdout)");
  gadget->add_option("-n,--colors", colors, "Number of colours (default: sqrt of the vertex count)");
  gadget->callback([&] {
    action = [&] {
      const std::string text = read_file(source);
      std::optional<GadgetInstance> gi;
      if (kind == "3sat") {
        gi.emplace(gadget_3sat(parse_cnf3(text)));
      } else if (kind == "cliquecover") {
        gi.emplace(gadget_clique_cover(parse_graph(text)));
      } else if (kind == "coloring") {
        const Graph graph = parse_graph(text);
        std::size_t n = colors;
        if (n == 0)
          while ((n + 1) * (n + 1) <= graph.num_vertices) ++n;
        gi.emplace(gadget_coloring(graph, n));
      } else {
        throw CLI::ValidationError("kind", "unknown gadget '" + kind + "'");
      }
      const std::string formula_text = render(*gi->formula);
      if (formula_out.empty())
        out << "# formula: " << formula_text << '\n';
      else
        write_file(formula_out, formula_text + '\n');
      const std::string instance = render_instance(gi->structure, gi->team);
      if (inst_out.empty())
        out << instance;
      else
        write_file(inst_out, instance);
      Reporter(g.report, out)
          .emit({{"command", "gadget"},
                 {"generator", gi->generator},
                 {"source", gi->source},
                 {"rows", gi->team.size()}});
      return kOk;
    };
  });

  // solve
  std::string dimacs_path, engine = "auto";
  bool print_model = false;
  auto* solve = app.add_subcommand("solve", "Solve a DIMACS CNF file");
  solve->add_option("dimacs", dimacs_path, "DIMACS file")->required();
  solve->add_option("-e,--engine", engine, "dualhorn|twosat|dpll|auto");
  solve->add_flag("-m,--model", print_model, "Print the model as a 'v ... 0' line");
  solve->callback([&] {
    action = [&] {
      const Cnf f = parse_dimacs(read_file(dimacs_path));
      std::string used = engine;
      if (engine == "auto") used = is_dual_horn(f) ? "dualhorn" : is_2cnf(f) ? "twosat" : "dpll";
      SatResult res;
      try {
        if (used == "dualhorn")
          res = solve_dual_horn(f);
        else if (used == "twosat")
          res = solve_2sat(f);
        else if (used == "dpll")
          res = solve_dpll(f);
        else
          throw CLI::ValidationError("--engine", "unknown engine '" + engine + "'");
      } catch (const PreconditionError& e) {
        throw FragmentError(e.what());
      }
      out << (res.sat ? "SAT" : "UNSAT") << '\n';
      if (res.sat && print_model) {
        out << 'v';
        for (int v = 1; v <= f.num_vars(); ++v) out << ' ' << (res.model[v] ? v : -v);
        out << " 0\n";
      }
      Reporter(g.report, out)
          .emit({{"command", "solve"}, {"engine", used}, {"sat", res.sat}, {"clauses", f.size()}});
      return kOk;
    };
  });

  // selftest
  auto* selftest = app.add_subcommand("selftest", "Run every applicable strategy and compare verdicts");
  selftest->add_option("formula", formula_arg, "Formula text, or @file")->required();
  selftest->add_option("instance", instance_path, "Instance file")->required();
  selftest->callback([&] {
    action = [&] {
      const auto phi = load_formula(formula_arg);
      const auto inst = parse_instance(read_file(instance_path));
      std::optional<bool> seen;
      bool disagree = false;
      for (auto [s, name] : kStrategyNames) {
        if (s == Strategy::Auto) continue;
        std::string result;
        try {
          const auto r = run_check(inst.structure, inst.team, phi, s, g.budget());
          result = verdict_line(r.verdict);
          if (seen && *seen != r.verdict) disagree = true;
          seen = r.verdict;
          auto j = report_json(r);
          j["command"] = "selftest";
          Reporter(g.report, out).emit(j);
        } catch (const FragmentError&) {
          result = "not-applicable";
        } catch (const BudgetExceeded&) {
          result = "budget-exceeded";
        }
        out << name << ' ' << result << '\n';
      }
      out << (disagree ? "DISAGREE" : "agree") << '\n';
      return disagree ? kDisagree : kOk;
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kParse;
  }
  try {
    return action ? action() : kOk;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kParse;
  } catch (const ParseError& e) {
    err << "parse error " << e.what() << '\n';
    return kParse;
  } catch (const FormatError& e) {
    err << "format error, " << e.what() << '\n';
    return kParse;
  } catch (const FragmentError& e) {
    err << "fragment mismatch: " << e.what() << '\n';
    return kFragment;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kOther;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace teamcheck::cli
