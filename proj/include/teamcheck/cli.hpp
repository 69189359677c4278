#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teamcheck/eval.hpp"
#include "teamcheck/formula.hpp"
#include "teamcheck/model.hpp"

namespace teamcheck::cli {

enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kParse = 2,
  kFragment = 3,
  kBudget = 4,
  kDisagree = 5,
};

enum class Strategy { Auto, Brute, Universal, Width2, TwoSat, DualHorn, Cnf };

std::string_view to_string(Strategy s);
std::optional<Strategy> strategy_from(std::string_view name);

struct CheckReport {
  bool verdict = false;
  Strategy strategy = Strategy::Brute;
  std::size_t team_size = 0;
  std::size_t variables = 0;  // propositional variables, 0 for non-SAT strategies
  std::size_t clauses = 0;
  double solver_ms = 0;
  std::uint64_t search_nodes = 0;
};

/// Strategy picked by auto for this input, before any budget fallback.
Strategy auto_strategy(const Structure& A, const Team& X, const FormulaPtr& phi);

/// Runs one strategy. Auto follows classify and falls back to brute force
/// when the chosen pipeline exceeds its budget. Throws FragmentError when
/// an explicit strategy does not apply.
CheckReport run_check(const Structure& A, const Team& X, const FormulaPtr& phi, Strategy s,
                      const EvalBudget& budget = {});

/// Entry point of the teamcheck tool; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace teamcheck::cli
