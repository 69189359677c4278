#pragma once

#include <chrono>
#include <cstdint>
#include <span>

#include "teamcheck/formula.hpp"
#include "teamcheck/model.hpp"

namespace teamcheck {

struct EvalBudget {
  std::size_t max_team_size = 4096;
  std::uint64_t max_branch = 50'000'000;
  std::chrono::milliseconds time_limit{30'000};
};

struct EvalStats {
  std::uint64_t search_nodes = 0;
  std::uint64_t memo_hits = 0;
  /// Rows materialized by direct evaluation (universal expansion).
  std::uint64_t expanded_rows = 0;
};

/// First-order truth of a literal under one assignment (`row` read against `vars`).
bool holds_fo(const Structure& A, const VarList& vars, std::span<const Elem> row,
              const Formula& literal);

/// Tarski truth of an atom-free formula (quantifiers allowed) under one assignment.
bool holds_classical(const Structure& A, const VarList& vars, std::span<const Elem> row,
                     const Formula& phi);

/// Dependence, independence or inclusion atom on the whole team, by direct
/// quantification over rows and row pairs.
bool check_atom(const Structure& A, const Team& X, const Formula& atom);

/// Exact lax team semantics by exhaustive search.
///
/// The search works with lower bounds: a disjunction assigns every row to
/// one disjunct and lets each side absorb further rows of the team; an
/// existential picks one witness value per row and lets the extended team
/// grow; independence and inclusion witnesses are branched over. Each of
/// these steps is complete for lax semantics, so the verdict matches
/// check_enumerate. Throws BudgetExceeded.
bool check_brute(const Structure& A, const Team& X, const Formula& phi,
                 const EvalBudget& budget = {}, EvalStats* stats = nullptr);

/// Literal transcription of the lax clauses: every cover Y ∪ Z = X and every
/// choice function X → P(A)∖{∅}. Only usable on tiny inputs.
bool check_enumerate(const Structure& A, const Team& X, const Formula& phi,
                     const EvalBudget& budget = {}, EvalStats* stats = nullptr);

/// ∀/∧ formulas: expand the universal quantifiers and check the conjuncts
/// directly. Throws FragmentError outside that shape. No search.
bool check_universal_conj(const Structure& A, const Team& X, const Formula& phi,
                          EvalStats* stats = nullptr);

/// Whether satisfaction on X agrees with satisfaction on all subteams of
/// at most k rows. phi must be quantifier-free.
bool is_k_coherent_on(const Structure& A, const Team& X, const Formula& phi, std::size_t k,
                      const EvalBudget& budget = {});

}  // namespace teamcheck
