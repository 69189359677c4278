#pragma once

#include <cstdint>
#include <vector>

#include "teamcheck/eval.hpp"
#include "teamcheck/formula.hpp"
#include "teamcheck/model.hpp"
#include "teamcheck/satcore.hpp"

namespace teamcheck {

struct Compiled {
  Cnf cnf;
  VarMap vars;
};

struct CompileOptions {
  /// Keep only variables reachable from the positive seed units along
  /// clause implications; verdict-preserving.
  bool prune = false;
  /// Upper bound on the number of propositional variables.
  std::uint64_t max_vars = 20'000'000;
};

/// Dual-Horn encoding of FO(⊆) model checking. One variable L[s] per team
/// label L and tuple s ∈ A^r. The root label is "X"; subformula labels are
/// "T1", "T2", ... in creation order. Quantifiers always append a column
/// (shadowed names resolve to the last one). Throws FragmentError on
/// dependence or independence atoms, UnknownName on a free variable outside
/// the team, BudgetExceeded when the universe exceeds max_vars.
Compiled compile_dualhorn(const Structure& A, const Team& X, const Formula& phi,
                          const CompileOptions& opts = {});

/// compile_dualhorn plus binary clauses for dependence atoms and witness
/// clauses for independence atoms. General CNF.
Compiled compile_cnf_general(const Structure& A, const Team& X, const Formula& phi,
                             const CompileOptions& opts = {});

/// Exact number of clauses compile_dualhorn emits without pruning, computed
/// from the formula shape alone (team contents do not matter).
std::uint64_t dualhorn_clause_count(const Structure& A, const VarList& team_vars,
                                    const Formula& phi);

bool check_dualhorn(const Structure& A, const Team& X, const Formula& phi,
                    const CompileOptions& opts = {});
bool check_cnf_general(const Structure& A, const Team& X, const Formula& phi,
                       const CompileOptions& opts = {});

/// ((((atom ∧ φ1) ∨ ψ1) ∧ φ2) ∨ ψ2) ... ∨ ψk. A null φi stands for true,
/// a null ψi for false.
struct NormalizedBc {
  FormulaPtr atom;
  std::vector<FormulaPtr> phis;
  std::vector<FormulaPtr> psis;

  std::size_t depth() const noexcept { return phis.size(); }
  FormulaPtr rebuild() const;
};

/// Throws FragmentError if phi is not the Boolean closure of a single
/// independence atom under first-order formulas.
NormalizedBc normalize_bc(const FormulaPtr& phi);

enum class AdmissibleKind {
  ByAtomPart,  // must go to the atom subteam
  ByFoPart,    // must be covered by a first-order disjunct
  Both,        // either works
  Neither      // cannot be in this side at all
};

AdmissibleKind per_assignment_admissible(const Structure& A, const VarList& vars,
                                         const Tuple& s, const NormalizedBc& nbc);

struct SplitOptions {
  /// Unit clauses ¬Y[s] for rows that are Neither for the side.
  bool unit_clauses = true;
  /// Require the independence witness to satisfy every φi. With false, any
  /// row of X is accepted as witness.
  bool witness_in_cplus = true;
};

/// Witness for the atom x ⊥_z y: some s3 in X with s3(xz) = s1(xz) and
/// s3(y) = s2(y) (and s3 ∈ C+ under witness_in_cplus).
std::optional<Tuple> witness_of(const Structure& A, const Team& X, const Tuple& s1,
                                const Tuple& s2, const NormalizedBc& nbc,
                                const SplitOptions& opts = {});

/// True unless both rows are forced into the atom subteam, agree on the
/// condition tuple, and have no witness.
bool compatible(const Structure& A, const Team& X, const Tuple& s1, const Tuple& s2,
                const NormalizedBc& nbc, const SplitOptions& opts = {});

/// Variables Y[s] (1..n) and Z[s] (n+1..2n) for the rows of X; pair clauses
/// for incompatible pairs, cover clauses Y[s] ∨ Z[s], and unit clauses for
/// inadmissible rows.
Compiled compile_split_2sat(const Structure& A, const Team& X, const FormulaPtr& phi1,
                            const FormulaPtr& phi2, const SplitOptions& opts = {});

/// Splits phi with split_bc_disjunction, compiles and runs solve_2sat.
/// Throws FragmentError if phi does not split.
bool check_split(const Structure& A, const Team& X, const FormulaPtr& phi,
                 const SplitOptions& opts = {});

/// Quantifier-free dependence formulas of disjunction width ≤ 2. Throws
/// FragmentError otherwise.
bool check_width2_D(const Structure& A, const Team& X, const Formula& phi,
                    const EvalBudget& budget = {});

}  // namespace teamcheck
