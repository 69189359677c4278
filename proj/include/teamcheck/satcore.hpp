#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "teamcheck/model.hpp"

namespace teamcheck {

/// DIMACS-style literal: +v or -v for variable v >= 1.
using Literal = int;
using Clause = std::vector<Literal>;

inline int var_of(Literal l) { return l < 0 ? -l : l; }

class Cnf {
 public:
  Cnf() = default;
  explicit Cnf(int num_vars) : num_vars_(num_vars) {}

  int num_vars() const noexcept { return num_vars_; }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  std::size_t size() const noexcept { return clauses_.size(); }
  std::size_t literal_count() const;

  /// Raises the variable count; never lowers it.
  void reserve_vars(int n) { num_vars_ = std::max(num_vars_, n); }

  /// Repeated literals are dropped (first occurrence kept). A clause with a
  /// literal and its negation is not stored; returns false in that case.
  /// Throws PreconditionError on literal 0 or a variable above num_vars().
  bool add_clause(const Clause& c);

  friend bool operator==(const Cnf&, const Cnf&) = default;

 private:
  int num_vars_ = 0;
  std::vector<Clause> clauses_;
};

/// Propositional variable <-> (team label, tuple).
class VarMap {
 public:
  struct Entry {
    std::string label;
    Tuple tuple;
  };

  /// Returns the existing index if the pair is already mapped.
  int add(const std::string& label, const Tuple& tuple);
  std::optional<int> find(const std::string& label, const Tuple& tuple) const;
  const Entry& entry(int var) const { return entries_.at(static_cast<std::size_t>(var - 1)); }
  int size() const noexcept { return static_cast<int>(entries_.size()); }

 private:
  std::vector<Entry> entries_;
  std::map<std::pair<std::string, Tuple>, int> index_;
};

struct SatResult {
  bool sat = false;
  /// model[v] for v in 1..num_vars; model[0] unused. Empty when UNSAT.
  std::vector<bool> model;
};

bool is_dual_horn(const Cnf& f);
bool is_2cnf(const Cnf& f);
bool satisfies(const Cnf& f, const std::vector<bool>& model);

/// Maximum model by falsity propagation. Throws PreconditionError unless
/// is_dual_horn(f).
SatResult solve_dual_horn(const Cnf& f);
/// Implication graph and strongly connected components. Unit clauses are
/// allowed. Throws PreconditionError on a clause with more than 2 literals.
SatResult solve_2sat(const Cnf& f);
/// Unit propagation over two watched literals, chronological backtracking.
SatResult solve_dpll(const Cnf& f);

std::string emit_dimacs(const Cnf& f);
/// One "index label e1 e2 ..." line per variable, element names from A.
std::string emit_manifest(const VarMap& m, const Structure& A);
/// Throws FormatError on a malformed header, a literal out of range, or a
/// clause count that differs from the header.
Cnf parse_dimacs(std::string_view text);

struct RawDimacs {
  int num_vars = 0;
  std::vector<Clause> clauses;  // exactly as written
};
RawDimacs parse_dimacs_raw(std::string_view text);

}  // namespace teamcheck
