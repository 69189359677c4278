#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "teamcheck/formula.hpp"

namespace teamcheck {

/// Domain elements are indices into the structure's domain list; the list
/// order is the canonical order used everywhere.
using Elem = std::uint32_t;
using Tuple = std::vector<Elem>;

struct Relation {
  std::size_t arity = 0;
  std::set<Tuple> tuples;

  bool contains(std::span<const Elem> t) const {
    return tuples.count(Tuple(t.begin(), t.end())) > 0;
  }
};

class Structure {
 public:
  explicit Structure(std::vector<std::string> domain);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(Elem e) const { return names_.at(e); }
  std::optional<Elem> find(std::string_view name) const;
  /// Throws UnknownName.
  Elem elem(std::string_view name) const;

  /// Throws PreconditionError on a duplicate name, wrong arity or foreign element.
  void add_relation(const std::string& name, std::size_t arity, std::set<Tuple> tuples);
  const Relation* relation(std::string_view name) const;
  const std::map<std::string, Relation, std::less<>>& relations() const noexcept {
    return relations_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Elem> index_;
  std::map<std::string, Relation, std::less<>> relations_;
};

/// A duplicate-free set of assignments over an ordered variable list. Rows
/// are kept sorted so iteration order is canonical.
class Team {
 public:
  Team() = default;
  explicit Team(VarList vars) : vars_(std::move(vars)) {}
  Team(VarList vars, std::vector<Tuple> rows);

  const VarList& vars() const noexcept { return vars_; }
  const std::vector<Tuple>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  /// Returns false if the row was already present.
  bool insert(Tuple row);
  bool contains(const Tuple& row) const;

  /// Column of `v`; the last occurrence wins when a name is repeated.
  std::optional<std::size_t> find_column(std::string_view v) const;
  /// Throws UnknownName.
  std::size_t column(std::string_view v) const;
  std::vector<std::size_t> columns(const VarList& vs) const;

  friend bool operator==(const Team&, const Team&) = default;

 private:
  VarList vars_;
  std::vector<Tuple> rows_;
};

Tuple project(std::span<const Elem> row, std::span<const std::size_t> cols);

/// X restricted to W; keeps X's column order. Throws UnknownName.
Team team_restrict(const Team& X, const std::set<Var>& W);
std::set<Tuple> team_relation(const Team& X, const VarList& xs);
/// X(A/x). An existing column named x is overwritten.
Team team_extend_forall(const Team& X, const Structure& A, const Var& x);
/// X(F/x). Throws PreconditionError if F misses a row or maps one to ∅.
Team team_extend_choice(const Team& X, const std::map<Tuple, std::set<Elem>>& F, const Var& x);

struct Instance {
  Structure structure;
  Team team;
};

/// Line-oriented instance file:
///   domain e1 ... ek
///   rel NAME ARITY      (tuple lines until a blank line)
///   team x1 ... xn      (row lines until EOF)
/// `#` starts a comment. A zero-arity tuple or row is written as `-`.
Instance parse_instance(std::string_view text);
std::string render_instance(const Structure& A, const Team& X);

}  // namespace teamcheck
