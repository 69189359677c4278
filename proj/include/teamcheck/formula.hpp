#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace teamcheck {

using Var = std::string;
using VarList = std::vector<Var>;

enum class NodeKind { RelLit, EqLit, Dep, Indep, Inc, And, Or, Exists, Forall };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable formula node in negation normal form.
///
/// Argument tuples are stored in `args`; their meaning depends on the kind:
///   RelLit  args[0] = relation arguments
///   EqLit   args[0] = {lhs, rhs}
///   Dep     args[0] = determining tuple, args[1] = {determined variable}
///   Indep   args[0] ⊥_{args[1]} args[2]
///   Inc     args[0] ⊆ args[1]
class Formula {
 public:
  NodeKind kind() const noexcept { return kind_; }

  const std::string& relation() const noexcept { return name_; }
  bool positive() const noexcept { return positive_; }
  const VarList& tuple(std::size_t i) const { return args_.at(i); }
  std::size_t tuple_count() const noexcept { return args_.size(); }

  const Var& bound() const noexcept { return name_; }
  const Formula& lhs() const { return *children_.at(0); }
  const Formula& rhs() const { return *children_.at(1); }
  const Formula& body() const { return *children_.at(0); }
  const FormulaPtr& child(std::size_t i) const { return children_.at(i); }
  std::size_t child_count() const noexcept { return children_.size(); }

  bool is_literal() const noexcept {
    return kind_ == NodeKind::RelLit || kind_ == NodeKind::EqLit;
  }
  bool is_atom() const noexcept {
    return kind_ == NodeKind::Dep || kind_ == NodeKind::Indep || kind_ == NodeKind::Inc;
  }
  bool is_quantifier() const noexcept {
    return kind_ == NodeKind::Exists || kind_ == NodeKind::Forall;
  }

  friend bool operator==(const Formula& a, const Formula& b);

  // Construction goes through the factories below.
  Formula(NodeKind kind, std::string name, bool positive, std::vector<VarList> args,
          std::vector<FormulaPtr> children)
      : kind_(kind),
        name_(std::move(name)),
        positive_(positive),
        args_(std::move(args)),
        children_(std::move(children)) {}

 private:
  NodeKind kind_;
  std::string name_;  // relation name or bound variable
  bool positive_ = true;
  std::vector<VarList> args_;
  std::vector<FormulaPtr> children_;
};

FormulaPtr rel(std::string name, VarList args, bool positive = true);
FormulaPtr eq(Var lhs, Var rhs, bool positive = true);
FormulaPtr dep(VarList determining, Var determined);
FormulaPtr indep(VarList left, VarList condition, VarList right);
/// Throws ParseError(ArityMismatch) when the tuples differ in length.
FormulaPtr inc(VarList left, VarList right);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr exists(Var x, FormulaPtr body);
FormulaPtr forall(Var x, FormulaPtr body);

/// Concrete syntax:
///   phi   := disj
///   disj  := conj ("|" conj)*
///   conj  := quant ("&" quant)*
///   quant := ("E"|"A") var "." quant | atom | "(" phi ")"
///   atom  := "=(" vars ";" var ")" | "perp(" vars ";" vars ";" vars ")"
///          | "inc(" vars ";" vars ")" | ["!"] Rel "(" vars ")"
///          | var "=" var | var "!=" var
///
/// `perp(X;Y;Z)` is X independent of Z given Y. Negation is only
/// accepted in front of a relation literal.
FormulaPtr parse(std::string_view text);
std::string render(const Formula& phi);

std::set<Var> free_variables(const Formula& phi);
/// Every variable occurring anywhere in the formula, bound or free.
std::set<Var> all_variables(const Formula& phi);

std::size_t disjunction_width(const Formula& phi);

bool is_first_order(const Formula& phi);    // no atoms at all
bool is_dependence_only(const Formula& phi);  // atoms are all Dep (or none)
bool is_inclusion_only(const Formula& phi);   // atoms are all Inc (or none)
bool is_quantifier_free(const Formula& phi);
std::size_t atom_count(const Formula& phi);

/// Membership in the Boolean closure of one independence atom by
/// first-order formulas: exactly one atom, an Indep, reached from the root
/// through ∧/∨ only.
bool is_bc_indep(const Formula& phi);

/// If phi is a disjunction of two BC(⊥,FO) formulas (after flattening the
/// top ∨-chain and attaching atom-free disjuncts to the first side), the
/// two sides.
std::optional<std::pair<FormulaPtr, FormulaPtr>> split_bc_disjunction(const FormulaPtr& phi);

enum class FragmentTag {
  UniversalConj,
  WidthOneQF,
  WidthTwoQF_D,
  BcSplitIndep,
  InclusionOnly,
  General
};

/// Priority: UniversalConj > WidthOneQF > WidthTwoQF_D > BcSplitIndep >
/// InclusionOnly > General.
FragmentTag classify(const FormulaPtr& phi);
std::string_view to_string(FragmentTag tag);

}  // namespace teamcheck
