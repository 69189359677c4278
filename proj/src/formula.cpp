#include "teamcheck/formula.hpp"

#include <algorithm>

#include "teamcheck/error.hpp"

namespace teamcheck {

namespace {

FormulaPtr make(NodeKind kind, std::string name, bool positive, std::vector<VarList> args,
                std::vector<FormulaPtr> children) {
  return std::make_shared<const Formula>(kind, std::move(name), positive, std::move(args),
                                         std::move(children));
}

void collect_free(const Formula& f, std::set<Var>& bound, std::set<Var>& out) {
  switch (f.kind()) {
    case NodeKind::And:
    case NodeKind::Or:
      collect_free(f.lhs(), bound, out);
      collect_free(f.rhs(), bound, out);
      return;
    case NodeKind::Exists:
    case NodeKind::Forall: {
      const bool was_bound = bound.count(f.bound()) > 0;
      bound.insert(f.bound());
      collect_free(f.body(), bound, out);
      if (!was_bound) bound.erase(f.bound());
      return;
    }
    default:
      for (std::size_t i = 0; i < f.tuple_count(); ++i)
        for (const auto& v : f.tuple(i))
          if (!bound.count(v)) out.insert(v);
  }
}

void collect_all(const Formula& f, std::set<Var>& out) {
  if (f.is_quantifier()) out.insert(f.bound());
  for (std::size_t i = 0; i < f.tuple_count(); ++i)
    for (const auto& v : f.tuple(i)) out.insert(v);
  for (std::size_t i = 0; i < f.child_count(); ++i) collect_all(*f.child(i), out);
}

template <typename Pred>
bool all_atoms(const Formula& f, Pred pred) {
  if (f.is_atom()) return pred(f);
  for (std::size_t i = 0; i < f.child_count(); ++i)
    if (!all_atoms(*f.child(i), pred)) return false;
  return true;
}

template <typename Pred>
bool any_node(const Formula& f, Pred pred) {
  if (pred(f)) return true;
  for (std::size_t i = 0; i < f.child_count(); ++i)
    if (any_node(*f.child(i), pred)) return true;
  return false;
}

void flatten_or(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind() == NodeKind::Or) {
    flatten_or(f->child(0), out);
    flatten_or(f->child(1), out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

bool operator==(const Formula& a, const Formula& b) {
  if (a.kind_ != b.kind_ || a.name_ != b.name_ || a.positive_ != b.positive_ ||
      a.args_ != b.args_ || a.children_.size() != b.children_.size())
    return false;
  for (std::size_t i = 0; i < a.children_.size(); ++i)
    if (!(*a.children_[i] == *b.children_[i])) return false;
  return true;
}

FormulaPtr rel(std::string name, VarList args, bool positive) {
  return make(NodeKind::RelLit, std::move(name), positive, {std::move(args)}, {});
}

FormulaPtr eq(Var lhs, Var rhs, bool positive) {
  return make(NodeKind::EqLit, {}, positive, {VarList{std::move(lhs), std::move(rhs)}}, {});
}

FormulaPtr dep(VarList determining, Var determined) {
  return make(NodeKind::Dep, {}, true, {std::move(determining), VarList{std::move(determined)}},
              {});
}

FormulaPtr indep(VarList left, VarList condition, VarList right) {
  return make(NodeKind::Indep, {}, true, {std::move(left), std::move(condition), std::move(right)},
              {});
}

FormulaPtr inc(VarList left, VarList right) {
  if (left.size() != right.size())
    throw ParseError(ParseError::Kind::ArityMismatch, 0,
                     "inclusion atom tuples differ in length (" + std::to_string(left.size()) +
                         " vs " + std::to_string(right.size()) + ")");
  return make(NodeKind::Inc, {}, true, {std::move(left), std::move(right)}, {});
}

FormulaPtr conj(FormulaPtr a, FormulaPtr b) {
  return make(NodeKind::And, {}, true, {}, {std::move(a), std::move(b)});
}

FormulaPtr disj(FormulaPtr a, FormulaPtr b) {
  return make(NodeKind::Or, {}, true, {}, {std::move(a), std::move(b)});
}

FormulaPtr exists(Var x, FormulaPtr body) {
  return make(NodeKind::Exists, std::move(x), true, {}, {std::move(body)});
}

FormulaPtr forall(Var x, FormulaPtr body) {
  return make(NodeKind::Forall, std::move(x), true, {}, {std::move(body)});
}

std::set<Var> free_variables(const Formula& phi) {
  std::set<Var> bound, out;
  collect_free(phi, bound, out);
  return out;
}

std::set<Var> all_variables(const Formula& phi) {
  std::set<Var> out;
  collect_all(phi, out);
  return out;
}

std::size_t disjunction_width(const Formula& phi) {
  switch (phi.kind()) {
    case NodeKind::RelLit:
    case NodeKind::EqLit:
      return 0;
    case NodeKind::Dep:
    case NodeKind::Indep:
    case NodeKind::Inc:
      return 1;
    case NodeKind::And:
      return std::max(disjunction_width(phi.lhs()), disjunction_width(phi.rhs()));
    case NodeKind::Or:
      return disjunction_width(phi.lhs()) + disjunction_width(phi.rhs());
    case NodeKind::Exists:
    case NodeKind::Forall:
      return disjunction_width(phi.body());
  }
  return 0;
}

bool is_first_order(const Formula& phi) {
  return all_atoms(phi, [](const Formula&) { return false; });
}

bool is_dependence_only(const Formula& phi) {
  return all_atoms(phi, [](const Formula& a) { return a.kind() == NodeKind::Dep; });
}

bool is_inclusion_only(const Formula& phi) {
  return all_atoms(phi, [](const Formula& a) { return a.kind() == NodeKind::Inc; });
}

bool is_quantifier_free(const Formula& phi) {
  return !any_node(phi, [](const Formula& f) { return f.is_quantifier(); });
}

std::size_t atom_count(const Formula& phi) {
  if (phi.is_atom()) return 1;
  std::size_t n = 0;
  for (std::size_t i = 0; i < phi.child_count(); ++i) n += atom_count(*phi.child(i));
  return n;
}

bool is_bc_indep(const Formula& phi) {
  if (atom_count(phi) != 1) return false;
  const Formula* cur = &phi;
  while (!cur->is_atom()) {
    if (cur->kind() != NodeKind::And && cur->kind() != NodeKind::Or) return false;
    cur = atom_count(cur->lhs()) == 1 ? &cur->lhs() : &cur->rhs();
  }
  return cur->kind() == NodeKind::Indep;
}

std::optional<std::pair<FormulaPtr, FormulaPtr>> split_bc_disjunction(const FormulaPtr& phi) {
  if (phi->kind() != NodeKind::Or) return std::nullopt;
  std::vector<FormulaPtr> leaves;
  flatten_or(phi, leaves);
  std::vector<FormulaPtr> sides, fo;
  for (const auto& leaf : leaves) {
    if (is_first_order(*leaf))
      fo.push_back(leaf);
    else if (is_bc_indep(*leaf))
      sides.push_back(leaf);
    else
      return std::nullopt;
  }
  if (sides.size() != 2) return std::nullopt;
  FormulaPtr first = sides[0];
  for (const auto& f : fo) first = disj(first, f);
  return std::make_pair(first, sides[1]);
}

FragmentTag classify(const FormulaPtr& phi) {
  const Formula& f = *phi;
  const bool has_forall = any_node(f, [](const Formula& n) { return n.kind() == NodeKind::Forall; });
  const bool has_exists = any_node(f, [](const Formula& n) { return n.kind() == NodeKind::Exists; });
  const bool has_or = any_node(f, [](const Formula& n) { return n.kind() == NodeKind::Or; });
  if (has_forall && !has_exists && !has_or) return FragmentTag::UniversalConj;

  if (is_quantifier_free(f) && is_dependence_only(f)) {
    const auto dw = disjunction_width(f);
    if (dw <= 1) return FragmentTag::WidthOneQF;
    if (dw == 2) return FragmentTag::WidthTwoQF_D;
  }
  if (split_bc_disjunction(phi)) return FragmentTag::BcSplitIndep;
  if (is_inclusion_only(f)) return FragmentTag::InclusionOnly;
  return FragmentTag::General;
}

std::string_view to_string(FragmentTag tag) {
  switch (tag) {
    case FragmentTag::UniversalConj: return "UniversalConj";
    case FragmentTag::WidthOneQF: return "WidthOneQF";
    case FragmentTag::WidthTwoQF_D: return "WidthTwoQF_D";
    case FragmentTag::BcSplitIndep: return "BcSplitIndep";
    case FragmentTag::InclusionOnly: return "InclusionOnly";
    case FragmentTag::General: return "General";
  }
  return "General";
}

}  // namespace teamcheck
