#include "teamcheck/compile.hpp"
#include "teamcheck/error.hpp"

namespace teamcheck {

namespace {

class Width2 {
 public:
  Width2(const Structure& A, const EvalBudget& budget) : A_(A), budget_(budget) {}

  bool check(const Formula& f, const Team& X) {
    if (X.empty()) return true;
    const std::size_t dw = disjunction_width(f);
    if (dw == 0) {
      for (const auto& s : X.rows())
        if (!holds_classical(A_, X.vars(), s, f)) return false;
      return true;
    }
    if (dw == 1) return small_subteams_hold(f, X);
    if (f.kind() == NodeKind::And) return check(f.lhs(), X) && check(f.rhs(), X);
    if (f.kind() != NodeKind::Or) throw FragmentError("unexpected node in width-2 formula");

    // A first-order disjunct absorbs every row it satisfies.
    for (int side = 0; side < 2; ++side) {
      const Formula& fo = side == 0 ? f.lhs() : f.rhs();
      const Formula& rest = side == 0 ? f.rhs() : f.lhs();
      if (disjunction_width(fo) != 0) continue;
      Team left(X.vars());
      for (const auto& s : X.rows())
        if (!holds_classical(A_, X.vars(), s, fo)) left.insert(s);
      return check(rest, left);
    }
    return split(f.lhs(), f.rhs(), X);
  }

 private:
  const Structure& A_;
  const EvalBudget& budget_;

  bool holds_on(const Formula& f, const Team& X, std::vector<std::size_t> idx) {
    std::vector<Tuple> rows;
    for (auto i : idx) rows.push_back(X.rows()[i]);
    return check_brute(A_, Team(X.vars(), std::move(rows)), f, budget_);
  }

  // Width-1 dependence formulas are downward closed and 2-coherent.
  bool small_subteams_hold(const Formula& f, const Team& X) {
    const std::size_t n = X.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!holds_on(f, X, {i})) return false;
      for (std::size_t j = i + 1; j < n; ++j)
        if (!holds_on(f, X, {i, j})) return false;
    }
    return true;
  }

  // Both sides have width 1: choose a side per row so that every side's
  // rows are pairwise acceptable.
  bool split(const Formula& psi, const Formula& theta, const Team& X) {
    const int n = static_cast<int>(X.size());
    Cnf f(2 * n);
    const Formula* sides[2] = {&psi, &theta};
    for (int side = 0; side < 2; ++side) {
      const int off = side * n;
      for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (!holds_on(*sides[side], X, {ui})) f.add_clause({-(off + i + 1)});
        for (int j = i + 1; j < n; ++j)
          if (!holds_on(*sides[side], X, {ui, static_cast<std::size_t>(j)}))
            f.add_clause({-(off + i + 1), -(off + j + 1)});
      }
    }
    for (int i = 0; i < n; ++i) f.add_clause({i + 1, n + i + 1});
    return solve_2sat(f).sat;
  }
};

}  // namespace

bool check_width2_D(const Structure& A, const Team& X, const Formula& phi,
                    const EvalBudget& budget) {
  if (!is_quantifier_free(phi) || !is_dependence_only(phi) || disjunction_width(phi) > 2)
    throw FragmentError("width-2 procedure needs a quantifier-free dependence formula of width at most 2");
  for (const auto& v : free_variables(phi))
    if (!X.find_column(v)) throw UnknownName("free variable '" + v + "' is not in the team domain");
  return Width2(A, budget).check(phi, X);
}

}  // namespace teamcheck
