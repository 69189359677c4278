#include "teamcheck/eval.hpp"

#include <map>

#include "teamcheck/error.hpp"

namespace teamcheck {

namespace {

std::vector<std::size_t> columns_of(const VarList& vars, const VarList& names) {
  std::vector<std::size_t> out;
  out.reserve(names.size());
  for (const auto& n : names) {
    std::size_t i = vars.size();
    while (i-- > 0)
      if (vars[i] == n) break;
    if (i == static_cast<std::size_t>(-1))
      throw UnknownName("variable '" + n + "' is not in the team domain");
    out.push_back(i);
  }
  return out;
}

class Ticker {
 public:
  Ticker(const EvalBudget& b, EvalStats* s)
      : budget_(b), stats_(s), deadline_(std::chrono::steady_clock::now() + b.time_limit) {}

  void tick() {
    ++nodes_;
    if (stats_) ++stats_->search_nodes;
    if (nodes_ > budget_.max_branch) throw BudgetExceeded("branch budget exhausted");
    if ((nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_)
      throw BudgetExceeded("time budget exhausted");
  }

  void check_team(std::size_t n) const {
    if (n > budget_.max_team_size)
      throw BudgetExceeded("team of " + std::to_string(n) + " rows exceeds the size budget");
  }

 private:
  const EvalBudget& budget_;
  EvalStats* stats_;
  std::chrono::steady_clock::time_point deadline_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

bool holds_fo(const Structure& A, const VarList& vars, std::span<const Elem> row,
              const Formula& literal) {
  switch (literal.kind()) {
    case NodeKind::EqLit: {
      auto c = columns_of(vars, literal.tuple(0));
      return (row[c[0]] == row[c[1]]) == literal.positive();
    }
    case NodeKind::RelLit: {
      const Relation* r = A.relation(literal.relation());
      if (!r) throw UnknownName("relation '" + literal.relation() + "' is not in the structure");
      const auto& args = literal.tuple(0);
      if (r->arity != args.size())
        throw PreconditionError("relation '" + literal.relation() + "' has arity " +
                                std::to_string(r->arity));
      auto c = columns_of(vars, args);
      return r->contains(project(row, c)) == literal.positive();
    }
    default:
      throw PreconditionError("holds_fo expects a first-order literal");
  }
}

namespace {

bool classical_rec(const Structure& A, VarList& vars, Tuple& row, const Formula& f) {
  switch (f.kind()) {
    case NodeKind::RelLit:
    case NodeKind::EqLit:
      return holds_fo(A, vars, row, f);
    case NodeKind::And:
      return classical_rec(A, vars, row, f.lhs()) && classical_rec(A, vars, row, f.rhs());
    case NodeKind::Or:
      return classical_rec(A, vars, row, f.lhs()) || classical_rec(A, vars, row, f.rhs());
    case NodeKind::Exists:
    case NodeKind::Forall: {
      // Shadowing is handled by appending: lookups take the last occurrence.
      vars.push_back(f.bound());
      row.push_back(0);
      const bool want = f.kind() == NodeKind::Exists;
      bool result = !want;
      for (Elem m = 0; m < A.size(); ++m) {
        row.back() = m;
        if (classical_rec(A, vars, row, f.body()) == want) {
          result = want;
          break;
        }
      }
      vars.pop_back();
      row.pop_back();
      return result;
    }
    default:
      throw PreconditionError("holds_classical expects an atom-free formula");
  }
}

}  // namespace

bool holds_classical(const Structure& A, const VarList& vars, std::span<const Elem> row,
                     const Formula& phi) {
  VarList v = vars;
  Tuple r(row.begin(), row.end());
  return classical_rec(A, v, r, phi);
}

bool check_atom(const Structure&, const Team& X, const Formula& atom) {
  switch (atom.kind()) {
    case NodeKind::Dep: {
      const auto xs = X.columns(atom.tuple(0));
      const auto y = X.column(atom.tuple(1)[0]);
      std::map<Tuple, Elem> seen;
      for (const auto& s : X.rows()) {
        auto [it, fresh] = seen.emplace(project(s, xs), s[y]);
        if (!fresh && it->second != s[y]) return false;
      }
      return true;
    }
    case NodeKind::Indep: {
      const auto xs = X.columns(atom.tuple(0));
      const auto ys = X.columns(atom.tuple(1));
      const auto zs = X.columns(atom.tuple(2));
      std::vector<std::size_t> all = xs;
      all.insert(all.end(), ys.begin(), ys.end());
      all.insert(all.end(), zs.begin(), zs.end());
      std::set<Tuple> present;
      for (const auto& s : X.rows()) present.insert(project(s, all));
      for (const auto& s : X.rows()) {
        for (const auto& t : X.rows()) {
          if (project(s, ys) != project(t, ys)) continue;
          Tuple want = project(s, xs);
          for (auto c : ys) want.push_back(s[c]);
          for (auto c : zs) want.push_back(t[c]);
          if (!present.count(want)) return false;
        }
      }
      return true;
    }
    case NodeKind::Inc: {
      const auto xs = X.columns(atom.tuple(0));
      const auto ys = X.columns(atom.tuple(1));
      std::set<Tuple> targets;
      for (const auto& s : X.rows()) targets.insert(project(s, ys));
      for (const auto& s : X.rows())
        if (!targets.count(project(s, xs))) return false;
      return true;
    }
    default:
      throw PreconditionError("check_atom expects a dependence, independence or inclusion atom");
  }
}

namespace {

class Enumerator {
 public:
  Enumerator(const Structure& A, const EvalBudget& b, EvalStats* s) : A_(A), ticker_(b, s) {}

  bool eval(const Formula& f, const Team& X) {
    ticker_.tick();
    ticker_.check_team(X.size());
    if (X.empty()) return true;
    switch (f.kind()) {
      case NodeKind::RelLit:
      case NodeKind::EqLit:
        for (const auto& s : X.rows())
          if (!holds_fo(A_, X.vars(), s, f)) return false;
        return true;
      case NodeKind::Dep:
      case NodeKind::Indep:
      case NodeKind::Inc:
        return check_atom(A_, X, f);
      case NodeKind::And:
        return eval(f.lhs(), X) && eval(f.rhs(), X);
      case NodeKind::Forall:
        return eval(f.body(), team_extend_forall(X, A_, f.bound()));
      case NodeKind::Or:
        return eval_or(f, X);
      case NodeKind::Exists:
        return eval_exists(f, X);
    }
    return false;
  }

 private:
  const Structure& A_;
  Ticker ticker_;
  std::map<std::pair<const Formula*, std::vector<Tuple>>, bool> memo_;

  bool cached(const Formula& f, const Team& T) {
    auto key = std::make_pair(&f, T.rows());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const bool v = eval(f, T);
    memo_.emplace(std::move(key), v);
    return v;
  }

  // Each row goes to the left part, the right part, or both.
  bool eval_or(const Formula& f, const Team& X) {
    const std::size_t n = X.size();
    std::vector<int> code(n, 0);
    while (true) {
      ticker_.tick();
      Team Y(X.vars()), Z(X.vars());
      for (std::size_t i = 0; i < n; ++i) {
        if (code[i] != 1) Y.insert(X.rows()[i]);
        if (code[i] != 0) Z.insert(X.rows()[i]);
      }
      if (cached(f.lhs(), Y) && cached(f.rhs(), Z)) return true;
      std::size_t i = 0;
      while (i < n && code[i] == 2) code[i++] = 0;
      if (i == n) return false;
      ++code[i];
    }
  }

  bool eval_exists(const Formula& f, const Team& X) {
    const std::size_t n = X.size();
    const std::uint64_t subsets = (std::uint64_t{1} << A_.size()) - 1;  // non-empty subsets
    if (A_.size() >= 63) throw BudgetExceeded("domain too large for choice enumeration");
    std::vector<std::uint64_t> choice(n, 1);
    while (true) {
      ticker_.tick();
      std::map<Tuple, std::set<Elem>> F;
      for (std::size_t i = 0; i < n; ++i) {
        auto& out = F[X.rows()[i]];
        for (Elem m = 0; m < A_.size(); ++m)
          if (choice[i] >> m & 1) out.insert(m);
      }
      if (cached(f.body(), team_extend_choice(X, F, f.bound()))) return true;
      std::size_t i = 0;
      while (i < n && choice[i] == subsets) choice[i++] = 1;
      if (i == n) return false;
      ++choice[i];
    }
  }
};

void check_free_vars(const Team& X, const Formula& phi) {
  for (const auto& v : free_variables(phi))
    if (!X.find_column(v))
      throw UnknownName("free variable '" + v + "' is not in the team domain");
}

}  // namespace

bool check_enumerate(const Structure& A, const Team& X, const Formula& phi,
                     const EvalBudget& budget, EvalStats* stats) {
  check_free_vars(X, phi);
  return Enumerator(A, budget, stats).eval(phi, X);
}

namespace {

bool universal_rec(const Structure& A, const Team& X, const Formula& f, EvalStats* stats) {
  switch (f.kind()) {
    case NodeKind::Forall: {
      Team Y = team_extend_forall(X, A, f.bound());
      if (stats) stats->expanded_rows += Y.size();
      return universal_rec(A, Y, f.body(), stats);
    }
    case NodeKind::And:
      return universal_rec(A, X, f.lhs(), stats) && universal_rec(A, X, f.rhs(), stats);
    case NodeKind::RelLit:
    case NodeKind::EqLit:
      for (const auto& s : X.rows())
        if (!holds_fo(A, X.vars(), s, f)) return false;
      return true;
    case NodeKind::Dep:
    case NodeKind::Indep:
    case NodeKind::Inc:
      return check_atom(A, X, f);
    default:
      throw FragmentError("universal/conjunction fast path cannot handle '" + render(f) + "'");
  }
}

}  // namespace

bool check_universal_conj(const Structure& A, const Team& X, const Formula& phi,
                          EvalStats* stats) {
  check_free_vars(X, phi);
  return universal_rec(A, X, phi, stats);
}

bool is_k_coherent_on(const Structure& A, const Team& X, const Formula& phi, std::size_t k,
                      const EvalBudget& budget) {
  if (!is_quantifier_free(phi)) throw PreconditionError("coherence check needs a quantifier-free formula");
  const bool whole = check_brute(A, X, phi, budget);
  const std::size_t n = X.size();
  bool all_small = true;
  // Enumerate index combinations of size 1..k.
  std::vector<std::size_t> idx;
  for (std::size_t size = 1; size <= std::min(k, n) && all_small; ++size) {
    idx.assign(size, 0);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      std::vector<Tuple> rows;
      for (auto i : idx) rows.push_back(X.rows()[i]);
      if (!check_brute(A, Team(X.vars(), std::move(rows)), phi, budget)) {
        all_small = false;
        break;
      }
      std::size_t p = size;
      while (p-- > 0 && idx[p] == n - size + p) {}
      if (p == static_cast<std::size_t>(-1)) break;
      ++idx[p];
      for (std::size_t q = p + 1; q < size; ++q) idx[q] = idx[q - 1] + 1;
    }
  }
  return whole == all_small;
}

}  // namespace teamcheck
