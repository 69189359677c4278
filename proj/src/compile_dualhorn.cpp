#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

#include "teamcheck/compile.hpp"
#include "teamcheck/error.hpp"

namespace teamcheck {

namespace {

std::uint64_t checked_pow(std::uint64_t k, std::size_t r, std::uint64_t cap) {
  std::uint64_t p = 1;
  for (std::size_t i = 0; i < r; ++i) {
    if (p > cap / k) throw BudgetExceeded("tuple universe exceeds the variable budget");
    p *= k;
  }
  return p;
}

std::size_t last_column(const VarList& vars, const Var& v) {
  for (std::size_t i = vars.size(); i-- > 0;)
    if (vars[i] == v) return i;
  throw UnknownName("variable '" + v + "' is not in the team domain");
}

std::vector<std::size_t> last_columns(const VarList& vars, const VarList& names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) out.push_back(last_column(vars, n));
  return out;
}

struct Label {
  std::string name;
  int base;  // variable of the all-zero tuple
  std::size_t r;
  std::uint64_t count;  // |A|^r
};

class Compiler {
 public:
  Compiler(const Structure& A, bool general, const CompileOptions& opts)
      : A_(A), k_(A.size()), general_(general), opts_(opts) {}

  Compiled run(const Team& X, const Formula& phi) {
    for (const auto& v : free_variables(phi))
      if (!X.find_column(v)) throw UnknownName("free variable '" + v + "' is not in the team domain");
    budget_check(phi, X.vars().size());

    const Label root = new_label("X", X.vars().size());
    std::vector<bool> in_team(root.count, false);
    for (const auto& row : X.rows()) in_team[rank(row)] = true;
    for (std::uint64_t q = 0; q < root.count; ++q)
      emit({in_team[q] ? var(root, q) : -var(root, q)});

    struct Item {
      const Formula* f;
      Label label;
      VarList vars;
    };
    std::deque<Item> work{{&phi, root, X.vars()}};
    while (!work.empty()) {
      Item it = std::move(work.front());
      work.pop_front();
      const Formula& f = *it.f;
      const Label& L = it.label;
      switch (f.kind()) {
        case NodeKind::RelLit:
        case NodeKind::EqLit:
          for (std::uint64_t q = 0; q < L.count; ++q)
            if (!holds_fo(A_, it.vars, decode(q, L.r), f)) emit({-var(L, q)});
          break;
        case NodeKind::Inc:
          inclusion(f, L, it.vars);
          break;
        case NodeKind::Dep:
          if (!general_) throw FragmentError("dependence atom outside FO(inc)");
          dependence(f, L, it.vars);
          break;
        case NodeKind::Indep:
          if (!general_) throw FragmentError("independence atom outside FO(inc)");
          independence(f, L, it.vars);
          break;
        case NodeKind::And:
          work.push_back({&f.lhs(), L, it.vars});
          work.push_back({&f.rhs(), L, it.vars});
          break;
        case NodeKind::Or: {
          const Label Y = new_label(fresh(), L.r);
          const Label Z = new_label(fresh(), L.r);
          for (std::uint64_t q = 0; q < L.count; ++q) {
            emit({-var(L, q), var(Y, q), var(Z, q)});
            emit({-var(Y, q), var(L, q)});
            emit({-var(Z, q), var(L, q)});
          }
          work.push_back({&f.lhs(), Y, it.vars});
          work.push_back({&f.rhs(), Z, it.vars});
          break;
        }
        case NodeKind::Exists:
        case NodeKind::Forall: {
          const Label Y = new_label(fresh(), L.r + 1);
          const bool universal = f.kind() == NodeKind::Forall;
          for (std::uint64_t q = 0; q < L.count; ++q) {
            Clause some{-var(L, q)};
            for (std::uint64_t a = 0; a < k_; ++a) {
              const std::uint64_t ext = q * k_ + a;
              if (universal)
                emit({-var(L, q), var(Y, ext)});
              else
                some.push_back(var(Y, ext));
              emit({-var(Y, ext), var(L, q)});
            }
            if (!universal) emit(some);
          }
          VarList vars = it.vars;
          vars.push_back(f.bound());
          work.push_back({&f.body(), Y, std::move(vars)});
          break;
        }
      }
    }

    Compiled out;
    out.cnf = Cnf(vm_.size());
    if (opts_.prune && !general_) return prune();
    for (const auto& c : clauses_) out.cnf.add_clause(c);
    out.vars = std::move(vm_);
    return out;
  }

 private:
  const Structure& A_;
  std::uint64_t k_;
  bool general_;
  CompileOptions opts_;
  VarMap vm_;
  std::vector<Clause> clauses_;
  int fresh_ = 0;

  std::string fresh() { return "T" + std::to_string(++fresh_); }

  // Rough pre-check so huge universes fail before allocating anything.
  void budget_check(const Formula& phi, std::size_t r) const {
    std::size_t depth = 0;
    std::function<void(const Formula&, std::size_t)> walk = [&](const Formula& f, std::size_t d) {
      depth = std::max(depth, d);
      for (std::size_t i = 0; i < f.child_count(); ++i)
        walk(*f.child(i), d + (f.is_quantifier() ? 1 : 0));
    };
    walk(phi, 0);
    checked_pow(k_, r + depth, opts_.max_vars);
  }

  Label new_label(const std::string& name, std::size_t r) {
    const std::uint64_t count = checked_pow(k_, r, opts_.max_vars);
    if (static_cast<std::uint64_t>(vm_.size()) + count > opts_.max_vars)
      throw BudgetExceeded("compiled formula exceeds the variable budget");
    Label L{name, vm_.size() + 1, r, count};
    for (std::uint64_t q = 0; q < count; ++q) vm_.add(name, decode(q, r));
    return L;
  }

  static int var(const Label& L, std::uint64_t q) { return L.base + static_cast<int>(q); }

  Tuple decode(std::uint64_t q, std::size_t r) const {
    Tuple t(r);
    for (std::size_t i = r; i-- > 0;) {
      t[i] = static_cast<Elem>(q % k_);
      q /= k_;
    }
    return t;
  }

  std::uint64_t rank(const Tuple& t) const {
    std::uint64_t q = 0;
    for (Elem e : t) q = q * k_ + e;
    return q;
  }

  void emit(Clause c) { clauses_.push_back(std::move(c)); }

  // Ranks of all tuples agreeing with `fixed`, in increasing order. Empty if
  // two constraints clash on one column.
  std::vector<std::uint64_t> matching(
      std::size_t r, const std::vector<std::pair<std::size_t, Elem>>& constraints) const {
    std::vector<int> fixed(r, -1);
    for (auto [col, val] : constraints) {
      if (fixed[col] >= 0 && fixed[col] != static_cast<int>(val)) return {};
      fixed[col] = static_cast<int>(val);
    }
    std::vector<std::uint64_t> out;
    Tuple t(r, 0);
    for (std::size_t i = 0; i < r; ++i)
      if (fixed[i] >= 0) t[i] = static_cast<Elem>(fixed[i]);
    while (true) {
      out.push_back(rank(t));
      std::size_t i = r;
      while (i-- > 0) {
        if (fixed[i] >= 0) continue;
        if (++t[i] < k_) break;
        t[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    return out;
  }

  void inclusion(const Formula& f, const Label& L, const VarList& vars) {
    const auto xs = last_columns(vars, f.tuple(0));
    const auto ys = last_columns(vars, f.tuple(1));
    for (std::uint64_t q = 0; q < L.count; ++q) {
      const Tuple s = decode(q, L.r);
      std::vector<std::pair<std::size_t, Elem>> want;
      for (std::size_t i = 0; i < xs.size(); ++i) want.emplace_back(ys[i], s[xs[i]]);
      Clause c{-var(L, q)};
      for (auto q2 : matching(L.r, want)) c.push_back(var(L, q2));
      emit(std::move(c));
    }
  }

  void dependence(const Formula& f, const Label& L, const VarList& vars) {
    const auto xs = last_columns(vars, f.tuple(0));
    const auto y = last_column(vars, f.tuple(1)[0]);
    std::map<Tuple, std::vector<std::uint64_t>> groups;
    for (std::uint64_t q = 0; q < L.count; ++q) groups[project(decode(q, L.r), xs)].push_back(q);
    for (const auto& [key, qs] : groups)
      for (std::size_t i = 0; i < qs.size(); ++i)
        for (std::size_t j = i + 1; j < qs.size(); ++j)
          if (decode(qs[i], L.r)[y] != decode(qs[j], L.r)[y])
            emit({-var(L, qs[i]), -var(L, qs[j])});
  }

  void independence(const Formula& f, const Label& L, const VarList& vars) {
    const auto xs = last_columns(vars, f.tuple(0));
    const auto zs = last_columns(vars, f.tuple(1));  // condition
    const auto ys = last_columns(vars, f.tuple(2));
    std::map<Tuple, std::vector<std::uint64_t>> groups;
    for (std::uint64_t q = 0; q < L.count; ++q) groups[project(decode(q, L.r), zs)].push_back(q);
    for (const auto& [key, qs] : groups)
      for (auto q1 : qs)
        for (auto q2 : qs) {
          if (q1 == q2) continue;
          const Tuple s1 = decode(q1, L.r), s2 = decode(q2, L.r);
          std::vector<std::pair<std::size_t, Elem>> want;
          for (auto c : xs) want.emplace_back(c, s1[c]);
          for (auto c : zs) want.emplace_back(c, s1[c]);
          for (auto c : ys) want.emplace_back(c, s2[c]);
          Clause c{-var(L, q1), -var(L, q2)};
          for (auto w : matching(L.r, want)) c.push_back(var(L, w));
          emit(std::move(c));
        }
  }

  // Keep the variables reachable from the positive units; everything else
  // can be set to false without touching a kept clause.
  Compiled prune() {
    const auto n = static_cast<std::size_t>(vm_.size());
    std::vector<std::vector<int>> succ(n + 1);
    std::vector<bool> keep(n + 1, false);
    std::vector<int> frontier;
    for (const auto& c : clauses_) {
      int neg = 0;
      for (Literal l : c)
        if (l < 0) neg = -l;
      for (Literal l : c) {
        if (l < 0) continue;
        if (neg)
          succ[static_cast<std::size_t>(neg)].push_back(l);
        else if (!keep[static_cast<std::size_t>(l)]) {
          keep[static_cast<std::size_t>(l)] = true;
          frontier.push_back(l);
        }
      }
    }
    while (!frontier.empty()) {
      const auto v = static_cast<std::size_t>(frontier.back());
      frontier.pop_back();
      for (int w : succ[v])
        if (!keep[static_cast<std::size_t>(w)]) {
          keep[static_cast<std::size_t>(w)] = true;
          frontier.push_back(w);
        }
    }
    Compiled out;
    std::vector<int> renum(n + 1, 0);
    for (std::size_t v = 1; v <= n; ++v)
      if (keep[v]) {
        const auto& e = vm_.entry(static_cast<int>(v));
        renum[v] = out.vars.add(e.label, e.tuple);
      }
    out.cnf = Cnf(out.vars.size());
    for (const auto& c : clauses_) {
      auto neg = std::find_if(c.begin(), c.end(), [](Literal l) { return l < 0; });
      if (neg != c.end() && !keep[static_cast<std::size_t>(-*neg)]) continue;
      Clause m;
      for (Literal l : c) m.push_back(l < 0 ? -renum[static_cast<std::size_t>(-l)] : renum[static_cast<std::size_t>(l)]);
      out.cnf.add_clause(m);
    }
    return out;
  }
};

// --- counting ---------------------------------------------------------------

std::uint64_t ipow(std::uint64_t k, std::size_t r) {
  std::uint64_t p = 1;
  for (std::size_t i = 0; i < r; ++i) p *= k;
  return p;
}

std::uint64_t count_rec(const Structure& A, const VarList& vars, const Formula& f) {
  const std::uint64_t k = A.size();
  const std::size_t r = vars.size();
  switch (f.kind()) {
    case NodeKind::EqLit: {
      const auto c = last_columns(vars, f.tuple(0));
      if (c[0] == c[1]) return f.positive() ? 0 : ipow(k, r);
      return (f.positive() ? k * k - k : k) * ipow(k, r - 2);
    }
    case NodeKind::RelLit: {
      const Relation* rel = A.relation(f.relation());
      if (!rel) throw UnknownName("relation '" + f.relation() + "' is not in the structure");
      if (rel->arity != f.tuple(0).size())
        throw PreconditionError("relation '" + f.relation() + "' used with the wrong arity");
      const auto cols = last_columns(vars, f.tuple(0));
      std::vector<std::size_t> distinct = cols;
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      const std::size_t d = distinct.size();
      std::uint64_t bad = 0;
      Tuple val(d, 0);
      while (true) {
        Tuple args;
        for (auto c : cols)
          args.push_back(val[static_cast<std::size_t>(
              std::lower_bound(distinct.begin(), distinct.end(), c) - distinct.begin())]);
        if (rel->contains(args) != f.positive()) ++bad;
        std::size_t i = d;
        while (i-- > 0 && ++val[i] == k) val[i] = 0;
        if (i == static_cast<std::size_t>(-1)) break;
      }
      return bad * ipow(k, r - d);
    }
    case NodeKind::Inc: {
      // Tautological clauses: tuples with s(y) = s(x), one per assignment of
      // the classes of the column equivalence generated by x_i ~ y_i.
      const auto xs = last_columns(vars, f.tuple(0));
      const auto ys = last_columns(vars, f.tuple(1));
      std::vector<std::size_t> parent(r);
      std::iota(parent.begin(), parent.end(), 0);
      std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
        return parent[i] == i ? i : parent[i] = root(parent[i]);
      };
      for (std::size_t i = 0; i < xs.size(); ++i) parent[root(xs[i])] = root(ys[i]);
      std::size_t classes = 0;
      for (std::size_t i = 0; i < r; ++i) classes += root(i) == i;
      return ipow(k, r) - ipow(k, classes);
    }
    case NodeKind::Dep:
    case NodeKind::Indep:
      throw FragmentError("dependence and independence atoms are not dual-Horn");
    case NodeKind::And:
      return count_rec(A, vars, f.lhs()) + count_rec(A, vars, f.rhs());
    case NodeKind::Or:
      return 3 * ipow(k, r) + count_rec(A, vars, f.lhs()) + count_rec(A, vars, f.rhs());
    case NodeKind::Exists:
    case NodeKind::Forall: {
      VarList ext = vars;
      ext.push_back(f.bound());
      const std::uint64_t own =
          f.kind() == NodeKind::Exists ? ipow(k, r) + ipow(k, r + 1) : 2 * ipow(k, r + 1);
      return own + count_rec(A, ext, f.body());
    }
  }
  return 0;
}

}  // namespace

Compiled compile_dualhorn(const Structure& A, const Team& X, const Formula& phi,
                          const CompileOptions& opts) {
  return Compiler(A, false, opts).run(X, phi);
}

Compiled compile_cnf_general(const Structure& A, const Team& X, const Formula& phi,
                             const CompileOptions& opts) {
  return Compiler(A, true, opts).run(X, phi);
}

std::uint64_t dualhorn_clause_count(const Structure& A, const VarList& team_vars,
                                    const Formula& phi) {
  return ipow(A.size(), team_vars.size()) + count_rec(A, team_vars, phi);
}

bool check_dualhorn(const Structure& A, const Team& X, const Formula& phi,
                    const CompileOptions& opts) {
  return solve_dual_horn(compile_dualhorn(A, X, phi, opts).cnf).sat;
}

bool check_cnf_general(const Structure& A, const Team& X, const Formula& phi,
                       const CompileOptions& opts) {
  return solve_dpll(compile_cnf_general(A, X, phi, opts).cnf).sat;
}

}  // namespace teamcheck
