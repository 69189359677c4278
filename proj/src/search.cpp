// Exhaustive lax-semantics search used by check_brute.
//
// ext(f, P, allowed, lower) decides whether some team Y with
// lower ⊆ Y ⊆ allowed (both subsets of the row pool P) satisfies f.
// check_brute(X) is ext(f, X, X, X). The rules:
//   FO           Y = lower works iff every row of lower satisfies f.
//   dependence   downward closed, so Y = lower.
//   f ∨ g        split lower into two parts, one per side; each side may
//                still absorb rows of `allowed`.
//   ∃x f         pick one value per row of lower; the extended pool is
//                allowed(A/x) and the chosen rows are the new lower bound.
//   ∀x f         Y(A/x) must be the body's team; supersets of lower are
//                enumerated when lower ≠ allowed.
//   atoms (∧)    grow lower until every independence pair and inclusion row
//                has a witness, branching over the pool rows that could be
//                the witness.

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "teamcheck/error.hpp"
#include "teamcheck/eval.hpp"

namespace teamcheck {

namespace {

using Mask = std::vector<bool>;

struct Pool {
  VarList vars;
  std::vector<Tuple> rows;
};

struct MemoKey {
  const Formula* f;
  std::size_t pool;
  Mask allowed;
  Mask lower;
  bool operator==(const MemoKey&) const = default;
};

struct MemoHash {
  std::size_t operator()(const MemoKey& k) const {
    std::size_t h = std::hash<const void*>{}(k.f);
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    mix(k.pool);
    mix(std::hash<Mask>{}(k.allowed));
    mix(std::hash<Mask>{}(k.lower));
    return h;
  }
};

struct NodeInfo {
  bool first_order = false;
  bool downward_closed = false;
  std::vector<const Formula*> conjuncts;  // flattened ∧ (And nodes only)
  std::vector<const Formula*> disjuncts;  // flattened ∨ (Or nodes only)
};

void flatten(const Formula& f, NodeKind kind, std::vector<const Formula*>& out) {
  if (f.kind() == kind) {
    flatten(f.lhs(), kind, out);
    flatten(f.rhs(), kind, out);
  } else {
    out.push_back(&f);
  }
}

bool none(const Mask& m) { return std::find(m.begin(), m.end(), true) == m.end(); }

std::vector<std::size_t> members(const Mask& m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i]) out.push_back(i);
  return out;
}

class Search {
 public:
  Search(const Structure& A, const EvalBudget& budget, EvalStats* stats)
      : A_(A), budget_(budget), stats_(stats),
        deadline_(std::chrono::steady_clock::now() + budget.time_limit) {}

  bool run(const Team& X, const Formula& phi) {
    check_team(X.size());
    const std::size_t p = intern(X.vars(), X.rows());
    Mask all(X.size(), true);
    return ext(phi, p, all, all);
  }

 private:
  const Structure& A_;
  const EvalBudget& budget_;
  EvalStats* stats_;
  std::chrono::steady_clock::time_point deadline_;
  std::uint64_t nodes_ = 0;

  std::deque<Pool> pools_;
  std::map<std::pair<VarList, std::vector<Tuple>>, std::size_t> pool_ids_;
  std::unordered_map<const Formula*, NodeInfo> info_;
  std::unordered_map<MemoKey, bool, MemoHash> memo_;
  std::map<std::pair<const Formula*, std::size_t>, std::vector<signed char>> fo_cache_;

  static constexpr std::size_t kMemoLimit = 4'000'000;

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

  std::size_t intern(const VarList& vars, const std::vector<Tuple>& rows) {
    auto key = std::make_pair(vars, rows);
    if (auto it = pool_ids_.find(key); it != pool_ids_.end()) return it->second;
    pools_.push_back(Pool{vars, rows});
    pool_ids_.emplace(std::move(key), pools_.size() - 1);
    return pools_.size() - 1;
  }

  const NodeInfo& info(const Formula& f) {
    if (auto it = info_.find(&f); it != info_.end()) return it->second;
    NodeInfo n;
    n.first_order = is_first_order(f);
    n.downward_closed = is_dependence_only(f);
    if (f.kind() == NodeKind::And) flatten(f, NodeKind::And, n.conjuncts);
    if (f.kind() == NodeKind::Or) flatten(f, NodeKind::Or, n.disjuncts);
    return info_.emplace(&f, std::move(n)).first->second;
  }

  std::vector<std::size_t> cols(std::size_t pool, const VarList& names) const {
    const auto& vars = pools_[pool].vars;
    std::vector<std::size_t> out;
    for (const auto& n : names) {
      auto it = std::find(vars.rbegin(), vars.rend(), n);
      if (it == vars.rend()) throw UnknownName("variable '" + n + "' is not in the team domain");
      out.push_back(static_cast<std::size_t>(vars.rend() - it) - 1);
    }
    return out;
  }

  bool fo_row(const Formula& f, std::size_t pool, std::size_t row) {
    auto& cache = fo_cache_[{&f, pool}];
    if (cache.empty()) cache.assign(pools_[pool].rows.size(), -1);
    if (cache[row] < 0) {
      const auto& P = pools_[pool];
      cache[row] = holds_classical(A_, P.vars, P.rows[row], f) ? 1 : 0;
    }
    return cache[row] == 1;
  }

  bool ext(const Formula& f, std::size_t pool, const Mask& allowed, const Mask& lower) {
    tick();
    if (none(lower)) return true;
    const NodeInfo& ni = info(f);
    if (ni.first_order) {
      for (std::size_t i = 0; i < lower.size(); ++i)
        if (lower[i] && !fo_row(f, pool, i)) return false;
      return true;
    }
    if (ni.downward_closed && allowed != lower) return ext(f, pool, lower, lower);

    MemoKey key{&f, pool, allowed, lower};
    if (auto it = memo_.find(key); it != memo_.end()) {
      if (stats_) ++stats_->memo_hits;
      return it->second;
    }
    bool result = false;
    switch (f.kind()) {
      case NodeKind::Dep:
      case NodeKind::Indep:
      case NodeKind::Inc: {
        std::vector<const Formula*> atoms{&f};
        result = close_atoms(atoms, pool, allowed, lower);
        break;
      }
      case NodeKind::And:
        result = ext_and(ni.conjuncts, pool, allowed, lower);
        break;
      case NodeKind::Or:
        result = ext_or(ni.disjuncts, pool, allowed, lower);
        break;
      case NodeKind::Exists:
        result = ext_exists(f, pool, allowed, lower);
        break;
      case NodeKind::Forall:
        result = ext_forall(f, pool, allowed, lower);
        break;
      default:
        break;  // literals are first-order and handled above
    }
    if (memo_.size() > kMemoLimit) memo_.clear();
    memo_.emplace(std::move(key), result);
    return result;
  }

  bool ext_and(const std::vector<const Formula*>& conjuncts, std::size_t pool, const Mask& allowed,
               const Mask& lower) {
    Mask pool_ok = allowed;
    std::vector<const Formula*> atoms, complex;
    for (const Formula* c : conjuncts) {
      if (info(*c).first_order) {
        for (std::size_t i = 0; i < pool_ok.size(); ++i) {
          if (!pool_ok[i] || fo_row(*c, pool, i)) continue;
          if (lower[i]) return false;
          pool_ok[i] = false;
        }
      } else if (c->is_atom()) {
        atoms.push_back(c);
      } else {
        complex.push_back(c);
      }
    }
    if (complex.empty()) return close_atoms(atoms, pool, pool_ok, lower);
    if (atoms.empty() && complex.size() == 1) return ext(*complex[0], pool, pool_ok, lower);

    auto team_ok = [&](const Mask& Y) {
      if (!atoms_hold(atoms, pool, Y)) return false;
      for (const Formula* c : complex)
        if (!ext(*c, pool, Y, Y)) return false;
      return true;
    };
    if (pool_ok == lower) return team_ok(lower);

    // Conjunctions of non-atomic subformulas do not decompose; try every
    // admissible superset of the lower bound.
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (pool_ok[i] && !lower[i]) free.push_back(i);
    if (free.size() >= 40) throw BudgetExceeded("too many optional rows under a conjunction");
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free.size()); ++bits) {
      tick();
      Mask Y = lower;
      for (std::size_t j = 0; j < free.size(); ++j)
        if (bits >> j & 1) Y[free[j]] = true;
      if (team_ok(Y)) return true;
    }
    return false;
  }

  bool ext_or(const std::vector<const Formula*>& disjuncts, std::size_t pool, const Mask& allowed,
              const Mask& lower) {
    std::vector<const Formula*> fo, rest;
    for (const Formula* d : disjuncts) (info(*d).first_order ? fo : rest).push_back(d);
    // Rows satisfying a first-order disjunct can always be left to it.
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!lower[i]) continue;
      bool absorbed = false;
      for (const Formula* d : fo)
        if (fo_row(*d, pool, i)) {
          absorbed = true;
          break;
        }
      if (!absorbed) open.push_back(i);
    }
    if (open.empty()) return true;
    if (rest.empty()) return false;
    std::vector<Mask> parts(rest.size(), Mask(lower.size(), false));
    return assign_rows(rest, parts, open, pool, allowed);
  }

  // Every open row goes to some side. A side that rejects a lower bound
  // rejects all larger ones, so rows left with one admissible side are
  // forced and the row with fewest options is branched on first.
  bool assign_rows(const std::vector<const Formula*>& sides, std::vector<Mask>& parts,
                   const std::vector<std::size_t>& open, std::size_t pool,
                   const Mask& allowed) {
    std::set<std::vector<Mask>> failed;
    return assign_rec(sides, parts, open, pool, allowed, failed);
  }

  bool assign_rec(const std::vector<const Formula*>& sides, std::vector<Mask>& parts,
                  std::vector<std::size_t> todo, std::size_t pool, const Mask& allowed,
                  std::set<std::vector<Mask>>& failed) {
    const std::vector<Mask> saved = parts;
    auto fail = [&] {
      failed.insert(parts);
      parts = saved;
      return false;
    };
    while (true) {
      if (todo.empty()) return true;
      if (failed.count(parts)) {
        parts = saved;
        return false;
      }
      tick();
      std::size_t best = todo.size();
      std::vector<std::size_t> best_opts;
      std::vector<std::pair<std::size_t, std::size_t>> forced;
      std::vector<std::size_t> rest;
      for (std::size_t k = 0; k < todo.size(); ++k) {
        const std::size_t row = todo[k];
        std::vector<std::size_t> opts;
        for (std::size_t j = 0; j < sides.size(); ++j) {
          parts[j][row] = true;
          const bool ok = ext(*sides[j], pool, allowed, parts[j]);
          parts[j][row] = false;
          if (ok) opts.push_back(j);
        }
        if (opts.empty()) return fail();
        if (opts.size() == 1) {
          forced.emplace_back(row, opts[0]);
          continue;
        }
        rest.push_back(row);
        if (best == todo.size() || opts.size() < best_opts.size()) {
          best = rest.size() - 1;
          best_opts = std::move(opts);
        }
      }
      if (!forced.empty()) {
        for (auto [row, j] : forced) parts[j][row] = true;
        for (std::size_t j = 0; j < sides.size(); ++j)
          if (!ext(*sides[j], pool, allowed, parts[j])) return fail();
        todo = std::move(rest);
        continue;
      }
      const std::size_t row = rest[best];
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
      for (std::size_t j : best_opts) {
        // Two identical sides that are both still empty lead to the same subtree.
        bool twin = false;
        for (std::size_t i = 0; i < j && !twin; ++i)
          twin = none(parts[i]) && none(parts[j]) && *sides[i] == *sides[j];
        if (twin) continue;
        parts[j][row] = true;
        if (assign_rec(sides, parts, rest, pool, allowed, failed)) return true;
        parts[j][row] = false;
      }
      return fail();
    }
  }

  // Pool of allowed rows extended by every value of x, plus the index of
  // (row, value) in it.
  std::pair<std::size_t, std::vector<std::vector<std::size_t>>> extend_pool(
      std::size_t pool, const Mask& allowed, const Var& x) {
    const Pool& P = pools_[pool];
    VarList vars = P.vars;
    std::size_t col;
    if (auto it = std::find(vars.rbegin(), vars.rend(), x); it != vars.rend()) {
      col = static_cast<std::size_t>(vars.rend() - it) - 1;
    } else {
      vars.push_back(x);
      col = vars.size() - 1;
    }
    auto extended = [&](std::size_t i, Elem m) {
      Tuple t = P.rows[i];
      if (col == t.size())
        t.push_back(m);
      else
        t[col] = m;
      return t;
    };
    std::vector<Tuple> rows;
    for (std::size_t i = 0; i < allowed.size(); ++i)
      if (allowed[i])
        for (Elem m = 0; m < A_.size(); ++m) rows.push_back(extended(i, m));
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    check_team(rows.size());
    std::vector<std::vector<std::size_t>> where(allowed.size());
    for (std::size_t i = 0; i < allowed.size(); ++i) {
      if (!allowed[i]) continue;
      for (Elem m = 0; m < A_.size(); ++m) {
        auto t = extended(i, m);
        where[i].push_back(
            static_cast<std::size_t>(std::lower_bound(rows.begin(), rows.end(), t) - rows.begin()));
      }
    }
    const std::size_t q = intern(vars, rows);
    return {q, std::move(where)};
  }

  bool ext_exists(const Formula& f, std::size_t pool, const Mask& allowed, const Mask& lower) {
    auto [q, where] = extend_pool(pool, allowed, f.bound());
    const Mask all(pools_[q].rows.size(), true);
    Mask chosen(all.size(), false);
    const auto need = members(lower);
    return choose_values(f.body(), q, all, chosen, need, 0, where);
  }

  bool choose_values(const Formula& body, std::size_t q, const Mask& all, Mask& chosen,
                     const std::vector<std::size_t>& need, std::size_t k,
                     const std::vector<std::vector<std::size_t>>& where) {
    if (k == need.size()) return true;
    tick();
    for (std::size_t j : where[need[k]]) {
      const bool had = chosen[j];
      chosen[j] = true;
      if (ext(body, q, all, chosen) && choose_values(body, q, all, chosen, need, k + 1, where))
        return true;
      if (!had) chosen[j] = false;
    }
    return false;
  }

  bool ext_forall(const Formula& f, std::size_t pool, const Mask& allowed, const Mask& lower) {
    if (allowed == lower) {
      auto q = extend_pool(pool, allowed, f.bound()).first;
      const Mask all(pools_[q].rows.size(), true);
      return ext(f.body(), q, all, all);
    }
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (allowed[i] && !lower[i]) free.push_back(i);
    if (free.size() >= 40) throw BudgetExceeded("too many optional rows under a universal");
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free.size()); ++bits) {
      tick();
      Mask Y = lower;
      for (std::size_t j = 0; j < free.size(); ++j)
        if (bits >> j & 1) Y[free[j]] = true;
      if (ext(f, pool, Y, Y)) return true;
    }
    return false;
  }

  // --- atoms -------------------------------------------------------------

  struct AtomCols {
    NodeKind kind;
    std::vector<std::size_t> a, b, c;
  };

  std::vector<AtomCols> atom_cols(const std::vector<const Formula*>& atoms, std::size_t pool) {
    std::vector<AtomCols> out;
    for (const Formula* at : atoms) {
      AtomCols ac{at->kind(), cols(pool, at->tuple(0)), cols(pool, at->tuple(1)), {}};
      if (at->kind() == NodeKind::Indep) ac.c = cols(pool, at->tuple(2));
      out.push_back(std::move(ac));
    }
    return out;
  }

  bool atoms_hold(const std::vector<const Formula*>& atoms, std::size_t pool, const Mask& Y) {
    if (atoms.empty()) return true;
    const auto ac = atom_cols(atoms, pool);
    std::vector<std::size_t> cand;
    for (const auto& a : ac)
      if (!find_violation(a, pool, Y, Y, cand).empty() || dep_conflict(a, pool, Y)) return false;
    return true;
  }

  bool dep_conflict(const AtomCols& a, std::size_t pool, const Mask& Y) const {
    if (a.kind != NodeKind::Dep) return false;
    const auto& rows = pools_[pool].rows;
    std::map<Tuple, Elem> seen;
    for (std::size_t i = 0; i < Y.size(); ++i) {
      if (!Y[i]) continue;
      auto [it, fresh] = seen.emplace(project(rows[i], a.a), rows[i][a.b[0]]);
      if (!fresh && it->second != rows[i][a.b[0]]) return true;
    }
    return false;
  }

  // For independence and inclusion atoms: if Y has a requirement without a
  // witness inside Y, returns a one-element marker and fills `cand` with the
  // rows of `allowed` that would provide it. Empty result: no violation.
  std::vector<int> find_violation(const AtomCols& a, std::size_t pool, const Mask& Y,
                                  const Mask& allowed, std::vector<std::size_t>& cand) const {
    const auto& rows = pools_[pool].rows;
    cand.clear();
    if (a.kind == NodeKind::Inc) {
      std::set<Tuple> targets;
      for (std::size_t i = 0; i < Y.size(); ++i)
        if (Y[i]) targets.insert(project(rows[i], a.b));
      for (std::size_t i = 0; i < Y.size(); ++i) {
        if (!Y[i]) continue;
        auto want = project(rows[i], a.a);
        if (targets.count(want)) continue;
        for (std::size_t j = 0; j < allowed.size(); ++j)
          if (allowed[j] && !Y[j] && project(rows[j], a.b) == want) cand.push_back(j);
        return {1};
      }
      return {};
    }
    if (a.kind == NodeKind::Indep) {
      // a.a ⊥_{a.b} a.c
      std::vector<std::size_t> all = a.a;
      all.insert(all.end(), a.b.begin(), a.b.end());
      all.insert(all.end(), a.c.begin(), a.c.end());
      std::set<Tuple> present;
      for (std::size_t i = 0; i < Y.size(); ++i)
        if (Y[i]) present.insert(project(rows[i], all));
      for (std::size_t i = 0; i < Y.size(); ++i) {
        if (!Y[i]) continue;
        for (std::size_t j = 0; j < Y.size(); ++j) {
          if (!Y[j] || project(rows[i], a.b) != project(rows[j], a.b)) continue;
          Tuple want = project(rows[i], a.a);
          for (auto c : a.b) want.push_back(rows[i][c]);
          for (auto c : a.c) want.push_back(rows[j][c]);
          if (present.count(want)) continue;
          for (std::size_t k = 0; k < allowed.size(); ++k)
            if (allowed[k] && !Y[k] && project(rows[k], all) == want) cand.push_back(k);
          return {1};
        }
      }
    }
    return {};
  }

  bool close_atoms(const std::vector<const Formula*>& atoms, std::size_t pool, const Mask& allowed,
                   const Mask& lower) {
    const auto ac = atom_cols(atoms, pool);
    std::unordered_set<Mask> failed;
    return grow(ac, pool, allowed, lower, failed);
  }

  bool grow(const std::vector<AtomCols>& ac, std::size_t pool, const Mask& allowed, const Mask& Y,
            std::unordered_set<Mask>& failed) {
    tick();
    if (failed.count(Y)) return false;
    for (const auto& a : ac)
      if (dep_conflict(a, pool, Y)) {
        failed.insert(Y);
        return false;
      }
    // Branch on the violation with the fewest possible witnesses.
    std::vector<std::size_t> best, cand;
    bool violated = false;
    for (const auto& a : ac) {
      if (find_violation(a, pool, Y, allowed, cand).empty()) continue;
      if (!violated || cand.size() < best.size()) best = cand;
      violated = true;
      if (best.empty()) break;
    }
    if (!violated) return true;
    for (std::size_t r : best) {
      Mask next = Y;
      next[r] = true;
      if (grow(ac, pool, allowed, next, failed)) return true;
    }
    failed.insert(Y);
    return false;
  }
};

}  // namespace

bool check_brute(const Structure& A, const Team& X, const Formula& phi, const EvalBudget& budget,
                 EvalStats* stats) {
  for (const auto& v : free_variables(phi))
    if (!X.find_column(v))
      throw UnknownName("free variable '" + v + "' is not in the team domain");
  return Search(A, budget, stats).run(X, phi);
}

}  // namespace teamcheck
