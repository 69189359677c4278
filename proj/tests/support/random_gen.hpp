// Random instances and exhaustive oracles shared by the unit suites and the
// acceptance driver.
#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "teamcheck/formula.hpp"
#include "teamcheck/gadgets.hpp"
#include "teamcheck/model.hpp"
#include "teamcheck/satcore.hpp"

namespace testsupport {

using namespace teamcheck;
using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// Domain "0".."k-1" with a random unary P and binary R.
inline Structure random_structure(Rng& rng, std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) names.push_back(std::to_string(i));
  Structure A(names);
  std::set<Tuple> p, r;
  for (Elem a = 0; a < k; ++a) {
    if (coin(rng)) p.insert({a});
    for (Elem b = 0; b < k; ++b)
      if (coin(rng)) r.insert({a, b});
  }
  A.add_relation("P", 1, p);
  A.add_relation("R", 2, r);
  return A;
}

/// Up to max_rows distinct random rows (possibly none).
inline Team random_team(Rng& rng, const Structure& A, const VarList& vars, std::size_t max_rows,
                        std::size_t min_rows = 0) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) total *= A.size();
  const std::size_t want = std::min(total, min_rows + pick(rng, max_rows - min_rows + 1));
  Team X(vars);
  while (X.size() < want) {
    Tuple t;
    for (std::size_t i = 0; i < vars.size(); ++i) t.push_back(static_cast<Elem>(pick(rng, A.size())));
    X.insert(t);
  }
  return X;
}

struct FormulaConfig {
  bool dep = false, indep = false, inc = false;
  bool exists = false, forall = false, disj = true, conj = true;
  std::size_t max_depth = 3;
  std::size_t max_quant = 2;
  double leaf_bias = 0.3;  // chance to stop early at each inner level
  double atom_bias = 0.5;  // chance a leaf is an atom (when atoms are allowed)
};

inline VarList random_tuple(Rng& rng, const VarList& scope, std::size_t len) {
  VarList out;
  for (std::size_t i = 0; i < len; ++i) out.push_back(scope[pick(rng, scope.size())]);
  return out;
}

inline FormulaPtr random_literal(Rng& rng, const VarList& scope) {
  const bool pos = coin(rng);
  switch (pick(rng, 3)) {
    case 0: return rel("P", random_tuple(rng, scope, 1), pos);
    case 1: return rel("R", random_tuple(rng, scope, 2), pos);
    default: {
      auto t = random_tuple(rng, scope, 2);
      return eq(t[0], t[1], pos);
    }
  }
}

inline FormulaPtr random_atom(Rng& rng, const FormulaConfig& cfg, const VarList& scope) {
  std::vector<int> kinds;
  if (cfg.dep) kinds.push_back(0);
  if (cfg.indep) kinds.push_back(1);
  if (cfg.inc) kinds.push_back(2);
  switch (kinds[pick(rng, kinds.size())]) {
    case 0: return dep(random_tuple(rng, scope, pick(rng, 3)), scope[pick(rng, scope.size())]);
    case 1:
      return indep(random_tuple(rng, scope, 1 + pick(rng, 2)), random_tuple(rng, scope, pick(rng, 2)),
                   random_tuple(rng, scope, 1 + pick(rng, 2)));
    default: {
      const std::size_t len = 1 + pick(rng, 2);
      return inc(random_tuple(rng, scope, len), random_tuple(rng, scope, len));
    }
  }
}

inline FormulaPtr random_formula(Rng& rng, const FormulaConfig& cfg, const VarList& scope,
                                 std::size_t depth = 0, std::size_t quants = 0) {
  const bool atoms = cfg.dep || cfg.indep || cfg.inc;
  if (depth >= cfg.max_depth || (depth > 0 && coin(rng, cfg.leaf_bias))) {
    if (atoms && coin(rng, cfg.atom_bias)) return random_atom(rng, cfg, scope);
    return random_literal(rng, scope);
  }
  std::vector<int> ops;
  if (cfg.conj) ops.push_back(0);
  if (cfg.disj) ops.push_back(1);
  if (quants < cfg.max_quant) {
    if (cfg.exists) ops.push_back(2);
    if (cfg.forall) ops.push_back(3);
  }
  if (ops.empty()) return atoms && coin(rng) ? random_atom(rng, cfg, scope) : random_literal(rng, scope);
  const int op = ops[pick(rng, ops.size())];
  switch (op) {
    case 0:
      return conj(random_formula(rng, cfg, scope, depth + 1, quants),
                  random_formula(rng, cfg, scope, depth + 1, quants));
    case 1:
      return disj(random_formula(rng, cfg, scope, depth + 1, quants),
                  random_formula(rng, cfg, scope, depth + 1, quants));
    default: {
      // Mostly fresh names, sometimes shadowing a team variable.
      static const VarList fresh = {"u", "v"};
      const Var x = coin(rng, 0.8) ? fresh[quants % fresh.size()] : scope[pick(rng, scope.size())];
      VarList inner = scope;
      if (std::find(inner.begin(), inner.end(), x) == inner.end()) inner.push_back(x);
      auto body = random_formula(rng, cfg, inner, depth + 1, quants + 1);
      return op == 2 ? exists(x, body) : forall(x, body);
    }
  }
}

/// First-order formula: one or two literals joined by ∧ or ∨.
inline FormulaPtr random_fo(Rng& rng, const VarList& scope) {
  auto f = random_literal(rng, scope);
  if (coin(rng, 0.3)) f = coin(rng) ? conj(f, random_literal(rng, scope)) : disj(f, random_literal(rng, scope));
  return f;
}

/// An independence atom wrapped 0..3 times in ∧ FO / ∨ FO, on either side.
inline FormulaPtr random_bc(Rng& rng, const VarList& scope) {
  FormulaPtr f = indep(random_tuple(rng, scope, 1 + pick(rng, 2)), random_tuple(rng, scope, pick(rng, 2)),
                       random_tuple(rng, scope, 1 + pick(rng, 2)));
  const std::size_t wraps = pick(rng, 4);
  for (std::size_t i = 0; i < wraps; ++i) {
    auto side = random_fo(rng, scope);
    const bool left = coin(rng);
    if (coin(rng))
      f = left ? conj(side, f) : conj(f, side);
    else
      f = left ? disj(side, f) : disj(f, side);
  }
  return f;
}

inline Cnf3Instance random_cnf3(Rng& rng, int max_vars, std::size_t max_clauses) {
  Cnf3Instance inst;
  inst.num_vars = 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(max_vars)));
  const std::size_t n = 1 + pick(rng, max_clauses);
  for (std::size_t i = 0; i < n; ++i) {
    std::array<Literal, 3> c{};
    for (auto& l : c) {
      l = 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(inst.num_vars)));
      if (coin(rng)) l = -l;
    }
    inst.clauses.push_back(c);
  }
  return inst;
}

inline Cnf random_cnf(Rng& rng, int vars, std::size_t clauses, std::size_t max_width,
                      bool dual_horn) {
  Cnf f(vars);
  while (f.size() < clauses) {
    Clause c;
    const std::size_t w = 1 + pick(rng, max_width);
    bool neg_used = false;
    for (std::size_t i = 0; i < w; ++i) {
      Literal l = 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(vars)));
      if (coin(rng) && !(dual_horn && neg_used)) {
        l = -l;
        neg_used = true;
      }
      c.push_back(l);
    }
    f.add_clause(c);
  }
  return f;
}

// --- exhaustive oracles ------------------------------------------------------

inline bool brute_sat(const Cnf& f) {
  const int n = f.num_vars();
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    std::vector<bool> m(static_cast<std::size_t>(n) + 1, false);
    for (int v = 1; v <= n; ++v) m[static_cast<std::size_t>(v)] = bits >> (v - 1) & 1;
    if (satisfies(f, m)) return true;
  }
  return false;
}

/// Vertices split into three (possibly empty) groups, each a clique.
inline bool has_3_clique_cover(const Graph& g) {
  const std::size_t n = g.num_vertices;
  std::vector<int> group(n, 0);
  while (true) {
    bool ok = true;
    for (std::size_t u = 0; u < n && ok; ++u)
      for (std::size_t v = u + 1; v < n && ok; ++v)
        if (group[u] == group[v] && !g.adjacent(u, v)) ok = false;
    if (ok) return true;
    std::size_t i = 0;
    while (i < n && group[i] == 2) group[i++] = 0;
    if (i == n) return false;
    ++group[i];
  }
}

inline bool is_colourable(const Graph& g, std::size_t colours) {
  const std::size_t n = g.num_vertices;
  std::vector<std::size_t> c(n, 0);
  while (true) {
    bool ok = true;
    for (auto [u, v] : g.edges)
      if (c[u] == c[v]) ok = false;
    if (ok) return true;
    std::size_t i = 0;
    while (i < n && c[i] == colours - 1) c[i++] = 0;
    if (i == n) return false;
    ++c[i];
  }
}

/// All graphs on n vertices, one per edge subset.
inline std::vector<Graph> all_graphs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  std::vector<Graph> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << pairs.size()); ++bits) {
    Graph g;
    g.num_vertices = n;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (bits >> i & 1) g.add_edge(pairs[i].first, pairs[i].second);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace testsupport
