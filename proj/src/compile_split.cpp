#include <algorithm>

#include "teamcheck/compile.hpp"
#include "teamcheck/error.hpp"

namespace teamcheck {

FormulaPtr NormalizedBc::rebuild() const {
  FormulaPtr f = atom;
  for (std::size_t i = 0; i < depth(); ++i) {
    if (phis[i]) f = conj(f, phis[i]);
    if (psis[i]) f = disj(f, psis[i]);
  }
  return f;
}

NormalizedBc normalize_bc(const FormulaPtr& phi) {
  if (atom_count(*phi) != 1) throw FragmentError("expected exactly one independence atom");
  // Walk from the root to the atom, remembering the first-order side at each step.
  std::vector<std::pair<NodeKind, FormulaPtr>> steps;
  FormulaPtr cur = phi;
  while (!cur->is_atom()) {
    if (cur->kind() != NodeKind::And && cur->kind() != NodeKind::Or)
      throw FragmentError("the atom sits under a quantifier");
    const bool left = atom_count(*cur->child(0)) == 1;
    steps.emplace_back(cur->kind(), cur->child(left ? 1 : 0));
    cur = cur->child(left ? 0 : 1);
  }
  if (cur->kind() != NodeKind::Indep) throw FragmentError("the atom is not an independence atom");

  NormalizedBc out;
  out.atom = cur;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    const auto& [kind, side] = *it;
    if (kind == NodeKind::And) {
      if (out.depth() == 0 || out.psis.back()) {
        out.phis.push_back(side);
        out.psis.push_back(nullptr);
      } else {
        auto& last = out.phis.back();
        last = last ? conj(last, side) : side;
      }
    } else {
      if (out.depth() == 0) {
        out.phis.push_back(nullptr);
        out.psis.push_back(side);
      } else {
        auto& last = out.psis.back();
        last = last ? disj(last, side) : side;
      }
    }
  }
  return out;
}

namespace {

struct Eligibility {
  bool escape = false;
  bool cplus = true;
};

Eligibility eligibility(const Structure& A, const VarList& vars, const Tuple& s,
                        const NormalizedBc& nbc) {
  Eligibility e;
  for (std::size_t i = 0; i < nbc.depth(); ++i) {
    const bool phi_ok = !nbc.phis[i] || holds_classical(A, vars, s, *nbc.phis[i]);
    const bool psi_ok = nbc.psis[i] && holds_classical(A, vars, s, *nbc.psis[i]);
    e.escape = (e.escape && phi_ok) || psi_ok;
    e.cplus = e.cplus && phi_ok;
  }
  return e;
}

}  // namespace

AdmissibleKind per_assignment_admissible(const Structure& A, const VarList& vars,
                                         const Tuple& s, const NormalizedBc& nbc) {
  const auto e = eligibility(A, vars, s, nbc);
  if (e.cplus) return e.escape ? AdmissibleKind::Both : AdmissibleKind::ByAtomPart;
  return e.escape ? AdmissibleKind::ByFoPart : AdmissibleKind::Neither;
}

std::optional<Tuple> witness_of(const Structure& A, const Team& X, const Tuple& s1,
                                const Tuple& s2, const NormalizedBc& nbc,
                                const SplitOptions& opts) {
  const auto xs = X.columns(nbc.atom->tuple(0));
  const auto zs = X.columns(nbc.atom->tuple(1));
  const auto ys = X.columns(nbc.atom->tuple(2));
  const auto x1 = project(s1, xs), z1 = project(s1, zs), y2 = project(s2, ys);
  for (const auto& s3 : X.rows()) {
    if (project(s3, xs) != x1 || project(s3, zs) != z1 || project(s3, ys) != y2) continue;
    if (opts.witness_in_cplus && !eligibility(A, X.vars(), s3, nbc).cplus) continue;
    return s3;
  }
  return std::nullopt;
}

bool compatible(const Structure& A, const Team& X, const Tuple& s1, const Tuple& s2,
                const NormalizedBc& nbc, const SplitOptions& opts) {
  if (per_assignment_admissible(A, X.vars(), s1, nbc) != AdmissibleKind::ByAtomPart ||
      per_assignment_admissible(A, X.vars(), s2, nbc) != AdmissibleKind::ByAtomPart)
    return true;
  const auto zs = X.columns(nbc.atom->tuple(1));
  if (project(s1, zs) != project(s2, zs)) return true;
  return witness_of(A, X, s1, s2, nbc, opts).has_value();
}

Compiled compile_split_2sat(const Structure& A, const Team& X, const FormulaPtr& phi1,
                            const FormulaPtr& phi2, const SplitOptions& opts) {
  const NormalizedBc sides[2] = {normalize_bc(phi1), normalize_bc(phi2)};
  const auto& rows = X.rows();
  const int n = static_cast<int>(rows.size());
  Compiled out;
  for (const auto& s : rows) out.vars.add("Y", s);
  for (const auto& s : rows) out.vars.add("Z", s);
  out.cnf = Cnf(2 * n);
  for (int side = 0; side < 2; ++side) {
    const int off = side * n;
    const auto& nbc = sides[side];
    if (opts.unit_clauses)
      for (int i = 0; i < n; ++i)
        if (per_assignment_admissible(A, X.vars(), rows[i], nbc) == AdmissibleKind::Neither)
          out.cnf.add_clause({-(off + i + 1)});
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (!compatible(A, X, rows[i], rows[j], nbc, opts) ||
            !compatible(A, X, rows[j], rows[i], nbc, opts))
          out.cnf.add_clause({-(off + i + 1), -(off + j + 1)});
  }
  for (int i = 0; i < n; ++i) out.cnf.add_clause({i + 1, n + i + 1});
  return out;
}

bool check_split(const Structure& A, const Team& X, const FormulaPtr& phi,
                 const SplitOptions& opts) {
  auto parts = split_bc_disjunction(phi);
  if (!parts) throw FragmentError("formula is not a disjunction of two BC(perp, FO) formulas");
  for (const auto& v : free_variables(*phi))
    if (!X.find_column(v)) throw UnknownName("free variable '" + v + "' is not in the team domain");
  return solve_2sat(compile_split_2sat(A, X, parts->first, parts->second, opts).cnf).sat;
}

}  // namespace teamcheck
