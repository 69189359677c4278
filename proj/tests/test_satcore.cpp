#include "doctest.h"

#include <algorithm>

#include "support/random_gen.hpp"
#include "teamcheck/compile.hpp"
#include "teamcheck/error.hpp"

using namespace teamcheck;
using namespace testsupport;

namespace {

Cnf cnf(int vars, std::vector<Clause> clauses) {
  Cnf f(vars);
  for (const auto& c : clauses) f.add_clause(c);
  return f;
}

std::vector<Clause> sorted_clauses(const Cnf& f) {
  auto out = f.clauses();
  for (auto& c : out) std::sort(c.begin(), c.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("clause construction") {
  Cnf f(3);
  CHECK(f.add_clause({1, -2, 1}));
  CHECK(f.clauses().back() == Clause{1, -2});
  CHECK_FALSE(f.add_clause({2, -2}));
  CHECK(f.size() == 1);
  CHECK_THROWS_AS(f.add_clause({4}), PreconditionError);
  CHECK_THROWS_AS(f.add_clause({0}), PreconditionError);
}

TEST_CASE("shape tests") {
  CHECK(is_dual_horn(cnf(3, {{1, 2, -3}})));
  CHECK_FALSE(is_dual_horn(cnf(2, {{-1, -2}})));
  CHECK(is_2cnf(cnf(2, {{-1, -2}, {1}})));
  CHECK_FALSE(is_2cnf(cnf(3, {{1, 2, 3}})));
}

TEST_CASE("dual-Horn solver") {
  auto r = solve_dual_horn(cnf(2, {{-1}, {1, 2}}));
  REQUIRE(r.sat);
  CHECK_FALSE(r.model[1]);
  CHECK(r.model[2]);
  CHECK_FALSE(solve_dual_horn(cnf(1, {{-1}, {1}})).sat);
  auto empty = solve_dual_horn(Cnf(3));
  REQUIRE(empty.sat);
  CHECK(empty.model[1]);
  CHECK(empty.model[3]);
  CHECK_THROWS_AS(solve_dual_horn(cnf(2, {{-1, -2}})), PreconditionError);
}

TEST_CASE("2-SAT solver") {
  CHECK(solve_2sat(cnf(2, {{1, 2}, {-1, -2}})).sat);
  CHECK_FALSE(solve_2sat(cnf(1, {{1}, {-1}})).sat);
  CHECK_THROWS_AS(solve_2sat(cnf(3, {{1, 2, 3}})), PreconditionError);
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    const Cnf f = random_cnf(rng, 8, 20, 2, false);
    auto a = solve_2sat(f);
    CHECK(a.sat == solve_dpll(f).sat);
    if (a.sat) CHECK(satisfies(f, a.model));
  }
}

TEST_CASE("DPLL solver") {
  CHECK(solve_dpll(cnf(3, {{1, 2, 3}})).sat);
  CHECK_FALSE(solve_dpll(cnf(2, {{1}, {2}, {-1, -2}})).sat);
  Rng rng(42);
  for (int i = 0; i < 500; ++i) {
    const Cnf f = random_cnf(rng, 1 + static_cast<int>(pick(rng, 10)), 1 + pick(rng, 40), 3, false);
    auto a = solve_dpll(f);
    REQUIRE(a.sat == brute_sat(f));
    if (a.sat) CHECK(satisfies(f, a.model));
  }
}

TEST_CASE("DIMACS text") {
  CHECK(emit_dimacs(cnf(2, {{1, -2}})) == "p cnf 2 1\n1 -2 0\n");
  CHECK(emit_dimacs(Cnf()) == "p cnf 0 0\n");
  CHECK(parse_dimacs("c comment\np cnf 2 2\n1 -2 0\n2\n0\n") == cnf(2, {{1, -2}, {2}}));
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n3 0\n"), FormatError);
  CHECK_THROWS_AS(parse_dimacs("p dnf 2 1\n1 0\n"), FormatError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n"), FormatError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), FormatError);
}

TEST_CASE("DIMACS round trip on compiled output") {
  Structure A({"0", "1"});
  const Team X({"x", "y"}, {{0, 1}, {1, 0}});
  const auto c = compile_dualhorn(A, X, *parse("inc(x;y)"));
  const Cnf back = parse_dimacs(emit_dimacs(c.cnf));
  CHECK(back.num_vars() == c.cnf.num_vars());
  CHECK(sorted_clauses(back) == sorted_clauses(c.cnf));
  const auto manifest = emit_manifest(c.vars, A);
  CHECK(manifest.rfind("1 X 0 0\n", 0) == 0);
}

TEST_CASE("dual-Horn solver matches DPLL and returns the maximum model") {
  Rng rng(43);
  for (int i = 0; i < 1000; ++i) {
    const int vars = 1 + static_cast<int>(pick(rng, 12));
    const Cnf f = random_cnf(rng, vars, 1 + pick(rng, 30), 4, true);
    REQUIRE(is_dual_horn(f));
    auto a = solve_dual_horn(f);
    REQUIRE(a.sat == solve_dpll(f).sat);
    if (!a.sat) continue;
    REQUIRE(satisfies(f, a.model));
    // Flipping any false variable to true breaks some clause.
    for (int v = 1; v <= vars; ++v) {
      if (a.model[static_cast<std::size_t>(v)]) continue;
      auto m = a.model;
      m[static_cast<std::size_t>(v)] = true;
      CHECK_FALSE(satisfies(f, m));
    }
  }
}
