#include "doctest.h"

#include "support/random_gen.hpp"
#include "teamcheck/compile.hpp"
#include "teamcheck/error.hpp"
#include "teamcheck/eval.hpp"

using namespace teamcheck;
using namespace testsupport;

namespace {

Structure binary() { return Structure({"0", "1"}); }
Team xy(std::vector<Tuple> rows) { return Team({"x", "y"}, std::move(rows)); }

}  // namespace

TEST_CASE("dual-Horn compilation examples") {
  Structure A = binary();
  const auto phi = parse("inc(x;y)");
  const auto c = compile_dualhorn(A, xy({{0, 1}, {1, 0}}), *phi);
  CHECK(c.cnf.num_vars() == 4);
  CHECK(is_dual_horn(c.cnf));
  CHECK(solve_dual_horn(c.cnf).sat);
  CHECK_FALSE(check_dualhorn(A, xy({{0, 1}}), *phi));
  CHECK_FALSE(check_brute(A, xy({{0, 1}}), *phi));

  A.add_relation("R", 1, {{0}, {1}});
  const auto lit = compile_dualhorn(A, xy({{0, 0}, {1, 1}}), *parse("R(x)"));
  for (const auto& cl : lit.cnf.clauses()) CHECK(cl.size() == 1);
  CHECK(solve_dual_horn(lit.cnf).sat);

  CHECK_THROWS_AS(compile_dualhorn(A, xy({}), *parse("=(x;y)")), FragmentError);
  CHECK_THROWS_AS(compile_dualhorn(A, xy({}), *parse("inc(x;q)")), UnknownName);
}

TEST_CASE("variables are named by label and tuple") {
  const Structure A = binary();
  const auto c = compile_dualhorn(A, xy({{0, 1}}), *parse("E z. inc(x;z)"));
  CHECK(c.vars.find("X", {0, 1}).has_value());
  CHECK(c.vars.find("T1", {0, 1, 1}).has_value());
  CHECK(c.vars.size() == c.cnf.num_vars());
}

TEST_CASE("general CNF examples") {
  const Structure A = binary();
  CHECK_FALSE(check_cnf_general(A, xy({{0, 0}, {0, 1}}), *parse("=(x;y)")));
  CHECK(check_cnf_general(A, xy({{0, 1}}), *parse("=(x;y)")));
  CHECK_FALSE(check_cnf_general(A, xy({{0, 0}, {1, 1}}), *parse("perp(x;;y)")));
  CHECK(check_cnf_general(A, xy({{0, 0}, {1, 1}, {0, 1}, {1, 0}}), *parse("perp(x;;y)")));
  CHECK_FALSE(is_dual_horn(compile_cnf_general(A, xy({}), *parse("=(x;y)")).cnf));
}

TEST_CASE("compilers agree with brute force on random instances") {
  Rng rng(51);
  FormulaConfig qf;
  qf.dep = qf.indep = qf.inc = true;
  FormulaConfig inc;
  inc.inc = true;
  inc.exists = inc.forall = true;
  for (int i = 0; i < 600; ++i) {
    const Structure A = random_structure(rng, 1 + pick(rng, 3));
    const Team X = random_team(rng, A, {"x", "y", "z"}, 5);
    const auto phi = random_formula(rng, qf, {"x", "y", "z"});
    REQUIRE_MESSAGE(check_cnf_general(A, X, *phi) == check_brute(A, X, *phi), render(*phi));
    const auto psi = random_formula(rng, inc, {"x", "y", "z"});
    const bool expect = check_brute(A, X, *psi);
    REQUIRE_MESSAGE(check_dualhorn(A, X, *psi) == expect, render(*psi));
    CompileOptions pruned;
    pruned.prune = true;
    REQUIRE(check_dualhorn(A, X, *psi, pruned) == expect);
  }
}

TEST_CASE("clause counts depend only on the formula and the domain") {
  Rng rng(52);
  FormulaConfig inc;
  inc.inc = true;
  inc.exists = inc.forall = true;
  for (int i = 0; i < 300; ++i) {
    const Structure A = random_structure(rng, 1 + pick(rng, 3));
    const auto phi = random_formula(rng, inc, {"x", "y"});
    const auto expected = dualhorn_clause_count(A, {"x", "y"}, *phi);
    for (int j = 0; j < 3; ++j) {
      const Team X = random_team(rng, A, {"x", "y"}, 6);
      REQUIRE(compile_dualhorn(A, X, *phi).cnf.size() == expected);
    }
  }
}

TEST_CASE("normal form of the Boolean closure") {
  auto bare = normalize_bc(parse("perp(x;z;y)"));
  CHECK(bare.depth() == 0);
  CHECK(*bare.atom == *parse("perp(x;z;y)"));

  auto one = normalize_bc(parse("(perp(x;z;y) & R(x)) | y = z"));
  REQUIRE(one.depth() == 1);
  CHECK(*one.phis[0] == *parse("R(x)"));
  CHECK(*one.psis[0] == *parse("y = z"));

  CHECK_THROWS_AS(normalize_bc(parse("=(x;y)")), FragmentError);
  CHECK_THROWS_AS(normalize_bc(parse("perp(x;;y) & perp(y;;x)")), FragmentError);

  Rng rng(53);
  for (int i = 0; i < 500; ++i) {
    const auto phi = random_bc(rng, {"x", "y", "z"});
    const Structure A = random_structure(rng, 1 + pick(rng, 3));
    const Team X = random_team(rng, A, {"x", "y", "z"}, 5);
    REQUIRE(check_brute(A, X, *normalize_bc(phi).rebuild()) == check_brute(A, X, *phi));
  }
}

TEST_CASE("admissibility of single assignments") {
  Structure A = binary();
  A.add_relation("R", 1, {{1}});
  const VarList vars = {"x", "y", "z"};
  auto bare = normalize_bc(parse("perp(x;z;y)"));
  for (Elem a = 0; a < 2; ++a)
    CHECK(per_assignment_admissible(A, vars, {a, 0, 0}, bare) == AdmissibleKind::ByAtomPart);

  auto nbc = normalize_bc(parse("(perp(x;z;y) & R(x)) | y = z"));
  CHECK(per_assignment_admissible(A, vars, {0, 1, 1}, nbc) == AdmissibleKind::ByFoPart);
  CHECK(per_assignment_admissible(A, vars, {0, 1, 0}, nbc) == AdmissibleKind::Neither);
  CHECK(per_assignment_admissible(A, vars, {1, 1, 0}, nbc) == AdmissibleKind::ByAtomPart);
  CHECK(per_assignment_admissible(A, vars, {1, 1, 1}, nbc) == AdmissibleKind::Both);
}

TEST_CASE("compatibility and witnesses") {
  const Structure A = binary();
  auto atom = normalize_bc(parse("perp(x;;y)"));
  const Team diag = xy({{0, 0}, {1, 1}});
  CHECK(compatible(A, diag, {0, 0}, {0, 0}, atom));
  CHECK(witness_of(A, diag, {0, 0}, {0, 0}, atom) == Tuple{0, 0});
  CHECK_FALSE(compatible(A, diag, {0, 0}, {1, 1}, atom));
  CHECK_FALSE(witness_of(A, diag, {0, 0}, {1, 1}, atom).has_value());

  auto cond = normalize_bc(parse("perp(x;y;x)"));
  CHECK(compatible(A, diag, {0, 0}, {1, 1}, cond));
}

TEST_CASE("split reduction examples") {
  const Structure A = binary();
  const auto atom = parse("perp(x;;y)");
  CHECK(check_split(A, xy({{0, 0}, {1, 1}, {0, 1}, {1, 0}}), disj(atom, atom)));
  CHECK(check_split(A, xy({{0, 0}, {1, 1}}), disj(atom, atom)));
  const auto c = compile_split_2sat(A, xy({{0, 0}, {1, 1}}), atom, atom);
  CHECK(is_2cnf(c.cnf));
  CHECK(c.cnf.num_vars() == 4);

  Structure B({"0", "1", "2"});
  const Team three = xy({{0, 0}, {1, 1}, {2, 2}});
  CHECK_FALSE(check_split(B, three, disj(atom, atom)));
  CHECK_FALSE(check_brute(B, three, *disj(atom, atom)));
  CHECK_THROWS_AS(check_split(A, xy({}), parse("=(x;y) | =(y;x)")), FragmentError);
}

TEST_CASE("width-2 procedure examples") {
  const Structure A = binary();
  CHECK(check_width2_D(A, xy({{0, 0}, {0, 1}}), *parse("=(x;y) | x = y")));
  CHECK_FALSE(check_width2_D(A, xy({{0, 0}, {0, 1}}), *parse("=(x;y) | x != x")));
  CHECK_THROWS_AS(check_width2_D(A, xy({}), *parse("=(x;y) | =(x;y) | =(y;x)")), FragmentError);
  CHECK_THROWS_AS(check_width2_D(A, xy({}), *parse("inc(x;y)")), FragmentError);

  Rng rng(54);
  const auto phi1 = parse("=(x;y) | =(u;v)");
  for (int i = 0; i < 300; ++i) {
    const Structure B = random_structure(rng, 1 + pick(rng, 3));
    const Team X = random_team(rng, B, {"x", "y", "u", "v"}, 6);
    REQUIRE(check_width2_D(B, X, *phi1) == check_brute(B, X, *phi1));
  }
}

TEST_CASE("a split witness must itself be allowed in the atom side") {
  // Rows (0,1,q) and (1,0,q) would witness independence for the P-rows but
  // fail P(w), so they cannot sit in the subteam where the atom is checked.
  Structure A({"0", "1", "p", "q"});
  A.add_relation("P", 1, {{A.elem("p")}});
  const Elem p = A.elem("p"), q = A.elem("q");
  const Team X({"x", "y", "w"}, {{0, 0, p}, {1, 1, p}, {0, 1, q}, {1, 0, q}});
  const auto phi = parse("((perp(x;;y) & P(w)) | !P(w)) | (perp(x;;y) & x != x)");
  REQUIRE(classify(phi) == FragmentTag::BcSplitIndep);
  CHECK_FALSE(check_brute(A, X, *phi));
  CHECK_FALSE(check_split(A, X, phi));
  SplitOptions any_witness;
  any_witness.witness_in_cplus = false;
  CHECK(check_split(A, X, phi, any_witness));
}
