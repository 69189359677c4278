#include "doctest.h"

#include <fstream>
#include <sstream>

#include "support/random_gen.hpp"
#include "teamcheck/error.hpp"

using namespace teamcheck;
using namespace testsupport;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Team xy(std::vector<Tuple> rows) { return Team({"x", "y"}, std::move(rows)); }

}  // namespace

TEST_CASE("restriction") {
  const Team X = xy({{0, 1}, {0, 2}});
  const Team R = team_restrict(X, {"x"});
  CHECK(R.vars() == VarList{"x"});
  CHECK(R.rows() == std::vector<Tuple>{{0}});
  CHECK(team_restrict(X, {"x", "y"}) == X);
  CHECK_THROWS_AS(team_restrict(X, {"q"}), UnknownName);
}

TEST_CASE("relation of a team") {
  CHECK(team_relation(xy({{0, 1}}), {"y", "x"}) == std::set<Tuple>{{1, 0}});
  CHECK(team_relation(Team({"x"}), {"x"}).empty());
}

TEST_CASE("universal extension") {
  Structure A({"0", "1", "2"});
  const Team X({"y"}, {{0}});
  CHECK(team_extend_forall(X, A, "x").size() == 3);
  CHECK(team_extend_forall(Team({"y"}), A, "x").empty());

  Structure B({"0", "1"});
  const Team Y = team_extend_forall(Team({"y"}, {{0}, {1}}), B, "x");
  CHECK(team_relation(Y, {"x", "y"}) == std::set<Tuple>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});

  // Shadowing overwrites the column.
  const Team S = team_extend_forall(X, B, "y");
  CHECK(S.vars() == VarList{"y"});
  CHECK(S.size() == 2);
}

TEST_CASE("choice extension") {
  Structure A({"0", "1", "2"});
  const Team X({"y"}, {{0}, {1}});
  CHECK(team_extend_choice(X, {{{0}, {2}}, {{1}, {2}}}, "x").size() == 2);
  std::map<Tuple, std::set<Elem>> all = {{{0}, {0, 1, 2}}, {{1}, {0, 1, 2}}};
  CHECK(team_extend_choice(X, all, "x") == team_extend_forall(X, A, "x"));
  CHECK(team_extend_choice(X, {{{0}, {1}}, {{1}, {0, 2}}}, "x").size() == 3);
  CHECK_THROWS_AS(team_extend_choice(X, {{{0}, {}}, {{1}, {0}}}, "x"), PreconditionError);
  CHECK_THROWS_AS(team_extend_choice(X, {{{0}, {1}}}, "x"), PreconditionError);
}

TEST_CASE("instance files") {
  auto inst = parse_instance("domain 0\nteam\n");
  CHECK(inst.structure.size() == 1);
  CHECK(inst.team.empty());

  CHECK_THROWS_AS(parse_instance("domain 0 1\nteam x\n2\n"), FormatError);
  CHECK_THROWS_AS(parse_instance("team x\n0\n"), FormatError);
  CHECK_THROWS_AS(parse_instance("domain 0 1\nrel R 2\n0\n"), FormatError);

  const std::string text = slurp(std::string(TEAMCHECK_TEST_DATA) + "/coloring_example.inst");
  auto example = parse_instance(text);
  CHECK(example.team.size() == 10);
  CHECK(render_instance(example.structure, example.team) == text);

  // Restricting to the vertex columns gives all four digit pairs.
  CHECK(team_restrict(example.team, {"v1", "v2"}).rows() ==
        std::vector<Tuple>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(team_relation(example.team, {"m"}) == std::set<Tuple>{{0}, {1}});
}

TEST_CASE("instance round trip on random data") {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const Structure A = random_structure(rng, 1 + pick(rng, 4));
    const Team X = random_team(rng, A, {"x", "y", "z"}, 8);
    const auto text = render_instance(A, X);
    const auto back = parse_instance(text);
    REQUIRE(back.team == X);
    REQUIRE(render_instance(back.structure, back.team) == text);
  }
}

TEST_CASE("team laws") {
  Rng rng(22);
  for (int i = 0; i < 300; ++i) {
    const Structure A = random_structure(rng, 1 + pick(rng, 3));
    const Team X = random_team(rng, A, {"x", "y", "z"}, 6, 1);
    CHECK(team_restrict(team_restrict(X, {"x", "y"}), {"y"}) == team_restrict(X, {"y"}));
    CHECK(team_restrict(team_extend_forall(X, A, "u"), {"x", "y", "z"}) == X);

    // Insertion order and duplicates do not matter.
    auto rows = X.rows();
    std::shuffle(rows.begin(), rows.end(), rng);
    Team Y(X.vars());
    for (const auto& r : rows) Y.insert(r);
    if (!rows.empty()) CHECK_FALSE(Y.insert(rows.front()));
    CHECK(Y == X);
  }
}
