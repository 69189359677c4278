#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "teamcheck/cli.hpp"
#include "teamcheck/compile.hpp"
#include "teamcheck/satcore.hpp"

using namespace teamcheck;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run tool(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("teamcheck_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return (dir_ / name).string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string read(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

 private:
  fs::path dir_;
};

std::size_t count_lines(const std::string& s, const std::string& prefix = "") {
  std::istringstream in(s);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#' && line.rfind(prefix, 0) == 0) ++n;
  return n;
}

const char* kTwoRows = "domain 0 1\nteam x y\n0 1\n1 0\n";

}  // namespace

TEST_CASE("check") {
  Scratch s;
  const auto inst = s.write("two.inst", kTwoRows);
  auto r = tool({"check", "inc(x;y)", inst, "--strategy", "dualhorn"});
  CHECK(r.code == 0);
  CHECK(r.out == "SAT-TEAM\n");
  CHECK(tool({"check", "=(x;y) & x = y", inst}).out == "NOT-SAT-TEAM\n");
  CHECK(tool({"check", "=(x;y) | =(y;x) | =(x;x)", inst, "-s", "width2"}).code == 3);
  CHECK(tool({"check", "=(x;", inst}).code == 2);
  CHECK(tool({"check", "inc(x;y)", s.path("missing.inst")}).code != 0);
  CHECK(tool({"check", "inc(x;y)", inst, "-s", "nonsense"}).code == 2);

  const auto formula = s.write("phi.txt", "inc(y;x)\n");
  CHECK(tool({"check", "@" + formula, inst, "-s", "brute"}).out == "SAT-TEAM\n");
}

TEST_CASE("auto routes universal formulas to the fast path") {
  Scratch s;
  const auto inst = s.write("r.inst", "domain 0 1\nrel R 1\n0\n1\n\nteam y\n0\n");
  auto r = tool({"--report", "-", "check", "A x. (=(x;y) & R(x))", inst});
  CHECK(r.code == 0);
  CHECK(r.out.find("SAT-TEAM") != std::string::npos);
  CHECK(r.out.find("\"strategy\":\"universal\"") != std::string::npos);
}

TEST_CASE("budget exhaustion has its own exit code") {
  Scratch s;
  std::string text = "domain 0 1 2\nteam v1 v2 r1 r2 m e\n";
  const auto inst = s.write("big.inst", text + "0 0 0 0 1 1\n0 1 0 0 0 1\n0 1 0 1 1 1\n");
  auto r = tool({"--budget-team", "1", "check", "E x. (=(x,r1,r2,e;m) & =(v1,v2;x))", inst, "-s",
                 "brute"});
  CHECK(r.code == 4);
}

TEST_CASE("compile") {
  Scratch s;
  const auto inst = s.write("two.inst", kTwoRows);
  const auto cnf = s.path("out.cnf");
  const auto map = s.path("out.map");
  auto r = tool({"compile", "inc(x;y)", inst, "-t", "dualhorn", "-o", cnf, "--map", map});
  REQUIRE(r.code == 0);
  const Structure A({"0", "1"});
  const auto expected = dualhorn_clause_count(A, {"x", "y"}, *parse("inc(x;y)"));
  CHECK(r.out == "variables 4\nclauses " + std::to_string(expected) + "\n");
  const Cnf back = parse_dimacs(Scratch::read(cnf));
  CHECK(back.size() == expected);
  CHECK(solve_dual_horn(back).sat);
  CHECK(count_lines(Scratch::read(map)) == 4);

  CHECK(tool({"compile", "E z. =(x;z)", inst, "-t", "twosat"}).code == 3);
  CHECK(tool({"compile", "=(x;y)", inst, "-t", "dualhorn"}).code == 3);
  CHECK(tool({"compile", "=(x;y)", inst, "-t", "cnf"}).out.rfind("p cnf 4 ", 0) == 0);
}

TEST_CASE("width and classify") {
  CHECK(tool({"width", "=(x;y) | =(u;v)"}).out == "2\n");
  CHECK(tool({"width", "R(x) & x=y"}).out == "0\n");
  CHECK(tool({"classify", "inc(x;y)"}).out == "InclusionOnly\n");
  CHECK(tool({"classify", "A x. (=(x;y) & R(x))"}).out == "UniversalConj\n");
}

TEST_CASE("gadget") {
  Scratch s;
  const auto graph = s.write("g.graph", "vertices 4\n0 1\n1 2\n0 2\n2 3\n");
  const auto out = s.path("g.inst");
  const auto phi = s.path("g.phi");
  REQUIRE(tool({"gadget", "coloring", graph, "-o", out, "-f", phi}).code == 0);
  CHECK(Scratch::read(out) ==
        Scratch::read(std::string(TEAMCHECK_TEST_DATA) + "/coloring_example.inst"));
  CHECK(tool({"check", "@" + phi, out, "-s", "brute"}).out == "NOT-SAT-TEAM\n");

  const auto one = s.write("one.cnf", "p cnf 1 1\n1 1 1 0\n");
  auto r = tool({"gadget", "3sat", one});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("# formula: ", 0) == 0);
  const auto rows = r.out.substr(r.out.find("team "));
  CHECK(count_lines(rows) == 9);  // header plus 6 + 2 rows

  const auto k3 = s.write("k3.graph", "vertices 3\n0 1\n1 2\n0 2\n");
  const auto cover = tool({"gadget", "cliquecover", k3}).out;
  CHECK(count_lines(cover.substr(cover.find("team "))) == 10);

  CHECK(tool({"gadget", "coloring", k3}).code != 0);
  CHECK(tool({"gadget", "bogus", k3}).code == 2);
}

TEST_CASE("solve") {
  Scratch s;
  auto r = tool({"solve", s.write("a.cnf", "p cnf 2 2\n-1 0\n1 2 0\n"), "-e", "dualhorn", "-m"});
  CHECK(r.out == "SAT\nv -1 2 0\n");
  CHECK(tool({"solve", s.write("b.cnf", "p cnf 1 2\n1 0\n-1 0\n"), "-e", "twosat"}).out == "UNSAT\n");
  CHECK(tool({"solve", s.write("c.cnf", "p cnf 2 3\n1 0\n2 0\n-1 -2 0\n")}).out == "UNSAT\n");
  CHECK(tool({"solve", s.write("d.cnf", "p cnf 2 1\n-1 -2 0\n"), "-e", "dualhorn"}).code == 3);
  CHECK(tool({"solve", s.write("e.cnf", "p cnf 1 1\n2 0\n")}).code == 2);
}

TEST_CASE("selftest") {
  Scratch s;
  const auto inst = s.write("two.inst", kTwoRows);
  auto r = tool({"selftest", "inc(x;y)", inst});
  CHECK(r.code == 0);
  CHECK(r.out.find("agree") != std::string::npos);
  CHECK(r.out.find("brute SAT-TEAM") != std::string::npos);
  CHECK(r.out.find("dualhorn SAT-TEAM") != std::string::npos);
}
