#pragma once

#include <array>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "teamcheck/formula.hpp"
#include "teamcheck/model.hpp"
#include "teamcheck/satcore.hpp"

namespace teamcheck {

struct Cnf3Instance {
  int num_vars = 0;
  std::vector<std::array<Literal, 3>> clauses;
};

/// Undirected simple graph on vertices 0..n-1.
struct Graph {
  std::size_t num_vertices = 0;
  std::set<std::pair<std::size_t, std::size_t>> edges;  // stored with first < second

  /// Throws PreconditionError on a self-loop or an unknown vertex.
  void add_edge(std::size_t u, std::size_t v);
  bool adjacent(std::size_t u, std::size_t v) const;
};

struct GadgetInstance {
  Structure structure;
  Team team;
  FormulaPtr formula;
  std::string generator;
  std::string source;
};

/// DIMACS input where every clause has exactly three literals; repeated
/// literals are kept. Throws FormatError.
Cnf3Instance parse_cnf3(std::string_view text);
Cnf to_cnf(const Cnf3Instance& inst);

/// "vertices k" followed by one "u v" line per edge. Throws FormatError.
Graph parse_graph(std::string_view text);
std::string render_graph(const Graph& g);

/// 3-SAT to (w != 1 & x ⊥_t y) | (c1 ⊥_c c2 & x ⊥_z y). Six rows per clause
/// and two per variable; satisfiable iff the team satisfies the formula.
GadgetInstance gadget_3sat(const Cnf3Instance& inst);

/// Team {(v,v)} ∪ {(u,v),(v,u) : uv ∈ E} with (x⊥y) | (x⊥y) | (x⊥y) | x != y;
/// true iff the graph is covered by three cliques.
GadgetInstance gadget_clique_cover(const Graph& g);

/// n-colouring of a graph on n² vertices as E x. (=(x,r1,r2,e;m) & =(v1,v2;x))
/// over domain {0..n-1}. Requires n >= 2.
GadgetInstance gadget_coloring(const Graph& g, std::size_t n);

}  // namespace teamcheck
