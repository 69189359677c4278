#include "teamcheck/gadgets.hpp"

#include <algorithm>
#include <sstream>

#include "teamcheck/error.hpp"

namespace teamcheck {

void Graph::add_edge(std::size_t u, std::size_t v) {
  if (u >= num_vertices || v >= num_vertices) throw PreconditionError("edge uses an unknown vertex");
  if (u == v) throw PreconditionError("self-loop on vertex " + std::to_string(u));
  edges.emplace(std::min(u, v), std::max(u, v));
}

bool Graph::adjacent(std::size_t u, std::size_t v) const {
  return edges.count({std::min(u, v), std::max(u, v)}) > 0;
}

Cnf3Instance parse_cnf3(std::string_view text) {
  const auto raw = parse_dimacs_raw(text);
  Cnf3Instance out;
  out.num_vars = raw.num_vars;
  for (std::size_t i = 0; i < raw.clauses.size(); ++i) {
    const auto& c = raw.clauses[i];
    if (c.size() != 3)
      throw FormatError(i + 1, "clause " + std::to_string(i + 1) + " has " +
                                   std::to_string(c.size()) + " literals, expected 3");
    out.clauses.push_back({c[0], c[1], c[2]});
  }
  return out;
}

Cnf to_cnf(const Cnf3Instance& inst) {
  Cnf f(inst.num_vars);
  for (const auto& c : inst.clauses) f.add_clause({c[0], c[1], c[2]});
  return f;
}

Graph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  Graph g;
  bool header = false;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::string> w;
    for (std::string t; ls >> t;) w.push_back(t);
    if (w.empty()) continue;
    auto number = [&](const std::string& s) {
      try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size() || v < 0) throw std::invalid_argument(s);
        return static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        throw FormatError(lineno, "bad number '" + s + "'");
      }
    };
    if (!header) {
      if (w.size() != 2 || w[0] != "vertices") throw FormatError(lineno, "expected 'vertices K'");
      g.num_vertices = number(w[1]);
      header = true;
      continue;
    }
    if (w.size() != 2) throw FormatError(lineno, "expected 'U V'");
    try {
      g.add_edge(number(w[0]), number(w[1]));
    } catch (const PreconditionError& e) {
      throw FormatError(lineno, e.what());
    }
  }
  if (!header) throw FormatError(lineno == 0 ? 1 : lineno, "missing 'vertices K' header");
  return g;
}

std::string render_graph(const Graph& g) {
  std::string out = "vertices " + std::to_string(g.num_vertices) + '\n';
  for (auto [u, v] : g.edges) out += std::to_string(u) + ' ' + std::to_string(v) + '\n';
  return out;
}

GadgetInstance gadget_3sat(const Cnf3Instance& inst) {
  const auto m = static_cast<std::size_t>(inst.num_vars);
  const std::size_t n = inst.clauses.size();
  if (m == 0) throw PreconditionError("3-CNF needs at least one variable");
  for (const auto& c : inst.clauses)
    for (Literal l : c)
      if (l == 0 || static_cast<std::size_t>(var_of(l)) > m)
        throw PreconditionError("literal " + std::to_string(l) + " is out of range");

  // Domain: numbers 0..max(n,m) (clause and variable indices), the literal
  // elements, then the t-labels a_k actually used.
  std::vector<std::string> names;
  for (std::size_t i = 0; i <= std::max<std::size_t>({n, m, 1}); ++i) names.push_back(std::to_string(i));
  for (std::size_t i = 1; i <= m; ++i) names.push_back("v" + std::to_string(i));
  for (std::size_t i = 1; i <= m; ++i) names.push_back("neg_v" + std::to_string(i));
  std::vector<std::size_t> labels;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t k = 1; k <= 4; ++k) labels.push_back(6 * i + k);
  for (std::size_t i = 1; i <= m; ++i) labels.push_back(6 * (n + 1) + i);
  for (auto k : labels) names.push_back("a" + std::to_string(k));

  Structure A(names);
  A.add_relation("One", 1, {{A.elem("1")}});
  auto num = [&](std::size_t i) { return A.elem(std::to_string(i)); };
  auto lit = [&](Literal l) {
    return A.elem((l > 0 ? "v" : "neg_v") + std::to_string(var_of(l)));
  };
  auto a = [&](std::size_t k) { return A.elem("a" + std::to_string(k)); };

  Team X(VarList{"w", "c", "c1", "c2", "z", "x", "y", "t"});
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& c = inst.clauses[i - 1];
    for (std::size_t p = 0; p < 3; ++p) {
      // z holds the literal's variable, shared with that variable's own rows.
      const Elem z = num(static_cast<std::size_t>(var_of(c[p])));
      X.insert({num(0), num(i), num(1), num(1), z, lit(c[p]), lit(c[p]), a(6 * i + p + 1)});
    }
    X.insert({num(1), num(i), num(0), num(0), num(0), num(0), num(0), a(6 * i + 4)});
    X.insert({num(1), num(i), num(1), num(0), num(0), num(0), num(0), a(6 * i + 4)});
    X.insert({num(1), num(i), num(0), num(1), num(0), num(0), num(0), a(6 * i + 4)});
  }
  for (std::size_t i = 1; i <= m; ++i) {
    const auto li = static_cast<Literal>(i);
    X.insert({num(0), num(0), num(0), num(0), num(i), lit(li), lit(li), a(6 * (n + 1) + i)});
    X.insert({num(0), num(0), num(0), num(0), num(i), lit(-li), lit(-li), a(6 * (n + 1) + i)});
  }
  auto phi = parse("(!One(w) & perp(x;t;y)) | (perp(c1;c;c2) & perp(x;z;y))");
  return GadgetInstance{std::move(A), std::move(X), phi, "3sat",
                        std::to_string(m) + " variables, " + std::to_string(n) + " clauses"};
}

GadgetInstance gadget_clique_cover(const Graph& g) {
  if (g.num_vertices == 0) throw PreconditionError("graph has no vertices");
  std::vector<std::string> names;
  for (std::size_t v = 0; v < g.num_vertices; ++v) names.push_back(std::to_string(v));
  Structure A(names);
  Team X(VarList{"x", "y"});
  for (std::size_t v = 0; v < g.num_vertices; ++v) X.insert({Elem(v), Elem(v)});
  for (auto [u, v] : g.edges) {
    X.insert({Elem(u), Elem(v)});
    X.insert({Elem(v), Elem(u)});
  }
  auto phi = parse("perp(x;;y) | perp(x;;y) | perp(x;;y) | x != y");
  return GadgetInstance{std::move(A), std::move(X), phi, "cliquecover",
                        std::to_string(g.num_vertices) + " vertices, " +
                            std::to_string(g.edges.size()) + " edges"};
}

GadgetInstance gadget_coloring(const Graph& g, std::size_t n) {
  if (n < 2) throw PreconditionError("colouring gadget needs n >= 2");
  if (g.num_vertices != n * n)
    throw PreconditionError("colouring gadget needs exactly n^2 = " + std::to_string(n * n) +
                            " vertices");
  std::vector<std::string> names;
  for (std::size_t d = 0; d < n; ++d) names.push_back(std::to_string(d));
  Structure A(names);
  Team X(VarList{"v1", "v2", "r1", "r2", "m", "e"});
  for (std::size_t i = 0; i < n * n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const bool e = i == j || g.adjacent(i, j);  // edge to a smaller vertex j
      X.insert({Elem(i / n), Elem(i % n), Elem(j / n), Elem(j % n), Elem(i == j), Elem(e)});
    }
  }
  auto phi = parse("E x. (=(x,r1,r2,e;m) & =(v1,v2;x))");
  return GadgetInstance{std::move(A), std::move(X), phi, "coloring",
                        std::to_string(g.num_vertices) + " vertices, n = " + std::to_string(n)};
}

}  // namespace teamcheck
