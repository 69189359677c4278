#include <sstream>

#include "teamcheck/error.hpp"
#include "teamcheck/satcore.hpp"

namespace teamcheck {

std::string emit_dimacs(const Cnf& f) {
  std::string out = "p cnf " + std::to_string(f.num_vars()) + ' ' + std::to_string(f.size()) + '\n';
  for (const auto& c : f.clauses()) {
    for (Literal l : c) out += std::to_string(l) + ' ';
    out += "0\n";
  }
  return out;
}

std::string emit_manifest(const VarMap& m, const Structure& A) {
  std::string out;
  for (int v = 1; v <= m.size(); ++v) {
    const auto& e = m.entry(v);
    out += std::to_string(v) + ' ' + e.label;
    for (Elem x : e.tuple) out += ' ' + A.name(x);
    out += '\n';
  }
  return out;
}

RawDimacs parse_dimacs_raw(std::string_view text) {
  std::istringstream in{std::string(text)};
  RawDimacs out;
  bool header = false;
  long declared = 0;
  Clause current;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == 'c' || first == "%") continue;
    if (first == "p") {
      if (header) throw FormatError(lineno, "duplicate header");
      std::string fmt;
      long vars = -1, clauses = -1;
      std::string extra;
      if (!(ls >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0 || clauses < 0 || (ls >> extra))
        throw FormatError(lineno, "expected 'p cnf VARS CLAUSES'");
      out.num_vars = static_cast<int>(vars);
      declared = clauses;
      header = true;
      continue;
    }
    if (!header) throw FormatError(lineno, "clause before 'p cnf' header");
    ls.clear();
    ls.seekg(0);
    for (std::string tok; ls >> tok;) {
      long l;
      try {
        std::size_t used = 0;
        l = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw FormatError(lineno, "bad literal '" + tok + "'");
      }
      if (l == 0) {
        out.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if ((l < 0 ? -l : l) > out.num_vars)
        throw FormatError(lineno, "literal " + tok + " out of range");
      current.push_back(static_cast<Literal>(l));
    }
  }
  if (!header) throw FormatError(lineno == 0 ? 1 : lineno, "missing 'p cnf' header");
  if (!current.empty()) throw FormatError(lineno, "last clause is not terminated by 0");
  if (static_cast<long>(out.clauses.size()) != declared)
    throw FormatError(lineno, "header declares " + std::to_string(declared) + " clauses, found " +
                                  std::to_string(out.clauses.size()));
  return out;
}

Cnf parse_dimacs(std::string_view text) {
  auto raw = parse_dimacs_raw(text);
  Cnf f(raw.num_vars);
  for (const auto& c : raw.clauses) f.add_clause(c);
  return f;
}

}  // namespace teamcheck
