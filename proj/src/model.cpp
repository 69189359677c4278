#include "teamcheck/model.hpp"

#include <algorithm>
#include <sstream>

#include "teamcheck/error.hpp"

namespace teamcheck {

Structure::Structure(std::vector<std::string> domain) : names_(std::move(domain)) {
  if (names_.empty()) throw PreconditionError("structure domain must be non-empty");
  for (Elem i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second)
      throw PreconditionError("duplicate domain element '" + names_[i] + "'");
  }
}

std::optional<Elem> Structure::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Elem Structure::elem(std::string_view name) const {
  if (auto e = find(name)) return *e;
  throw UnknownName("element '" + std::string(name) + "' is not in the domain");
}

void Structure::add_relation(const std::string& name, std::size_t arity, std::set<Tuple> tuples) {
  if (relations_.count(name)) throw PreconditionError("duplicate relation '" + name + "'");
  for (const auto& t : tuples) {
    if (t.size() != arity) throw PreconditionError("tuple arity mismatch in relation " + name);
    for (Elem e : t)
      if (e >= names_.size()) throw PreconditionError("tuple element outside domain in " + name);
  }
  relations_.emplace(name, Relation{arity, std::move(tuples)});
}

const Relation* Structure::relation(std::string_view name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

Team::Team(VarList vars, std::vector<Tuple> rows) : vars_(std::move(vars)), rows_(std::move(rows)) {
  for (const auto& r : rows_)
    if (r.size() != vars_.size()) throw PreconditionError("row length differs from team domain");
  std::sort(rows_.begin(), rows_.end());
  rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
}

bool Team::insert(Tuple row) {
  if (row.size() != vars_.size()) throw PreconditionError("row length differs from team domain");
  auto it = std::lower_bound(rows_.begin(), rows_.end(), row);
  if (it != rows_.end() && *it == row) return false;
  rows_.insert(it, std::move(row));
  return true;
}

bool Team::contains(const Tuple& row) const {
  return std::binary_search(rows_.begin(), rows_.end(), row);
}

std::optional<std::size_t> Team::find_column(std::string_view v) const {
  for (std::size_t i = vars_.size(); i-- > 0;)
    if (vars_[i] == v) return i;
  return std::nullopt;
}

std::size_t Team::column(std::string_view v) const {
  if (auto c = find_column(v)) return *c;
  throw UnknownName("variable '" + std::string(v) + "' is not in the team domain");
}

std::vector<std::size_t> Team::columns(const VarList& vs) const {
  std::vector<std::size_t> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(column(v));
  return out;
}

Tuple project(std::span<const Elem> row, std::span<const std::size_t> cols) {
  Tuple out;
  out.reserve(cols.size());
  for (auto c : cols) out.push_back(row[c]);
  return out;
}

Team team_restrict(const Team& X, const std::set<Var>& W) {
  for (const auto& w : W) (void)X.column(w);
  VarList vars;
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < X.vars().size(); ++i) {
    const auto& v = X.vars()[i];
    if (W.count(v) && X.find_column(v) == i) {
      vars.push_back(v);
      cols.push_back(i);
    }
  }
  std::vector<Tuple> rows;
  rows.reserve(X.size());
  for (const auto& r : X.rows()) rows.push_back(project(r, cols));
  return Team(std::move(vars), std::move(rows));
}

std::set<Tuple> team_relation(const Team& X, const VarList& xs) {
  const auto cols = X.columns(xs);
  std::set<Tuple> out;
  for (const auto& r : X.rows()) out.insert(project(r, cols));
  return out;
}

namespace {

// Column the new value is written to, extending the variable list if needed.
std::pair<VarList, std::size_t> extended_vars(const Team& X, const Var& x) {
  VarList vars = X.vars();
  if (auto c = X.find_column(x)) return {vars, *c};
  vars.push_back(x);
  return {vars, vars.size() - 1};
}

Tuple with_value(const Tuple& row, std::size_t col, Elem m) {
  Tuple t = row;
  if (col == t.size())
    t.push_back(m);
  else
    t[col] = m;
  return t;
}

}  // namespace

Team team_extend_forall(const Team& X, const Structure& A, const Var& x) {
  auto [vars, col] = extended_vars(X, x);
  std::vector<Tuple> rows;
  rows.reserve(X.size() * A.size());
  for (const auto& r : X.rows())
    for (Elem m = 0; m < A.size(); ++m) rows.push_back(with_value(r, col, m));
  return Team(std::move(vars), std::move(rows));
}

Team team_extend_choice(const Team& X, const std::map<Tuple, std::set<Elem>>& F, const Var& x) {
  auto [vars, col] = extended_vars(X, x);
  std::vector<Tuple> rows;
  for (const auto& r : X.rows()) {
    auto it = F.find(r);
    if (it == F.end()) throw PreconditionError("choice function is undefined on a team row");
    if (it->second.empty()) throw PreconditionError("choice function maps a row to the empty set");
    for (Elem m : it->second) rows.push_back(with_value(r, col, m));
  }
  return Team(std::move(vars), std::move(rows));
}

namespace {

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

Tuple read_tuple(const Structure& A, const std::vector<std::string>& ws, std::size_t arity,
                 std::size_t lineno) {
  if (arity == 0) {
    if (ws.size() == 1 && ws[0] == "-") return {};
    throw FormatError(lineno, "zero-arity tuple must be written as '-'");
  }
  if (ws.size() != arity)
    throw FormatError(lineno, "expected " + std::to_string(arity) + " values, got " +
                                  std::to_string(ws.size()));
  Tuple t;
  for (const auto& w : ws) {
    auto e = A.find(w);
    if (!e) throw FormatError(lineno, "element '" + w + "' is not in the domain");
    t.push_back(*e);
  }
  return t;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    for (std::string l; std::getline(in, l);) {
      if (auto h = l.find('#'); h != std::string::npos) l.erase(h);
      lines.push_back(l);
    }
  }
  std::size_t i = 0;
  auto next_nonblank = [&]() {
    while (i < lines.size() && words(lines[i]).empty()) ++i;
  };

  next_nonblank();
  if (i == lines.size()) throw FormatError(1, "missing 'domain' header");
  auto head = words(lines[i]);
  if (head[0] != "domain" || head.size() < 2)
    throw FormatError(i + 1, "expected 'domain e1 ... ek'");
  std::optional<Structure> A;
  try {
    A.emplace(std::vector<std::string>(head.begin() + 1, head.end()));
  } catch (const PreconditionError& e) {
    throw FormatError(i + 1, e.what());
  }
  ++i;

  Team X;
  bool have_team = false;
  while (true) {
    next_nonblank();
    if (i == lines.size()) break;
    auto ws = words(lines[i]);
    const std::size_t header_line = i + 1;
    if (ws[0] == "rel") {
      if (have_team) throw FormatError(header_line, "relation after team section");
      if (ws.size() != 3) throw FormatError(header_line, "expected 'rel NAME ARITY'");
      std::size_t arity;
      try {
        std::size_t used = 0;
        arity = std::stoul(ws[2], &used);
        if (used != ws[2].size()) throw std::invalid_argument("arity");
      } catch (const std::exception&) {
        throw FormatError(header_line, "bad arity '" + ws[2] + "'");
      }
      std::set<Tuple> tuples;
      ++i;
      while (i < lines.size()) {
        auto tw = words(lines[i]);
        if (tw.empty()) break;
        tuples.insert(read_tuple(*A, tw, arity, i + 1));
        ++i;
      }
      try {
        A->add_relation(ws[1], arity, std::move(tuples));
      } catch (const PreconditionError& e) {
        throw FormatError(header_line, e.what());
      }
    } else if (ws[0] == "team") {
      if (have_team) throw FormatError(header_line, "duplicate team section");
      have_team = true;
      X = Team(VarList(ws.begin() + 1, ws.end()));
      ++i;
      for (; i < lines.size(); ++i) {
        auto rw = words(lines[i]);
        if (rw.empty()) continue;
        X.insert(read_tuple(*A, rw, X.vars().size(), i + 1));
      }
    } else {
      throw FormatError(header_line, "unexpected '" + ws[0] + "'");
    }
  }
  return Instance{std::move(*A), std::move(X)};
}

std::string render_instance(const Structure& A, const Team& X) {
  std::string out = "domain";
  for (const auto& n : A.names()) out += ' ' + n;
  out += '\n';
  auto tuple_line = [&](const Tuple& t) {
    if (t.empty()) return std::string("-\n");
    std::string line;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k) line += ' ';
      line += A.name(t[k]);
    }
    return line + '\n';
  };
  for (const auto& [name, r] : A.relations()) {
    out += "rel " + name + ' ' + std::to_string(r.arity) + '\n';
    for (const auto& t : r.tuples) out += tuple_line(t);
    out += '\n';
  }
  out += "team";
  for (const auto& v : X.vars()) out += ' ' + v;
  out += '\n';
  for (const auto& r : X.rows()) out += tuple_line(r);
  return out;
}

}  // namespace teamcheck
