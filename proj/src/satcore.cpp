#include "teamcheck/satcore.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "teamcheck/error.hpp"

namespace teamcheck {

std::size_t Cnf::literal_count() const {
  std::size_t n = 0;
  for (const auto& c : clauses_) n += c.size();
  return n;
}

bool Cnf::add_clause(const Clause& c) {
  for (Literal l : c) {
    if (l == 0) throw PreconditionError("literal 0 is not a variable");
    if (var_of(l) > num_vars_)
      throw PreconditionError("literal " + std::to_string(l) + " exceeds the variable count");
  }
  Clause out;
  out.reserve(c.size());
  if (c.size() <= 16) {
    for (Literal l : c) {
      if (std::find(out.begin(), out.end(), -l) != out.end()) return false;
      if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    }
  } else {
    std::unordered_set<Literal> seen;
    for (Literal l : c) {
      if (seen.count(-l)) return false;
      if (seen.insert(l).second) out.push_back(l);
    }
  }
  clauses_.push_back(std::move(out));
  return true;
}

int VarMap::add(const std::string& label, const Tuple& tuple) {
  auto key = std::make_pair(label, tuple);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  entries_.push_back(Entry{label, tuple});
  const int v = static_cast<int>(entries_.size());
  index_.emplace(std::move(key), v);
  return v;
}

std::optional<int> VarMap::find(const std::string& label, const Tuple& tuple) const {
  auto it = index_.find(std::make_pair(label, tuple));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool is_dual_horn(const Cnf& f) {
  for (const auto& c : f.clauses())
    if (std::count_if(c.begin(), c.end(), [](Literal l) { return l < 0; }) > 1) return false;
  return true;
}

bool is_2cnf(const Cnf& f) {
  return std::all_of(f.clauses().begin(), f.clauses().end(),
                     [](const Clause& c) { return c.size() <= 2; });
}

bool satisfies(const Cnf& f, const std::vector<bool>& model) {
  for (const auto& c : f.clauses()) {
    bool ok = false;
    for (Literal l : c)
      if (model.at(static_cast<std::size_t>(var_of(l))) == (l > 0)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

SatResult solve_dual_horn(const Cnf& f) {
  if (!is_dual_horn(f)) throw PreconditionError("formula is not dual-Horn");
  const auto n = static_cast<std::size_t>(f.num_vars());
  const auto& cls = f.clauses();
  std::vector<std::vector<std::size_t>> pos_occ(n + 1);
  std::vector<std::size_t> alive(cls.size(), 0);  // positive literals not yet false
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    for (Literal l : cls[i])
      if (l > 0) {
        pos_occ[static_cast<std::size_t>(l)].push_back(i);
        ++alive[i];
      }
    if (alive[i] == 0) queue.push_back(i);
  }
  std::vector<bool> model(n + 1, true);
  model[0] = false;
  while (!queue.empty()) {
    const std::size_t i = queue.back();
    queue.pop_back();
    auto neg = std::find_if(cls[i].begin(), cls[i].end(), [](Literal l) { return l < 0; });
    if (neg == cls[i].end()) return {};  // all positives false, nothing to flip
    const auto v = static_cast<std::size_t>(-*neg);
    if (!model[v]) continue;
    model[v] = false;
    for (std::size_t j : pos_occ[v])
      if (--alive[j] == 0) queue.push_back(j);
  }
  return {true, std::move(model)};
}

SatResult solve_2sat(const Cnf& f) {
  if (!is_2cnf(f)) throw PreconditionError("formula has a clause wider than 2");
  const std::size_t n = static_cast<std::size_t>(f.num_vars());
  // node 2(v-1) is v, 2(v-1)+1 is ¬v
  auto node = [](Literal l) {
    return 2 * static_cast<std::size_t>(var_of(l) - 1) + (l < 0 ? 1 : 0);
  };
  std::vector<std::vector<std::size_t>> adj(2 * n);
  for (const auto& c : f.clauses()) {
    if (c.empty()) return {};
    const Literal a = c[0], b = c.size() == 2 ? c[1] : c[0];
    adj[node(-a)].push_back(node(b));
    adj[node(-b)].push_back(node(a));
  }

  // Iterative Tarjan; components are numbered in reverse topological order.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(2 * n, kNone), low(2 * n), comp(2 * n, kNone);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;
  std::size_t counter = 0, ncomp = 0;
  for (std::size_t root = 0; root < 2 * n; ++root) {
    if (index[root] != kNone) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    while (!call.empty()) {
      auto& [v, k] = call.back();
      if (k < adj[v].size()) {
        const std::size_t w = adj[v][k++];
        if (index[w] == kNone) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          call.emplace_back(w, 0);
        } else if (comp[w] == kNone) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  std::vector<bool> model(n + 1, false);
  for (std::size_t v = 0; v < n; ++v) {
    if (comp[2 * v] == comp[2 * v + 1]) return {};
    model[v + 1] = comp[2 * v] < comp[2 * v + 1];
  }
  return {true, std::move(model)};
}

namespace {

class Dpll {
 public:
  explicit Dpll(const Cnf& f) : f_(f), n_(static_cast<std::size_t>(f.num_vars())) {}

  SatResult run() {
    value_.assign(n_ + 1, 0);
    watches_.assign(2 * (n_ + 1), {});
    for (std::size_t i = 0; i < f_.size(); ++i) {
      const auto& c = f_.clauses()[i];
      if (c.empty()) return {};
      if (c.size() == 1) {
        if (value(c[0]) < 0) return {};
        if (value(c[0]) == 0) assign(c[0]);
        continue;
      }
      watches_[slot(c[0])].push_back(i);
      watches_[slot(c[1])].push_back(i);
    }
    clauses_ = f_.clauses();
    levels_.clear();
    while (true) {
      if (!propagate()) {
        if (!backtrack()) return {};
        continue;
      }
      std::size_t v = 1;
      while (v <= n_ && value_[v] != 0) ++v;
      if (v > n_) break;
      levels_.push_back({trail_.size(), false});
      assign(static_cast<Literal>(v));
    }
    std::vector<bool> model(n_ + 1, false);
    for (std::size_t v = 1; v <= n_; ++v) model[v] = value_[v] > 0;
    return {true, std::move(model)};
  }

 private:
  struct Level {
    std::size_t trail_start;
    bool flipped;
  };

  const Cnf& f_;
  std::size_t n_;
  std::vector<Clause> clauses_;  // watched literals sit in positions 0 and 1
  std::vector<signed char> value_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<Literal> trail_;
  std::size_t head_ = 0;
  std::vector<Level> levels_;

  static std::size_t slot(Literal l) {
    return 2 * static_cast<std::size_t>(var_of(l)) + (l < 0 ? 1 : 0);
  }
  int value(Literal l) const {
    const int v = value_[static_cast<std::size_t>(var_of(l))];
    return l > 0 ? v : -v;
  }
  void assign(Literal l) {
    value_[static_cast<std::size_t>(var_of(l))] = l > 0 ? 1 : -1;
    trail_.push_back(l);
  }

  bool propagate() {
    while (head_ < trail_.size()) {
      const Literal falsified = -trail_[head_++];
      auto& ws = watches_[slot(falsified)];
      for (std::size_t k = 0; k < ws.size();) {
        Clause& c = clauses_[ws[k]];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (value(c[0]) > 0) {
          ++k;
          continue;
        }
        bool moved = false;
        for (std::size_t j = 2; j < c.size(); ++j) {
          if (value(c[j]) >= 0) {
            std::swap(c[1], c[j]);
            watches_[slot(c[1])].push_back(ws[k]);
            ws[k] = ws.back();
            ws.pop_back();
            moved = true;
            break;
          }
        }
        if (moved) continue;
        if (value(c[0]) < 0) return false;
        if (value(c[0]) == 0) assign(c[0]);
        ++k;
      }
    }
    return true;
  }

  bool backtrack() {
    while (!levels_.empty() && levels_.back().flipped) {
      undo_to(levels_.back().trail_start);
      levels_.pop_back();
    }
    if (levels_.empty()) return false;
    Level& top = levels_.back();
    const Literal decision = trail_[top.trail_start];
    undo_to(top.trail_start);
    top.flipped = true;
    assign(-decision);
    return true;
  }

  void undo_to(std::size_t size) {
    while (trail_.size() > size) {
      value_[static_cast<std::size_t>(var_of(trail_.back()))] = 0;
      trail_.pop_back();
    }
    head_ = std::min(head_, size);
  }
};

}  // namespace

SatResult solve_dpll(const Cnf& f) { return Dpll(f).run(); }

}  // namespace teamcheck
