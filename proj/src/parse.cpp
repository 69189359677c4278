#include <cctype>

#include "teamcheck/error.hpp"
#include "teamcheck/formula.hpp"

namespace teamcheck {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  FormulaPtr run() {
    auto f = parse_disj();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(ParseError::Kind::Syntax, pos_, msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view s) {
    skip_ws();
    return text_.substr(pos_, s.size()) == s;
  }

  bool accept(std::string_view s) {
    if (!peek(s)) return false;
    pos_ += s.size();
    return true;
  }

  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }

  std::string peek_ident() {
    skip_ws();
    std::size_t p = pos_;
    if (p >= text_.size() || !ident_start(text_[p])) return {};
    while (p < text_.size() && ident_char(text_[p])) ++p;
    return std::string(text_.substr(pos_, p - pos_));
  }

  std::string ident() {
    auto id = peek_ident();
    if (id.empty()) fail("expected identifier");
    pos_ += id.size();
    return id;
  }

  // Character following the identifier at the cursor, skipping blanks.
  char after_ident(const std::string& id) {
    std::size_t p = pos_ + id.size();
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    return p < text_.size() ? text_[p] : '\0';
  }

  VarList var_list(bool allow_empty) {
    VarList out;
    skip_ws();
    if (peek(";") || peek(")")) {
      if (!allow_empty) fail("empty variable list");
      return out;
    }
    out.push_back(ident());
    while (accept(",")) out.push_back(ident());
    return out;
  }

  FormulaPtr parse_disj() {
    auto f = parse_conj();
    while (accept("|")) f = disj(f, parse_conj());
    return f;
  }

  FormulaPtr parse_conj() {
    auto f = parse_quant();
    while (accept("&")) f = conj(f, parse_quant());
    return f;
  }

  FormulaPtr parse_quant() {
    skip_ws();
    if (accept("(")) {
      auto f = parse_disj();
      expect(")");
      return f;
    }
    auto id = peek_ident();
    if (id == "E" || id == "A") {
      // Quantifier only if followed by a variable and a dot.
      std::size_t save = pos_;
      pos_ += id.size();
      auto var = peek_ident();
      if (!var.empty()) {
        pos_ += var.size();
        if (accept(".")) {
          auto body = parse_quant();
          return id == "E" ? exists(var, body) : forall(var, body);
        }
      }
      pos_ = save;
    }
    return parse_atom();
  }

  FormulaPtr parse_atom() {
    skip_ws();
    const std::size_t start = pos_;
    if (accept("=(")) {
      auto cond = var_list(true);
      expect(";");
      auto y = ident();
      expect(")");
      return dep(cond, y);
    }
    if (accept("!")) {
      auto id = peek_ident();
      if (id.empty() || after_ident(id) != '(' || id == "perp" || id == "inc")
        throw ParseError(ParseError::Kind::NegatedCompound, start,
                         "negation is only allowed in front of a relation literal");
      pos_ += id.size();
      expect("(");
      auto args = var_list(false);
      expect(")");
      return rel(id, args, false);
    }
    auto id = peek_ident();
    if (id.empty()) fail("expected atom");
    if (after_ident(id) == '(') {
      pos_ += id.size();
      expect("(");
      if (id == "perp") {
        auto left = var_list(false);
        expect(";");
        auto cond = var_list(true);
        expect(";");
        auto right = var_list(false);
        expect(")");
        return indep(left, cond, right);
      }
      if (id == "inc") {
        auto left = var_list(false);
        expect(";");
        auto right = var_list(false);
        expect(")");
        if (left.size() != right.size())
          throw ParseError(ParseError::Kind::ArityMismatch, start,
                           "inclusion atom tuples differ in length");
        return inc(left, right);
      }
      auto args = var_list(false);
      expect(")");
      return rel(id, args, true);
    }
    pos_ += id.size();
    bool positive;
    if (accept("!="))
      positive = false;
    else if (accept("="))
      positive = true;
    else
      fail("expected '=' or '!=' after variable");
    auto rhs = ident();
    return eq(id, rhs, positive);
  }
};

std::string join(const VarList& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ',';
    out += vs[i];
  }
  return out;
}

int precedence(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::Or: return 1;
    case NodeKind::And: return 2;
    default: return 3;
  }
}

void render_into(const Formula& f, int min_prec, std::string& out) {
  const bool parens = precedence(f) < min_prec;
  if (parens) out += '(';
  switch (f.kind()) {
    case NodeKind::RelLit:
      if (!f.positive()) out += '!';
      out += f.relation() + "(" + join(f.tuple(0)) + ")";
      break;
    case NodeKind::EqLit:
      out += f.tuple(0)[0] + (f.positive() ? " = " : " != ") + f.tuple(0)[1];
      break;
    case NodeKind::Dep:
      out += "=(" + join(f.tuple(0)) + ";" + f.tuple(1)[0] + ")";
      break;
    case NodeKind::Indep:
      out += "perp(" + join(f.tuple(0)) + ";" + join(f.tuple(1)) + ";" + join(f.tuple(2)) + ")";
      break;
    case NodeKind::Inc:
      out += "inc(" + join(f.tuple(0)) + ";" + join(f.tuple(1)) + ")";
      break;
    case NodeKind::And:
      render_into(f.lhs(), 2, out);
      out += " & ";
      render_into(f.rhs(), 3, out);
      break;
    case NodeKind::Or:
      render_into(f.lhs(), 1, out);
      out += " | ";
      render_into(f.rhs(), 2, out);
      break;
    case NodeKind::Exists:
    case NodeKind::Forall:
      out += f.kind() == NodeKind::Exists ? "E " : "A ";
      out += f.bound() + ". ";
      render_into(f.body(), 3, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

FormulaPtr parse(std::string_view text) { return Parser(text).run(); }

std::string render(const Formula& phi) {
  std::string out;
  render_into(phi, 1, out);
  return out;
}

}  // namespace teamcheck
