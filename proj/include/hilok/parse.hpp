#ifndef HILOK_PARSE_HPP
#define HILOK_PARSE_HPP

#include <cctype>
#include <string>
#include <vector>

#include "hilok/tower.hpp"

namespace hilok {

struct Token {
  enum Kind { Num, Ident, Sym, End } kind;
  std::string text;
  long num = 0;
  std::size_t pos = 0;
};

inline std::vector<Token> tokenize(const std::string& s, const char* op) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      long v = 0;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
        v = v * 10 + (s[j] - '0');
        if (v > 1000000000L) fail(ErrorKind::SyntaxError, op, "integer literal too large");
        ++j;
      }
      out.push_back({Token::Num, s.substr(i, j - i), v, i});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::Ident, s.substr(i, j - i), 0, i});
      i = j;
      continue;
    }
    if (std::string("+-*/^(){},[]@=").find(c) != std::string::npos) {
      out.push_back({Token::Sym, std::string(1, c), 0, i});
      ++i;
      continue;
    }
    fail(ErrorKind::SyntaxError, op, "unexpected character '" + std::string(1, c) + "' at " + std::to_string(i));
  }
  out.push_back({Token::End, "", 0, s.size()});
  return out;
}

/// Recursive-descent reader for element expressions; forms and symbols build
/// on it (see forms.hpp and kmilnor.hpp).
class ExprReader {
 public:
  ExprReader(Spec spec, const std::string& text, const char* op = "parse_element")
      : spec_(std::move(spec)), toks_(tokenize(text, op)), op_(op) {}

  const Spec& spec() const { return spec_; }
  const Token& peek(int k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_sym(const char* s) const { return peek().kind == Token::Sym && peek().text == s; }
  bool at_ident(const char* s) const { return peek().kind == Token::Ident && peek().text == s; }
  bool at_end() const { return peek().kind == Token::End; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  void expect(const char* s) {
    if (!at_sym(s)) error(std::string("expected '") + s + "'");
    next();
  }
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::SyntaxError, op_, what + " at offset " + std::to_string(peek().pos));
  }
  void expect_end() {
    if (!at_end()) error("unexpected trailing input '" + peek().text + "'");
  }

  TowerElement expr() {
    TowerElement acc = TowerElement::zero(spec_);
    bool first = true;
    for (;;) {
      bool minus = false;
      if (at_sym("+") || at_sym("-")) {
        minus = next().text == "-";
      } else if (!first) {
        break;
      }
      TowerElement t = term();
      acc = minus ? acc - t : acc + t;
      first = false;
    }
    return acc;
  }

  TowerElement term() {
    TowerElement acc = unary();
    for (;;) {
      if (at_sym("*")) {
        next();
        acc = acc * unary();
      } else if (at_sym("/")) {
        next();
        TowerElement d = unary();
        if (d.is_exact_zero()) fail(ErrorKind::DivisionByZero, op_, "division by zero");
        acc = acc / d;
      } else if (starts_primary()) {
        acc = acc * unary();
      } else {
        break;
      }
    }
    return acc;
  }

  bool starts_primary() const {
    const Token& t = peek();
    if (t.kind == Token::Num) return true;
    if (t.kind == Token::Sym) return t.text == "(";
    if (t.kind == Token::Ident) return t.text != "dlog" && t.text != "d";
    return false;
  }

  TowerElement unary() {
    if (at_sym("-")) {
      next();
      return -unary();
    }
    return power();
  }

  long integer_exponent() {
    bool neg = false;
    bool paren = false;
    if (at_sym("(")) {
      paren = true;
      next();
    }
    if (at_sym("-")) {
      neg = true;
      next();
    }
    if (peek().kind != Token::Num) error("expected integer exponent");
    long e = next().num;
    if (paren) expect(")");
    return neg ? -e : e;
  }

  TowerElement power() {
    if (at_ident("w") && peek(1).kind == Token::Sym && peek(1).text == "^") {
      next();
      next();
      long e = integer_exponent();
      const GFField& F = spec_->F();
      return TowerElement::scalar(spec_, F.pow(F.gen(), e));
    }
    TowerElement b = primary();
    if (at_sym("^")) {
      next();
      long e = integer_exponent();
      if (e < 0 && b.is_exact_zero()) fail(ErrorKind::DivisionByZero, op_, "negative power of zero");
      return b.pow(e);
    }
    return b;
  }

  TowerElement primary() {
    const Token& t = peek();
    if (t.kind == Token::Num) {
      long v = next().num;
      return TowerElement::from_int(spec_, v);
    }
    if (t.kind == Token::Ident) {
      std::string name = next().text;
      if (name == "w") {
        if (spec_->F().f() == 1) error("generator w undefined over a prime field");
        return TowerElement::scalar(spec_, spec_->F().gen());
      }
      if (name == "O") return big_o();
      int idx = spec_->var_index(name);
      if (idx == 0) error("unknown variable '" + name + "'");
      return TowerElement::var(spec_, idx);
    }
    if (at_sym("(")) {
      next();
      TowerElement e = expr();
      expect(")");
      return e;
    }
    error("unexpected token '" + t.text + "'");
  }

  TowerElement big_o() {
    expect("(");
    if (peek().kind == Token::Num && peek().num == 1) {
      next();
      expect(")");
      std::vector<int> E(spec_->n(), 0);
      return TowerElement::big_o(spec_, E, 1);
    }
    if (peek().kind != Token::Ident) error("O() expects a variable power");
    int idx = spec_->var_index(next().text);
    if (idx == 0) error("unknown variable in O()");
    long k = 1;
    if (at_sym("^")) {
      next();
      k = integer_exponent();
    }
    expect(")");
    std::vector<int> E(spec_->n(), 0);
    E[idx - 1] = static_cast<int>(k);
    return TowerElement::big_o(spec_, E, idx);
  }

 private:
  Spec spec_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const char* op_;
};

inline TowerElement parse_element(const Spec& spec, const std::string& text) {
  ExprReader r(spec, text);
  if (r.at_end()) r.error("empty expression");
  TowerElement e = r.expr();
  r.expect_end();
  return e;
}

/// Field spec: F(p) or F(p^f), then ((name)) per variable, then optionally
/// @prec=P_1,...,P_n. A non-empty prec_override replaces the @prec list.
inline Spec parse_spec(const std::string& text, const std::vector<int>& prec_override = {}) {
  const char* op = "parse_spec";
  auto toks = tokenize(text, op);
  std::size_t i = 0;
  auto sym = [&](const char* s) {
    if (toks[i].kind != Token::Sym || toks[i].text != s)
      fail(ErrorKind::SyntaxError, op, std::string("expected '") + s + "' at offset " + std::to_string(toks[i].pos));
    ++i;
  };
  auto num = [&]() {
    if (toks[i].kind != Token::Num) fail(ErrorKind::SyntaxError, op, "expected integer at offset " + std::to_string(toks[i].pos));
    return static_cast<int>(toks[i++].num);
  };
  if (toks[i].kind != Token::Ident || toks[i].text != "F") fail(ErrorKind::SyntaxError, op, "field spec must start with F(");
  ++i;
  sym("(");
  int p = num();
  int f = 1;
  if (toks[i].kind == Token::Sym && toks[i].text == "^") {
    ++i;
    f = num();
  }
  sym(")");
  std::vector<std::string> names;
  while (toks[i].kind == Token::Sym && toks[i].text == "(") {
    ++i;
    sym("(");
    if (toks[i].kind != Token::Ident) fail(ErrorKind::SyntaxError, op, "expected variable name");
    names.push_back(toks[i++].text);
    sym(")");
    sym(")");
  }
  std::vector<int> prec;
  if (toks[i].kind == Token::Sym && toks[i].text == "@") {
    ++i;
    if (toks[i].kind != Token::Ident || toks[i].text != "prec") fail(ErrorKind::SyntaxError, op, "expected prec=");
    ++i;
    sym("=");
    prec.push_back(num());
    while (toks[i].kind == Token::Sym && toks[i].text == ",") {
      ++i;
      prec.push_back(num());
    }
  }
  if (toks[i].kind != Token::End) fail(ErrorKind::SyntaxError, op, "trailing input in field spec");
  if (!prec_override.empty()) {
    prec = prec_override;
    if (prec.size() == 1 && names.size() > 1) prec.assign(names.size(), prec_override[0]);
  }
  return make_spec(make_field(p, f), static_cast<int>(names.size()), names, prec);
}

}  // namespace hilok

#endif  // HILOK_PARSE_HPP
