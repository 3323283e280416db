#include <cctype>
#include <cstdlib>
#include <string>

#include "dbar/error.hpp"
#include "dbar/expr.hpp"

namespace dbar {

namespace {

class Parser {
 public:
  Parser(std::string_view text, int arity) : text_(text), arity_(arity) {}

  Expr parse_all() {
    Expr e = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expression() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    Expr e = pow(base, integer_exponent());
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '^') fail("chained '^' is ambiguous; add parentheses");
    return e;
  }

  int integer_exponent() {
    const bool paren = accept('(');
    bool negative = false;
    if (accept('-')) {
      negative = true;
    } else {
      accept('+');
    }
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      fail("only integer exponents are supported");
    }
    if (pos_ - start > 6) fail("exponent too large");
    int n = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (paren) expect(')');
    return negative ? -n : n;
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string token(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
      pos_ = start;
      fail("malformed number '" + token + "'");
    }
    // imaginary suffix: "3i", but not the start of an identifier such as "3in"
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        !(pos_ + 1 < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
      ++pos_;
      return Expr(cplx(0.0, v));
    }
    return Expr(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    if (name == "i") return Expr(cplx(0.0, 1.0));
    if (name.size() >= 2 && name[0] == 'z' && name.find_first_not_of("0123456789", 1) == std::string::npos) {
      const int idx = std::stoi(name.substr(1));
      if (idx < 1 || idx > 9) {
        pos_ = start;
        fail("variable index out of range in '" + name + "'");
      }
      if (idx > arity_) {
        throw ValidationError("variable " + name + " exceeds arity " + std::to_string(arity_) +
                              " at position " + std::to_string(start));
      }
      return Expr::variable(idx);
    }
    if (name == "conj" || name == "exp" || name == "sin" || name == "cos" || name == "pow") {
      expect('(');
      Expr a = expression();
      if (name == "pow") {
        expect(',');
        const int n = integer_exponent();
        expect(')');
        return pow(a, n);
      }
      expect(')');
      if (name == "conj") return conj(a);
      if (name == "exp") return exp(a);
      if (name == "sin") return sin(a);
      return cos(a);
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }

  std::string_view text_;
  int arity_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, int arity) {
  if (arity < 1 || arity > 9) throw ValidationError("arity must be in [1, 9]");
  return Parser(text, arity).parse_all();
}

}  // namespace dbar
