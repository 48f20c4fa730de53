#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "lauricella/rational_function.hpp"

namespace lauricella {

/// Terms in descending graded-lex order, e.g. "2*b1*x1^2 - 3/2*x2 + 1".
inline std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  const auto& vt = *p.vars();
  bool first = true;
  for (const auto& t : p.terms()) {
    Rational c = t.coeff;
    bool negative = c < 0;
    if (negative) c = -c;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    std::string mono;
    for (std::size_t v = 0; v < vt.size(); ++v) {
      auto e = t.mono.exp[v];
      if (!e) continue;
      if (!mono.empty()) mono += "*";
      mono += vt.name(v);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty())
      out += c.get_str();
    else if (c == 1)
      out += mono;
    else
      out += c.get_str() + "*" + mono;
  }
  return out;
}

/// "num" or "(num)/(f1^m1*f2...)" with the denominator factors in canonical order.
inline std::string to_string(const RationalFunction& f) {
  std::string num = to_string(f.num());
  if (f.den_factors().empty()) return num;
  std::string den;
  for (const auto& d : f.den_factors()) {
    if (!den.empty()) den += "*";
    den += "(" + to_string(d.poly) + ")";
    if (d.mult > 1) den += "^" + std::to_string(d.mult);
  }
  bool simple_num = f.num().size() == 1 && f.num().leading_coefficient() > 0;
  return (simple_num ? num : "(" + num + ")") + "/" + (f.den_factors().size() == 1 && f.den_factors()[0].mult == 1 ? den : "(" + den + ")");
}

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, const VarTablePtr& vt) : text_(text), vt_(vt) {}

  RationalFunction parse() {
    skip();
    if (at_end()) throw SyntaxError(pos_, "empty expression");
    RationalFunction r = expr();
    skip();
    if (!at_end()) throw SyntaxError(pos_, std::string("unexpected character '") + text_[pos_] + "'");
    return r;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RationalFunction expr() {
    RationalFunction acc = term();
    for (;;) {
      if (accept('+'))
        acc = acc + term();
      else if (accept('-'))
        acc = acc - term();
      else
        return acc;
    }
  }

  RationalFunction term() {
    RationalFunction acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        RationalFunction d = unary();
        if (d.is_zero()) throw Error(Errc::DivisionByZeroFunction, "division by an expression that is identically zero at position " + std::to_string(at));
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }

  RationalFunction unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RationalFunction power() {
    RationalFunction base = primary();
    if (accept('^')) {
      skip();
      bool negative = accept('-');
      skip();
      std::size_t start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) throw SyntaxError(pos_, "expected integer exponent");
      std::string digits(text_.substr(start, pos_ - start));
      if (digits.size() > 6) throw SyntaxError(start, "exponent too large");
      int e = std::stoi(digits);
      if (negative) {
        if (base.is_zero()) throw Error(Errc::DivisionByZeroFunction, "negative power of zero");
        e = -e;
      }
      return base.pow(e);
    }
    return base;
  }

  RationalFunction primary() {
    skip();
    if (at_end()) throw SyntaxError(pos_, "unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RationalFunction r = expr();
      if (!accept(')')) throw SyntaxError(pos_, "expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return RationalFunction::constant(vt_, Rational(Integer(std::string(text_.substr(start, pos_ - start)))));
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t start = pos_;
      ++pos_;
      while (!at_end() && ((text_[pos_] >= 'a' && text_[pos_] <= 'z') || std::isdigit(static_cast<unsigned char>(text_[pos_])))) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      auto idx = vt_->find(name);
      if (!idx) throw Error(Errc::UnknownVariable, "'" + name + "' at position " + std::to_string(start));
      return RationalFunction::variable(vt_, *idx);
    }
    throw SyntaxError(pos_, std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  VarTablePtr vt_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Grammar: integers, + - * / ^ (^ binds tightest, integer exponents), unary
/// minus, parentheses and variables [a-z][a-z0-9]* of the table.
inline RationalFunction parse_expr(std::string_view text, const VarTablePtr& vt) {
  return detail::ExprParser(text, vt).parse();
}

inline std::string print_expr(const RationalFunction& f) { return to_string(f); }

}  // namespace lauricella
