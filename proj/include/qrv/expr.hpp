// Copyright 2026 The qrv authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QRV_EXPR_HPP
#define QRV_EXPR_HPP

#include <cctype>
#include <cmath>
#include <map>
#include <string>

#include "qrv/error.hpp"

namespace qrv {

// Arithmetic over doubles with named variables: + - * / ^ (right
// associative), unary minus, parentheses, and floor/min/max/pow calls.
// Used for coefficient templates indexed by an integer metavariable.
class ScalarExpr {
 public:
  explicit ScalarExpr(std::string text) : text_(std::move(text)) {}

  double eval(const std::map<std::string, double>& env = {}) const {
    Cursor c{text_, 0, &env};
    double v = parse_sum(c);
    skip(c);
    if (c.pos != c.text.size())
      fail(ErrorKind::SyntaxError,
           "trailing input in expression '" + c.text + "'");
    return v;
  }

  const std::string& text() const { return text_; }

 private:
  struct Cursor {
    const std::string& text;
    std::size_t pos;
    const std::map<std::string, double>* env;
  };

  static void skip(Cursor& c) {
    while (c.pos < c.text.size() && std::isspace(c.text[c.pos])) ++c.pos;
  }

  static bool eat(Cursor& c, char ch) {
    skip(c);
    if (c.pos < c.text.size() && c.text[c.pos] == ch) {
      ++c.pos;
      return true;
    }
    return false;
  }

  static double parse_sum(Cursor& c) {
    double v = parse_product(c);
    for (;;) {
      if (eat(c, '+')) v += parse_product(c);
      else if (eat(c, '-')) v -= parse_product(c);
      else return v;
    }
  }

  static double parse_product(Cursor& c) {
    double v = parse_unary(c);
    for (;;) {
      if (eat(c, '*')) v *= parse_unary(c);
      else if (eat(c, '/')) v /= parse_unary(c);
      else return v;
    }
  }

  static double parse_unary(Cursor& c) {
    if (eat(c, '-')) return -parse_unary(c);
    return parse_power(c);
  }

  static double parse_power(Cursor& c) {
    double base = parse_primary(c);
    if (eat(c, '^')) return std::pow(base, parse_unary(c));
    return base;
  }

  static double parse_primary(Cursor& c) {
    skip(c);
    if (c.pos >= c.text.size())
      fail(ErrorKind::SyntaxError, "unexpected end of expression");
    const char ch = c.text[c.pos];
    if (ch == '(') {
      ++c.pos;
      double v = parse_sum(c);
      if (!eat(c, ')'))
        fail(ErrorKind::SyntaxError, "missing ')' in expression");
      return v;
    }
    if (std::isdigit(ch) || ch == '.') {
      std::size_t used = 0;
      double v = std::stod(c.text.substr(c.pos), &used);
      c.pos += used;
      return v;
    }
    if (std::isalpha(ch) || ch == '_') {
      std::size_t start = c.pos;
      while (c.pos < c.text.size() &&
             (std::isalnum(c.text[c.pos]) || c.text[c.pos] == '_'))
        ++c.pos;
      std::string name = c.text.substr(start, c.pos - start);
      if (eat(c, '(')) {
        double a = parse_sum(c);
        double b = 0;
        bool binary = false;
        if (eat(c, ',')) {
          b = parse_sum(c);
          binary = true;
        }
        if (!eat(c, ')'))
          fail(ErrorKind::SyntaxError, "missing ')' after " + name);
        if (name == "floor" && !binary) return std::floor(a);
        if (name == "abs" && !binary) return std::abs(a);
        if (name == "sqrt" && !binary) return std::sqrt(a);
        if (name == "min" && binary) return std::min(a, b);
        if (name == "max" && binary) return std::max(a, b);
        if (name == "pow" && binary) return std::pow(a, b);
        fail(ErrorKind::SyntaxError, "unknown function " + name);
      }
      auto it = c.env->find(name);
      if (it == c.env->end())
        fail(ErrorKind::SyntaxError, "unbound variable " + name);
      return it->second;
    }
    fail(ErrorKind::SyntaxError,
         std::string("unexpected character '") + ch + "' in expression");
  }

  std::string text_;
};

inline double eval_expr(const std::string& text,
                        const std::map<std::string, double>& env = {}) {
  return ScalarExpr(text).eval(env);
}

inline std::int64_t eval_index(const std::string& text,
                               const std::map<std::string, double>& env = {}) {
  const double v = eval_expr(text, env);
  return static_cast<std::int64_t>(std::llround(v));
}

}  // namespace qrv

#endif  // QRV_EXPR_HPP
