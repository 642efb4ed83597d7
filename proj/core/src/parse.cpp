#include "varjet/parse.hpp"

#include <cctype>

namespace varjet {

namespace {

struct Parser {
  const std::string& text;
  const BundleSignature& sig;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c))
      throw parse_error(std::string("expected '") + c + "'", pos);
  }

  Expr parse() {
    Expr e = sum();
    skip_ws();
    if (pos != text.size()) throw parse_error("trailing input", pos);
    return e;
  }

  Expr sum() {
    Expr e;
    char c = peek();
    if (c == '-') {
      ++pos;
      e = -product();
    } else {
      e = product();
    }
    while (true) {
      c = peek();
      if (c == '+') {
        ++pos;
        e = e + product();
      } else if (c == '-') {
        ++pos;
        e = e - product();
      } else {
        break;
      }
    }
    return e;
  }

  Expr product() {
    Expr e = unary();
    while (true) {
      char c = peek();
      if (c == '*') {
        ++pos;
        e = e * unary();
      } else if (c == '/') {
        ++pos;
        size_t at = pos;
        Expr d = unary();
        if (d.is_zero()) throw parse_error("division by zero", at);
        e = e / d;
      } else {
        break;
      }
    }
    return e;
  }

  Expr unary() {
    if (peek() == '-') {
      ++pos;
      return -unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (peek() == '^') {
      ++pos;
      int n = exponent();
      return pow(base, n);
    }
    return base;
  }

  // integer exponent, optionally signed or parenthesized: ^2, ^-2, ^(-2)
  int exponent() {
    skip_ws();
    bool paren = eat('(');
    skip_ws();
    bool neg = eat('-');
    skip_ws();
    size_t at = pos;
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      throw parse_error("expected integer exponent", pos);
    long long v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      if (v > 1000000) throw parse_error("exponent too large", at);
      ++pos;
    }
    if (paren) expect(')');
    return static_cast<int>(neg ? -v : v);
  }

  Expr primary() {
    char c = peek();
    if (c == '(') {
      ++pos;
      Expr e = sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return symbol();
    throw parse_error("unexpected character", pos);
  }

  Expr number() {
    skip_ws();
    size_t at = pos;
    std::string digits;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      digits += text[pos++];
    if (digits.empty()) throw parse_error("expected number", at);
    return Expr::constant(Rational(boost::multiprecision::cpp_int(digits)));
  }

  Expr symbol() {
    skip_ws();
    size_t at = pos;
    std::string name;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos]))))
      name += text[pos++];

    // function call
    if (pos < text.size() && text[pos] == '(') {
      Func f;
      if (name == "sin") f = Func::Sin;
      else if (name == "cos") f = Func::Cos;
      else if (name == "exp") f = Func::Exp;
      else if (name == "log") f = Func::Log;
      else throw parse_error("unknown function: " + name, at);
      ++pos;
      Expr arg = sum();
      expect(')');
      return Expr::apply(f, arg);
    }

    // jet coordinate: field '_' subscript of base names
    if (pos < text.size() && text[pos] == '_') {
      auto field = sig.field_index(name);
      if (!field)
        throw parse_error("not a field identifier: " + name, at);
      ++pos;
      size_t sub_at = pos;
      std::string sub;
      while (pos < text.size() &&
             std::isalnum(static_cast<unsigned char>(text[pos])))
        sub += text[pos++];
      if (sub.empty()) throw parse_error("empty derivative subscript", sub_at);
      MultiIndex I(sig.base_dim());
      size_t k = 0;
      while (k < sub.size()) {
        // greedy longest base-name match
        int best = -1;
        size_t best_len = 0;
        for (int d = 0; d < sig.base_dim(); ++d) {
          const std::string& bn = sig.base_name(d);
          if (bn.size() > best_len && sub.compare(k, bn.size(), bn) == 0) {
            best = d;
            best_len = bn.size();
          }
        }
        if (best < 0)
          throw parse_error("derivative subscript is not a base name: " +
                                sub.substr(k),
                            sub_at + k);
        I.counts[static_cast<size_t>(best)] += 1;
        k += best_len;
      }
      return Expr::jet(*field, std::move(I));
    }

    if (auto b = sig.base_index(name)) return Expr::base_coord(*b);
    if (auto f = sig.field_index(name))
      return Expr::jet(*f, MultiIndex(sig.base_dim()));
    if (sig.is_param(name)) return Expr::parameter(name);
    throw parse_error("unknown identifier: " + name, at);
  }
};

}  // namespace

Expr parse_expression(const std::string& text, const BundleSignature& sig) {
  Parser p{text, sig};
  return p.parse();
}

}  // namespace varjet
