#pragma once

#include <string>

#include "varjet/expr.hpp"

namespace varjet {

/// Syntax or resolution failure, with 0-based offset into the input text.
struct parse_error : std::runtime_error {
  size_t position;
  parse_error(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"),
        position(pos) {}
};

/// Parses the expression grammar: identifiers, jet coordinates `u_xxt`,
/// `+ - * / ^`, parentheses, `sin/cos/exp/log` calls, integer and `p/q`
/// rational literals. The result is in canonical normal form.
Expr parse_expression(const std::string& text, const BundleSignature& sig);

}  // namespace varjet
