#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "csr/number.hpp"

/// Surface syntax shared by smooth expressions and superring elements.
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | atom ['^' ['-'] integer]
///   atom   := number | 'x' integer | ('t' integer)+
///           | func '(' expr {',' expr} ')' | '(' expr ')'
///   func   := exp | log | sin | cos | tan | sqrt | flat | bump
///
/// Theta atoms ("t1t2") only make sense for superring elements; the smooth
/// expression converter rejects them.
namespace csr::syntax {

enum class Kind { Number, Var, Theta, Add, Mul, Div, Pow, Call };

struct Node {
  Kind kind = Kind::Number;
  Number number;             // Kind::Number
  int index = 0;             // variable index (Var) or exponent (Pow)
  std::vector<int> thetas;   // Kind::Theta, in written order
  std::string name;          // Kind::Call
  std::vector<Node> args;    // operands
  std::size_t position = 0;  // offset into the source text
};

bool is_function_name(std::string_view name);

/// Throws ParseError (with position) on malformed input or unknown identifiers.
Node parse(std::string_view text);

}  // namespace csr::syntax
