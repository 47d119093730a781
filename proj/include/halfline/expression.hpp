#pragma once

#include <string>
#include <vector>

#include "halfline/types.hpp"

namespace halfline {

/// Arithmetic expression in one real variable `x` with complex constants.
///
/// Grammar: + - * / ^, parentheses, numeric literals, imaginary literals
/// (`2.5i`, `i`), the constant `pi`, and the functions exp, sin, cos, sqrt.
/// Parsing compiles to a postfix program; evaluation is allocation-free apart
/// from a small stack.
class Expression {
 public:
  static Expression parse(const std::string& source);

  Complex operator()(Real x) const;
  const std::string& source() const { return source_; }

 private:
  enum class Op { Push, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Sin, Cos, Sqrt };
  struct Instr {
    Op op;
    Complex value{};
  };

  friend class ExpressionParser;
  std::string source_;
  std::vector<Instr> program_;
  int max_depth_ = 0;
};

}  // namespace halfline
