#include "halfline/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace halfline {

class ExpressionParser {
 public:
  explicit ExpressionParser(const std::string& s) : s_(s) {}

  Expression run() {
    Expression e;
    e.source_ = s_;
    out_ = &e.program_;
    expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    int depth = 0, max_depth = 0;
    for (const auto& ins : e.program_) {
      switch (ins.op) {
        case Expression::Op::Push:
        case Expression::Op::Var:
          ++depth;
          break;
        case Expression::Op::Add:
        case Expression::Op::Sub:
        case Expression::Op::Mul:
        case Expression::Op::Div:
        case Expression::Op::Pow:
          --depth;
          break;
        default:
          break;
      }
      max_depth = std::max(max_depth, depth);
    }
    e.max_depth_ = max_depth;
    return e;
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& why) const {
    throw SchemaError("expression '" + s_ + "' at offset " + std::to_string(pos_) + ": " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void emit(Op op, Complex v = {}) { out_->push_back({op, v}); }

  void expr() {
    term();
    while (true) {
      if (accept('+')) {
        term();
        emit(Op::Add);
      } else if (accept('-')) {
        term();
        emit(Op::Sub);
      } else {
        return;
      }
    }
  }
  void term() {
    unary();
    while (true) {
      if (accept('*')) {
        unary();
        emit(Op::Mul);
      } else if (accept('/')) {
        unary();
        emit(Op::Div);
      } else {
        return;
      }
    }
  }
  void unary() {
    if (accept('-')) {
      unary();
      emit(Op::Neg);
    } else if (accept('+')) {
      unary();
    } else {
      power();
    }
  }
  void power() {
    primary();
    if (accept('^')) {
      unary();  // right associative
      emit(Op::Pow);
    }
  }
  void primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      expr();
      if (!accept(')')) fail("expected ')'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const Real v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      if (pos_ < s_.size() && s_[pos_] == 'i' &&
          !(pos_ + 1 < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_ + 1])))) {
        ++pos_;
        emit(Op::Push, Complex(0.0, v));
      } else {
        emit(Op::Push, Complex(v, 0.0));
      }
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
      const std::string name = s_.substr(pos_, end - pos_);
      pos_ = end;
      if (name == "x") return emit(Op::Var);
      if (name == "i") return emit(Op::Push, kI);
      if (name == "pi") return emit(Op::Push, Complex(kPi, 0.0));
      Op fn;
      if (name == "exp") {
        fn = Op::Exp;
      } else if (name == "sin") {
        fn = Op::Sin;
      } else if (name == "cos") {
        fn = Op::Cos;
      } else if (name == "sqrt") {
        fn = Op::Sqrt;
      } else {
        fail("unknown identifier '" + name + "'");
      }
      if (!accept('(')) fail("expected '(' after " + name);
      expr();
      if (!accept(')')) fail("expected ')'");
      emit(fn);
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  std::vector<Expression::Instr>* out_ = nullptr;
};

Expression Expression::parse(const std::string& source) { return ExpressionParser(source).run(); }

Complex Expression::operator()(Real x) const {
  Complex stack[64];
  if (max_depth_ > 64) throw DomainError("expression too deeply nested");
  int top = 0;
  for (const auto& ins : program_) {
    switch (ins.op) {
      case Op::Push:
        stack[top++] = ins.value;
        break;
      case Op::Var:
        stack[top++] = Complex(x, 0.0);
        break;
      case Op::Add:
        --top;
        stack[top - 1] += stack[top];
        break;
      case Op::Sub:
        --top;
        stack[top - 1] -= stack[top];
        break;
      case Op::Mul:
        --top;
        stack[top - 1] *= stack[top];
        break;
      case Op::Div:
        --top;
        stack[top - 1] /= stack[top];
        break;
      case Op::Pow: {
        --top;
        const Complex b = stack[top];
        Complex& a = stack[top - 1];
        if (b.imag() == 0.0 && b.real() == std::round(b.real()) && std::abs(b.real()) <= 64) {
          // integer powers by repeated multiplication keep real inputs real
          int n = static_cast<int>(b.real());
          Complex base = n < 0 ? 1.0 / a : a, acc = 1.0;
          for (n = std::abs(n); n > 0; n >>= 1, base *= base)
            if (n & 1) acc *= base;
          a = acc;
        } else {
          a = std::pow(a, b);
        }
        break;
      }
      case Op::Neg:
        stack[top - 1] = -stack[top - 1];
        break;
      case Op::Exp:
        stack[top - 1] = std::exp(stack[top - 1]);
        break;
      case Op::Sin:
        stack[top - 1] = std::sin(stack[top - 1]);
        break;
      case Op::Cos:
        stack[top - 1] = std::cos(stack[top - 1]);
        break;
      case Op::Sqrt:
        stack[top - 1] = std::sqrt(stack[top - 1]);
        break;
    }
  }
  return stack[0];
}

}  // namespace halfline
