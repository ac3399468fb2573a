#pragma once

// Expression language for function models.
//
// Grammar (N = declared dimension):
//
//   expr   := term (("+" | "-") term)*
//   term   := factor (("*" | "/") factor)*
//   factor := "-" factor | power
//   power  := atom ("^" factor)?
//   atom   := number | ident | ident "(" expr ")" | "(" expr ")"
//
// Variables are "x" when N = 1 and "x1".."xN" otherwise. Functions are
// sin, cos, tan, exp, log, sqrt; constants are pi and e. "^" binds tighter
// than unary minus and is right-associative, so -x^2 is -(x^2) and
// 2^3^2 is 2^(3^2).

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mtaylor/multiindex.hpp"

namespace mtaylor {

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

enum class BinaryOp { Add, Subtract, Multiply, Divide, Power };
enum class Function { Sin, Cos, Tan, Exp, Log, Sqrt };

struct Constant {
  double value;
};
struct Variable {
  std::size_t index;  // 1-based
};
struct Negate {
  ExprPtr child;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Call {
  Function fn;
  ExprPtr arg;
};

/// Immutable AST node. Build through the make_* factories.
struct ExprNode {
  std::variant<Constant, Variable, Negate, Binary, Call> data;
};

// Raw constructors; the parser uses these so the AST mirrors the source.
// make_negate folds a constant operand into a negative constant, which keeps
// printing and re-parsing structurally stable.
ExprPtr make_constant(double value);
ExprPtr make_variable(std::size_t index);
ExprPtr make_negate(ExprPtr child);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_call(Function fn, ExprPtr arg);

/// Parses `source` for a function of `dimension` variables.
/// Throws ParseError, UnknownIdentifierError, DimensionMismatchError or
/// InvalidDimensionError.
ExprPtr parse(std::string_view source, std::size_t dimension);

/// Symbolic partial derivative with respect to variable `index` (1-based),
/// with constant folding and the identities x*0 = 0, x*1 = x, x+0 = x.
ExprPtr differentiate(const ExprPtr& node, std::size_t index);

/// D^alpha, differentiating in component order. alpha = 0 returns `node`.
ExprPtr partial(const ExprPtr& node, const MultiIndex& alpha);

/// Double-precision evaluation. Throws DomainError naming the offending
/// subexpression, DimensionMismatchError when the point is too short.
double evaluate(const ExprPtr& node, std::span<const double> point);

/// Prints in the grammar above; parse(to_string(e, N), N) is structurally
/// equal to e.
std::string to_string(const ExprPtr& node, std::size_t dimension);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

std::string_view function_name(Function fn);

/// Flattened postfix form of an expression for repeated evaluation.
class CompiledExpr {
 public:
  CompiledExpr(ExprPtr root, std::size_t dimension);

  double operator()(std::span<const double> point) const;

  const ExprPtr& root() const noexcept { return root_; }

 private:
  enum class OpCode {
    Constant, Variable, Negate, Add, Subtract, Multiply, Divide,
    PowInt, Pow, Sin, Cos, Tan, Exp, Log, Sqrt
  };
  struct Instr {
    OpCode op;
    double constant = 0.0;
    long exponent = 0;
    std::size_t variable = 0;
    const ExprNode* source = nullptr;
  };

  void emit(const ExprNode& node, std::size_t depth);
  double run(double* stack, std::span<const double> point) const;
  [[noreturn, gnu::cold]] void fail(const Instr& instr, const char* detail) const;

  ExprPtr root_;
  std::size_t dimension_;
  std::vector<Instr> program_;
  std::size_t max_stack_ = 0;
};

}  // namespace mtaylor
