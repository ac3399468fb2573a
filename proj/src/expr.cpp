#include "mtaylor/expr.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <vector>
#include <cmath>
#include <limits>
#include <type_traits>

#include "mtaylor/error.hpp"

namespace mtaylor {

ExprPtr make_constant(double value) {
  return std::make_shared<const ExprNode>(ExprNode{Constant{value}});
}

ExprPtr make_variable(std::size_t index) {
  return std::make_shared<const ExprNode>(ExprNode{Variable{index}});
}

ExprPtr make_negate(ExprPtr child) {
  if (const auto* c = std::get_if<Constant>(&child->data)) {
    return make_constant(-c->value);
  }
  return std::make_shared<const ExprNode>(ExprNode{Negate{std::move(child)}});
}

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const ExprNode>(
      ExprNode{Binary{op, std::move(lhs), std::move(rhs)}});
}

ExprPtr make_call(Function fn, ExprPtr arg) {
  return std::make_shared<const ExprNode>(ExprNode{Call{fn, std::move(arg)}});
}

namespace {

std::optional<double> constant_of(const ExprPtr& e) {
  if (const auto* c = std::get_if<Constant>(&e->data)) return c->value;
  return std::nullopt;
}

bool is_constant(const ExprPtr& e, double v) {
  auto c = constant_of(e);
  return c && *c == v;
}

std::optional<long> integer_exponent(double v) {
  if (std::isfinite(v) && v == std::trunc(v) && std::abs(v) <= 1024.0) {
    return static_cast<long>(v);
  }
  return std::nullopt;
}

double apply_function(Function fn, double a) {
  switch (fn) {
    case Function::Sin: return std::sin(a);
    case Function::Cos: return std::cos(a);
    case Function::Tan: return std::tan(a);
    case Function::Exp: return std::exp(a);
    case Function::Log: return a > 0.0 ? std::log(a) : std::nan("");
    case Function::Sqrt: return a >= 0.0 ? std::sqrt(a) : std::nan("");
  }
  return std::nan("");
}

double int_power(double base, long n) {
  const long m = n < 0 ? -n : n;
  double r = 1.0;
  for (long i = 0; i < m; ++i) r *= base;
  return n < 0 ? 1.0 / r : r;
}

// Builders used by differentiation. They fold constants and drop neutral
// elements but never reorder beyond moving a constant factor to the left.
ExprPtr folded(double v, ExprPtr fallback) {
  return std::isfinite(v) ? make_constant(v) : std::move(fallback);
}

ExprPtr neg(ExprPtr a) {
  if (const auto* n = std::get_if<Negate>(&a->data)) return n->child;
  return make_negate(std::move(a));
}

ExprPtr add(ExprPtr a, ExprPtr b) {
  auto ca = constant_of(a), cb = constant_of(b);
  if (ca && cb) return folded(*ca + *cb, make_binary(BinaryOp::Add, a, b));
  if (ca && *ca == 0.0) return b;
  if (cb && *cb == 0.0) return a;
  return make_binary(BinaryOp::Add, std::move(a), std::move(b));
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
  auto ca = constant_of(a), cb = constant_of(b);
  if (ca && cb) return folded(*ca - *cb, make_binary(BinaryOp::Subtract, a, b));
  if (cb && *cb == 0.0) return a;
  if (ca && *ca == 0.0) return neg(std::move(b));
  return make_binary(BinaryOp::Subtract, std::move(a), std::move(b));
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
  auto ca = constant_of(a), cb = constant_of(b);
  if (ca && cb) return folded(*ca * *cb, make_binary(BinaryOp::Multiply, a, b));
  if ((ca && *ca == 0.0) || (cb && *cb == 0.0)) return make_constant(0.0);
  if (ca && *ca == 1.0) return b;
  if (cb && *cb == 1.0) return a;
  if (cb) return mul(std::move(b), std::move(a));
  if (ca && *ca == -1.0) return neg(std::move(b));
  if (ca) {
    if (const auto* inner = std::get_if<Binary>(&b->data);
        inner && inner->op == BinaryOp::Multiply) {
      if (auto ci = constant_of(inner->lhs)) {
        return mul(folded(*ca * *ci, make_binary(BinaryOp::Multiply, a, inner->lhs)),
                   inner->rhs);
      }
    }
  }
  return make_binary(BinaryOp::Multiply, std::move(a), std::move(b));
}

ExprPtr div(ExprPtr a, ExprPtr b) {
  auto ca = constant_of(a), cb = constant_of(b);
  if (ca && cb && *cb != 0.0) {
    return folded(*ca / *cb, make_binary(BinaryOp::Divide, a, b));
  }
  if (ca && *ca == 0.0) return make_constant(0.0);
  if (cb && *cb == 1.0) return a;
  return make_binary(BinaryOp::Divide, std::move(a), std::move(b));
}

ExprPtr pow(ExprPtr a, ExprPtr b) {
  auto ca = constant_of(a), cb = constant_of(b);
  if (cb && *cb == 0.0) return make_constant(1.0);
  if (cb && *cb == 1.0) return a;
  if (ca && cb) {
    if (auto n = integer_exponent(*cb); n && (*ca != 0.0 || *n > 0)) {
      return folded(int_power(*ca, *n), make_binary(BinaryOp::Power, a, b));
    }
  }
  return make_binary(BinaryOp::Power, std::move(a), std::move(b));
}

ExprPtr call(Function fn, ExprPtr a) {
  if (auto ca = constant_of(a)) {
    return folded(apply_function(fn, *ca), make_call(fn, a));
  }
  return make_call(fn, std::move(a));
}

ExprPtr derive(const ExprPtr& node, std::size_t i) {
  return std::visit(
      [&](const auto& v) -> ExprPtr {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return make_constant(0.0);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return make_constant(v.index == i ? 1.0 : 0.0);
        } else if constexpr (std::is_same_v<T, Negate>) {
          return neg(derive(v.child, i));
        } else if constexpr (std::is_same_v<T, Binary>) {
          const ExprPtr& u = v.lhs;
          const ExprPtr& w = v.rhs;
          switch (v.op) {
            case BinaryOp::Add:
              return add(derive(u, i), derive(w, i));
            case BinaryOp::Subtract:
              return sub(derive(u, i), derive(w, i));
            case BinaryOp::Multiply:
              return add(mul(derive(u, i), w), mul(u, derive(w, i)));
            case BinaryOp::Divide: {
              ExprPtr du = derive(u, i), dw = derive(w, i);
              if (is_constant(dw, 0.0)) return div(du, w);
              return div(sub(mul(du, w), mul(u, dw)),
                         pow(w, make_constant(2.0)));
            }
            case BinaryOp::Power: {
              ExprPtr du = derive(u, i), dw = derive(w, i);
              if (auto c = constant_of(w)) {
                // d(u^c) = c * u^(c-1) * u'
                return mul(mul(w, pow(u, make_constant(*c - 1.0))), du);
              }
              // d(u^w) = u^w * (w' log u + w u' / u)
              ExprPtr log_term = mul(dw, call(Function::Log, u));
              ExprPtr base_term =
                  is_constant(du, 0.0) ? make_constant(0.0) : div(mul(w, du), u);
              return mul(node, add(log_term, base_term));
            }
          }
          return make_constant(0.0);
        } else {
          const ExprPtr& u = v.arg;
          ExprPtr du = derive(u, i);
          if (is_constant(du, 0.0)) return make_constant(0.0);
          switch (v.fn) {
            case Function::Sin:
              return mul(call(Function::Cos, u), du);
            case Function::Cos:
              return mul(neg(call(Function::Sin, u)), du);
            case Function::Tan:
              return div(du, pow(call(Function::Cos, u), make_constant(2.0)));
            case Function::Exp:
              return mul(node, du);
            case Function::Log:
              return div(du, u);
            case Function::Sqrt:
              return div(du, mul(make_constant(2.0), node));
          }
          return make_constant(0.0);
        }
      },
      node->data);
}

}  // namespace

ExprPtr differentiate(const ExprPtr& node, std::size_t index) {
  return derive(node, index);
}

ExprPtr partial(const ExprPtr& node, const MultiIndex& alpha) {
  ExprPtr out = node;
  for (std::size_t axis = 0; axis < alpha.dimension(); ++axis) {
    for (unsigned p = 0; p < alpha[axis]; ++p) out = derive(out, axis + 1);
  }
  return out;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (a->data.index() != b->data.index()) return false;
  return std::visit(
      [&](const auto& va) -> bool {
        using T = std::decay_t<decltype(va)>;
        const auto& vb = std::get<T>(b->data);
        if constexpr (std::is_same_v<T, Constant>) {
          return va.value == vb.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return va.index == vb.index;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return structurally_equal(va.child, vb.child);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return va.op == vb.op && structurally_equal(va.lhs, vb.lhs) &&
                 structurally_equal(va.rhs, vb.rhs);
        } else {
          return va.fn == vb.fn && structurally_equal(va.arg, vb.arg);
        }
      },
      a->data);
}

double evaluate(const ExprPtr& node, std::span<const double> point) {
  return CompiledExpr(node, point.size())(point);
}

// ---------------------------------------------------------------------------

CompiledExpr::CompiledExpr(ExprPtr root, std::size_t dimension)
    : root_(std::move(root)), dimension_(dimension) {
  emit(*root_, 1);
}

void CompiledExpr::emit(const ExprNode& node, std::size_t depth) {
  max_stack_ = std::max(max_stack_, depth);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Constant>) {
          program_.push_back({OpCode::Constant, v.value, 0, 0, &node});
        } else if constexpr (std::is_same_v<T, Variable>) {
          if (v.index == 0 || v.index > dimension_) {
            throw DimensionMismatchError(
                "variable index " + std::to_string(v.index) +
                " exceeds point dimension " + std::to_string(dimension_));
          }
          program_.push_back({OpCode::Variable, 0.0, 0, v.index - 1, &node});
        } else if constexpr (std::is_same_v<T, Negate>) {
          emit(*v.child, depth);
          program_.push_back({OpCode::Negate, 0.0, 0, 0, &node});
        } else if constexpr (std::is_same_v<T, Binary>) {
          emit(*v.lhs, depth);
          if (v.op == BinaryOp::Power) {
            if (auto c = constant_of(v.rhs)) {
              if (auto n = integer_exponent(*c)) {
                program_.push_back({OpCode::PowInt, 0.0, *n, 0, &node});
                return;
              }
            }
          }
          emit(*v.rhs, depth + 1);
          static constexpr OpCode kOps[] = {OpCode::Add, OpCode::Subtract,
                                            OpCode::Multiply, OpCode::Divide,
                                            OpCode::Pow};
          program_.push_back({kOps[static_cast<int>(v.op)], 0.0, 0, 0, &node});
        } else {
          emit(*v.arg, depth);
          static constexpr OpCode kFns[] = {OpCode::Sin, OpCode::Cos,
                                            OpCode::Tan, OpCode::Exp,
                                            OpCode::Log, OpCode::Sqrt};
          program_.push_back({kFns[static_cast<int>(v.fn)], 0.0, 0, 0, &node});
        }
      },
      node.data);
}

void CompiledExpr::fail(const Instr& instr, const char* detail) const {
  // The source pointer stays valid: root_ owns the whole tree.
  ExprPtr alias(root_, instr.source);
  throw DomainError(to_string(alias, dimension_), detail);
}

double CompiledExpr::operator()(std::span<const double> point) const {
  if (point.size() < dimension_) {
    throw DimensionMismatchError("point of length " + std::to_string(point.size()) +
                                 " for expression of dimension " +
                                 std::to_string(dimension_));
  }
  constexpr std::size_t kInline = 32;
  if (max_stack_ <= kInline) {
    double stack[kInline];
    return run(stack, point);
  }
  std::vector<double> stack(max_stack_);
  return run(stack.data(), point);
}

double CompiledExpr::run(double* stack, std::span<const double> point) const {
  std::size_t top = 0;  // number of live entries
  for (const Instr& in : program_) {
    double r;
    switch (in.op) {
      case OpCode::Constant:
        stack[top++] = in.constant;
        continue;
      case OpCode::Variable:
        if (!std::isfinite(point[in.variable])) fail(in, "non-finite argument");
        stack[top++] = point[in.variable];
        continue;
      case OpCode::Negate:
        stack[top - 1] = -stack[top - 1];
        continue;
      case OpCode::Add:
        r = stack[top - 2] + stack[top - 1];
        break;
      case OpCode::Subtract:
        r = stack[top - 2] - stack[top - 1];
        break;
      case OpCode::Multiply:
        r = stack[top - 2] * stack[top - 1];
        break;
      case OpCode::Divide:
        if (stack[top - 1] == 0.0) fail(in, "division by zero");
        r = stack[top - 2] / stack[top - 1];
        break;
      case OpCode::Pow: {
        const double base = stack[top - 2];
        const double exponent = stack[top - 1];
        if (auto n = integer_exponent(exponent)) {
          if (base == 0.0 && *n < 0) fail(in, "division by zero");
          r = int_power(base, *n);
          break;
        }
        if (!(base > 0.0)) fail(in, "non-integer power of a non-positive base");
        r = std::exp(exponent * std::log(base));
        break;
      }
      case OpCode::PowInt: {
        const double base = stack[top - 1];
        if (base == 0.0 && in.exponent < 0) fail(in, "division by zero");
        r = int_power(base, in.exponent);
        stack[top - 1] = r;
        if (!std::isfinite(r)) fail(in, "non-finite result");
        continue;
      }
      default: {
        const double a = stack[top - 1];
        if (in.op == OpCode::Log && !(a > 0.0)) fail(in, "logarithm of a non-positive value");
        if (in.op == OpCode::Sqrt && !(a >= 0.0)) fail(in, "square root of a negative value");
        static constexpr Function kFns[] = {Function::Sin, Function::Cos,
                                            Function::Tan, Function::Exp,
                                            Function::Log, Function::Sqrt};
        r = apply_function(kFns[static_cast<int>(in.op) - static_cast<int>(OpCode::Sin)], a);
        stack[top - 1] = r;
        if (!std::isfinite(r)) fail(in, "non-finite result");
        continue;
      }
    }
    --top;
    stack[top - 1] = r;
    if (!std::isfinite(r)) fail(in, "non-finite result");
  }
  return top == 1 ? stack[0] : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace mtaylor
