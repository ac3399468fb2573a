#include <cctype>
#include <cmath>
#include <type_traits>
#include <charconv>
#include <numbers>
#include <string>

#include "mtaylor/error.hpp"
#include "mtaylor/expr.hpp"

namespace mtaylor {

namespace {

class Parser {
 public:
  Parser(std::string_view source, std::size_t dimension)
      : src_(source), dim_(dimension) {}

  ExprPtr run() {
    ExprPtr e = expr();
    skip_space();
    if (pos_ != src_.size()) {
      throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    }
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(BinaryOp::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(BinaryOp::Subtract, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(BinaryOp::Multiply, lhs, factor());
      } else if (accept('/')) {
        lhs = make_binary(BinaryOp::Divide, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr factor() {
    if (accept('-')) return make_negate(factor());
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (accept('^')) return make_binary(BinaryOp::Power, base, factor());
    return base;
  }

  ExprPtr atom() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    // Exponent only when digits follow; "2e" leaves the identifier e behind.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() &&
          std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double value = 0.0;
    auto [end, ec] = std::from_chars(src_.data() + start, src_.data() + pos_,
                                     value, std::chars_format::general);
    if (ec != std::errc() || end != src_.data() + pos_) {
      throw ParseError("malformed number", start);
    }
    return make_constant(value);
  }

  ExprPtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(src_.substr(start, pos_ - start));

    skip_space();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      static constexpr std::pair<std::string_view, Function> kFunctions[] = {
          {"sin", Function::Sin}, {"cos", Function::Cos},
          {"tan", Function::Tan}, {"exp", Function::Exp},
          {"log", Function::Log}, {"sqrt", Function::Sqrt}};
      for (auto [fname, fn] : kFunctions) {
        if (name == fname) {
          ++pos_;
          ExprPtr arg = expr();
          expect(')');
          return make_call(fn, arg);
        }
      }
      throw UnknownIdentifierError("unknown function '" + name + "'", start);
    }

    if (name == "pi") return make_constant(std::numbers::pi);
    if (name == "e") return make_constant(std::numbers::e);
    if (name == "x") {
      if (dim_ != 1) {
        throw DimensionMismatchError("variable 'x' requires dimension 1, got " +
                                     std::to_string(dim_) + "; use x1..x" +
                                     std::to_string(dim_));
      }
      return make_variable(1);
    }
    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      if (dim_ == 1) {
        throw DimensionMismatchError("indexed variable '" + name +
                                     "' used with dimension 1; use x");
      }
      std::size_t index = 0;
      auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (ec == std::errc() && index >= 1 && index <= dim_) {
        return make_variable(index);
      }
      throw UnknownIdentifierError(
          "variable '" + name + "' outside x1..x" + std::to_string(dim_), start);
    }
    if (name == "sin" || name == "cos" || name == "tan" || name == "exp" ||
        name == "log" || name == "sqrt") {
      throw ParseError("function '" + name + "' requires an argument", pos_);
    }
    throw UnknownIdentifierError("unknown identifier '" + name + "'", start);
  }

  std::string_view src_;
  std::size_t dim_;
  std::size_t pos_ = 0;
};

// Binding strength used by the printer; higher binds tighter.
int precedence(const ExprNode& n) {
  if (const auto* c = std::get_if<Constant>(&n.data)) {
    return c->value < 0 || std::signbit(c->value) ? 3 : 5;
  }
  if (std::holds_alternative<Negate>(n.data)) return 3;
  if (const auto* b = std::get_if<Binary>(&n.data)) {
    switch (b->op) {
      case BinaryOp::Add:
      case BinaryOp::Subtract:
        return 1;
      case BinaryOp::Multiply:
      case BinaryOp::Divide:
        return 2;
      case BinaryOp::Power:
        return 4;
    }
  }
  return 5;
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void print(const ExprNode& n, std::size_t dim, std::string& out);

void print_wrapped(const ExprNode& n, bool wrap, std::size_t dim,
                   std::string& out) {
  if (wrap) out += '(';
  print(n, dim, out);
  if (wrap) out += ')';
}

void print(const ExprNode& n, std::size_t dim, std::string& out) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Constant>) {
          out += format_number(v.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          out += dim == 1 ? std::string("x") : "x" + std::to_string(v.index);
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += '-';
          print_wrapped(*v.child, precedence(*v.child) < 3, dim, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const int lp = precedence(*v.lhs);
          const int rp = precedence(*v.rhs);
          if (v.op == BinaryOp::Power) {
            print_wrapped(*v.lhs, lp < 5, dim, out);
            out += '^';
            print_wrapped(*v.rhs, rp <= 3, dim, out);
            return;
          }
          const int self = precedence(n);
          // Negations are parenthesized as operands for readability.
          print_wrapped(*v.lhs, lp < self || lp == 3, dim, out);
          static constexpr char kSymbol[] = {'+', '-', '*', '/'};
          out += kSymbol[static_cast<int>(v.op)];
          print_wrapped(*v.rhs, rp <= self || rp == 3, dim, out);
        } else {
          out += function_name(v.fn);
          out += '(';
          print(*v.arg, dim, out);
          out += ')';
        }
      },
      n.data);
}

}  // namespace

ExprPtr parse(std::string_view source, std::size_t dimension) {
  if (dimension == 0) {
    throw InvalidDimensionError("expression dimension must be at least 1");
  }
  return Parser(source, dimension).run();
}

std::string to_string(const ExprPtr& node, std::size_t dimension) {
  std::string out;
  print(*node, dimension, out);
  return out;
}

std::string_view function_name(Function fn) {
  switch (fn) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Tan: return "tan";
    case Function::Exp: return "exp";
    case Function::Log: return "log";
    case Function::Sqrt: return "sqrt";
  }
  return "?";
}

}  // namespace mtaylor
