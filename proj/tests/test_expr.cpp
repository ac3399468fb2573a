#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <thread>

#include "mtaylor/error.hpp"
#include "mtaylor/expr.hpp"
#include "mtaylor/function_model.hpp"
#include "support/random_models.hpp"

using namespace mtaylor;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

bool same(const ExprPtr& a, const std::string& text, std::size_t dim) {
  return structurally_equal(a, parse(text, dim));
}

double eval1(const ExprPtr& e, double x) {
  const double p[] = {x};
  return evaluate(e, p);
}

}  // namespace

TEST_CASE("parse builds the grammar-forced tree") {
  const ExprPtr e = parse("x1^2*x2", 2);
  const ExprPtr expected = make_binary(
      BinaryOp::Multiply,
      make_binary(BinaryOp::Power, make_variable(1), make_constant(2)),
      make_variable(2));
  CHECK(structurally_equal(e, expected));

  const ExprPtr f = parse("x^3*(x+1)", 1);
  CHECK(structurally_equal(
      f, make_binary(BinaryOp::Multiply,
                     make_binary(BinaryOp::Power, make_variable(1), make_constant(3)),
                     make_binary(BinaryOp::Add, make_variable(1), make_constant(1)))));
}

TEST_CASE("parse: precedence and associativity") {
  CHECK(eval1(parse("-x^2", 1), 3.0) == -9.0);
  CHECK(eval1(parse("2^3^2", 1), 0.0) == 512.0);
  CHECK(eval1(parse("x^-2", 1), 2.0) == 0.25);
  CHECK(eval1(parse("8/4/2", 1), 0.0) == 1.0);
  CHECK(eval1(parse("8-4-2", 1), 0.0) == 2.0);
  CHECK(eval1(parse("1+2*3", 1), 0.0) == 7.0);
  CHECK(eval1(parse("--x", 1), 5.0) == 5.0);
  CHECK(eval1(parse("2*-x", 1), 5.0) == -10.0);
  CHECK(eval1(parse("  pi * e ", 1), 0.0) == std::numbers::pi * std::numbers::e);
  CHECK(eval1(parse("1.5e2+.5+2E-1", 1), 0.0) == 150.7);
}

TEST_CASE("parse: errors") {
  CHECK_THROWS_AS(parse("x3+1", 2), UnknownIdentifierError);
  CHECK_THROWS_AS(parse("y+1", 1), UnknownIdentifierError);
  CHECK_THROWS_AS(parse("foo(x)", 1), UnknownIdentifierError);
  CHECK_THROWS_AS(parse("x+1", 2), DimensionMismatchError);
  CHECK_THROWS_AS(parse("x1+1", 1), DimensionMismatchError);
  CHECK_THROWS_AS(parse("x", 0), InvalidDimensionError);
  CHECK_THROWS_AS(parse("sin x", 1), ParseError);
  CHECK_THROWS_AS(parse("2e", 1), ParseError);
  CHECK_THROWS_AS(parse("", 1), ParseError);
  try {
    parse("x + * 2", 1);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  try {
    parse("(x+1", 1);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("differentiate: examples") {
  CHECK(same(differentiate(parse("x1^2*x2", 2), 1), "2*x1*x2", 2));
  CHECK(same(differentiate(parse("x^4+x^3", 1), 1), "4*x^3+3*x^2", 1));
  CHECK(same(differentiate(parse("5", 1), 1), "0", 1));
  CHECK(same(differentiate(parse("x1*x2", 2), 2), "x1", 2));
}

TEST_CASE("partial: examples") {
  CHECK(same(partial(parse("x1^2*x2", 2), {2, 1}), "2", 2));
  const ExprPtr e = parse("x^3*(x+1)", 1);
  CHECK(partial(e, MultiIndex{0}) == e);
  CHECK(same(partial(parse("x^4+x^3", 1), {2}), "12*x^2+6*x", 1));
  CHECK(same(partial(parse("sin(x)", 1), {4}), "sin(x)", 1));
  CHECK(eval1(partial(parse("sin(x)", 1), {4}), 0.0) == 0.0);
}

TEST_CASE("evaluate: values and domain errors") {
  CHECK(eval1(parse("exp(x)", 1), 0.0) == 1.0);
  CHECK(eval1(parse("x^3*(x+1)", 1), -1.0) == 0.0);
  CHECK(eval1(parse("sqrt(x)", 1), 0.0) == 0.0);
  CHECK_THAT(eval1(parse("x^0.5", 1), 2.0), WithinRel(std::sqrt(2.0), 1e-15));

  CHECK_THROWS_AS(eval1(parse("log(x)", 1), -1.0), DomainError);
  CHECK_THROWS_AS(eval1(parse("sqrt(x)", 1), -1.0), DomainError);
  CHECK_THROWS_AS(eval1(parse("1/x", 1), 0.0), DomainError);
  CHECK_THROWS_AS(eval1(parse("x^-1", 1), 0.0), DomainError);
  CHECK_THROWS_AS(eval1(parse("x^0.5", 1), -2.0), DomainError);
  CHECK_THROWS_AS(eval1(parse("exp(x)", 1), 1000.0), DomainError);

  try {
    eval1(parse("x + log(x - 2)", 1), 1.0);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.subexpression() == "log(x-2)");
  }
  const double short_point[] = {1.0};
  CHECK_THROWS_AS(evaluate(parse("x1+x2", 2), short_point), DimensionMismatchError);
}

TEST_CASE("evaluate: integer powers use repeated multiplication") {
  const double x = 1.1;
  CHECK(eval1(parse("x^3", 1), x) == x * x * x);
  CHECK(eval1(parse("x^-2", 1), x) == 1.0 / (x * x));
  CHECK(eval1(parse("x^0", 1), 0.0) == 1.0);
}

TEST_CASE("print/parse round trip on parsed and differentiated trees") {
  testing::Rng rng(20240501);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const std::string text = testing::random_smooth_expression(rng, dim, 3);
    const ExprPtr e = parse(text, dim);
    INFO(text);
    CHECK(structurally_equal(parse(to_string(e, dim), dim), e));
    const ExprPtr d = differentiate(e, 1 + trial % dim);
    INFO(to_string(d, dim));
    CHECK(structurally_equal(parse(to_string(d, dim), dim), d));
  }
  for (const char* text : {"-2", "(-2)^2", "x^(-2)", "-(x+1)*3", "x-(1-x)",
                           "x/(2/x)", "x^2^3", "(x^2)^3", "-x^2", "0.1+1e+20"}) {
    const ExprPtr e = parse(text, 1);
    INFO(text << " -> " << to_string(e, 1));
    CHECK(structurally_equal(parse(to_string(e, 1), 1), e));
  }
}

TEST_CASE("symbolic partials agree with central differences") {
  testing::Rng rng(7);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const std::string text = testing::random_smooth_expression(rng, dim, 3);
    const auto model = make_model(text, dim);
    const auto f = model->partial_evaluator(MultiIndex(dim));
    for (int k = 0; k < 3; ++k) {
      const auto p = testing::uniform_vector(rng, dim, -1.5, 1.5);
      for (std::size_t axis = 0; axis < dim; ++axis) {
        const double symbolic = model->partial(MultiIndex::unit(dim, axis), p);
        const double fd = testing::central_difference(f, p, axis, 1e-5);
        INFO(text << " axis " << axis);
        CHECK(std::abs(symbolic - fd) <= 1e-6 * (1.0 + std::abs(symbolic)));
        ++checked;
      }
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("Schwarz symmetry of mixed partials") {
  testing::Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const std::string text = testing::random_smooth_expression(rng, 2, 3);
    const ExprPtr e = parse(text, 2);
    const ExprPtr d12 = differentiate(differentiate(e, 1), 2);
    const ExprPtr d21 = differentiate(differentiate(e, 2), 1);
    const auto p = testing::uniform_vector(rng, 2, -1.5, 1.5);
    const double a = evaluate(d12, p), b = evaluate(d21, p);
    INFO(text);
    CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)) * 64);
  }
}

TEST_CASE("make_model: partial capability") {
  auto square = make_model("x^2", 1);
  for (double x : {-3.0, 0.0, 2.5}) {
    const double p[] = {x};
    CHECK(square->partial({2}, p) == 2.0);
    CHECK(square->partial({0}, p) == square->evaluate(p));
  }
  auto product = make_model("x1*x2", 2);
  const double p[] = {0.3, -7.0};
  CHECK(product->partial({1, 1}, p) == 1.0);
  CHECK(product->max_order() == FunctionModel::kUnboundedOrder);

  auto s = make_model("sin(x)", 1);
  const double zero[] = {0.0};
  CHECK(s->partial({4}, zero) == 0.0);
  const double q[] = {0.7};
  CHECK(s->partial({4}, q) == std::sin(0.7));
}

TEST_CASE("ExprModel cache is safe under concurrent fills") {
  auto model = make_model("exp(x1)*sin(x2)+x1^3*x2^2", 2);
  const double p[] = {0.2, -0.4};
  std::vector<double> serial;
  const auto indices = enumerate_multiindices_up_to(2, 4);
  auto reference = make_model("exp(x1)*sin(x2)+x1^3*x2^2", 2);
  for (const auto& a : indices) serial.push_back(reference->partial(a, p));

  std::vector<std::vector<double>> results(4, std::vector<double>(indices.size()));
  {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < 4; ++t) {
      threads.emplace_back([&, t] {
        // Half the threads walk the indices backwards so fills interleave.
        for (std::size_t step = 0; step < indices.size(); ++step) {
          const std::size_t i = t % 2 == 0 ? step : indices.size() - 1 - step;
          results[t][i] = model->partial(indices[i], p);
        }
      });
    }
  }
  for (const auto& r : results) CHECK(r == serial);
}

TEST_CASE("PolynomialModel differentiates exactly") {
  // 3 x1^2 x2 - x2^3 + 2
  PolynomialModel poly(2, {{{2, 1}, 3.0}, {{0, 3}, -1.0}, {{0, 0}, 2.0}});
  const double p[] = {1.5, -2.0};
  CHECK(poly.evaluate(p) == 3 * 2.25 * -2.0 + 8.0 + 2.0);
  CHECK(poly.partial({1, 0}, p) == 6 * 1.5 * -2.0);
  CHECK(poly.partial({0, 2}, p) == -6 * -2.0);
  CHECK(poly.partial({2, 1}, p) == 6.0);
  CHECK(poly.partial({3, 0}, p) == 0.0);
  CHECK(poly.total_degree() == 3);
}
