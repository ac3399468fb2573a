#pragma once

#include <climits>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>

#include "mtaylor/expr.hpp"
#include "mtaylor/multiindex.hpp"

namespace mtaylor {

/// Callable evaluating one fixed partial derivative.
using PartialEvaluator = std::function<double(std::span<const double>)>;

/// A real function f on a subset of R^N together with its partials D^alpha f.
///
/// Implementations must be safe to share between threads once constructed.
class FunctionModel {
 public:
  static constexpr unsigned kUnboundedOrder = UINT_MAX;

  virtual ~FunctionModel() = default;

  virtual std::size_t dimension() const = 0;
  /// Highest derivative order reliably available.
  virtual unsigned max_order() const = 0;

  virtual double evaluate(std::span<const double> point) const = 0;
  virtual double partial(const MultiIndex& alpha,
                         std::span<const double> point) const = 0;

  /// Evaluator bound to D^alpha f for tight loops. The default forwards to
  /// partial(); the returned callable must not outlive the model.
  virtual PartialEvaluator partial_evaluator(const MultiIndex& alpha) const;

  /// Human-readable description (expression text, "polynomial", ...).
  virtual std::string describe() const = 0;
};

/// Model backed by an expression AST. Partials are differentiated
/// symbolically on first request and memoized per multi-index.
class ExprModel final : public FunctionModel {
 public:
  ExprModel(ExprPtr root, std::size_t dimension);

  std::size_t dimension() const override { return dimension_; }
  unsigned max_order() const override { return kUnboundedOrder; }
  double evaluate(std::span<const double> point) const override;
  double partial(const MultiIndex& alpha,
                 std::span<const double> point) const override;
  PartialEvaluator partial_evaluator(const MultiIndex& alpha) const override;
  std::string describe() const override;

  /// The memoized symbolic partial D^alpha f.
  ExprPtr partial_expr(const MultiIndex& alpha) const;

 private:
  std::shared_ptr<const CompiledExpr> compiled(const MultiIndex& alpha) const;

  std::size_t dimension_;
  mutable std::shared_mutex mutex_;
  mutable std::map<MultiIndex, std::shared_ptr<const CompiledExpr>> cache_;
};

std::shared_ptr<const ExprModel> make_model(ExprPtr root, std::size_t dimension);

/// Convenience: parse + make_model.
std::shared_ptr<const ExprModel> make_model(std::string_view source,
                                            std::size_t dimension);

/// Polynomial sum_beta a_beta x^beta with exact coefficient-shifting
/// differentiation.
class PolynomialModel final : public FunctionModel {
 public:
  using Coefficients = std::map<MultiIndex, double>;

  PolynomialModel(std::size_t dimension, Coefficients coefficients);

  std::size_t dimension() const override { return dimension_; }
  unsigned max_order() const override { return kUnboundedOrder; }
  double evaluate(std::span<const double> point) const override;
  double partial(const MultiIndex& alpha,
                 std::span<const double> point) const override;
  std::string describe() const override;

  const Coefficients& coefficients() const noexcept { return coefficients_; }
  /// Largest |beta| with a nonzero coefficient; 0 for the zero polynomial.
  unsigned total_degree() const noexcept;

 private:
  std::size_t dimension_;
  Coefficients coefficients_;
};

}  // namespace mtaylor
