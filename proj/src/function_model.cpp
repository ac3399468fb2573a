#include "mtaylor/function_model.hpp"

#include <mutex>

#include "mtaylor/error.hpp"

namespace mtaylor {

PartialEvaluator FunctionModel::partial_evaluator(const MultiIndex& alpha) const {
  return [this, alpha](std::span<const double> p) { return partial(alpha, p); };
}

// ---------------------------------------------------------------------------

ExprModel::ExprModel(ExprPtr root, std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw InvalidDimensionError("model dimension must be at least 1");
  auto entry = std::make_shared<const CompiledExpr>(std::move(root), dimension);
  cache_.emplace(MultiIndex(dimension), std::move(entry));
}

std::shared_ptr<const CompiledExpr> ExprModel::compiled(const MultiIndex& alpha) const {
  if (alpha.dimension() != dimension_) {
    throw DimensionMismatchError("multi-index " + alpha.to_string() +
                                 " for model of dimension " +
                                 std::to_string(dimension_));
  }
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(alpha); it != cache_.end()) return it->second;
  }
  // Peel one derivative off the last nonzero axis so the chain of cached
  // parents follows component order.
  std::size_t axis = dimension_;
  while (alpha[axis - 1] == 0) --axis;
  std::vector<unsigned> parent(alpha.components().begin(), alpha.components().end());
  --parent[axis - 1];
  auto base = compiled(MultiIndex(std::move(parent)));
  auto entry = std::make_shared<const CompiledExpr>(
      differentiate(base->root(), axis), dimension_);

  std::unique_lock lock(mutex_);
  // A concurrent fill produced the same tree; keep whichever landed first.
  auto [it, inserted] = cache_.emplace(alpha, std::move(entry));
  return it->second;
}

ExprPtr ExprModel::partial_expr(const MultiIndex& alpha) const {
  return compiled(alpha)->root();
}

double ExprModel::evaluate(std::span<const double> point) const {
  return partial(MultiIndex(dimension_), point);
}

double ExprModel::partial(const MultiIndex& alpha, std::span<const double> point) const {
  return (*compiled(alpha))(point);
}

PartialEvaluator ExprModel::partial_evaluator(const MultiIndex& alpha) const {
  return [fn = compiled(alpha)](std::span<const double> p) { return (*fn)(p); };
}

std::string ExprModel::describe() const {
  return to_string(partial_expr(MultiIndex(dimension_)), dimension_);
}

std::shared_ptr<const ExprModel> make_model(ExprPtr root, std::size_t dimension) {
  return std::make_shared<const ExprModel>(std::move(root), dimension);
}

std::shared_ptr<const ExprModel> make_model(std::string_view source, std::size_t dimension) {
  return make_model(parse(source, dimension), dimension);
}

// ---------------------------------------------------------------------------

PolynomialModel::PolynomialModel(std::size_t dimension, Coefficients coefficients)
    : dimension_(dimension) {
  if (dimension == 0) throw InvalidDimensionError("model dimension must be at least 1");
  for (auto& [beta, a] : coefficients) {
    if (beta.dimension() != dimension) {
      throw DimensionMismatchError("coefficient index " + beta.to_string() +
                                   " for polynomial of dimension " +
                                   std::to_string(dimension));
    }
    if (a != 0.0) coefficients_.emplace(beta, a);
  }
}

double PolynomialModel::evaluate(std::span<const double> point) const {
  return partial(MultiIndex(dimension_), point);
}

double PolynomialModel::partial(const MultiIndex& alpha, std::span<const double> point) const {
  if (alpha.dimension() != dimension_ || point.size() != dimension_) {
    throw DimensionMismatchError("polynomial partial: dimension mismatch");
  }
  double sum = 0.0;
  std::vector<unsigned> shifted(dimension_);
  for (const auto& [beta, a] : coefficients_) {
    double term = a;
    bool vanishes = false;
    for (std::size_t i = 0; i < dimension_ && !vanishes; ++i) {
      if (beta[i] < alpha[i]) {
        vanishes = true;
        break;
      }
      // beta_i! / (beta_i - alpha_i)!
      for (unsigned f = beta[i]; f > beta[i] - alpha[i]; --f) term *= f;
      shifted[i] = beta[i] - alpha[i];
    }
    if (vanishes) continue;
    sum += term * monomial(MultiIndex(shifted), point);
  }
  return sum;
}

std::string PolynomialModel::describe() const {
  std::string out;
  for (const auto& [beta, a] : coefficients_) {
    if (!out.empty()) out += " + ";
    out += std::to_string(a) + "*x^" + beta.to_string();
  }
  return out.empty() ? "0" : out;
}

unsigned PolynomialModel::total_degree() const noexcept {
  unsigned degree = 0;
  for (const auto& [beta, a] : coefficients_) degree = std::max(degree, beta.order());
  return degree;
}

}  // namespace mtaylor
