#include "mtaylor/taylor.hpp"

#include <array>
#include <cmath>
#include <string>

#include "mtaylor/error.hpp"

namespace mtaylor {

namespace {

void check_dimension(const FunctionModel& model, std::span<const double> v,
                     const char* what) {
  if (v.size() != model.dimension()) {
    throw DimensionMismatchError(std::string(what) + " has length " +
                                 std::to_string(v.size()) + ", model dimension is " +
                                 std::to_string(model.dimension()));
  }
}

void check_order(const FunctionModel& model, unsigned needed) {
  if (needed > model.max_order()) {
    throw CapabilityError("derivative order " + std::to_string(needed) +
                          " exceeds model maximum " + std::to_string(model.max_order()));
  }
}

}  // namespace

TaylorPolynomial taylor_coefficients(const FunctionModel& model,
                                     std::span<const double> center, unsigned order) {
  check_dimension(model, center, "center");
  check_order(model, order);
  TaylorPolynomial taylor{{center.begin(), center.end()}, order, {}};
  for (const MultiIndex& alpha : enumerate_multiindices_up_to(model.dimension(), order)) {
    taylor.coefficients.emplace(
        alpha, model.partial(alpha, center) / static_cast<double>(factorial(alpha)));
  }
  return taylor;
}

double taylor_eval(const TaylorPolynomial& taylor, std::span<const double> x) {
  if (x.size() != taylor.center.size()) {
    throw DimensionMismatchError("taylor_eval: point dimension differs from center");
  }
  std::vector<double> offset(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) offset[i] = x[i] - taylor.center[i];
  double sum = 0.0;
  for (const auto& [alpha, coeff] : taylor.coefficients) {
    sum += coeff * monomial(alpha, offset);
  }
  return sum;
}

RemainderFunction::RemainderFunction(const FunctionModel& model,
                                     std::span<const double> center, unsigned order,
                                     std::span<const double> x)
    : center_(center.begin(), center.end()), x_(x.begin(), x.end()) {
  check_dimension(model, center, "center");
  check_dimension(model, x, "point");
  if (order == FunctionModel::kUnboundedOrder) {
    throw CapabilityError("Taylor order is unbounded");
  }
  check_order(model, order + 1);

  offset_.resize(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) offset_[i] = x_[i] - center_[i];

  fx_ = model.evaluate(x_);
  tx_ = taylor_eval(taylor_coefficients(model, center_, order), x_);
  for (const MultiIndex& alpha : enumerate_multiindices(model.dimension(), order + 1)) {
    terms_.push_back({model.partial_evaluator(alpha),
                      monomial(alpha, offset_) / static_cast<double>(factorial(alpha))});
  }
}

std::vector<double> RemainderFunction::segment_point(double t) const {
  std::vector<double> p(center_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = center_[i] + t * offset_[i];
  return p;
}

double RemainderFunction::operator()(double t) const {
  constexpr std::size_t kInline = 8;
  std::array<double, kInline> inline_point;
  std::vector<double> heap_point;
  std::span<double> p;
  if (center_.size() <= kInline) {
    p = std::span<double>(inline_point.data(), center_.size());
  } else {
    heap_point.resize(center_.size());
    p = heap_point;
  }
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = center_[i] + t * offset_[i];

  double lagrange = 0.0;
  try {
    for (const Term& term : terms_) lagrange += term.partial(p) * term.weight;
  } catch (const DomainError& e) {
    throw DomainError(e, t);
  }
  return fx_ - tx_ - lagrange;
}

double remainder_F(const FunctionModel& model, std::span<const double> center,
                   unsigned order, std::span<const double> x, double t) {
  return RemainderFunction(model, center, order, x)(t);
}

double remainder_scale(const FunctionModel& model, std::span<const double> center,
                       unsigned order, std::span<const double> x) {
  return RemainderFunction(model, center, order, x).scale();
}

}  // namespace mtaylor
