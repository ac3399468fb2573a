#pragma once

#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "mtaylor/function_model.hpp"
#include "mtaylor/multiindex.hpp"

namespace mtaylor {

/// T^k_c f: coefficients D^alpha f(c) / alpha! for every |alpha| <= k,
/// keyed (and therefore iterated) in graded-lex order.
struct TaylorPolynomial {
  std::vector<double> center;
  unsigned order = 0;
  std::map<MultiIndex, double> coefficients;
};

/// Throws CapabilityError when k exceeds model.max_order(); evaluation
/// errors at c propagate.
TaylorPolynomial taylor_coefficients(const FunctionModel& model,
                                     std::span<const double> center,
                                     unsigned order);

/// sum_alpha coeff(alpha) (x - c)^alpha, summed in graded-lex order.
double taylor_eval(const TaylorPolynomial& taylor, std::span<const double> x);

/// F(x, t) = f(x) - T^k_c f(x)
///           - sum_{|alpha| = k+1} D^alpha f(c + t(x - c)) (x - c)^alpha / alpha!
///
/// Prepared once per (model, c, k, x) so that repeated evaluation in t only
/// touches the order-(k+1) partials on the segment.
class RemainderFunction {
 public:
  RemainderFunction(const FunctionModel& model, std::span<const double> center,
                    unsigned order, std::span<const double> x);

  /// Throws DomainError carrying the offending t.
  double operator()(double t) const;

  /// S(x) = 1 + |f(x)| + |T^k_c f(x)|, the scale for relative zero tests.
  double scale() const noexcept { return 1.0 + std::abs(fx_) + std::abs(tx_); }

  double f_at_x() const noexcept { return fx_; }
  double taylor_at_x() const noexcept { return tx_; }
  std::span<const double> center() const noexcept { return center_; }
  std::span<const double> x() const noexcept { return x_; }

  /// c + t (x - c)
  std::vector<double> segment_point(double t) const;

 private:
  struct Term {
    PartialEvaluator partial;
    double weight;  // (x - c)^alpha / alpha!
  };

  std::vector<double> center_;
  std::vector<double> x_;
  std::vector<double> offset_;  // x - c
  double fx_ = 0.0;
  double tx_ = 0.0;
  std::vector<Term> terms_;
};

/// One-shot F(x, t).
double remainder_F(const FunctionModel& model, std::span<const double> center,
                   unsigned order, std::span<const double> x, double t);

/// S(x) as above.
double remainder_scale(const FunctionModel& model, std::span<const double> center,
                       unsigned order, std::span<const double> x);

}  // namespace mtaylor
