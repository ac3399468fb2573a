#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mtaylor/function_model.hpp"
#include "mtaylor/interpolator.hpp"
#include "mtaylor/random_stream.hpp"

namespace mtaylor {

/// Delta-method identity
///
///   sqrt(n) (f(X_n) - f(c)) = grad f(xi_n)^T sqrt(n) (X_n - c),
///   X_n = c + Z / sqrt(n),  Z ~ N(0, I),
///
/// with xi_n the least-root Lagrange point on [c, X_n] (order 0).
struct DeltaConfig {
  std::vector<double> center;
  std::vector<std::uint64_t> n_values;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 42;
  /// Per-sample bound on |lhs - rhs| / (sqrt(n) S(X_n)).
  double identity_tolerance = 1e-8;
  RootOptions root_options;
};

struct DeltaRow {
  std::uint64_t n;
  std::uint64_t samples;  // samples that evaluated
  std::uint64_t skipped;  // domain violations
  /// mean over samples of |grad f(xi_n) - grad f(c)| (Euclidean)
  double mean_gradient_deviation;
  double max_identity_residual;
};

struct DeltaReport {
  std::uint64_t seed;
  std::vector<DeltaRow> rows;  // ascending n
};

/// Throws IdentityError when a sample's residual exceeds the tolerance.
DeltaReport delta_method_sim(const FunctionModel& model, const DeltaConfig& config);

/// Second-order partition expansion along a Brownian path X_t = x0 + W_t:
///
///   f(X_t) - f(X_0) = sum f'(X_{t_{n-1}}) dX_n + 1/2 sum f''(xi_n) dX_n^2,
///
/// with xi_n the least-root Lagrange point on [X_{t_{n-1}}, X_{t_n}]
/// (order 1).
struct ItoConfig {
  double t_end = 1.0;
  std::uint64_t steps = 10000;
  std::uint64_t paths = 100;
  std::uint64_t seed = 7;
  double x0 = 0.0;
  /// Absolute bound on the per-path telescoping residual.
  double identity_tolerance = 1e-7;
  /// The residual sums one root-finding error per step, so the zero test is
  /// tighter than the single-point default.
  RootOptions root_options{4096, 1e-12, 1e-13, 200};
};

struct ItoRow {
  std::uint64_t path;
  std::uint64_t steps;
  double telescoping_residual;
  double second_order_sum;  // 1/2 sum f''(xi_n) dX^2
  double ito_correction;    // 1/2 sum f''(X_{t_{n-1}}) dt
  double increment;         // f(X_t) - f(X_0)
};

struct ItoReport {
  std::uint64_t seed;
  std::uint64_t skipped_paths;
  std::vector<ItoRow> rows;  // ascending path id

  double mean_second_order_sum() const;
};

/// Throws IdentityError when a path's residual exceeds the tolerance.
ItoReport ito_sim(const FunctionModel& model, const ItoConfig& config);

}  // namespace mtaylor
