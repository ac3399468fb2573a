#pragma once

// Least-root selection of the Lagrange interpolation point.
//
// For f of class C^{k+1}, a center c and a point x, every root t in [0, 1] of
//
//   F(x, t) = f(x) - T^k_c f(x)
//             - sum_{|alpha| = k+1} D^alpha f(c + t(x - c)) (x - c)^alpha / alpha!
//
// gives a valid Lagrange point c + t(x - c). The selection used here is the
// least such root, tau(x) = inf { t in [0, 1] : F(x, t) = 0 }, and
// xi(x) = c + tau(x)(x - c). The dyadic approximants
//
//   tau_n(x) = min { q = j / 2^M : |F(x, q)| < 1/n }
//
// are non-decreasing in n and converge to tau(x).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtaylor/function_model.hpp"
#include "mtaylor/taylor.hpp"

namespace mtaylor {

struct RootOptions {
  unsigned scan_points = 4096;
  double t_tolerance = 1e-12;
  /// Relative to S(x) = 1 + |f(x)| + |T^k_c f(x)|.
  double zero_tolerance = 1e-10;
  unsigned max_bisection_iters = 200;

  /// Throws std::invalid_argument unless every field is positive.
  void validate() const;
};

enum class RootMethod { ZeroAtStart, SignChange, Tangent };

std::string_view method_name(RootMethod method);

struct InterpolationResult {
  double tau = 0.0;
  std::vector<double> xi;
  /// |F(x, tau)| / S(x)
  double residual = 0.0;
  RootMethod method = RootMethod::ZeroAtStart;
  /// Bisection and minimization steps after the grid scan.
  unsigned iterations = 0;
};

/// Least root of F(x, .) on [0, 1]:
///  1. t = 0 when |F(x, 0)| <= zero_tolerance * S(x);
///  2. left-to-right scan of scan_points cells for the first sign change,
///     refined by bisection to t_tolerance;
///  3. in the cells left of that change, every discrete local minimum of |F|
///     below sqrt(zero_tolerance) * S(x) is refined by a golden-section search
///     to catch roots where F touches zero without changing sign.
/// The leftmost root wins; ties within t_tolerance are reported as Tangent.
/// Throws ResolutionError when no root is resolved and DomainError when the
/// segment leaves the domain of f.
InterpolationResult least_root(const FunctionModel& model,
                               std::span<const double> center, unsigned order,
                               std::span<const double> x,
                               const RootOptions& options = {});

/// Same search on a prepared remainder.
InterpolationResult least_root(const RemainderFunction& remainder,
                               const RootOptions& options = {});

/// xi(x) = c + tau(x)(x - c).
std::vector<double> interpolation_point(const FunctionModel& model,
                                        std::span<const double> center,
                                        unsigned order, std::span<const double> x,
                                        const RootOptions& options = {});

/// Two-point version: the Lagrange point on [y, x] for the expansion of f(x)
/// around y, i.e. y + tau_y(x)(x - y).
InterpolationResult interpolation_point_symmetric(const FunctionModel& model,
                                                  unsigned order,
                                                  std::span<const double> x,
                                                  std::span<const double> y,
                                                  const RootOptions& options = {});

/// tau_n on the dyadic grid j / 2^depth. Throws ResolutionError naming n and
/// depth when no grid point satisfies |F| < 1/n.
double dyadic_tau(const FunctionModel& model, std::span<const double> center,
                  unsigned order, std::span<const double> x, std::uint64_t n,
                  unsigned depth);

double dyadic_tau(const RemainderFunction& remainder, std::uint64_t n, unsigned depth);

struct TauNSeries {
  struct Entry {
    std::uint64_t n;
    double tau_n;
  };
  std::vector<Entry> entries;  // ascending n
  unsigned grid_depth = 0;
  /// least_root() at the same point, for comparison.
  double tau = 0.0;
};

TauNSeries dyadic_tau_table(const FunctionModel& model, std::span<const double> center,
                            unsigned order, std::span<const double> x,
                            std::vector<std::uint64_t> n_list, unsigned depth,
                            const RootOptions& options = {});

struct ScanRow {
  double x = 0.0;
  double tau = 0.0;
  double xi = 0.0;
  double residual = 0.0;
  std::optional<RootMethod> method;  // empty when the row failed
  bool jump = false;                 // discontinuity between this row and the previous
  std::string error;
};

struct Jump {
  std::size_t row;  // index of the right-hand row
  double x_left, x_right;
  double xi_left, xi_right;
};

struct ScanSeries {
  std::string function_text;
  double center = 0.0;
  unsigned order = 0;
  RootOptions options;
  std::vector<ScanRow> rows;  // strictly increasing x
  std::vector<Jump> jumps;

  std::size_t failed_rows() const;
};

/// xi over x_start + i (x_end - x_start) / steps, i = 0..steps, for a
/// one-dimensional model. Row failures are recorded, not thrown. Consecutive
/// rows are flagged as a jump when |d xi| exceeds 10 h max(s, 1), where h is
/// the grid spacing and s the larger |d xi| / h of the neighbouring row pairs.
ScanSeries scan_interpolation_point(const FunctionModel& model, double center,
                                    unsigned order, double x_start, double x_end,
                                    std::size_t steps, const RootOptions& options = {});

/// Jump flags for an already computed series (recomputes `rows[i].jump` and
/// `jumps`).
void detect_jumps(ScanSeries& series);

}  // namespace mtaylor
