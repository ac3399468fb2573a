#pragma once

// Built-in discontinuity example: f(x) = x^3 (x + 1), c = -1, k = 0. The least
// mean-value point solves 4 xi^3 + 3 xi^2 = x^3 and jumps from -1/2 to 1/4 at
// x0 = 4^(-1/3), where the root at the local maximum of 4 xi^3 + 3 xi^2 stops
// being reachable. The reflected variant g(x) = f(-x) = x^4 - x^3, c = 1
// mirrors it: the jump sits at -x0 and xi is right- but not left-continuous.

#include <cstddef>
#include <optional>
#include <string_view>

#include "mtaylor/interpolator.hpp"

namespace mtaylor {

enum class CounterexampleVariant { Standard, Reflected };

std::optional<CounterexampleVariant> parse_counterexample_variant(std::string_view name);
std::string_view variant_name(CounterexampleVariant variant);

struct CounterexamplePreset {
  std::string_view function;
  double center;
  unsigned order;
  double x0;
  double range_start, range_end;
  /// +1 when xi is left-continuous at x0 (the far branch is on the right),
  /// -1 for the mirror image.
  int side;
  double expected_xi_x0;
  /// Closed-form one-sided limit on the discontinuous side.
  double expected_side_limit;
  double expected_jump;
};

const CounterexamplePreset& counterexample_preset(CounterexampleVariant variant);

struct CounterexampleSummary {
  double x0;
  double xi_x0;
  RootMethod method_x0;
  /// x0 + side * 1e-3, on the far branch.
  double side_probe_x;
  double side_probe_xi;
  /// x0 - side * 1e-4, on the continuous side.
  double continuity_probe_x;
  double continuity_probe_xi;
  std::size_t jump_count;
  /// Bisection refinement of the first flagged jump (NaN without one).
  double jump_location;
  double jump_xi_before;  // xi just left of jump_location
  double jump_xi_after;   // xi just right of jump_location
  double jump_magnitude;  // |jump_xi_after - jump_xi_before|
};

struct CounterexampleRun {
  ScanSeries scan;
  CounterexampleSummary summary;
};

CounterexampleRun run_counterexample(CounterexampleVariant variant, std::size_t steps,
                                     double range_start, double range_end,
                                     const RootOptions& options = {});

}  // namespace mtaylor
