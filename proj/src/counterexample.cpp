#include "mtaylor/counterexample.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "mtaylor/function_model.hpp"

namespace mtaylor {
namespace {

const double kX0 = std::cbrt(0.25);

const std::array<CounterexamplePreset, 2> kPresets{{
    {"x^3*(x+1)", -1.0, 0, kX0, -0.99, 1.2, +1, -0.5, 0.25, 0.75},
    {"x^4-x^3", 1.0, 0, -kX0, -1.2, 0.99, -1, 0.5, -0.25, 0.75},
}};

double xi_at(const FunctionModel& model, const CounterexamplePreset& preset, double x,
             const RootOptions& options, RootMethod* method = nullptr) {
  const double c[] = {preset.center};
  const double p[] = {x};
  const auto result = least_root(model, c, preset.order, p, options);
  if (method) *method = result.method;
  return result.xi[0];
}

}  // namespace

std::optional<CounterexampleVariant> parse_counterexample_variant(std::string_view name) {
  if (name == "standard") return CounterexampleVariant::Standard;
  if (name == "reflected") return CounterexampleVariant::Reflected;
  return std::nullopt;
}

std::string_view variant_name(CounterexampleVariant variant) {
  return variant == CounterexampleVariant::Standard ? "standard" : "reflected";
}

const CounterexamplePreset& counterexample_preset(CounterexampleVariant variant) {
  return kPresets[variant == CounterexampleVariant::Standard ? 0 : 1];
}

CounterexampleRun run_counterexample(CounterexampleVariant variant, std::size_t steps,
                                     double range_start, double range_end,
                                     const RootOptions& options) {
  const auto& preset = counterexample_preset(variant);
  const auto model = make_model(preset.function, 1);

  CounterexampleRun run{scan_interpolation_point(*model, preset.center, preset.order,
                                                 range_start, range_end, steps, options),
                        {}};
  run.scan.function_text = std::string(preset.function);

  auto& s = run.summary;
  s.x0 = preset.x0;
  s.xi_x0 = xi_at(*model, preset, preset.x0, options, &s.method_x0);
  s.side_probe_x = preset.x0 + preset.side * 1e-3;
  s.side_probe_xi = xi_at(*model, preset, s.side_probe_x, options);
  s.continuity_probe_x = preset.x0 - preset.side * 1e-4;
  s.continuity_probe_xi = xi_at(*model, preset, s.continuity_probe_x, options);
  s.jump_count = run.scan.jumps.size();

  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.jump_location = s.jump_xi_before = s.jump_xi_after = s.jump_magnitude = nan;
  if (!run.scan.jumps.empty()) {
    const auto& jump = run.scan.jumps.front();
    double a = jump.x_left, b = jump.x_right;
    double xa = jump.xi_left, xb = jump.xi_right;
    // Keep the half whose end values are still far apart.
    for (int i = 0; i < 60 && b - a > 1e-13; ++i) {
      const double m = 0.5 * (a + b);
      const double xm = xi_at(*model, preset, m, options);
      if (std::abs(xm - xa) < std::abs(xm - xb)) {
        a = m;
        xa = xm;
      } else {
        b = m;
        xb = xm;
      }
    }
    s.jump_location = 0.5 * (a + b);
    s.jump_xi_before = xa;
    s.jump_xi_after = xb;
    s.jump_magnitude = std::abs(xb - xa);
  }
  return run;
}

}  // namespace mtaylor
