// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "mtaylor/counterexample.hpp"
#include "mtaylor/error.hpp"
#include "mtaylor/function_model.hpp"
#include "mtaylor/interpolator.hpp"
#include "mtaylor/stochastic.hpp"
#include "support/random_models.hpp"

using namespace mtaylor;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

double xi1(const FunctionModel& model, double c, unsigned k, double x) {
  const double cc[] = {c};
  const double xx[] = {x};
  return interpolation_point(model, cc, k, xx)[0];
}

double norm_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Outcome counterexample_standard() {
  const auto start = Clock::now();
  const auto run = run_counterexample(CounterexampleVariant::Standard, 2000, -0.99, 1.2);
  const auto model = make_model(counterexample_preset(CounterexampleVariant::Standard).function, 1);
  const double xi0 = xi1(*model, -1.0, 0, 0.0);
  const double elapsed = seconds_since(start);
  const auto& s = run.summary;
  const bool pass = std::abs(xi0 + 0.75) <= 1e-6 && std::abs(s.xi_x0 + 0.5) <= 1e-4 &&
                    s.side_probe_xi >= 0.25 && s.side_probe_xi <= 0.2515 &&
                    s.jump_count == 1 && std::abs(s.jump_magnitude - 0.75) <= 5e-3 &&
                    run.scan.failed_rows() == 0 && elapsed < 2.0;
  return {pass, fmt("xi(0)=%.12f xi(x0)=%.9f xi(x0+1e-3)=%.9f jumps=%zu magnitude=%.6f "
                    "runtime=%.3fs",
                    xi0, s.xi_x0, s.side_probe_xi, s.jump_count, s.jump_magnitude, elapsed)};
}

Outcome counterexample_reflected() {
  const auto& preset = counterexample_preset(CounterexampleVariant::Reflected);
  const auto run = run_counterexample(CounterexampleVariant::Reflected, 2000, preset.range_start,
                                      preset.range_end);
  const auto& s = run.summary;
  const double gap = std::abs(s.continuity_probe_xi - s.xi_x0);
  const bool pass = std::abs(s.xi_x0 - 0.5) <= 1e-4 && s.side_probe_xi >= -0.2515 &&
                    s.side_probe_xi <= -0.25 && gap <= 1e-2 && s.continuity_probe_x > s.x0;
  return {pass, fmt("xi(-x0)=%.9f xi(-x0-1e-3)=%.9f |xi(-x0+1e-4)-xi(-x0)|=%.3g", s.xi_x0,
                    s.side_probe_xi, gap)};
}

Outcome mean_value_closed_form() {
  const auto start = Clock::now();
  const auto model = make_model("x^2", 1);
  testing::Rng rng(3);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double x = testing::uniform(rng, -10, 10);
    worst = std::max(worst, std::abs(xi1(*model, 0.0, 0, x) - x / 2));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-9 && elapsed < 1.0,
          fmt("max |xi - x/2| = %.3g over 100 points, runtime=%.3fs", worst, elapsed)};
}

Outcome remainder_identity() {
  testing::Rng rng(4);
  double worst = 0;
  int failures = 0, contained = 0;
  std::string first_error;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const unsigned k = static_cast<unsigned>(trial / 3 % 3);
    const auto model = testing::random_polynomial(rng, dim, 5);
    const auto c = testing::uniform_vector(rng, dim, -1, 1);
    auto direction = testing::uniform_vector(rng, dim, -1, 1);
    const double length = norm_diff(direction, std::vector<double>(dim, 0.0));
    const double radius = testing::uniform(rng, 0, 2);
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < dim; ++i) x[i] = c[i] + radius * direction[i] / length;
    try {
      const auto r = least_root(model, c, k, x);
      worst = std::max(worst, r.residual);
      if (r.residual > 1e-8) ++failures;
      if (r.tau >= 0.0 && r.tau <= 1.0) ++contained;
    } catch (const Error& e) {
      ++failures;
      if (first_error.empty()) first_error = e.what();
    }
  }
  return {failures == 0 && contained == 500,
          fmt("max residual %.3g, failures %d, tau in [0,1] for %d/500 %s", worst, failures,
              contained, first_error.c_str())};
}

Outcome degree_exactness() {
  testing::Rng rng(5);
  int ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const unsigned k = static_cast<unsigned>(trial % 4);
    const auto model = testing::random_polynomial(rng, dim, k);
    const auto c = testing::uniform_vector(rng, dim, -2, 2);
    const auto x = testing::uniform_vector(rng, dim, -2, 2);
    const auto r = least_root(model, c, k, x);
    if (r.tau == 0.0 && r.method == RootMethod::ZeroAtStart) ++ok;
  }
  return {ok == 100, fmt("%d/100 with tau = 0 via zero-at-start", ok)};
}

Outcome dyadic_approximants() {
  const auto model = make_model("x^2", 1);
  const double c[] = {0.0};
  const double x[] = {2.0};
  const auto table = dyadic_tau_table(*model, c, 0, x, {1, 10, 100, 1000, 10000}, 20);
  const double slack = std::ldexp(1.0, -19);
  bool close = true, monotone = true;
  double worst = 0;
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    const auto& e = table.entries[i];
    if (e.n <= 1000) {
      const double expected = 0.5 - 1.0 / (8.0 * static_cast<double>(e.n));
      worst = std::max(worst, std::abs(e.tau_n - expected));
      close = close && std::abs(e.tau_n - expected) <= slack;
    }
    if (i > 0) monotone = monotone && e.tau_n + slack >= table.entries[i - 1].tau_n;
  }
  const double last_gap = std::abs(table.entries.back().tau_n - table.tau);
  return {close && monotone && last_gap <= 1e-3,
          fmt("max |tau_n - (1/2 - 1/(8n))| = %.3g, monotone=%s, |tau_10000 - tau| = %.3g",
              worst, monotone ? "yes" : "no", last_gap)};
}

Outcome continuity_at_center() {
  testing::Rng rng(7);
  int violations = 0, checked = 0;
  std::string first_error;
  for (int m = 0; m < 20; ++m) {
    const std::size_t dim = 1 + m % 3;
    const unsigned k = static_cast<unsigned>(m % 3);
    const auto model = make_model(testing::random_smooth_expression(rng, dim, 3), dim);
    const auto c = testing::uniform_vector(rng, dim, -1, 1);
    auto u = testing::uniform_vector(rng, dim, -1, 1);
    const double length = norm_diff(u, std::vector<double>(dim, 0.0));
    for (double& v : u) v /= length;
    for (int j = 1; j <= 20; ++j) {
      std::vector<double> x(dim);
      for (std::size_t i = 0; i < dim; ++i) x[i] = c[i] + std::ldexp(u[i], -j);
      try {
        const auto xi = interpolation_point(*model, c, k, x);
        if (norm_diff(xi, c) > norm_diff(x, c)) ++violations;
      } catch (const Error& e) {
        ++violations;
        if (first_error.empty()) first_error = e.what();
      }
      ++checked;
    }
  }
  return {violations == 0 && checked == 400,
          fmt("%d violations in %d points on 20 models %s", violations, checked,
              first_error.c_str())};
}

Outcome delta_method() {
  const auto start = Clock::now();
  const auto model = make_model("x^2", 1);
  DeltaConfig config;
  config.center = {0.0};
  config.n_values = {100, 10000};
  config.samples = 10000;
  config.seed = 42;
  DeltaReport report;
  try {
    report = delta_method_sim(*model, config);
  } catch (const Error& e) {
    return {false, e.what()};
  }
  const double elapsed = seconds_since(start);
  bool pass = report.rows.size() == 2 && elapsed < 10.0;
  std::string detail;
  for (const auto& row : report.rows) {
    const double expected = std::sqrt(2.0 / std::numbers::pi / static_cast<double>(row.n));
    const double rel = std::abs(row.mean_gradient_deviation - expected) / expected;
    pass = pass && row.samples == 10000 && row.skipped == 0 &&
           row.max_identity_residual <= 1e-8 && rel <= 0.05;
    detail += fmt("n=%llu deviation=%.5f (expected %.5f, %.1f%%) max residual %.3g; ",
                  static_cast<unsigned long long>(row.n), row.mean_gradient_deviation,
                  expected, 100 * rel, row.max_identity_residual);
  }
  pass = pass && report.rows[1].mean_gradient_deviation < report.rows[0].mean_gradient_deviation;
  return {pass, detail + fmt("runtime=%.2fs", elapsed)};
}

Outcome ito_expansion() {
  ItoConfig config;
  config.t_end = 1.0;
  config.steps = 10000;
  config.paths = 100;
  config.seed = 7;
  std::string detail;
  bool pass = true;
  for (const char* text : {"x^2", "x^3"}) {
    const auto start = Clock::now();
    try {
      const auto report = ito_sim(*make_model(text, 1), config);
      double worst = 0;
      for (const auto& row : report.rows) worst = std::max(worst, row.telescoping_residual);
      pass = pass && report.rows.size() == 100 && report.skipped_paths == 0 && worst <= 1e-7;
      detail += fmt("%s: max residual %.3g", text, worst);
      if (std::string(text) == "x^2") {
        const double mean = report.mean_second_order_sum();
        pass = pass && std::abs(mean - 1.0) <= 0.05;
        detail += fmt(", mean sum (dX)^2 = %.5f", mean);
      }
      detail += fmt(" (%.1fs); ", seconds_since(start));
    } catch (const Error& e) {
      pass = false;
      detail += std::string(text) + ": " + e.what() + "; ";
    }
  }
  return {pass, detail};
}

Outcome differentiation_oracle() {
  testing::Rng rng(10);
  int checked = 0, failures = 0;
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const auto model = make_model(testing::random_smooth_expression(rng, dim, 3), dim);
    const auto f = model->partial_evaluator(MultiIndex(dim));
    for (int p = 0; p < 5; ++p) {
      const auto point = testing::uniform_vector(rng, dim, -1.5, 1.5);
      for (std::size_t axis = 0; axis < dim; ++axis) {
        const double symbolic = model->partial(MultiIndex::unit(dim, axis), point);
        const double fd = testing::central_difference(f, point, axis, 1e-5);
        const double rel = std::abs(symbolic - fd) / (1.0 + std::abs(symbolic));
        worst = std::max(worst, rel);
        if (rel > 1e-6) ++failures;
        ++checked;
      }
    }
  }
  return {failures == 0,
          fmt("%d partials checked, max |sym - fd| / (1 + |sym|) = %.3g", checked, worst)};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome cli_determinism() {
  const auto dir = fs::temp_directory_path() / ("mtaylor_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::string> commands = {
      "xi --function 'x^2' --center 0 --order 0 --point 2",
      "xi --function 'exp(x1)*cos(x2)' --dim 2 --center 0,0 --order 1 --point 0.5,-1 --format json",
      "scan --function 'x^2' --center 0 --order 0 --range -1 1 --steps 100",
      "scan --function 'x^3*(x+1)' --center -1 --range -0.99 1.2 --steps 2000 --format json",
      "taun --function 'x^2' --center 0 --order 0 --point 2 --n 1,10,100",
      "counterexample --variant standard",
      "counterexample --variant reflected --format json",
      "delta --function 'x^2' --center 0 --n 100,10000 --samples 10000 --seed 42",
      "ito --function 'x^2' --t 1 --steps 10000 --paths 100 --seed 7",
      "ito --function 'x^3' --t 1 --steps 1000 --paths 10 --seed 7 --format json",
  };
  int identical = 0;
  std::string detail;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string files[2];
    bool ran = true;
    for (int rep = 0; rep < 2; ++rep) {
      const auto path = dir / fmt("out%zu_%d", i, rep);
      const std::string cmd = std::string("'") + MTAYLOR_BINARY + "' " + commands[i] +
                              " --output '" + path.string() + "' > /dev/null";
      ran = ran && std::system(cmd.c_str()) == 0;
      files[rep] = slurp(path);
    }
    if (ran && !files[0].empty() && files[0] == files[1]) {
      ++identical;
    } else {
      detail += " differs: " + commands[i];
    }
  }
  fs::remove_all(dir);
  return {identical == static_cast<int>(commands.size()),
          fmt("%d/%zu invocations byte-identical", identical, commands.size()) + detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {"counterexample reproduction", counterexample_standard},
      {"reflected counterexample", counterexample_reflected},
      {"mean-value closed form", mean_value_closed_form},
      {"remainder identity", remainder_identity},
      {"degree <= k exactness", degree_exactness},
      {"tau_n construction", dyadic_approximants},
      {"continuity at c", continuity_at_center},
      {"delta-method identity", delta_method},
      {"Ito telescoping identity", ito_expansion},
      {"parser/differentiation oracle", differentiation_oracle},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  int index = 1;
  for (const auto& c : criteria) {
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failed;
    std::printf("%s %2d %s: %s\n", outcome.pass ? "PASS" : "FAIL", index++, c.name,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
