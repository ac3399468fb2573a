#include "mtaylor/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <numeric>
#include <optional>
#include <string>

#include "mtaylor/error.hpp"
#include "parallel.hpp"

namespace mtaylor {

namespace {

std::vector<double> gradient(const FunctionModel& model, std::span<const double> p) {
  std::vector<double> g(model.dimension());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = model.partial(MultiIndex::unit(model.dimension(), i), p);
  }
  return g;
}

struct DeltaSample {
  bool ok = false;
  double deviation = 0.0;
  double residual = 0.0;
};

}  // namespace

DeltaReport delta_method_sim(const FunctionModel& model, const DeltaConfig& config) {
  const std::size_t dim = model.dimension();
  if (config.center.size() != dim) {
    throw DimensionMismatchError("delta method: center has length " +
                                 std::to_string(config.center.size()) +
                                 ", model dimension is " + std::to_string(dim));
  }
  if (model.max_order() < 1) throw CapabilityError("delta method needs first partials");

  const RandomStream root(config.seed);
  const std::span<const double> c = config.center;
  const double f_c = model.evaluate(c);
  const std::vector<double> grad_c = gradient(model, c);

  std::vector<std::uint64_t> n_values = config.n_values;
  std::sort(n_values.begin(), n_values.end());

  DeltaReport report{config.seed, {}};
  for (std::uint64_t n : n_values) {
    if (n == 0) throw std::invalid_argument("delta method: n must be positive");
    const double root_n = std::sqrt(static_cast<double>(n));
    std::vector<DeltaSample> samples(config.samples);

    detail::parallel_for(config.samples, [&](std::size_t s) {
      RandomStream stream = root.substream(n, s);
      std::vector<double> x(dim);
      for (std::size_t i = 0; i < dim; ++i) x[i] = c[i] + stream.normal() / root_n;
      try {
        const double f_x = model.evaluate(x);
        const InterpolationResult r =
            interpolation_point_symmetric(model, 0, x, c, config.root_options);
        const std::vector<double> grad_xi = gradient(model, r.xi);

        const double lhs = root_n * (f_x - f_c);
        double rhs = 0.0;
        double deviation_sq = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          rhs += grad_xi[i] * (root_n * (x[i] - c[i]));
          deviation_sq += (grad_xi[i] - grad_c[i]) * (grad_xi[i] - grad_c[i]);
        }
        const double scale = 1.0 + std::abs(f_x) + std::abs(f_c);
        samples[s] = {true, std::sqrt(deviation_sq),
                      std::abs(lhs - rhs) / (root_n * scale)};
      } catch (const DomainError&) {
        samples[s].ok = false;
      }
    });

    DeltaRow row{n, 0, 0, 0.0, 0.0};
    double deviation_sum = 0.0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const DeltaSample& d = samples[s];
      if (!d.ok) {
        ++row.skipped;
        continue;
      }
      if (d.residual > config.identity_tolerance) {
        throw IdentityError("delta-method identity residual " +
                            std::to_string(d.residual) + " at n = " +
                            std::to_string(n) + ", sample " + std::to_string(s));
      }
      ++row.samples;
      deviation_sum += d.deviation;
      row.max_identity_residual = std::max(row.max_identity_residual, d.residual);
    }
    row.mean_gradient_deviation =
        row.samples > 0 ? deviation_sum / static_cast<double>(row.samples) : 0.0;
    report.rows.push_back(row);
  }
  return report;
}

double ItoReport::mean_second_order_sum() const {
  if (rows.empty()) return 0.0;
  double sum = 0.0;
  for (const ItoRow& r : rows) sum += r.second_order_sum;
  return sum / static_cast<double>(rows.size());
}

ItoReport ito_sim(const FunctionModel& model, const ItoConfig& config) {
  if (model.dimension() != 1) {
    throw DimensionMismatchError("Ito expansion requires a one-dimensional model");
  }
  if (model.max_order() < 2) throw CapabilityError("Ito expansion needs f''");
  if (config.steps == 0 || !(config.t_end > 0.0)) {
    throw std::invalid_argument("Ito expansion needs steps >= 1 and t > 0");
  }

  const RandomStream root(config.seed);
  const double dt = config.t_end / static_cast<double>(config.steps);
  const double sqrt_dt = std::sqrt(dt);
  const MultiIndex d1{1}, d2{2};
  const PartialEvaluator f = model.partial_evaluator(MultiIndex{0});
  const PartialEvaluator f_prime = model.partial_evaluator(d1);
  const PartialEvaluator f_second = model.partial_evaluator(d2);

  std::vector<std::optional<ItoRow>> rows(config.paths);
  detail::parallel_for(config.paths, [&](std::size_t p) {
    RandomStream stream = root.substream(p);
    double first = 0.0, second = 0.0, correction = 0.0;
    double prev = config.x0;
    try {
      for (std::uint64_t step = 0; step < config.steps; ++step) {
        const double next = prev + sqrt_dt * stream.normal();
        const double dx = next - prev;
        const double y[1] = {prev};
        const double x[1] = {next};
        const InterpolationResult r =
            interpolation_point_symmetric(model, 1, x, y, config.root_options);
        first += f_prime(y) * dx;
        second += 0.5 * f_second(r.xi) * dx * dx;
        correction += 0.5 * f_second(y) * dt;
        prev = next;
      }
      const double start[1] = {config.x0};
      const double end[1] = {prev};
      const double increment = f(end) - f(start);
      rows[p] = ItoRow{p, config.steps, std::abs(increment - first - second), second,
                       correction, increment};
    } catch (const DomainError&) {
      rows[p].reset();
    }
  });

  ItoReport report{config.seed, 0, {}};
  for (const auto& row : rows) {
    if (!row) {
      ++report.skipped_paths;
      continue;
    }
    if (row->telescoping_residual > config.identity_tolerance) {
      throw IdentityError("Ito telescoping residual " +
                          std::to_string(row->telescoping_residual) + " on path " +
                          std::to_string(row->path));
    }
    report.rows.push_back(*row);
  }
  return report;
}

}  // namespace mtaylor
