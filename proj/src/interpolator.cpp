#include "mtaylor/interpolator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mtaylor/error.hpp"
#include "parallel.hpp"

namespace mtaylor {

void RootOptions::validate() const {
  if (scan_points == 0 || !(t_tolerance > 0.0) || !(zero_tolerance > 0.0) ||
      max_bisection_iters == 0) {
    throw std::invalid_argument("root options must all be positive");
  }
}

std::string_view method_name(RootMethod method) {
  switch (method) {
    case RootMethod::ZeroAtStart: return "zero-at-start";
    case RootMethod::SignChange: return "sign-change";
    case RootMethod::Tangent: return "tangent";
  }
  return "?";
}

namespace {

struct Root {
  double t;
  RootMethod method;
};

class RootSearch {
 public:
  RootSearch(const RemainderFunction& remainder, const RootOptions& options)
      : F_(remainder),
        opt_(options),
        tol_(options.zero_tolerance * remainder.scale()),
        dip_(std::sqrt(options.zero_tolerance) * remainder.scale()) {}

  InterpolationResult run() {
    const double f0 = F_(0.0);
    if (std::abs(f0) <= tol_) return finish({0.0, RootMethod::ZeroAtStart});

    const unsigned cells = opt_.scan_points;
    std::vector<double> samples{f0};
    samples.reserve(cells + 1);
    std::optional<std::size_t> change;
    for (std::size_t j = 1; j <= cells; ++j) {
      const double v = F_(grid(j));
      samples.push_back(v);
      if (v == 0.0 || (v > 0.0) != (samples[j - 1] > 0.0)) {
        change = j;
        break;
      }
    }

    std::optional<Root> crossing;
    if (change) {
      const std::size_t j = *change;
      const double t = samples[j] == 0.0
                           ? grid(j)
                           : bisect(grid(j - 1), grid(j), samples[j - 1]);
      if (std::abs(F_(t)) <= tol_) crossing = Root{t, RootMethod::SignChange};
    }

    // Every sample before the change shares one sign, so a root there is a
    // point where F touches (or barely crosses) zero between samples.
    std::optional<Root> touch;
    const std::size_t last = change ? *change - 1 : cells;
    for (std::size_t i = 0; i <= last && !touch; ++i) {
      const double a = std::abs(samples[i]);
      if (!(a < dip_)) continue;
      const double left = i > 0 ? std::abs(samples[i - 1]) : kInf;
      const double right = i + 1 < samples.size() ? std::abs(samples[i + 1]) : kInf;
      if (a > left || a > right) continue;
      touch = refine_touch(i, samples);
    }

    if (touch && (!crossing || touch->t <= crossing->t + opt_.t_tolerance)) {
      return finish(*touch);
    }
    if (crossing) return finish(*crossing);
    throw ResolutionError(
        "no root of the remainder resolved on [0, 1] with " +
        std::to_string(cells) + " scan points; raise scan_points");
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  double grid(std::size_t j) const {
    return static_cast<double>(j) / static_cast<double>(opt_.scan_points);
  }

  // Sign-change bisection on [lo, hi] with F(lo) = f_lo. Stops once the
  // bracket is below t_tolerance and the better endpoint passes the zero
  // test, or when the bracket cannot shrink further.
  double bisect(double lo, double hi, double f_lo) {
    double f_hi = F_(hi);
    for (unsigned used = 0; used < opt_.max_bisection_iters; ++used) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      if (hi - lo <= opt_.t_tolerance &&
          std::min(std::abs(f_lo), std::abs(f_hi)) <= tol_) {
        break;
      }
      ++iterations_;
      const double f_mid = F_(mid);
      if (f_mid == 0.0) return mid;
      if ((f_mid > 0.0) == (f_lo > 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
        f_hi = f_mid;
      }
    }
    return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
  }

  // Golden-section minimization of sign * F around sample i.
  std::optional<Root> refine_touch(std::size_t i, const std::vector<double>& samples) {
    const double sign = samples[i] > 0.0 ? 1.0 : -1.0;
    double a = grid(i == 0 ? 0 : i - 1);
    double b = grid(std::min<std::size_t>(i + 1, opt_.scan_points));
    auto g = [&](double t) { return sign * F_(t); };

    constexpr double kInvPhi = 0.6180339887498949;
    double best_t = grid(i);
    double best = sign * samples[i];
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double gc = g(c), gd = g(d);
    for (unsigned used = 0;
         b - a > opt_.t_tolerance && used < opt_.max_bisection_iters; ++used) {
      ++iterations_;
      if (gc < gd) {
        b = d;
        d = c;
        gd = gc;
        c = b - kInvPhi * (b - a);
        gc = g(c);
      } else {
        a = c;
        c = d;
        gc = gd;
        d = a + kInvPhi * (b - a);
        gd = g(d);
      }
      if (gc < best) { best = gc; best_t = c; }
      if (gd < best) { best = gd; best_t = d; }
      if (best < 0.0) break;
    }
    if (best > tol_) return std::nullopt;
    if (best >= 0.0) return Root{best_t, RootMethod::Tangent};

    // F crossed zero between samples: bisect from the left edge of the cell,
    // where sign * F is still positive.
    const double lo = grid(i == 0 ? 0 : i - 1);
    const double t = bisect(lo, best_t, samples[i == 0 ? 0 : i - 1]);
    return Root{t, best >= -tol_ ? RootMethod::Tangent : RootMethod::SignChange};
  }

  InterpolationResult finish(Root root) {
    InterpolationResult result;
    result.tau = root.t;
    result.xi = F_.segment_point(root.t);
    result.residual = std::abs(F_(root.t)) / F_.scale();
    result.method = root.method;
    result.iterations = iterations_;
    return result;
  }

  const RemainderFunction& F_;
  const RootOptions& opt_;
  double tol_;
  double dip_;
  unsigned iterations_ = 0;
};

}  // namespace

InterpolationResult least_root(const RemainderFunction& remainder,
                               const RootOptions& options) {
  options.validate();
  return RootSearch(remainder, options).run();
}

InterpolationResult least_root(const FunctionModel& model,
                               std::span<const double> center, unsigned order,
                               std::span<const double> x, const RootOptions& options) {
  return least_root(RemainderFunction(model, center, order, x), options);
}

std::vector<double> interpolation_point(const FunctionModel& model,
                                        std::span<const double> center,
                                        unsigned order, std::span<const double> x,
                                        const RootOptions& options) {
  return least_root(model, center, order, x, options).xi;
}

InterpolationResult interpolation_point_symmetric(const FunctionModel& model,
                                                  unsigned order,
                                                  std::span<const double> x,
                                                  std::span<const double> y,
                                                  const RootOptions& options) {
  return least_root(model, y, order, x, options);
}

double dyadic_tau(const RemainderFunction& remainder, std::uint64_t n, unsigned depth) {
  if (n == 0) throw std::invalid_argument("tau_n requires n >= 1");
  if (depth == 0 || depth > 52) {
    throw std::invalid_argument("dyadic depth must lie in [1, 52]");
  }
  const double bound = 1.0 / static_cast<double>(n);
  const std::uint64_t points = std::uint64_t{1} << depth;
  for (std::uint64_t j = 0; j <= points; ++j) {
    const double q = std::ldexp(static_cast<double>(j), -static_cast<int>(depth));
    if (std::abs(remainder(q)) < bound) return q;
  }
  throw ResolutionError("no dyadic point j/2^" + std::to_string(depth) +
                        " satisfies |F| < 1/" + std::to_string(n));
}

double dyadic_tau(const FunctionModel& model, std::span<const double> center,
                  unsigned order, std::span<const double> x, std::uint64_t n,
                  unsigned depth) {
  return dyadic_tau(RemainderFunction(model, center, order, x), n, depth);
}

TauNSeries dyadic_tau_table(const FunctionModel& model, std::span<const double> center,
                            unsigned order, std::span<const double> x,
                            std::vector<std::uint64_t> n_list, unsigned depth,
                            const RootOptions& options) {
  const RemainderFunction remainder(model, center, order, x);
  std::sort(n_list.begin(), n_list.end());
  n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());

  TauNSeries series;
  series.grid_depth = depth;
  for (std::uint64_t n : n_list) {
    series.entries.push_back({n, dyadic_tau(remainder, n, depth)});
  }
  series.tau = least_root(remainder, options).tau;
  return series;
}

std::size_t ScanSeries::failed_rows() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const ScanRow& r) { return !r.method; }));
}

ScanSeries scan_interpolation_point(const FunctionModel& model, double center,
                                    unsigned order, double x_start, double x_end,
                                    std::size_t steps, const RootOptions& options) {
  if (model.dimension() != 1) {
    throw DimensionMismatchError("scan requires a one-dimensional model");
  }
  if (steps == 0 || !(x_end > x_start)) {
    throw std::invalid_argument("scan needs steps >= 1 and x_end > x_start");
  }
  options.validate();

  ScanSeries series;
  series.function_text = model.describe();
  series.center = center;
  series.order = order;
  series.options = options;
  series.rows.resize(steps + 1);

  const double h = (x_end - x_start) / static_cast<double>(steps);
  detail::parallel_for(steps + 1, [&](std::size_t i) {
    ScanRow& row = series.rows[i];
    row.x = i == steps ? x_end : x_start + static_cast<double>(i) * h;
    const double c[1] = {center};
    const double x[1] = {row.x};
    try {
      const InterpolationResult r = least_root(model, c, order, x, options);
      row.tau = r.tau;
      row.xi = r.xi[0];
      row.residual = r.residual;
      row.method = r.method;
    } catch (const Error& e) {
      row.tau = row.xi = row.residual = std::numeric_limits<double>::quiet_NaN();
      row.error = e.what();
    }
  });
  detect_jumps(series);
  return series;
}

void detect_jumps(ScanSeries& series) {
  auto& rows = series.rows;
  series.jumps.clear();
  const std::size_t n = rows.size();
  // slope[i] describes the pair (i-1, i); NaN when either row failed.
  std::vector<double> slope(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < n; ++i) {
    rows[i].jump = false;
    if (rows[i].method && rows[i - 1].method) {
      slope[i] = std::abs(rows[i].xi - rows[i - 1].xi) / (rows[i].x - rows[i - 1].x);
    }
  }
  if (n > 0) rows[0].jump = false;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::isnan(slope[i])) continue;
    double local = 1.0;
    if (i >= 2 && !std::isnan(slope[i - 1])) local = std::max(local, slope[i - 1]);
    if (i + 1 < n && !std::isnan(slope[i + 1])) local = std::max(local, slope[i + 1]);
    const double h = rows[i].x - rows[i - 1].x;
    const double step = std::abs(rows[i].xi - rows[i - 1].xi);
    if (step > 10.0 * h * local) {
      rows[i].jump = true;
      series.jumps.push_back({i, rows[i - 1].x, rows[i].x, rows[i - 1].xi, rows[i].xi});
    }
  }
}

}  // namespace mtaylor
