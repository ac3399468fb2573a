#include "mtaylor/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>

#include "mtaylor/counterexample.hpp"
#include "mtaylor/error.hpp"
#include "mtaylor/function_model.hpp"
#include "mtaylor/interpolator.hpp"
#include "mtaylor/random_stream.hpp"
#include "mtaylor/report_writer.hpp"
#include "mtaylor/stochastic.hpp"

namespace mtaylor::cli {
namespace {

using report::Format;
using report::Metadata;

// Bad flag values detected after CLI11 has accepted the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_double(std::string_view text, std::string_view flag) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [end, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || end != last || !std::isfinite(value)) {
    throw UsageError(std::string(flag) + ": not a finite number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    parts.push_back(text.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

std::vector<double> parse_doubles(std::string_view text, std::string_view flag) {
  std::vector<double> values;
  for (auto part : split(text)) values.push_back(parse_double(part, flag));
  return values;
}

std::vector<std::uint64_t> parse_counts(std::string_view text, std::string_view flag) {
  std::vector<std::uint64_t> values;
  for (auto part : split(text)) {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || end != part.data() + part.size() || v == 0) {
      throw UsageError(std::string(flag) + ": not a positive integer: '" + std::string(part) + "'");
    }
    values.push_back(v);
  }
  return values;
}

struct RootFlags {
  std::string tol_zero, tol_t;
  std::optional<unsigned> scan_points;

  void add_to(CLI::App& app) {
    app.add_option("--tol-zero", tol_zero, "Zero test |F| <= tol * S(x)");
    app.add_option("--tol-t", tol_t, "Bisection tolerance in t");
    app.add_option("--scan-points", scan_points, "Grid cells of the sign-change scan");
  }

  RootOptions apply(RootOptions options) const {
    if (!tol_zero.empty()) options.zero_tolerance = parse_double(tol_zero, "--tol-zero");
    if (!tol_t.empty()) options.t_tolerance = parse_double(tol_t, "--tol-t");
    if (scan_points) options.scan_points = *scan_points;
    try {
      options.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return options;
  }
};

struct OutputFlags {
  std::string output;
  std::string format = "csv";

  void add_to(CLI::App& app) {
    app.add_option("--output", output, "Write the report to this file");
    app.add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  }

  Format parsed() const { return format == "json" ? Format::Json : Format::Csv; }
};

// Writes to --output when given, otherwise to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  ~Sink() { stream_->flush(); }

  std::ostream& operator*() { return *stream_; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::vector<double> checked_point(const std::string& text, std::string_view flag,
                                  std::size_t dim) {
  auto values = parse_doubles(text, flag);
  if (values.size() != dim) {
    throw DimensionMismatchError(std::string(flag) + " has " + std::to_string(values.size()) +
                                 " components, --dim is " + std::to_string(dim));
  }
  return values;
}

Metadata root_metadata(const RootOptions& o) {
  return {{"scan_points", std::uint64_t{o.scan_points}},
          {"tol_t", o.t_tolerance},
          {"tol_zero", o.zero_tolerance}};
}

void append(Metadata& m, const Metadata& more) { m.insert(m.end(), more.begin(), more.end()); }

struct XiCommand {
  std::string function, center, point;
  std::size_t dim = 1;
  unsigned order = 0;
  RootFlags root;
  OutputFlags out;

  void add_to(CLI::App& app) {
    app.add_option("--function", function, "Expression in x (or x1..xN)")->required();
    app.add_option("--dim", dim, "Dimension N")->check(CLI::PositiveNumber);
    app.add_option("--center", center, "Expansion center c1,..,cN")->required();
    app.add_option("--order", order, "Taylor order k");
    app.add_option("--point", point, "Point x1,..,xN")->required();
    root.add_to(app);
    out.add_to(app);
  }

  int execute(std::ostream& stdout_stream) const {
    const auto options = root.apply({});
    const auto c = checked_point(center, "--center", dim);
    const auto x = checked_point(point, "--point", dim);
    const auto model = make_model(function, dim);
    const auto result = least_root(*model, c, order, x, options);

    Metadata m{{"function", function},
               {"dim", std::uint64_t{dim}},
               {"center", report::format_list(c)},
               {"order", std::uint64_t{order}},
               {"point", report::format_list(x)}};
    append(m, root_metadata(options));
    Sink sink(out.output, stdout_stream);
    report::write_xi(*sink, out.parsed(), result, m);
    return kSuccess;
  }
};

struct ScanCommand {
  std::string function, center;
  std::vector<std::string> range;
  std::size_t steps = 1000;
  unsigned order = 0;
  RootFlags root;
  OutputFlags out;

  void add_to(CLI::App& app) {
    app.add_option("--function", function, "Expression in x")->required();
    app.add_option("--center", center, "Expansion center")->required();
    app.add_option("--order", order, "Taylor order k");
    app.add_option("--range", range, "Scan interval a b")->expected(2)->required();
    app.add_option("--steps", steps, "Grid intervals")->check(CLI::PositiveNumber)
        ->capture_default_str();
    root.add_to(app);
    out.add_to(app);
  }

  int execute(std::ostream& stdout_stream, std::ostream& err) const {
    const auto options = root.apply({});
    const double c = parse_double(center, "--center");
    const double a = parse_double(range[0], "--range");
    const double b = parse_double(range[1], "--range");
    if (!(b > a)) throw UsageError("--range needs a < b");
    const auto model = make_model(function, 1);
    auto series = scan_interpolation_point(*model, c, order, a, b, steps, options);
    series.function_text = function;

    {
      Sink sink(out.output, stdout_stream);
      report::write_scan(*sink, out.parsed(), series);
    }
    return finish_scan(series, err);
  }

  // At most 1% of the rows may fail.
  static int finish_scan(const ScanSeries& series, std::ostream& err) {
    const std::size_t failed = series.failed_rows();
    if (failed == 0) return kSuccess;
    err << failed << " of " << series.rows.size() << " rows failed";
    for (const auto& row : series.rows) {
      if (!row.method) {
        err << "; first at x = " << report::format_double(row.x) << ": " << row.error;
        break;
      }
    }
    err << '\n';
    return failed * 100 <= series.rows.size() ? kSuccess : kNumerical;
  }
};

struct TaunCommand {
  std::string function, center, point;
  std::string n_list = "1,10,100,1000";
  std::size_t dim = 1;
  unsigned order = 0;
  unsigned depth = 20;
  RootFlags root;
  OutputFlags out;

  void add_to(CLI::App& app) {
    app.add_option("--function", function, "Expression in x (or x1..xN)")->required();
    app.add_option("--dim", dim, "Dimension N")->check(CLI::PositiveNumber);
    app.add_option("--center", center, "Expansion center c1,..,cN")->required();
    app.add_option("--order", order, "Taylor order k");
    app.add_option("--point", point, "Point x1,..,xN")->required();
    app.add_option("--n", n_list, "Comma-separated n values")->capture_default_str();
    app.add_option("--depth", depth, "Dyadic grid depth M (grid j/2^M)")
        ->check(CLI::Range(1, 52))
        ->capture_default_str();
    root.add_to(app);
    out.add_to(app);
  }

  int execute(std::ostream& stdout_stream) const {
    const auto options = root.apply({});
    const auto c = checked_point(center, "--center", dim);
    const auto x = checked_point(point, "--point", dim);
    const auto ns = parse_counts(n_list, "--n");
    const auto model = make_model(function, dim);
    const auto table = dyadic_tau_table(*model, c, order, x, ns, depth, options);

    Metadata m{{"function", function},
               {"dim", std::uint64_t{dim}},
               {"center", report::format_list(c)},
               {"order", std::uint64_t{order}},
               {"point", report::format_list(x)},
               {"depth", std::uint64_t{depth}}};
    append(m, root_metadata(options));
    Sink sink(out.output, stdout_stream);
    report::write_taun(*sink, out.parsed(), table, m);
    return kSuccess;
  }
};

struct CounterexampleCommand {
  std::string variant = "standard";
  std::vector<std::string> range;
  std::size_t steps = 2000;
  RootFlags root;
  OutputFlags out;

  void add_to(CLI::App& app) {
    app.add_option("--variant", variant, "standard or reflected")
        ->check(CLI::IsMember({"standard", "reflected"}))
        ->capture_default_str();
    app.add_option("--range", range, "Scan interval a b (default: preset)")->expected(2);
    app.add_option("--steps", steps, "Grid intervals")->check(CLI::PositiveNumber)
        ->capture_default_str();
    root.add_to(app);
    out.add_to(app);
  }

  int execute(std::ostream& stdout_stream, std::ostream& err) const {
    const auto options = root.apply({});
    const auto v = *parse_counterexample_variant(variant);
    const auto& preset = counterexample_preset(v);
    double a = preset.range_start, b = preset.range_end;
    if (!range.empty()) {
      a = parse_double(range[0], "--range");
      b = parse_double(range[1], "--range");
      if (!(b > a)) throw UsageError("--range needs a < b");
    }
    const auto run = run_counterexample(v, steps, a, b, options);
    const auto& s = run.summary;

    Metadata summary{
        {"variant", std::string(variant_name(v))},
        {"x0", s.x0},
        {"xi_x0", s.xi_x0},
        {"method_x0", std::string(method_name(s.method_x0))},
        {"expected_xi_x0", preset.expected_xi_x0},
        {"side_probe_x", s.side_probe_x},
        {"side_probe_xi", s.side_probe_xi},
        {"expected_side_limit", preset.expected_side_limit},
        {"continuity_probe_x", s.continuity_probe_x},
        {"continuity_probe_xi", s.continuity_probe_xi},
        {"continuity_gap", std::abs(s.continuity_probe_xi - s.xi_x0)},
        {"jump_count", std::uint64_t{s.jump_count}},
        {"jump_location", s.jump_location},
        {"jump_xi_before", s.jump_xi_before},
        {"jump_xi_after", s.jump_xi_after},
        {"jump_magnitude", s.jump_magnitude},
        {"expected_jump", preset.expected_jump},
    };

    const Format format = out.parsed();
    Sink sink(out.output, stdout_stream);
    // With JSON on stdout the summary travels in the document's metadata.
    if (sink.to_file() || format == Format::Csv) report::write_comments(stdout_stream, summary);
    report::write_scan(*sink, format, run.scan, summary);
    return ScanCommand::finish_scan(run.scan, err);
  }
};

struct DeltaCommand {
  std::string function, center, n_list;
  std::size_t dim = 1;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 42;
  RootFlags root;
  OutputFlags out;

  void add_to(CLI::App& app) {
    app.add_option("--function", function, "Expression in x (or x1..xN)")->required();
    app.add_option("--dim", dim, "Dimension N")->check(CLI::PositiveNumber);
    app.add_option("--center", center, "Center c1,..,cN")->required();
    app.add_option("--n", n_list, "Comma-separated sample sizes n")->required();
    app.add_option("--samples", samples, "Monte Carlo samples per n")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", seed, "Random seed")->capture_default_str();
    root.add_to(app);
    out.add_to(app);
  }

  int execute(std::ostream& stdout_stream) const {
    DeltaConfig config;
    config.root_options = root.apply(config.root_options);
    config.center = checked_point(center, "--center", dim);
    config.n_values = parse_counts(n_list, "--n");
    config.samples = samples;
    config.seed = seed;
    const auto model = make_model(function, dim);
    const auto result = delta_method_sim(*model, config);

    Metadata m{{"function", function},
               {"dim", std::uint64_t{dim}},
               {"center", report::format_list(config.center)},
               {"samples", samples},
               {"seed", seed},
               {"rng", std::string(RandomStream::kAlgorithm)},
               {"identity_tolerance", config.identity_tolerance}};
    append(m, root_metadata(config.root_options));
    Sink sink(out.output, stdout_stream);
    report::write_delta(*sink, out.parsed(), result, m);
    return kSuccess;
  }
};

struct ItoCommand {
  std::string function;
  std::string t_end = "1";
  std::string x0 = "0";
  std::uint64_t steps = 10000;
  std::uint64_t paths = 100;
  std::uint64_t seed = 7;
  RootFlags root;
  OutputFlags out;

  void add_to(CLI::App& app) {
    app.add_option("--function", function, "Expression in x")->required();
    app.add_option("--t", t_end, "Time horizon")->capture_default_str();
    app.add_option("--steps", steps, "Partition steps")->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--paths", paths, "Brownian paths")->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", seed, "Random seed")->capture_default_str();
    app.add_option("--x0", x0, "Starting value X_0")->capture_default_str();
    root.add_to(app);
    out.add_to(app);
  }

  int execute(std::ostream& stdout_stream) const {
    ItoConfig config;
    config.root_options = root.apply(config.root_options);
    config.t_end = parse_double(t_end, "--t");
    if (!(config.t_end > 0)) throw UsageError("--t must be positive");
    config.x0 = parse_double(x0, "--x0");
    config.steps = steps;
    config.paths = paths;
    config.seed = seed;
    const auto model = make_model(function, 1);
    const auto result = ito_sim(*model, config);

    Metadata m{{"function", function},
               {"t", config.t_end},
               {"x0", config.x0},
               {"steps", steps},
               {"paths", paths},
               {"seed", seed},
               {"rng", std::string(RandomStream::kAlgorithm)},
               {"identity_tolerance", config.identity_tolerance},
               {"skipped_paths", result.skipped_paths},
               {"mean_second_order_sum", result.mean_second_order_sum()}};
    append(m, root_metadata(config.root_options));
    Sink sink(out.output, stdout_stream);
    report::write_ito(*sink, out.parsed(), result, m);
    return kSuccess;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Least-root Lagrange interpolation points of Taylor remainders", "mtaylor"};
  app.require_subcommand(1);

  XiCommand xi;
  ScanCommand scan;
  TaunCommand taun;
  CounterexampleCommand counterexample;
  DeltaCommand delta;
  ItoCommand ito;
  auto* xi_app = app.add_subcommand("xi", "Interpolation point at one x");
  auto* scan_app = app.add_subcommand("scan", "xi over a grid with jump flags");
  auto* taun_app = app.add_subcommand("taun", "Dyadic approximants tau_n");
  auto* cex_app = app.add_subcommand("counterexample", "Built-in discontinuity example");
  auto* delta_app = app.add_subcommand("delta", "Delta-method identity simulation");
  auto* ito_app = app.add_subcommand("ito", "Second-order expansion along Brownian paths");
  xi.add_to(*xi_app);
  scan.add_to(*scan_app);
  taun.add_to(*taun_app);
  counterexample.add_to(*cex_app);
  delta.add_to(*delta_app);
  ito.add_to(*ito_app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return kUsage;
  }

  try {
    if (*xi_app) return xi.execute(out);
    if (*scan_app) return scan.execute(out, err);
    if (*taun_app) return taun.execute(out);
    if (*cex_app) return counterexample.execute(out, err);
    if (*delta_app) return delta.execute(out);
    if (*ito_app) return ito.execute(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionMismatchError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidDimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace mtaylor::cli
