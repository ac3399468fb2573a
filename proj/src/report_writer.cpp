#include "mtaylor/report_writer.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <type_traits>

#include <json.hpp>

namespace mtaylor::report {
namespace {

using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_meta(const MetaValue& value) {
  if (auto* s = std::get_if<std::string>(&value)) return *s;
  if (auto* d = std::get_if<double>(&value)) {
    // Settings read better in shortest round-trip form.
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, *d);
    return std::string(buffer, end);
  }
  return std::to_string(std::get<std::uint64_t>(value));
}

// JSON has no NaN or infinity; those become null.
ordered_json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

ordered_json meta_json(const Metadata& metadata) {
  ordered_json object = ordered_json::object();
  for (const auto& [key, value] : metadata) {
    std::visit(
        [&](const auto& v) {
          if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>)
            object[key] = number(v);
          else
            object[key] = v;
        },
        value);
  }
  return object;
}

void write_json(std::ostream& out, const ordered_json& document) {
  out << document.dump(2) << '\n';
}

Metadata scan_metadata(const ScanSeries& series, const Metadata& extra) {
  Metadata m{
      {"function", series.function_text},
      {"center", series.center},
      {"order", std::uint64_t{series.order}},
      {"scan_points", std::uint64_t{series.options.scan_points}},
      {"tol_t", series.options.t_tolerance},
      {"tol_zero", series.options.zero_tolerance},
      {"rows", std::uint64_t{series.rows.size()}},
      {"failed_rows", std::uint64_t{series.failed_rows()}},
      {"jumps", std::uint64_t{series.jumps.size()}},
  };
  m.insert(m.end(), extra.begin(), extra.end());
  return m;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value,
                                 std::chars_format::general, 17);
  return std::string(buffer, end);
}

void write_comments(std::ostream& out, const Metadata& metadata) {
  for (const auto& [key, value] : metadata) out << "# " << key << '=' << format_meta(value) << '\n';
}

std::string format_list(std::span<const double> values) {
  std::string text;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text += ',';
    text += format_double(values[i]);
  }
  return text;
}

void write_xi(std::ostream& out, Format format, const InterpolationResult& result,
              const Metadata& metadata) {
  if (format == Format::Json) {
    ordered_json xi = ordered_json::array();
    for (double v : result.xi) xi.push_back(number(v));
    ordered_json doc;
    doc["metadata"] = meta_json(metadata);
    doc["tau"] = number(result.tau);
    doc["xi"] = xi;
    doc["residual"] = number(result.residual);
    doc["method"] = method_name(result.method);
    write_json(out, doc);
    return;
  }
  out << "tau,";
  if (result.xi.size() == 1) {
    out << "xi";
  } else {
    for (std::size_t i = 0; i < result.xi.size(); ++i) out << (i ? ",xi" : "xi") << i + 1;
  }
  out << ",residual,method\n";
  out << format_double(result.tau) << ',' << format_list(result.xi) << ','
      << format_double(result.residual) << ',' << method_name(result.method) << '\n';
}

void write_scan(std::ostream& out, Format format, const ScanSeries& series,
                const Metadata& extra) {
  if (format == Format::Json) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : series.rows) {
      ordered_json r;
      r["x"] = number(row.x);
      r["tau"] = number(row.method ? row.tau : kNaN);
      r["xi"] = number(row.method ? row.xi : kNaN);
      r["residual"] = number(row.method ? row.residual : kNaN);
      r["method"] = row.method ? method_name(*row.method) : "error";
      r["jump"] = row.jump;
      if (!row.method) r["error"] = row.error;
      rows.push_back(std::move(r));
    }
    ordered_json doc;
    doc["metadata"] = meta_json(scan_metadata(series, extra));
    doc["rows"] = std::move(rows);
    write_json(out, doc);
    return;
  }
  out << "x,tau,xi,residual,method,jump\n";
  for (const auto& row : series.rows) {
    out << format_double(row.x) << ',';
    if (row.method) {
      out << format_double(row.tau) << ',' << format_double(row.xi) << ','
          << format_double(row.residual) << ',' << method_name(*row.method);
    } else {
      out << "nan,nan,nan,error";
    }
    out << ',' << (row.jump ? 1 : 0) << '\n';
  }
}

void write_taun(std::ostream& out, Format format, const TauNSeries& series,
                const Metadata& metadata) {
  if (format == Format::Json) {
    ordered_json rows = ordered_json::array();
    for (const auto& e : series.entries) rows.push_back({{"n", e.n}, {"tau_n", number(e.tau_n)}});
    ordered_json doc;
    doc["metadata"] = meta_json(metadata);
    doc["rows"] = std::move(rows);
    doc["tau"] = number(series.tau);
    write_json(out, doc);
    return;
  }
  out << "n,tau_n\n";
  for (const auto& e : series.entries) out << e.n << ',' << format_double(e.tau_n) << '\n';
  out << "tau," << format_double(series.tau) << '\n';
}

void write_delta(std::ostream& out, Format format, const DeltaReport& report,
                 const Metadata& metadata) {
  if (format == Format::Json) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"n", r.n},
                      {"samples", r.samples},
                      {"skipped", r.skipped},
                      {"mean_gradient_deviation", number(r.mean_gradient_deviation)},
                      {"max_identity_residual", number(r.max_identity_residual)}});
    }
    ordered_json doc;
    doc["metadata"] = meta_json(metadata);
    doc["rows"] = std::move(rows);
    write_json(out, doc);
    return;
  }
  write_comments(out, metadata);
  out << "n,samples,skipped,mean_gradient_deviation,max_identity_residual\n";
  for (const auto& r : report.rows) {
    out << r.n << ',' << r.samples << ',' << r.skipped << ','
        << format_double(r.mean_gradient_deviation) << ','
        << format_double(r.max_identity_residual) << '\n';
  }
}

void write_ito(std::ostream& out, Format format, const ItoReport& report,
               const Metadata& metadata) {
  if (format == Format::Json) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"path", r.path},
                      {"steps", r.steps},
                      {"telescoping_residual", number(r.telescoping_residual)},
                      {"second_order_sum", number(r.second_order_sum)},
                      {"ito_correction", number(r.ito_correction)},
                      {"increment", number(r.increment)}});
    }
    ordered_json doc;
    doc["metadata"] = meta_json(metadata);
    doc["rows"] = std::move(rows);
    write_json(out, doc);
    return;
  }
  write_comments(out, metadata);
  out << "path,steps,telescoping_residual,second_order_sum,ito_correction,increment\n";
  for (const auto& r : report.rows) {
    out << r.path << ',' << r.steps << ',' << format_double(r.telescoping_residual) << ','
        << format_double(r.second_order_sum) << ',' << format_double(r.ito_correction)
        << ',' << format_double(r.increment) << '\n';
  }
}

}  // namespace mtaylor::report
