#pragma once

// CSV and JSON emitters for the command-line reports. Every floating-point
// value is printed with 17 significant digits so that files round-trip.

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mtaylor/interpolator.hpp"
#include "mtaylor/stochastic.hpp"

namespace mtaylor::report {

enum class Format { Csv, Json };

using MetaValue = std::variant<std::string, double, std::uint64_t>;
/// Ordered key/value pairs written ahead of the data: `# key=value` lines in
/// CSV, a "metadata" object in JSON.
using Metadata = std::vector<std::pair<std::string, MetaValue>>;

std::string format_double(double value);
std::string format_list(std::span<const double> values);

/// `# key=value` lines.
void write_comments(std::ostream& out, const Metadata& metadata);

void write_xi(std::ostream& out, Format format, const InterpolationResult& result,
              const Metadata& metadata);

/// CSV: header `x,tau,xi,residual,method,jump` on the first line, no
/// metadata, so the file plots as is. Failed rows carry method "error" and
/// nan values.
void write_scan(std::ostream& out, Format format, const ScanSeries& series,
                const Metadata& extra = {});

void write_taun(std::ostream& out, Format format, const TauNSeries& series,
                const Metadata& metadata);

void write_delta(std::ostream& out, Format format, const DeltaReport& report,
                 const Metadata& metadata);

void write_ito(std::ostream& out, Format format, const ItoReport& report,
               const Metadata& metadata);

}  // namespace mtaylor::report
