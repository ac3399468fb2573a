#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mtaylor {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimensionError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in an expression; `position()` is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifierError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Evaluation left the domain of a function (log/sqrt of a negative number,
/// division by zero, non-finite intermediate). When raised while walking a
/// segment c + t(x - c), `segment_t()` carries the offending t.
class DomainError : public Error {
 public:
  explicit DomainError(std::string subexpression, std::string detail)
      : Error("domain violation in '" + subexpression + "': " + detail),
        subexpression_(std::move(subexpression)),
        detail_(std::move(detail)) {}

  DomainError(const DomainError& inner, double segment_t)
      : Error(std::string(inner.what()) + " (segment t = " +
              std::to_string(segment_t) + ")"),
        subexpression_(inner.subexpression_),
        detail_(inner.detail_),
        segment_t_(segment_t) {}

  const std::string& subexpression() const noexcept { return subexpression_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<double> segment_t() const noexcept { return segment_t_; }

 private:
  std::string subexpression_;
  std::string detail_;
  std::optional<double> segment_t_;
};

/// Requested derivative order exceeds what a model provides.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A root that theory guarantees was not resolved at the configured grid
/// resolution.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A stochastic expansion identity failed its residual check.
class IdentityError : public Error {
 public:
  using Error::Error;
};

}  // namespace mtaylor
