#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mtaylor {

/// Exponent vector alpha = (alpha_1, ..., alpha_N) with non-negative entries.
///
/// Ordering is graded-lexicographic: total degree first, then components
/// compared left to right with the larger leading component first, so for
/// N = 2 and degree 2 the order is (2,0), (1,1), (0,2). Ordered containers
/// keyed by MultiIndex therefore iterate in the same order as
/// enumerate_multiindices().
class MultiIndex {
 public:
  explicit MultiIndex(std::size_t dimension);
  MultiIndex(std::initializer_list<unsigned> components);
  explicit MultiIndex(std::vector<unsigned> components);

  static MultiIndex unit(std::size_t dimension, std::size_t axis);

  std::size_t dimension() const noexcept { return components_.size(); }
  unsigned operator[](std::size_t i) const { return components_[i]; }
  std::span<const unsigned> components() const noexcept { return components_; }

  /// |alpha|
  unsigned order() const noexcept;

  /// alpha + e_axis
  MultiIndex incremented(std::size_t axis) const;

  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend std::strong_ordering operator<=>(const MultiIndex& a,
                                          const MultiIndex& b);

 private:
  std::vector<unsigned> components_;
};

/// All alpha with |alpha| = degree in graded-lex order. Count is
/// C(degree + N - 1, N - 1). Throws InvalidDimensionError for N = 0.
std::vector<MultiIndex> enumerate_multiindices(std::size_t dimension,
                                               unsigned degree);

/// All alpha with |alpha| <= max_degree, degree by degree.
std::vector<MultiIndex> enumerate_multiindices_up_to(std::size_t dimension,
                                                     unsigned max_degree);

/// alpha! = prod_i alpha_i!, exact. Throws OverflowError past 2^64 - 1.
std::uint64_t factorial(const MultiIndex& alpha);

/// prod_i v_i^alpha_i with 0^0 = 1, by repeated multiplication.
double monomial(const MultiIndex& alpha, std::span<const double> v);

}  // namespace mtaylor
