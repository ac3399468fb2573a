#include "mtaylor/multiindex.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "mtaylor/error.hpp"

namespace mtaylor {

MultiIndex::MultiIndex(std::size_t dimension) : components_(dimension, 0u) {}

MultiIndex::MultiIndex(std::initializer_list<unsigned> components)
    : components_(components) {}

MultiIndex::MultiIndex(std::vector<unsigned> components)
    : components_(std::move(components)) {}

MultiIndex MultiIndex::unit(std::size_t dimension, std::size_t axis) {
  MultiIndex e(dimension);
  e.components_.at(axis) = 1;
  return e;
}

unsigned MultiIndex::order() const noexcept {
  return std::accumulate(components_.begin(), components_.end(), 0u);
}

MultiIndex MultiIndex::incremented(std::size_t axis) const {
  MultiIndex next = *this;
  ++next.components_.at(axis);
  return next;
}

std::string MultiIndex::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(components_[i]);
  }
  return out + ")";
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (auto c = a.dimension() <=> b.dimension(); c != 0) return c;
  if (auto c = a.order() <=> b.order(); c != 0) return c;
  // Larger leading component sorts first.
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    if (auto c = b.components_[i] <=> a.components_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

namespace {

void enumerate_into(std::vector<unsigned>& prefix, std::size_t position,
                    unsigned remaining, std::vector<MultiIndex>& out) {
  if (position + 1 == prefix.size()) {
    prefix[position] = remaining;
    out.emplace_back(prefix);
    return;
  }
  for (unsigned head = remaining + 1; head-- > 0;) {
    prefix[position] = head;
    enumerate_into(prefix, position + 1, remaining - head, out);
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multiindices(std::size_t dimension,
                                               unsigned degree) {
  if (dimension == 0) {
    throw InvalidDimensionError("multi-index dimension must be at least 1");
  }
  std::vector<MultiIndex> out;
  std::vector<unsigned> prefix(dimension, 0u);
  enumerate_into(prefix, 0, degree, out);
  return out;
}

std::vector<MultiIndex> enumerate_multiindices_up_to(std::size_t dimension,
                                                     unsigned max_degree) {
  std::vector<MultiIndex> out;
  for (unsigned m = 0; m <= max_degree; ++m) {
    auto level = enumerate_multiindices(dimension, m);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::uint64_t factorial(const MultiIndex& alpha) {
  std::uint64_t result = 1;
  for (unsigned a : alpha.components()) {
    for (unsigned f = 2; f <= a; ++f) {
      if (__builtin_mul_overflow(result, std::uint64_t{f}, &result)) {
        throw OverflowError("multi-index factorial of " + alpha.to_string() +
                            " exceeds 64-bit range");
      }
    }
  }
  return result;
}

double monomial(const MultiIndex& alpha, std::span<const double> v) {
  if (v.size() != alpha.dimension()) {
    throw DimensionMismatchError(
        "monomial: vector of length " + std::to_string(v.size()) +
        " for multi-index of dimension " + std::to_string(alpha.dimension()));
  }
  double product = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (unsigned p = 0; p < alpha[i]; ++p) product *= v[i];
  }
  return product;
}

}  // namespace mtaylor
