#include <catch_amalgamated.hpp>

#include <set>

#include "mtaylor/error.hpp"
#include "mtaylor/multiindex.hpp"

using namespace mtaylor;

namespace {

std::uint64_t binomial(unsigned n, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("enumerate_multiindices: graded-lex examples") {
  CHECK(enumerate_multiindices(2, 2) ==
        std::vector<MultiIndex>{{2, 0}, {1, 1}, {0, 2}});
  CHECK(enumerate_multiindices(3, 1) ==
        std::vector<MultiIndex>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(enumerate_multiindices(3, 2).size() == 6);
  CHECK(enumerate_multiindices(1, 4) == std::vector<MultiIndex>{{4}});
  CHECK(enumerate_multiindices(4, 0) == std::vector<MultiIndex>{{0, 0, 0, 0}});
}

TEST_CASE("enumerate_multiindices: zero dimension is rejected") {
  CHECK_THROWS_AS(enumerate_multiindices(0, 2), InvalidDimensionError);
}

TEST_CASE("enumerate_multiindices: counts, uniqueness and order") {
  for (std::size_t n = 1; n <= 5; ++n) {
    for (unsigned m = 0; m <= 6; ++m) {
      const auto list = enumerate_multiindices(n, m);
      INFO("N=" << n << " m=" << m);
      CHECK(list.size() == binomial(m + n - 1, n - 1));
      CHECK(std::set<MultiIndex>(list.begin(), list.end()).size() == list.size());
      CHECK(std::is_sorted(list.begin(), list.end()));
      for (const auto& a : list) CHECK(a.order() == m);
      // Re-enumeration is identical.
      CHECK(enumerate_multiindices(n, m) == list);
    }
  }
}

TEST_CASE("enumerate_multiindices_up_to concatenates degrees") {
  const auto list = enumerate_multiindices_up_to(2, 2);
  CHECK(list == std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}});
  CHECK(std::is_sorted(list.begin(), list.end()));
}

TEST_CASE("factorial") {
  CHECK(factorial({2, 1, 0}) == 2);
  CHECK(factorial({0, 0}) == 1);
  CHECK(factorial({3, 2}) == 12);
  CHECK(factorial({20}) == 2432902008176640000ull);
  CHECK_THROWS_AS(factorial({21}), OverflowError);
  CHECK_THROWS_AS(factorial({15, 12}), OverflowError);
}

TEST_CASE("monomial") {
  const double v1[] = {3, 4};
  const double v2[] = {7, -2};
  const double v3[] = {-2, 5};
  CHECK(monomial({2, 1}, v1) == 36.0);
  CHECK(monomial({0, 0}, v2) == 1.0);
  CHECK(monomial({1, 1}, v3) == -10.0);

  const double too_short[] = {1.0};
  CHECK_THROWS_AS(monomial({1, 1}, too_short), DimensionMismatchError);
}

TEST_CASE("monomial at the origin is 1 exactly for the zero index") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::vector<double> zero(n, 0.0);
    for (const auto& alpha : enumerate_multiindices_up_to(n, 4)) {
      CHECK(monomial(alpha, zero) == (alpha.order() == 0 ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("MultiIndex helpers") {
  const MultiIndex a{1, 0, 2};
  CHECK(a.order() == 3);
  CHECK(a.incremented(1) == MultiIndex{1, 1, 2});
  CHECK(MultiIndex::unit(3, 2) == MultiIndex{0, 0, 1});
  CHECK(a.to_string() == "(1,0,2)");
}
