#include "oracles.hpp"

#include <doctest.h>

using namespace trackpoly;

TEST_CASE("product, transpose and power") {
  IntMatrix a{{1, 2}, {3, 4}};
  IntMatrix b{{0, 1}, {1, 0}};
  CHECK(a * b == IntMatrix{{2, 1}, {4, 3}});
  CHECK(a.transpose() == IntMatrix{{1, 3}, {2, 4}});
  CHECK(power(a, 3) == a * a * a);
  CHECK(power(a, 0) == IntMatrix::identity(2));
  CHECK_THROWS_AS(a * IntMatrix(3, 1), std::invalid_argument);
}

TEST_CASE("determinant agrees with permutation expansion") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 1 + trial % 5;
    IntMatrix m = oracle::random_matrix(rng, n, n, -4, 4);
    CHECK(determinant(m) == oracle::leibniz_det(m));
  }
}

TEST_CASE("rank and kernel basis") {
  CHECK(rank(IntMatrix{{1, 2}, {2, 4}}) == 1);
  auto zero = kernel_basis(IntMatrix(3, 3));
  REQUIRE(zero.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(zero[i][j] == (i == j ? 1 : 0));
  CHECK(kernel_basis(IntMatrix{{2, 1}, {1, 1}}).empty());

  auto k = kernel_basis(IntMatrix{{2, 4, -6}, {1, 2, -3}});
  REQUIRE(k.size() == 2);
  CHECK(k[0] == std::vector<Integer>{2, -1, 0});
  CHECK(k[1] == std::vector<Integer>{3, 0, 1});
}

TEST_CASE("kernel vectors are primitive, sign-normalized and annihilated") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t rows = 1 + trial % 4, cols = 3 + trial % 3;
    IntMatrix m = oracle::random_matrix(rng, rows, cols, -3, 3);
    auto basis = kernel_basis(m);
    CHECK(basis.size() + rank(m) == cols);
    for (const auto& v : basis) {
      IntMatrix col = from_columns({v}, cols);
      CHECK((m * col).is_zero());
      Integer g = 0;
      for (const auto& x : v) g = gcd(g, x);
      CHECK(g == 1);
      auto first = std::find_if(v.begin(), v.end(), [](const Integer& x) { return x != 0; });
      REQUIRE(first != v.end());
      CHECK(*first > 0);
    }
  }
}
