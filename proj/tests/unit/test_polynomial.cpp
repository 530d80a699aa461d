#include "oracles.hpp"

#include <doctest.h>

using namespace trackpoly;

namespace {
IntPolynomial P(const char* text) { return parse_polynomial(text); }
}  // namespace

TEST_CASE("canonical text form") {
  CHECK(to_string(IntPolynomial{-1, 41, -118, 118, -41, 1}) ==
        "x^5 - 41*x^4 + 118*x^3 - 118*x^2 + 41*x - 1");
  CHECK(to_string(IntPolynomial{1}) == "1");
  CHECK(to_string(IntPolynomial{}) == "0");
  CHECK(to_string(IntPolynomial{0, -1}) == "-x");
  CHECK(to_string(IntPolynomial{-3, 0, -2}) == "-2*x^2 - 3");
}

TEST_CASE("parser round-trips and expands products") {
  for (const char* s : {"x^5 - 41*x^4 + 118*x^3 - 118*x^2 + 41*x - 1", "1", "0", "-x", "x - 1"})
    CHECK(to_string(P(s)) == s);
  CHECK(P("(x-1)^2*(x^2-38*x+1)") == P("x^4 - 40*x^3 + 78*x^2 - 40*x + 1"));
  CHECK(P("(x-1)(x+1)") == P("x^2 - 1"));
  CHECK_THROWS_AS(P("x^"), InputError);
  CHECK_THROWS_AS(P("(x-1"), InputError);
  CHECK_THROWS_AS(P("y"), InputError);
}

TEST_CASE("char_poly of small matrices") {
  CHECK(char_poly(IntMatrix::identity(2)) == P("x^2 - 2*x + 1"));
  CHECK(char_poly(IntMatrix(0, 0)) == P("1"));
  CHECK(char_poly(IntMatrix{{0, 1}, {1, 0}}) == P("x^2 - 1"));
}

TEST_CASE("char_poly of the 5x5 transition matrix with dilatation 37.97") {
  IntMatrix t1{{15, 7, 14, 23, 16}, {10, 6, 10, 16, 11}, {4, 2, 5, 7, 5}, {2, 1, 2, 3, 1}, {10, 5, 10, 16, 12}};
  CHECK(to_string(char_poly(t1)) == "x^5 - 41*x^4 + 118*x^3 - 118*x^2 + 41*x - 1");
}

TEST_CASE("char_poly matches determinant expansion at sample points") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 1 + trial % 6;
    IntMatrix m = oracle::random_matrix(rng, n, n, -3, 3);
    if (trial % 3 == 0)  // exercise zero subdiagonal entries in the reduction
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j + 1 < i; ++j) m(i, j) = 0;
    IntPolynomial p = char_poly(m);
    CHECK(p.degree() == int(n));
    CHECK(p.is_monic());
    for (long t = -2; t <= 3; ++t) CHECK(p.evaluate(Integer(t)) == oracle::char_value(m, t));
  }
}

TEST_CASE("char_poly is invariant under unimodular conjugation") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 15; ++trial) {
    std::size_t n = 2 + trial % 5;
    IntMatrix m = oracle::random_matrix(rng, n, n, -4, 4);
    IntMatrix u = oracle::random_unimodular(rng, n);
    IntMatrix conj = to_integer(inverse(to_rational(u)) * to_rational(m) * to_rational(u));
    CHECK(char_poly(conj) == char_poly(m));
  }
}

TEST_CASE("char_poly of a rational matrix is content-normalized") {
  RatMatrix m{{Rational(1, 2), 0}, {0, Rational(1, 3)}};
  CHECK(char_poly(m) == P("6*x^2 - 5*x + 1"));
}

TEST_CASE("exact division") {
  IntPolynomial chi = P("x^9 - 2*x^8 + x^7 - 4*x^5 + 4*x^4 - x^2 + 2*x - 1");
  CHECK(divide_exact(chi, P("x^3 + x^2 - x - 1")) == P("x^6 - 3*x^5 + 5*x^4 - 7*x^3 + 5*x^2 - 3*x + 1"));
  CHECK(divide_exact(chi, P("1")) == chi);
  try {
    divide_exact(P("x^2 + 1"), P("x + 1"));
    FAIL("expected a remainder");
  } catch (const NonzeroRemainder& e) {
    CHECK(e.remainder() == to_rational(P("2")));
  }
  std::mt19937 rng(9);
  for (int trial = 0; trial < 25; ++trial) {
    IntPolynomial p = oracle::random_poly(rng, trial % 5, false);
    IntPolynomial q = oracle::random_poly(rng, 1 + trial % 4, trial % 2 == 0);
    CHECK(divide_exact(p * q, q) == p);
  }
}

TEST_CASE("palindromic flags") {
  CHECK(is_palindromic(P("x^2 - 38*x + 1")));
  CHECK(!is_antipalindromic(P("x^2 - 38*x + 1")));
  CHECK(is_antipalindromic(P("x - 1")));
  CHECK(!is_palindromic(P("x^2 - 3*x + 5")));
  CHECK(!is_antipalindromic(P("x^2 - 3*x + 5")));
}

TEST_CASE("largest real root") {
  auto r = largest_real_root(P("x^2 - 38*x + 1"), parse_decimal("1e-4"));
  CHECK(to_decimal(r.value, 4) == "37.9737");
  CHECK(to_decimal(largest_real_root(P("x - 1"), parse_decimal("1e-6")).value, 4) == "1.0000");
  auto g = largest_real_root(P("x^2 - 3*x + 1"), parse_decimal("1e-8"));
  // (3 + sqrt 5)/2 = 2.6180339887...
  CHECK(to_decimal(g.value, 6) == "2.618034");
  CHECK_THROWS_AS(largest_real_root(P("x^2 + 1"), Rational(1, 100)), InputError);
  // repeated roots and roots at bisection points
  CHECK(to_decimal(largest_real_root(P("(x-2)^3*(x+5)"), Rational(1, 1000)).value, 2) == "2.00");
  CHECK(to_decimal(largest_real_root(P("x*(x+1)"), Rational(1, 1000)).value, 2) == "0.00");
}

TEST_CASE("largest real root brackets a sign change") {
  std::mt19937 rng(21);
  const Rational tol(1, 10000);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    IntPolynomial p = oracle::random_poly(rng, 1 + trial % 5, true);
    RatPolynomial sf = sturm_sequence(to_rational(p)).front();
    if (count_real_roots(sturm_sequence(sf), -root_bound(sf), root_bound(sf)) == 0) continue;
    auto r = largest_real_root(p, tol);
    CHECK(sf.evaluate(r.value - tol) * sf.evaluate(r.value + tol) <= 0);
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("power_roots_poly") {
  CHECK(power_roots_poly(P("x - 2"), 3) == P("x - 8"));
  CHECK(power_roots_poly(P("x^2 - 3*x + 1"), 2) == P("x^2 - 7*x + 1"));
  std::mt19937 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    IntPolynomial p = oracle::random_poly(rng, 1 + trial % 4, true);
    CHECK(power_roots_poly(p, 1) == p);
    CHECK(power_roots_poly(power_roots_poly(p, 2), 3) == power_roots_poly(p, 6));
  }
  // Oracle: for a diagonalizable-free check use a triangular matrix whose
  // eigenvalues are known.
  IntMatrix tri{{2, 5, 1}, {0, -1, 7}, {0, 0, 3}};
  CHECK(power_roots_poly(char_poly(tri), 3) == P("(x-8)*(x+1)*(x-27)"));
}

TEST_CASE("finite order") {
  CHECK(matrix_finite_order(RatMatrix::identity(3), 10) == 1u);
  CHECK(matrix_finite_order(RatMatrix{{0, 1}, {1, 0}}, 10) == 2u);
  CHECK(!matrix_finite_order(RatMatrix{{1, 1}, {0, 1}}, 10).has_value());
}
