#pragma once

#include "trackpoly/errors.hpp"
#include "trackpoly/matrix.hpp"
#include "trackpoly/numeric.hpp"

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace trackpoly {

/// Univariate polynomial with coefficients stored constant term first.
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// an empty coefficient list and degree -1.
template <class T>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

  static Poly constant(const T& v) { return Poly(std::vector<T>{v}); }
  static Poly x() { return Poly(std::vector<T>{T(0), T(1)}); }
  /// x - r
  static Poly linear_root(const T& r) { return Poly(std::vector<T>{-r, T(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(int k) const { return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : T(0); }
  T leading() const { return c_.empty() ? T(0) : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  template <class U>
  U evaluate(const U& at) const {
    U acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * at + U(*it);
    return acc;
  }

  Poly derivative() const {
    std::vector<T> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * T(static_cast<long>(k)));
    return Poly(std::move(d));
  }

  /// Coefficients reversed: x^deg * p(1/x).
  Poly reversed() const { return Poly(std::vector<T>(c_.rbegin(), c_.rend())); }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = a.coeff(int(k)) + b.coeff(int(k));
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a) {
    std::vector<T> r = a.c_;
    for (auto& v : r) v = -v;
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<T> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  friend Poly operator*(const T& s, const Poly& a) { return constant(s) * a; }

  Poly pow(unsigned n) const {
    Poly r = constant(T(1));
    for (unsigned i = 0; i < n; ++i) r = r * *this;
    return r;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<T> c_;
};

using IntPolynomial = Poly<Integer>;
using RatPolynomial = Poly<Rational>;

RatPolynomial to_rational(const IntPolynomial& p);

/// Multiplies by the common denominator and divides by the content so the
/// result has coprime integer coefficients and a positive leading coefficient.
IntPolynomial content_normalized(const RatPolynomial& p);

struct DivMod {
  RatPolynomial quotient;
  RatPolynomial remainder;
};
DivMod divmod(const RatPolynomial& p, const RatPolynomial& q);

/// Monic gcd over the rationals (zero if both inputs are zero).
RatPolynomial gcd(const RatPolynomial& a, const RatPolynomial& b);

/// Raised by divide_exact when the division leaves a remainder.
class NonzeroRemainder : public InvariantError {
 public:
  explicit NonzeroRemainder(RatPolynomial remainder);
  const RatPolynomial& remainder() const { return remainder_; }

 private:
  RatPolynomial remainder_;
};

/// p / q, which must leave zero remainder and an integral quotient.
IntPolynomial divide_exact(const IntPolynomial& p, const IntPolynomial& q);

bool is_palindromic(const IntPolynomial& p);
bool is_antipalindromic(const IntPolynomial& p);

/// Canonical text: descending powers with explicit signs,
/// e.g. `x^5 - 41*x^4 + 118*x^3 - 118*x^2 + 41*x - 1`.
std::string to_string(const IntPolynomial& p);
std::string to_string(const RatPolynomial& p);

/// Parses integer polynomial expressions in x: sums, products, parentheses and
/// nonnegative integer powers, e.g. `(x-1)^2*(x^2 - 38*x + 1)`.
IntPolynomial parse_polynomial(const std::string& text);

/// det(xI - M).
RatPolynomial char_poly_rational(const RatMatrix& m);
IntPolynomial char_poly(const IntMatrix& m);
/// Rational input: det(xI - M) cleared to content-normalized integer form.
IntPolynomial char_poly(const RatMatrix& m);

/// Sturm sequence of the square-free part of p.
std::vector<RatPolynomial> sturm_sequence(const RatPolynomial& p);
/// Distinct real roots of p in (a, b].
int count_real_roots(const std::vector<RatPolynomial>& sturm, const Rational& a, const Rational& b);

/// Bound B with every root strictly inside (-B, B).
Rational root_bound(const RatPolynomial& p);

struct RootEstimate {
  Rational lower;  // root lies in (lower, upper]
  Rational upper;
  Rational value;  // midpoint, within tol/2 of the root
};

/// Largest real root of p to within tol. Throws InputError when p has no real root.
RootEstimate largest_real_root(const IntPolynomial& p, const Rational& tol);

/// Number of decimal places that resolves tol (1e-4 -> 4).
int decimal_places_for(const Rational& tol);

/// Monic polynomial whose roots are the n-th powers of the roots of p.
IntPolynomial power_roots_poly(const IntPolynomial& p, unsigned n);

/// Companion matrix of a monic polynomial.
IntMatrix companion(const IntPolynomial& p);

/// Smallest N in [1, max_n] with M^N = I.
std::optional<unsigned> matrix_finite_order(const RatMatrix& m, unsigned max_n);

}  // namespace trackpoly
