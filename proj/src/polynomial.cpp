#include "trackpoly/polynomial.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace trackpoly {

RatPolynomial to_rational(const IntPolynomial& p) {
  std::vector<Rational> c;
  for (const auto& v : p.coeffs()) c.emplace_back(v);
  return RatPolynomial(std::move(c));
}

IntPolynomial content_normalized(const RatPolynomial& p) {
  if (p.is_zero()) return IntPolynomial();
  Integer den = 1;
  for (const auto& v : p.coeffs()) den = lcm(den, denominator_of(v));
  std::vector<Integer> c;
  Integer g = 0;
  for (const auto& v : p.coeffs()) {
    c.push_back(numerator_of(v * den));
    g = gcd(g, c.back());
  }
  if (c.back() < 0) g = -g;
  for (auto& v : c) v /= g;
  return IntPolynomial(std::move(c));
}

DivMod divmod(const RatPolynomial& p, const RatPolynomial& q) {
  if (q.is_zero()) throw std::invalid_argument("polynomial division by zero");
  std::vector<Rational> rem = p.coeffs();
  const int dq = q.degree();
  const int dp = p.degree();
  std::vector<Rational> quo(dp >= dq ? dp - dq + 1 : 0);
  const Rational lead = q.leading();
  for (int k = dp; k >= dq; --k) {
    Rational f = rem[k] / lead;
    if (f == 0) continue;
    quo[k - dq] = f;
    for (int j = 0; j <= dq; ++j) rem[k - dq + j] -= f * q.coeffs()[j];
  }
  return {RatPolynomial(std::move(quo)), RatPolynomial(std::move(rem))};
}

RatPolynomial gcd(const RatPolynomial& a, const RatPolynomial& b) {
  RatPolynomial x = a, y = b;
  while (!y.is_zero()) {
    RatPolynomial r = divmod(x, y).remainder;
    x = std::move(y);
    y = std::move(r);
  }
  if (x.is_zero()) return x;
  Rational lead = x.leading();
  return RatPolynomial::constant(Rational(1) / lead) * x;
}

NonzeroRemainder::NonzeroRemainder(RatPolynomial remainder)
    : InvariantError("exact division left remainder " + to_string(remainder)),
      remainder_(std::move(remainder)) {}

IntPolynomial divide_exact(const IntPolynomial& p, const IntPolynomial& q) {
  DivMod dm = divmod(to_rational(p), to_rational(q));
  if (!dm.remainder.is_zero()) throw NonzeroRemainder(dm.remainder);
  std::vector<Integer> c;
  for (const auto& v : dm.quotient.coeffs()) {
    if (!is_integral(v)) throw NonzeroRemainder(RatPolynomial());
    c.push_back(numerator_of(v));
  }
  return IntPolynomial(std::move(c));
}

bool is_palindromic(const IntPolynomial& p) {
  const auto& c = p.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != c[c.size() - 1 - i]) return false;
  return true;
}

bool is_antipalindromic(const IntPolynomial& p) {
  const auto& c = p.coeffs();
  if (c.empty()) return true;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != -c[c.size() - 1 - i]) return false;
  return true;
}

namespace {

template <class T>
std::string render(const Poly<T>& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = p.degree(); k >= 0; --k) {
    T c = p.coeff(k);
    if (c == 0) continue;
    bool neg = c < 0;
    T mag = neg ? T(-c) : c;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    if (k == 0) {
      os << to_string(mag);
      continue;
    }
    if (mag != 1) os << to_string(mag) << "*";
    os << "x";
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

class PolyParser {
 public:
  explicit PolyParser(const std::string& s) : s_(s) {}

  IntPolynomial parse() {
    IntPolynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw InputError("polynomial '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool at(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  Integer integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return Integer(s_.substr(start, pos_ - start));
  }
  IntPolynomial expr() {
    IntPolynomial acc;
    bool neg = false;
    if (accept('-'))
      neg = true;
    else
      accept('+');
    IntPolynomial t = term();
    acc = neg ? -t : t;
    while (true) {
      if (accept('+'))
        acc = acc + term();
      else if (accept('-'))
        acc = acc - term();
      else
        return acc;
    }
  }
  IntPolynomial term() {
    IntPolynomial acc = power();
    while (true) {
      if (accept('*'))
        acc = acc * power();
      else if (at('(') || at('x'))
        acc = acc * power();
      else
        return acc;
    }
  }
  IntPolynomial power() {
    IntPolynomial base = primary();
    if (accept('^')) {
      Integer e = integer();
      if (e > 4096) fail("exponent too large");
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }
  IntPolynomial primary() {
    if (accept('(')) {
      IntPolynomial p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (accept('x')) return IntPolynomial::x();
    skip();
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      return IntPolynomial::constant(integer());
    fail("expected a term");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const IntPolynomial& p) { return render(p); }
std::string to_string(const RatPolynomial& p) { return render(p); }

IntPolynomial parse_polynomial(const std::string& text) { return PolyParser(text).parse(); }

RatPolynomial char_poly_rational(const RatMatrix& m) {
  if (!m.square()) throw std::invalid_argument("char_poly of non-square matrix " + m.shape());
  const std::size_t n = m.rows();
  RatMatrix h = m;
  // Reduce to upper Hessenberg form by similarity transforms.
  for (std::size_t col = 0; col + 2 < n; ++col) {
    std::size_t piv = col + 1;
    while (piv < n && h(piv, col) == 0) ++piv;
    if (piv == n) continue;
    if (piv != col + 1) {
      for (std::size_t j = 0; j < n; ++j) std::swap(h(piv, j), h(col + 1, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(h(i, piv), h(i, col + 1));
    }
    for (std::size_t i = col + 2; i < n; ++i) {
      if (h(i, col) == 0) continue;
      Rational f = h(i, col) / h(col + 1, col);
      for (std::size_t j = 0; j < n; ++j) h(i, j) -= f * h(col + 1, j);
      for (std::size_t r = 0; r < n; ++r) h(r, col + 1) += f * h(r, i);
    }
  }
  std::vector<RatPolynomial> p(n + 1);
  p[0] = RatPolynomial::constant(1);
  for (std::size_t k = 0; k < n; ++k) {
    RatPolynomial next = RatPolynomial::linear_root(h(k, k)) * p[k];
    Rational prod = 1;
    for (std::size_t i = k; i-- > 0;) {
      prod *= h(i + 1, i);
      if (prod == 0) break;
      if (h(i, k) == 0) continue;
      next = next - RatPolynomial::constant(prod * h(i, k)) * p[i];
    }
    p[k + 1] = std::move(next);
  }
  return p[n];
}

IntPolynomial char_poly(const IntMatrix& m) {
  RatPolynomial r = char_poly_rational(to_rational(m));
  std::vector<Integer> c;
  for (const auto& v : r.coeffs()) {
    if (!is_integral(v)) throw InvariantError("non-integral characteristic polynomial of integer matrix");
    c.push_back(numerator_of(v));
  }
  return IntPolynomial(std::move(c));
}

IntPolynomial char_poly(const RatMatrix& m) { return content_normalized(char_poly_rational(m)); }

std::vector<RatPolynomial> sturm_sequence(const RatPolynomial& p) {
  RatPolynomial sq = p;
  RatPolynomial g = gcd(p, p.derivative());
  if (g.degree() > 0) sq = divmod(p, g).quotient;
  std::vector<RatPolynomial> seq{sq, sq.derivative()};
  while (!seq.back().is_zero()) {
    RatPolynomial r = divmod(seq[seq.size() - 2], seq.back()).remainder;
    seq.push_back(-r);
  }
  seq.pop_back();
  return seq;
}

namespace {

int sign_variations(const std::vector<RatPolynomial>& seq, const Rational& at) {
  int changes = 0;
  int last = 0;
  for (const auto& q : seq) {
    Rational v = q.evaluate(at);
    int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

int count_real_roots(const std::vector<RatPolynomial>& sturm, const Rational& a, const Rational& b) {
  return sign_variations(sturm, a) - sign_variations(sturm, b);
}

Rational root_bound(const RatPolynomial& p) {
  Rational m = 0;
  const Rational lead = p.leading();
  for (int k = 0; k < p.degree(); ++k) {
    Rational r = p.coeff(k) / lead;
    if (r < 0) r = -r;
    if (r > m) m = r;
  }
  return m + 1;
}

RootEstimate largest_real_root(const IntPolynomial& p, const Rational& tol) {
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
  if (p.degree() < 1) throw InputError("largest_real_root needs a nonconstant polynomial");
  RatPolynomial rp = to_rational(p);
  auto seq = sturm_sequence(rp);
  Rational hi = root_bound(rp);
  Rational lo = -hi;
  if (count_real_roots(seq, lo, hi) == 0)
    throw InputError("polynomial " + to_string(p) + " has no real root");
  // Invariant: a root lies in (lo, hi] and none lies above hi.
  while (hi - lo > tol) {
    Rational mid = (lo + hi) / 2;
    if (count_real_roots(seq, mid, hi) > 0)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi, (lo + hi) / 2};
}

int decimal_places_for(const Rational& tol) {
  int d = 0;
  Rational step = 1;
  while (step > tol && d < 60) {
    step /= 10;
    ++d;
  }
  return d;
}

IntMatrix companion(const IntPolynomial& p) {
  if (!p.is_monic()) throw std::invalid_argument("companion matrix needs a monic polynomial");
  const int d = p.degree();
  IntMatrix c(d, d);
  for (int i = 1; i < d; ++i) c(i, i - 1) = 1;
  for (int i = 0; i < d; ++i) c(i, d - 1) = -p.coeff(i);
  return c;
}

IntPolynomial power_roots_poly(const IntPolynomial& p, unsigned n) {
  if (n == 0) throw std::invalid_argument("power_roots_poly needs n >= 1");
  if (!p.is_monic()) throw std::invalid_argument("power_roots_poly needs a monic polynomial");
  if (n == 1 || p.degree() == 0) return p;
  return char_poly(power(companion(p), n));
}

std::optional<unsigned> matrix_finite_order(const RatMatrix& m, unsigned max_n) {
  if (!m.square()) throw std::invalid_argument("matrix_finite_order of non-square matrix");
  const RatMatrix id = RatMatrix::identity(m.rows());
  RatMatrix p = m;
  for (unsigned k = 1; k <= max_n; ++k) {
    if (p == id) return k;
    p = p * m;
  }
  return std::nullopt;
}

}  // namespace trackpoly
