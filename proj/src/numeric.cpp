#include "trackpoly/numeric.hpp"

#include "trackpoly/errors.hpp"

#include <cctype>

namespace trackpoly {

Integer gcd(const Integer& a, const Integer& b) {
  Integer x = abs(a), y = abs(b);
  while (y != 0) {
    Integer r = x % y;
    x = y;
    y = r;
  }
  return x;
}

Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

std::string to_string(const Integer& v) { return v.str(); }

std::string to_string(const Rational& v) {
  if (is_integral(v)) return numerator_of(v).str();
  return numerator_of(v).str() + "/" + denominator_of(v).str();
}

std::string to_decimal(const Rational& v, int digits) {
  Integer scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Rational scaled = abs(v) * scale;
  Integer num = numerator_of(scaled), den = denominator_of(scaled);
  Integer q = num / den;
  if ((num % den) * 2 >= den) q += 1;
  std::string body = q.str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits))
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  return (v < 0 && q != 0 ? "-" : "") + body;
}

Rational parse_decimal(const std::string& text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) negative = text[pos++] == '-';
  Integer mantissa = 0;
  int exponent = 0;
  bool any_digit = false, seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      any_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw InputError("not a decimal number: '" + text + "'");
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw InputError("not a decimal number: '" + text + "'");
    std::string rest = text.substr(pos + 1);
    std::size_t used = 0;
    int e = 0;
    try {
      e = std::stoi(rest, &used);
    } catch (const std::exception&) {
      throw InputError("not a decimal number: '" + text + "'");
    }
    if (used != rest.size()) throw InputError("not a decimal number: '" + text + "'");
    exponent += e;
  }
  Rational value = mantissa;
  Integer power = 1;
  for (int i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) power *= 10;
  value = exponent < 0 ? value / Rational(power) : value * Rational(power);
  return negative ? -value : value;
}

double to_double(const Rational& v) { return v.convert_to<double>(); }

}  // namespace trackpoly
