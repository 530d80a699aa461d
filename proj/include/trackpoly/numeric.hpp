#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/rational_adaptor.hpp>

#include <string>

namespace trackpoly {

// Expression templates are disabled so that arithmetic results have value
// types and mix freely with auto and template deduction.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integral(const Rational& q) { return denominator_of(q) == 1; }

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

std::string to_string(const Integer& v);
std::string to_string(const Rational& v);

/// Decimal rendering of a rational, rounded half away from zero to `digits` places.
std::string to_decimal(const Rational& v, int digits);

/// Exact rational value of a finite decimal literal such as "1e-6" or "0.0005".
Rational parse_decimal(const std::string& text);

double to_double(const Rational& v);

}  // namespace trackpoly
