#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

namespace hyperreg {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

inline constexpr double kRelTol = 1e-9;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
};

// Accepts integers, "p/q", decimals and scientific notation ("1.5e-3").
// Decimal input is converted exactly in the rational backend.
Rational parse_rational(std::string_view text);
double parse_double(std::string_view text);

template <class T>
T parse_scalar(std::string_view text);

template <>
inline Rational parse_scalar<Rational>(std::string_view text) {
  return parse_rational(text);
}

template <>
inline double parse_scalar<double>(std::string_view text) {
  return parse_double(text);
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

std::string to_string(double x);
std::string to_string(const Rational& x);

template <class T>
T from_double(double x) {
  return T(x);
}

template <class T>
T from_int(long long n) {
  return T(n);
}

template <class T>
T pow_int(const T& base, unsigned long long e) {
  T result(1);
  T b = base;
  while (e > 0) {
    if (e & 1U) result *= b;
    e >>= 1U;
    if (e > 0) b *= b;
  }
  return result;
}

// Equality up to kRelTol in the float backend; exact equality otherwise.
inline bool approx_equal(double a, double b, double tol = kRelTol) {
  if (a == b) return true;
  return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}
inline bool approx_equal(const Rational& a, const Rational& b, double = kRelTol) { return a == b; }

inline bool approx_le(double a, double b, double tol = kRelTol) {
  return a <= b || approx_equal(a, b, tol);
}
inline bool approx_le(const Rational& a, const Rational& b, double = kRelTol) { return a <= b; }

template <class T>
bool is_zero(const T& x) {
  return x == T(0);
}

}  // namespace hyperreg
