#include "hyperreg/numeric.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

#include "hyperreg/errors.hpp"

namespace hyperreg {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

BigInt pow10(long long e) {
  BigInt r(1);
  for (long long i = 0; i < e; ++i) r *= 10;
  return r;
}

Rational parse_decimal(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  long long exponent = 0;
  bool seen_point = false;
  bool seen_digit = false;
  std::size_t i = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw ParseError("not a number: '" + std::string(s) + "'");
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw ParseError("not a number: '" + std::string(s) + "'");
    std::string rest(s.substr(i + 1));
    char* end = nullptr;
    long long e = std::strtoll(rest.c_str(), &end, 10);
    if (rest.empty() || *end != '\0') throw ParseError("bad exponent in '" + std::string(s) + "'");
    if (e > 100000 || e < -100000) throw ParseError("exponent out of range in '" + std::string(s) + "'");
    exponent += e;
  }
  BigInt mantissa(digits);
  Rational value;
  if (exponent >= 0) {
    value = Rational(mantissa * pow10(exponent));
  } else {
    value = Rational(mantissa, pow10(-exponent));
  }
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s);
  Rational num = parse_decimal(trim(s.substr(0, slash)));
  Rational den = parse_decimal(trim(s.substr(slash + 1)));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
  return num / den;
}

double parse_double(std::string_view text) {
  std::string_view s = trim(text);
  if (s.find('/') != std::string_view::npos) return to_double(parse_rational(s));
  std::string buf(s);
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || *end != '\0') throw ParseError("not a number: '" + buf + "'");
  return v;
}

std::string to_string(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_string(const Rational& x) { return x.str(); }

}  // namespace hyperreg
