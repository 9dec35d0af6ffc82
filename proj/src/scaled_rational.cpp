#include "hyperreg/scaled_rational.hpp"

#include <cmath>
#include <limits>

#include "hyperreg/errors.hpp"

namespace hyperreg {

namespace {

Rational shifted(const Rational& q, long s) {
  BigInt n = boost::multiprecision::numerator(q);
  BigInt d = boost::multiprecision::denominator(q);
  if (s > 0)
    d <<= static_cast<unsigned>(s);
  else if (s < 0)
    n <<= static_cast<unsigned>(-s);
  return Rational(n, d);
}

}  // namespace

ScaledRational::ScaledRational(const Rational& x) : q_(x) {
  if (x < 0) throw DomainError("ScaledRational: negative value");
  normalize();
}

ScaledRational::ScaledRational(const Rational& q, const BigInt& e) : q_(q), e_(e) {
  if (q < 0) throw DomainError("ScaledRational: negative value");
  normalize();
}

ScaledRational ScaledRational::pow2(const BigInt& e) {
  ScaledRational r;
  r.q_ = 1;
  r.e_ = e;
  return r;
}

void ScaledRational::normalize() {
  if (q_ == 0) {
    e_ = 0;
    return;
  }
  const BigInt& n = boost::multiprecision::numerator(q_);
  const BigInt& d = boost::multiprecision::denominator(q_);
  long s = static_cast<long>(boost::multiprecision::msb(n)) - static_cast<long>(boost::multiprecision::msb(d));
  Rational q = shifted(q_, s);
  if (q < 1) {
    q *= 2;
    --s;
  }
  q_ = q;
  e_ += s;
}

ScaledRational ScaledRational::floor_pow2() const {
  if (is_zero()) return *this;
  return pow2(e_);
}

ScaledRational ScaledRational::pow(unsigned long long n) const {
  if (n == 0) return ScaledRational(1);
  if (is_zero()) return *this;
  ScaledRational r;
  r.q_ = pow_int(q_, n);
  r.e_ = e_ * BigInt(n);
  r.normalize();
  return r;
}

ScaledRational operator*(const ScaledRational& a, const ScaledRational& b) {
  if (a.is_zero() || b.is_zero()) return ScaledRational();
  ScaledRational r;
  r.q_ = a.q_ * b.q_;
  r.e_ = a.e_ + b.e_;
  r.normalize();
  return r;
}

ScaledRational operator/(const ScaledRational& a, const ScaledRational& b) {
  if (b.is_zero()) throw DomainError("ScaledRational: division by zero");
  if (a.is_zero()) return a;
  ScaledRational r;
  r.q_ = a.q_ / b.q_;
  r.e_ = a.e_ - b.e_;
  r.normalize();
  return r;
}

std::strong_ordering operator<=>(const ScaledRational& a, const ScaledRational& b) {
  if (a.is_zero() || b.is_zero()) {
    if (a.is_zero() && b.is_zero()) return std::strong_ordering::equal;
    return a.is_zero() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.e_ != b.e_) return a.e_ < b.e_ ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.q_ == b.q_) return std::strong_ordering::equal;
  return a.q_ < b.q_ ? std::strong_ordering::less : std::strong_ordering::greater;
}

double ScaledRational::log2() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log2(q_.convert_to<double>()) + e_.convert_to<double>();
}

double ScaledRational::to_double() const {
  if (is_zero()) return 0;
  if (e_ > 1100) return std::numeric_limits<double>::infinity();
  if (e_ < -1100) return 0;
  return std::ldexp(q_.convert_to<double>(), e_.convert_to<int>());
}

Rational ScaledRational::to_rational(long max_bits) const {
  if (is_zero()) return Rational(0);
  if (e_ > max_bits || e_ < -max_bits)
    throw DomainError("ScaledRational: exponent " + e_.str() + " too large for a rational");
  return shifted(q_, -e_.convert_to<long>());
}

std::string ScaledRational::str() const {
  if (is_zero()) return "0";
  if (e_ >= -64 && e_ <= 64) return to_string(to_rational());
  std::string head = q_ == 1 ? "" : to_string(q_) + "*";
  return head + "2^" + e_.str();
}

ScaledRational ScaledRational::parse(const std::string& text) {
  auto caret = text.find("2^");
  if (caret == std::string::npos) return ScaledRational(parse_rational(text));
  Rational q(1);
  if (caret > 0) {
    if (text[caret - 1] != '*') throw ParseError("bad scaled rational: " + text);
    q = parse_rational(text.substr(0, caret - 1));
  }
  BigInt e;
  try {
    e = BigInt(text.substr(caret + 2));
  } catch (const std::exception&) {
    throw ParseError("bad exponent in scaled rational: " + text);
  }
  return ScaledRational(q, e);
}

ScaledRational to_scaled(double x) {
  if (!(x >= 0) || std::isinf(x)) throw DomainError("to_scaled: value must be finite and nonnegative");
  int e = 0;
  double m = std::frexp(x, &e);  // x = m·2^e, m ∈ [1/2, 1)
  // m·2^53 is an integer, so this is exact.
  Rational q(static_cast<long long>(std::ldexp(m, 53)));
  return ScaledRational(q, BigInt(e - 53));
}

}  // namespace hyperreg
