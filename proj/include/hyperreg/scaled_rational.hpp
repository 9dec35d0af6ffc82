#pragma once

#include <compare>
#include <string>

#include "hyperreg/numeric.hpp"

namespace hyperreg {

// Nonnegative q·2^e with q ∈ {0} ∪ [1, 2) and e an unbounded integer.
// Ensemble constants live here: their exponents run into the thousands of
// bits, so neither double nor a plain Rational can hold them.
class ScaledRational {
 public:
  ScaledRational() = default;
  explicit ScaledRational(const Rational& x);
  explicit ScaledRational(long long n) : ScaledRational(Rational(n)) {}
  ScaledRational(const Rational& q, const BigInt& e);

  static ScaledRational pow2(const BigInt& e);

  bool is_zero() const { return q_ == 0; }
  const Rational& mantissa() const { return q_; }
  const BigInt& exponent() const { return e_; }

  // Largest power of two ≤ *this (0 stays 0).
  ScaledRational floor_pow2() const;
  bool is_pow2() const { return q_ == 1; }

  ScaledRational pow(unsigned long long n) const;

  friend ScaledRational operator*(const ScaledRational& a, const ScaledRational& b);
  friend ScaledRational operator/(const ScaledRational& a, const ScaledRational& b);
  friend std::strong_ordering operator<=>(const ScaledRational& a, const ScaledRational& b);
  friend bool operator==(const ScaledRational& a, const ScaledRational& b) = default;

  // Approximate log2; −∞ for zero.
  double log2() const;
  // 0 on underflow, +∞ on overflow.
  double to_double() const;
  // Throws DomainError when |e| exceeds max_bits.
  Rational to_rational(long max_bits = 1 << 16) const;
  // "q*2^e", or the plain rational when e is small.
  std::string str() const;
  static ScaledRational parse(const std::string& text);

 private:
  void normalize();
  Rational q_{0};
  BigInt e_{0};
};

using Scaled = ScaledRational;

inline const ScaledRational& min(const ScaledRational& a, const ScaledRational& b) { return b < a ? b : a; }
inline const ScaledRational& max(const ScaledRational& a, const ScaledRational& b) { return a < b ? b : a; }

ScaledRational to_scaled(double x);
inline ScaledRational to_scaled(const Rational& x) { return ScaledRational(x); }

}  // namespace hyperreg
