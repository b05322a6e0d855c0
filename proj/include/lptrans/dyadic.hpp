#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace lpt {

using Rational = boost::multiprecision::cpp_rational;

/// Exact dyadic rational m * 2^e.
///
/// Stored normalized: the mantissa is odd, or the value is zero with e = 0.
/// Every breakpoint of the kernel profiles is dyadic, so partition identities
/// can be checked with exact arithmetic. Arithmetic throws std::overflow_error
/// rather than rounding.
class Dyadic {
 public:
  constexpr Dyadic() = default;
  Dyadic(std::int64_t integer);  // NOLINT(google-explicit-constructor)
  Dyadic(std::int64_t mantissa, int exponent);

  static Dyadic pow2(int k) { return Dyadic(1, k); }
  /// Exact conversion; every finite double is dyadic. Throws on inf/nan.
  static Dyadic from_double(double value);

  std::int64_t mantissa() const { return mantissa_; }
  int exponent() const { return exponent_; }
  bool is_zero() const { return mantissa_ == 0; }
  int sign() const { return (mantissa_ > 0) - (mantissa_ < 0); }

  double to_double() const;
  Rational to_rational() const;
  std::string to_string() const;

  Dyadic operator-() const { return Dyadic(-mantissa_, exponent_); }
  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.mantissa_ == b.mantissa_ && a.exponent_ == b.exponent_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  std::int64_t mantissa_ = 0;
  int exponent_ = 0;
};

Dyadic abs(const Dyadic& d);

}  // namespace lpt
