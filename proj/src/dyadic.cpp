#include "lptrans/dyadic.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lpt {

namespace {

using i128 = __int128;

constexpr i128 kMantissaMax = std::numeric_limits<std::int64_t>::max();

std::int64_t checked_narrow(i128 v) {
  if (v > kMantissaMax || v < -kMantissaMax) {
    throw std::overflow_error("Dyadic: mantissa overflow");
  }
  return static_cast<std::int64_t>(v);
}

// Aligns two mantissas to the smaller exponent; throws if a shift would
// leave 128-bit range.
i128 shifted(std::int64_t m, int by) {
  if (by == 0 || m == 0) return m;
  if (by > 62) throw std::overflow_error("Dyadic: exponent gap too large");
  return static_cast<i128>(m) << by;
}

}  // namespace

Dyadic::Dyadic(std::int64_t integer) : Dyadic(integer, 0) {}

Dyadic::Dyadic(std::int64_t mantissa, int exponent)
    : mantissa_(mantissa), exponent_(exponent) {
  if (mantissa_ == 0) {
    exponent_ = 0;
    return;
  }
  while ((mantissa_ & 1) == 0) {
    mantissa_ /= 2;
    ++exponent_;
  }
}

Dyadic Dyadic::from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("Dyadic: non-finite value");
  if (value == 0.0) return {};
  int exp2 = 0;
  const double frac = std::frexp(value, &exp2);  // value = frac * 2^exp2
  const auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
  return Dyadic(mant, exp2 - 53);
}

double Dyadic::to_double() const {
  return std::ldexp(static_cast<double>(mantissa_), exponent_);
}

Rational Dyadic::to_rational() const {
  Rational r(mantissa_);
  if (exponent_ >= 0) {
    r *= Rational(boost::multiprecision::cpp_int(1) << exponent_);
  } else {
    r /= Rational(boost::multiprecision::cpp_int(1) << (-exponent_));
  }
  return r;
}

std::string Dyadic::to_string() const {
  std::ostringstream os;
  if (exponent_ >= 0) {
    os << to_rational();
  } else {
    os << mantissa_ << "/2^" << -exponent_;
  }
  return os.str();
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const int e = std::min(a.exponent_, b.exponent_);
  const i128 sum = shifted(a.mantissa_, a.exponent_ - e) + shifted(b.mantissa_, b.exponent_ - e);
  // Normalize inside 128 bits before narrowing.
  i128 m = sum;
  int ex = e;
  if (m == 0) return {};
  while ((m & 1) == 0) {
    m /= 2;
    ++ex;
  }
  return Dyadic(checked_narrow(m), ex);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  const i128 prod = static_cast<i128>(a.mantissa_) * b.mantissa_;
  return Dyadic(checked_narrow(prod), a.exponent_ + b.exponent_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  const int e = std::min(a.exponent_, b.exponent_);
  if (std::max(a.exponent_, b.exponent_) - e <= 62) {
    return shifted(a.mantissa_, a.exponent_ - e) <=> shifted(b.mantissa_, b.exponent_ - e);
  }
  const Rational ra = a.to_rational();
  const Rational rb = b.to_rational();
  if (ra < rb) return std::strong_ordering::less;
  if (ra > rb) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Dyadic abs(const Dyadic& d) { return d.sign() < 0 ? -d : d; }

}  // namespace lpt
