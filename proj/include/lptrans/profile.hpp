#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "lptrans/dyadic.hpp"

namespace lpt {

struct Breakpoint {
  Dyadic s;
  Rational value;
};

/// Compactly supported, continuous piecewise-linear Fourier transform.
///
/// Zero outside [first, last] breakpoint and linear in between. Breakpoint
/// abscissae are dyadic; values are exact rationals, so evaluation at a
/// dyadic frequency is exact. A double-precision copy is kept for the hot
/// path (evaluation at grid bins).
class FrequencyProfile {
 public:
  FrequencyProfile() = default;
  /// Throws std::invalid_argument unless abscissae are strictly increasing.
  explicit FrequencyProfile(std::vector<Breakpoint> points);

  double operator()(double s) const;
  Rational exact(const Dyadic& s) const;

  std::span<const Breakpoint> breakpoints() const { return points_; }
  bool empty_support() const;
  /// max |s| over the support; 0 for an empty profile.
  double support_radius() const;
  /// sup |value|; attained at a breakpoint for piecewise-linear profiles.
  Rational sup_abs() const;

 private:
  std::vector<Breakpoint> points_;
  std::vector<double> s_;
  std::vector<double> v_;
};

/// Triangle of height `peak` centred at `center` with half-width `half_width`.
FrequencyProfile triangle_profile(const Dyadic& center, const Dyadic& half_width,
                                  const Rational& peak = 1);

/// Fejér transform (1 - |s|/a)^+. Throws std::invalid_argument if a <= 0.
FrequencyProfile fejer_profile(const Dyadic& a);
FrequencyProfile fejer_profile(double a);

/// Dyadic block: 0 off [2^(n-1), 2^(n+1)], 1 at 2^n, 1/2 at 3*2^(n-1).
FrequencyProfile mn_profile(int n);

/// Low-pass: 1 on [-1/2, 1/2], 0 off [-1, 1].
FrequencyProfile h_profile();

/// de la Vallée Poussin trapezoid: 1 on |s| <= 2^N, 0 off |s| <= 2^(N+1).
FrequencyProfile vdp_profile(int N);

/// Exact linear combination on the merged breakpoint set.
FrequencyProfile profile_combine(std::span<const std::pair<Rational, FrequencyProfile>> terms);

/// Rows "s,value" at the breakpoints, then `dense_samples` equispaced rows
/// across the support when requested.
void write_profile_csv(std::ostream& os, const FrequencyProfile& p, std::size_t dense_samples = 0);

}  // namespace lpt
