#include "lptrans/profile.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace lpt {

FrequencyProfile::FrequencyProfile(std::vector<Breakpoint> points) : points_(std::move(points)) {
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i - 1].s < points_[i].s)) {
      throw std::invalid_argument("FrequencyProfile: breakpoints must be strictly increasing");
    }
  }
  s_.reserve(points_.size());
  v_.reserve(points_.size());
  for (const auto& bp : points_) {
    s_.push_back(bp.s.to_double());
    v_.push_back(static_cast<double>(bp.value));
  }
}

double FrequencyProfile::operator()(double s) const {
  if (s_.empty() || s < s_.front() || s > s_.back()) return 0.0;
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  if (it == s_.end()) return v_.back();
  const auto hi = static_cast<std::size_t>(it - s_.begin());
  const std::size_t lo = hi - 1;
  const double t = (s - s_[lo]) / (s_[hi] - s_[lo]);
  return v_[lo] + t * (v_[hi] - v_[lo]);
}

Rational FrequencyProfile::exact(const Dyadic& s) const {
  if (points_.empty() || s < points_.front().s || s > points_.back().s) return 0;
  auto it = std::upper_bound(points_.begin(), points_.end(), s,
                             [](const Dyadic& x, const Breakpoint& bp) { return x < bp.s; });
  if (it == points_.end()) return points_.back().value;
  const Breakpoint& b = *it;
  const Breakpoint& a = *(it - 1);
  if (s == a.s) return a.value;
  const Rational t = (s - a.s).to_rational() / (b.s - a.s).to_rational();
  return a.value + t * (b.value - a.value);
}

bool FrequencyProfile::empty_support() const {
  return std::all_of(points_.begin(), points_.end(), [](const Breakpoint& b) { return b.value == 0; });
}

double FrequencyProfile::support_radius() const {
  double r = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const bool touches = points_[i].value != 0 ||
                         (i > 0 && points_[i - 1].value != 0) ||
                         (i + 1 < points_.size() && points_[i + 1].value != 0);
    if (touches) r = std::max(r, std::abs(s_[i]));
  }
  return r;
}

Rational FrequencyProfile::sup_abs() const {
  Rational best = 0;
  for (const auto& bp : points_) best = std::max(best, Rational(abs(bp.value)));
  return best;
}

FrequencyProfile triangle_profile(const Dyadic& center, const Dyadic& half_width, const Rational& peak) {
  if (half_width.sign() <= 0) throw std::invalid_argument("triangle_profile: half-width must be positive");
  return FrequencyProfile({{center - half_width, 0}, {center, peak}, {center + half_width, 0}});
}

FrequencyProfile fejer_profile(const Dyadic& a) {
  if (a.sign() <= 0) throw std::invalid_argument("fejer_profile: a must be positive");
  return triangle_profile(Dyadic(0), a);
}

FrequencyProfile fejer_profile(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("fejer_profile: a must be positive");
  return fejer_profile(Dyadic::from_double(a));
}

FrequencyProfile mn_profile(int n) {
  const Dyadic lo = Dyadic::pow2(n - 1);
  const Dyadic peak = Dyadic::pow2(n);
  const Dyadic mid = Dyadic(3, n - 1);
  const Dyadic hi = Dyadic::pow2(n + 1);
  return FrequencyProfile({{lo, 0}, {peak, 1}, {mid, Rational(1, 2)}, {hi, 0}});
}

FrequencyProfile h_profile() {
  return FrequencyProfile({{Dyadic(-1), 0},
                           {Dyadic(-1, -1), 1},
                           {Dyadic(1, -1), 1},
                           {Dyadic(1), 0}});
}

FrequencyProfile vdp_profile(int N) {
  if (N < 0) throw std::invalid_argument("vdp_profile: N must be nonnegative");
  const Dyadic inner = Dyadic::pow2(N);
  const Dyadic outer = Dyadic::pow2(N + 1);
  return FrequencyProfile({{-outer, 0}, {-inner, 1}, {inner, 1}, {outer, 0}});
}

FrequencyProfile profile_combine(std::span<const std::pair<Rational, FrequencyProfile>> terms) {
  std::vector<Dyadic> knots;
  for (const auto& [coef, p] : terms) {
    if (coef == 0) continue;
    for (const auto& bp : p.breakpoints()) knots.push_back(bp.s);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  std::vector<Breakpoint> merged;
  merged.reserve(knots.size());
  for (const auto& s : knots) {
    Rational v = 0;
    for (const auto& [coef, p] : terms) {
      if (coef != 0) v += coef * p.exact(s);
    }
    merged.push_back({s, v});
  }
  return FrequencyProfile(std::move(merged));
}

void write_profile_csv(std::ostream& os, const FrequencyProfile& p, std::size_t dense_samples) {
  const auto old_precision = os.precision(17);
  os << "s,value\n";
  const auto bps = p.breakpoints();
  for (const auto& bp : bps) {
    os << bp.s.to_double() << ',' << static_cast<double>(bp.value) << '\n';
  }
  if (dense_samples > 1 && !bps.empty()) {
    const double a = bps.front().s.to_double();
    const double b = bps.back().s.to_double();
    for (std::size_t i = 0; i < dense_samples; ++i) {
      const double s = a + (b - a) * static_cast<double>(i) / static_cast<double>(dense_samples - 1);
      os << s << ',' << p(s) << '\n';
    }
  }
  os.precision(old_precision);
}

}  // namespace lpt
