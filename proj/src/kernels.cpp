#include "lptrans/kernels.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "lptrans/errors.hpp"

namespace lpt {

double fejer_time(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("fejer_time: a must be positive");
  const double u = 0.5 * a * x;
  double sinc2;
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    sinc2 = 1.0 - u2 / 3.0 + 2.0 * u2 * u2 / 45.0;
  } else {
    const double s = std::sin(u) / u;
    sinc2 = s * s;
  }
  return a / (2.0 * std::numbers::pi) * sinc2;
}

cplx modulated_fejer_time(double center, double a, double weight, double x) {
  return weight * std::polar(1.0, center * x) * fejer_time(a, x);
}

cplx mn_time(int n, double x) {
  const double half = std::ldexp(1.0, n - 1);
  const double k = fejer_time(half, x);
  return (std::polar(1.0, 2.0 * half * x) + 0.5 * std::polar(1.0, 3.0 * half * x)) * k;
}

GridSignal sample_profile_kernel(const FrequencyProfile& p, const GridSpec& grid) {
  grid.validate();
  if (p.support_radius() >= grid.nyquist()) {
    throw NyquistError("sample_profile_kernel: profile support reaches the Nyquist frequency");
  }
  std::vector<cplx> bins(grid.length);
  for (std::size_t k = 0; k < bins.size(); ++k) bins[k] = p(grid.frequency(k));
  return from_spectrum(grid, std::move(bins));
}

GridSignal sample_function(const GridSpec& grid, const std::function<cplx(double)>& f) {
  GridSignal out(grid);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = f(grid.x(j));
  return out;
}

GridSignal make_h1_test(std::uint64_t seed, double band_lo, double band_hi, const GridSpec& grid, int packets) {
  grid.validate();
  if (!(band_lo > 0.0) || !(band_hi > band_lo)) {
    throw PreconditionError("make_h1_test: need 0 < band_lo < band_hi");
  }
  if (band_hi >= grid.nyquist()) throw NyquistError("make_h1_test: band exceeds Nyquist");
  if (band_hi - band_lo < 2.0 * grid.resolution()) {
    throw ResolutionError("make_h1_test: band narrower than two frequency bins");
  }
  if (packets < 1) throw PreconditionError("make_h1_test: need at least one packet");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> position(-0.25 * grid.window(), 0.25 * grid.window());
  std::vector<cplx> amps(static_cast<std::size_t>(packets));
  std::vector<double> centers(static_cast<std::size_t>(packets));
  for (int i = 0; i < packets; ++i) {
    amps[static_cast<std::size_t>(i)] = {normal(rng), normal(rng)};
    centers[static_cast<std::size_t>(i)] = position(rng);
  }

  const double width = band_hi - band_lo;
  std::vector<cplx> bins(grid.length);
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const double s = grid.frequency(k);
    if (s <= band_lo || s >= band_hi) continue;
    const double env = std::sin(std::numbers::pi * (s - band_lo) / width);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) acc += amps[i] * std::polar(1.0, -s * centers[i]);
    bins[k] = env * env * acc;
  }
  GridSignal f = from_spectrum(grid, std::move(bins));
  const double norm = f.l1_norm();
  if (!(norm > 0.0)) throw PreconditionError("make_h1_test: band contains no bins");
  f *= 1.0 / norm;
  return f;
}

}  // namespace lpt
