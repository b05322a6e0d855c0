#include "lptrans/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lptrans/errors.hpp"
#include "lptrans/fft.hpp"
#include "lptrans/kernels.hpp"
#include "lptrans/parallel.hpp"
#include "lptrans/rng.hpp"

namespace lpt {

namespace {

// Bins inside the closed support of p, with the profile value there.
struct SparseBins {
  std::vector<std::size_t> index;
  std::vector<double> value;
};

SparseBins sparse_bins(const FrequencyProfile& p, const GridSpec& grid) {
  SparseBins out;
  const auto bps = p.breakpoints();
  if (bps.empty()) return out;
  const double res = grid.resolution();
  const double lo = bps.front().s.to_double();
  const double hi = bps.back().s.to_double();
  const auto n = static_cast<std::ptrdiff_t>(grid.length);
  const auto k_lo = std::max<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::ceil(lo / res)), -(n / 2));
  const auto k_hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::floor(hi / res)), (n - 1) / 2);
  for (auto k = k_lo; k <= k_hi; ++k) {
    const std::size_t idx = static_cast<std::size_t>(k < 0 ? k + n : k);
    const double v = p(grid.frequency(idx));
    if (v != 0.0) {
      out.index.push_back(idx);
      out.value.push_back(v);
    }
  }
  return out;
}

void require_nyquist(const GridSpec& grid, int N, const char* who) {
  if (std::ldexp(1.0, N + 1) >= grid.nyquist()) {
    throw NyquistError(std::string(who) + ": block " + std::to_string(N) +
                       " reaches the Nyquist frequency of the grid");
  }
}

void require_resolution(const GridSpec& grid, int M, const char* who) {
  if (std::ldexp(1.0, -M - 1) <= grid.resolution()) {
    throw ResolutionError(std::string(who) + ": block " + std::to_string(-M) +
                          " is below the frequency resolution of the window");
  }
}

std::vector<cplx> raw_fft(const GridSignal& f) {
  std::vector<cplx> data(f.samples().begin(), f.samples().end());
  fft::forward(data);
  return data;
}

GridSignal raw_ifft(const GridSpec& grid, std::vector<cplx> data) {
  fft::backward(data);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
  return GridSignal(grid, std::move(data));
}

// Block multipliers evaluated once per grid; a sign pattern is applied by
// summing the sparse lists, so every trial costs one inverse FFT.
class BlockBank {
 public:
  BlockBank(const GridSpec& grid, int lo, int hi, bool with_h) : grid_(grid), lo_(lo) {
    if (with_h) h_ = sparse_bins(h_profile(), grid);
    for (int n = lo; n <= hi; ++n) blocks_.push_back(sparse_bins(mn_profile(n), grid));
  }

  std::vector<cplx> multiplier(const SignPattern& eps) const {
    std::vector<cplx> m(grid_.length);
    for (std::size_t i = 0; i < h_.index.size(); ++i) m[h_.index[i]] += h_.value[i];
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const double e = eps[lo_ + static_cast<int>(b)];
      const auto& bl = blocks_[b];
      for (std::size_t i = 0; i < bl.index.size(); ++i) m[bl.index[i]] += e * bl.value[i];
    }
    return m;
  }

 private:
  GridSpec grid_;
  int lo_;
  SparseBins h_;
  std::vector<SparseBins> blocks_;
};

GridSignal apply_bank(const GridSignal& f, const std::vector<cplx>& f_hat, const std::vector<cplx>& mult) {
  std::vector<cplx> data(f_hat.size());
  for (std::size_t k = 0; k < data.size(); ++k) data[k] = f_hat[k] * mult[k];
  return raw_ifft(f.grid(), std::move(data));
}

}  // namespace

SignPattern::SignPattern(int first, std::vector<int> signs) : first_(first), signs_(std::move(signs)) {
  for (int s : signs_) {
    if (s != 1 && s != -1) throw std::invalid_argument("SignPattern: entries must be +1 or -1");
  }
}

SignPattern SignPattern::constant(int first, int last, int sign) {
  if (last < first) throw std::invalid_argument("SignPattern: empty index range");
  return SignPattern(first, std::vector<int>(static_cast<std::size_t>(last - first + 1), sign));
}

SignPattern SignPattern::random(int first, int last, std::uint64_t seed, std::uint64_t stream) {
  if (last < first) throw std::invalid_argument("SignPattern: empty index range");
  auto rng = stream_rng(seed, stream);
  std::vector<int> signs(static_cast<std::size_t>(last - first + 1));
  for (auto& s : signs) s = (rng() >> 63) != 0 ? 1 : -1;
  return SignPattern(first, std::move(signs));
}

SignPattern SignPattern::negated() const {
  std::vector<int> s = signs_;
  for (auto& v : s) v = -v;
  return SignPattern(first_, std::move(s));
}

FrequencyProfile lp_profile(const SignPattern& eps, int N) {
  if (N < 0 || !eps.covers(0, N)) throw PreconditionError("lp_profile: signs must cover 0..N");
  std::vector<std::pair<Rational, FrequencyProfile>> terms;
  terms.emplace_back(1, h_profile());
  for (int n = 0; n <= N; ++n) terms.emplace_back(eps[n], mn_profile(n));
  return profile_combine(terms);
}

FrequencyProfile two_sided_profile(const SignPattern& eps, int M, int N) {
  if (M < 0 || N < 0 || !eps.covers(-M, N)) throw PreconditionError("two_sided_profile: signs must cover -M..N");
  std::vector<std::pair<Rational, FrequencyProfile>> terms;
  for (int n = -M; n <= N; ++n) terms.emplace_back(eps[n], mn_profile(n));
  return profile_combine(terms);
}

GridSignal lp_partial_sum(const GridSignal& f, const SignPattern& eps, int N) {
  if (N < 0 || !eps.covers(0, N)) throw PreconditionError("lp_partial_sum: signs must cover 0..N");
  require_nyquist(f.grid(), N, "lp_partial_sum");
  const BlockBank bank(f.grid(), 0, N, true);
  return apply_bank(f, raw_fft(f), bank.multiplier(eps));
}

GridSignal two_sided_partial(const GridSignal& f, const SignPattern& eps, int M, int N) {
  if (M < 0 || N < 0 || !eps.covers(-M, N)) {
    throw PreconditionError("two_sided_partial: signs must cover -M..N");
  }
  require_nyquist(f.grid(), N, "two_sided_partial");
  require_resolution(f.grid(), M, "two_sided_partial");
  const BlockBank bank(f.grid(), -M, N, false);
  return apply_bank(f, raw_fft(f), bank.multiplier(eps));
}

VdpResidual reconstruct_vdp_identity(const GridSignal& f, int N) {
  if (N < 0) throw PreconditionError("reconstruct_vdp_identity: N must be nonnegative");
  require_nyquist(f.grid(), N, "reconstruct_vdp_identity");
  const auto& grid = f.grid();
  const auto f_hat = raw_fft(f);

  VdpResidual out;
  double total = 0.0, negative = 0.0;
  for (std::size_t k = 0; k < f_hat.size(); ++k) {
    const double e = std::norm(f_hat[k]);
    total += e;
    if (grid.frequency(k) <= -0.5) negative += e;
  }
  out.negative_energy = total > 0.0 ? negative / total : 0.0;
  // Roundoff from synthesizing f leaves ~1e-32 relative energy on empty bins.
  out.precondition_met = out.negative_energy <= 1e-20;

  auto apply_profile = [&](const FrequencyProfile& p) {
    const SparseBins sb = sparse_bins(p, grid);
    std::vector<cplx> mult(grid.length);
    for (std::size_t i = 0; i < sb.index.size(); ++i) mult[sb.index[i]] = sb.value[i];
    return apply_bank(f, f_hat, mult);
  };

  GridSignal diff = apply_profile(vdp_profile(N));
  diff -= apply_profile(h_profile());
  for (int n = 0; n <= N; ++n) diff -= apply_profile(mn_profile(n));
  out.residual = diff.l1_norm();
  return out;
}

DecompositionReport unconditional_ratio(const GridSignal& f, int N, std::size_t trials, std::uint64_t seed) {
  if (N < 0) throw PreconditionError("unconditional_ratio: N must be nonnegative");
  if (trials == 0) throw PreconditionError("unconditional_ratio: need at least one trial");
  const double norm = f.l1_norm();
  if (!(norm > 0.0)) throw PreconditionError("unconditional_ratio: f must be nonzero");
  require_nyquist(f.grid(), N, "unconditional_ratio");

  const BlockBank bank(f.grid(), 0, N, true);
  const auto f_hat = raw_fft(f);

  DecompositionReport rep;
  rep.N = N;
  rep.trials = trials;
  rep.seed = seed;
  rep.ratios.resize(trials + 2);

  const SignPattern plus = SignPattern::constant(0, N, 1);
  const GridSignal full = apply_bank(f, f_hat, bank.multiplier(plus));
  rep.ratios[0] = full.l1_norm() / norm;
  rep.reconstruction_residual = (f - full).l1_norm() / norm;

  parallel_for(trials + 1, [&](std::size_t i) {
    const SignPattern eps = i == 0 ? plus.negated() : SignPattern::random(0, N, seed, i - 1);
    rep.ratios[i + 1] = apply_bank(f, f_hat, bank.multiplier(eps)).l1_norm() / norm;
  });
  rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  return rep;
}

std::array<FrequencyProfile, 4> split_K_profiles(const SignPattern& eps, int M, int N) {
  if (M < 0 || N < 0 || !eps.covers(-M, N)) throw PreconditionError("split_K_profiles: signs must cover -M..N");
  std::array<std::vector<std::pair<Rational, FrequencyProfile>>, 4> terms;
  for (int n = -M; n <= N; ++n) {
    const Dyadic half = Dyadic::pow2(n - 1);
    const int slot = n < 0 ? 0 : 1;
    terms[slot].emplace_back(eps[n], triangle_profile(Dyadic::pow2(n), half));
    terms[slot + 2].emplace_back(eps[n], triangle_profile(Dyadic(3, n - 1), half, Rational(1, 2)));
  }
  std::array<FrequencyProfile, 4> out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = profile_combine(terms[i]);
  return out;
}

std::array<GridSignal, 4> split_K(const SignPattern& eps, int M, int N, const GridSpec& grid,
                                  KernelSampling sampling) {
  if (M < 0 || N < 0 || !eps.covers(-M, N)) throw PreconditionError("split_K: signs must cover -M..N");
  grid.validate();
  std::array<GridSignal, 4> out;
  if (sampling == KernelSampling::spectral) {
    require_nyquist(grid, N, "split_K");
    if (M > 0) require_resolution(grid, M, "split_K");
    const auto profiles = split_K_profiles(eps, M, N);
    for (std::size_t i = 0; i < 4; ++i) out[i] = sample_profile_kernel(profiles[i], grid);
    return out;
  }
  for (auto& k : out) k = GridSignal(grid);
  for (int n = -M; n <= N; ++n) {
    const double half = std::ldexp(1.0, n - 1);
    const double e = eps[n];
    const std::size_t slot = n < 0 ? 0 : 1;
    for (std::size_t j = 0; j < grid.length; ++j) {
      const double x = grid.x(j);
      out[slot][j] += modulated_fejer_time(2.0 * half, half, e, x);
      out[slot + 2][j] += modulated_fejer_time(3.0 * half, half, 0.5 * e, x);
    }
  }
  return out;
}

GridSignal two_sided_kernel(const SignPattern& eps, int M, int N, const GridSpec& grid, KernelSampling sampling) {
  if (M < 0 || N < 0 || !eps.covers(-M, N)) throw PreconditionError("two_sided_kernel: signs must cover -M..N");
  grid.validate();
  if (sampling == KernelSampling::spectral) {
    require_nyquist(grid, N, "two_sided_kernel");
    require_resolution(grid, M, "two_sided_kernel");
    return sample_profile_kernel(two_sided_profile(eps, M, N), grid);
  }
  GridSignal out(grid);
  for (int n = -M; n <= N; ++n) {
    const double e = eps[n];
    for (std::size_t j = 0; j < grid.length; ++j) out[j] += e * mn_time(n, grid.x(j));
  }
  return out;
}

GridSpec admitting_grid(int M, int N) {
  if (M < 0 || N < 0) throw PreconditionError("admitting_grid: M and N must be nonnegative");
  if (M + N > 24) throw PreconditionError("admitting_grid: block range too wide for an in-memory grid");
  const double dx = std::ldexp(std::numbers::pi, -(N + 2));
  return GridSpec::centered_length(dx, std::size_t{1} << (M + N + 5));
}

double hormander_integral(const GridSignal& K, double y) {
  const auto& grid = K.grid();
  const double dx = grid.spacing;
  if (!(y >= dx * (1.0 - 1e-9)) || !(4.0 * y < grid.window())) {
    throw PreconditionError("hormander_integral: need dx <= y and 4y < window");
  }
  const auto shift = static_cast<std::size_t>(std::llround(y / dx));
  const double yq = static_cast<double>(shift) * dx;
  double acc = 0.0;
  for (std::size_t j = 0; j < K.size(); ++j) {
    if (std::abs(grid.x(j)) <= 2.0 * yq) continue;
    const cplx shifted = j >= shift ? K[j - shift] : cplx{};
    acc += std::abs(shifted - K[j]);
  }
  return acc * dx;
}

HormanderScan hormander_scan(const GridSignal& K) {
  HormanderScan out;
  const double dx = K.grid().spacing;
  for (double y = dx; 4.0 * y < K.grid().window(); y *= 2.0) {
    const double v = hormander_integral(K, y);
    out.values.emplace_back(y, v);
    out.b_emp = std::max(out.b_emp, v);
  }
  return out;
}

}  // namespace lpt
