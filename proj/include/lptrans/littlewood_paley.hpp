#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "lptrans/grid.hpp"
#include "lptrans/profile.hpp"

namespace lpt {

/// Signs eps_n in {-1, +1} for n = first..last.
class SignPattern {
 public:
  SignPattern() = default;
  /// Throws std::invalid_argument if any entry is not +-1.
  SignPattern(int first, std::vector<int> signs);

  static SignPattern constant(int first, int last, int sign);
  /// i.i.d. uniform signs; the stream is fully determined by (seed, stream).
  static SignPattern random(int first, int last, std::uint64_t seed, std::uint64_t stream);

  int first() const { return first_; }
  int last() const { return first_ + static_cast<int>(signs_.size()) - 1; }
  bool covers(int lo, int hi) const { return !signs_.empty() && first_ <= lo && hi <= last(); }
  int operator[](int n) const { return signs_.at(static_cast<std::size_t>(n - first_)); }
  SignPattern negated() const;

 private:
  int first_ = 0;
  std::vector<int> signs_;
};

/// h^ + sum_{n=0}^N eps_n m_n^ (exact).
FrequencyProfile lp_profile(const SignPattern& eps, int N);
/// sum_{n=-M}^N eps_n m_n^ (exact).
FrequencyProfile two_sided_profile(const SignPattern& eps, int M, int N);

/// h*f + sum_{n=0}^N eps_n m_n*f, computed by multiplying the bin spectrum.
/// Throws NyquistError if 2^(N+1) >= pi/dx.
GridSignal lp_partial_sum(const GridSignal& f, const SignPattern& eps, int N);

/// sum_{n=-M}^N eps_n m_n*f. Throws ResolutionError if 2^(-M-1) is not above
/// the bin spacing, NyquistError as above.
GridSignal two_sided_partial(const GridSignal& f, const SignPattern& eps, int M, int N);

struct VdpResidual {
  double residual = 0.0;              ///< ||V_{2^N}*f - (h*f + sum m_n*f)||_1
  double negative_energy = 0.0;       ///< fraction of spectral energy in s <= -1/2
  bool precondition_met = true;       ///< f^ vanishes on [-nyquist, -1/2]
};

/// Checks V_{2^N}*f = h*f + sum_{n=0}^N m_n*f. When f^ has energy on
/// s <= -1/2 the identity need not hold; the residual is still reported but
/// `precondition_met` is false.
VdpResidual reconstruct_vdp_identity(const GridSignal& f, int N);

struct DecompositionReport {
  int N = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double max_ratio = 0.0;
  /// ||f - (h*f + sum_{n<=N} m_n*f)||_1 / ||f||_1
  double reconstruction_residual = 0.0;
  /// Ratios in evaluation order: all +1, all -1, then the random trials.
  std::vector<double> ratios;
};

/// max over sign patterns of ||h*f + sum eps_n m_n*f||_1 / ||f||_1.
/// Deterministic in `seed`. Throws PreconditionError for f = 0 or trials = 0.
DecompositionReport unconditional_ratio(const GridSignal& f, int N, std::size_t trials, std::uint64_t seed);

enum class KernelSampling {
  spectral,   ///< inverse transform of the exact profile; needs an admitting grid
  pointwise,  ///< closed-form values K(x_j); valid on any grid
};

/// Profiles of the four partial kernels
///   K1 = sum_{n<0} eps_n e^{i2^n x} k_{2^(n-1)},   K2 = same over n >= 0,
///   K3 = 1/2 sum_{n<0} eps_n e^{i3 2^(n-1) x} k_{2^(n-1)},   K4 = same over n >= 0.
std::array<FrequencyProfile, 4> split_K_profiles(const SignPattern& eps, int M, int N);

std::array<GridSignal, 4> split_K(const SignPattern& eps, int M, int N, const GridSpec& grid,
                                  KernelSampling sampling = KernelSampling::spectral);

/// sum_{n=-M}^N eps_n m_n sampled on the grid.
GridSignal two_sided_kernel(const SignPattern& eps, int M, int N, const GridSpec& grid,
                            KernelSampling sampling = KernelSampling::spectral);

/// Grid with Nyquist frequency 2^(N+2) and bin spacing 2^(-M-2), so every
/// block -M..N samples without aliasing. Length 2^(M+N+5).
GridSpec admitting_grid(int M, int N);

/// dx * sum_{|x_j| > 2y} |K(x_j - y) - K(x_j)| with y rounded to a whole
/// number of samples; samples outside the window count as zero.
/// Throws PreconditionError unless dx <= y and 4y < window.
double hormander_integral(const GridSignal& K, double y);

struct HormanderScan {
  std::vector<std::pair<double, double>> values;  ///< (y, integral)
  double b_emp = 0.0;
};

/// Scans y = dx * 2^j for j = 0, 1, ... while 4y < window.
HormanderScan hormander_scan(const GridSignal& K);

}  // namespace lpt
