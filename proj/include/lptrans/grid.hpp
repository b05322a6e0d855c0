#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace lpt {

using cplx = std::complex<double>;

/// Uniform sampling x_j = origin + j * spacing, j = 0..length-1.
///
/// Frequency bins follow the DFT layout: bin k carries s_k = 2 pi k'/(L dx)
/// with k' the signed index (k' = k - L for k >= ceil(L/2)).
struct GridSpec {
  double origin = 0.0;
  double spacing = 1.0;
  std::size_t length = 0;

  /// Symmetric window [-half_width, half_width) at the given spacing.
  static GridSpec centered(double spacing, double half_width);
  /// Window [-length*spacing/2, length*spacing/2) with an explicit length.
  static GridSpec centered_length(double spacing, std::size_t length);

  double x(std::size_t j) const { return origin + static_cast<double>(j) * spacing; }
  double window() const { return spacing * static_cast<double>(length); }
  double nyquist() const;
  double resolution() const;
  std::ptrdiff_t signed_bin(std::size_t k) const;
  double frequency(std::size_t k) const;

  void validate() const;
  bool compatible(const GridSpec& o) const;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Sampled complex function on a window of the line.
class GridSignal {
 public:
  GridSignal() = default;
  explicit GridSignal(GridSpec grid);
  GridSignal(GridSpec grid, std::vector<cplx> samples);

  const GridSpec& grid() const { return grid_; }
  std::span<const cplx> samples() const { return samples_; }
  std::span<cplx> samples() { return samples_; }
  std::size_t size() const { return samples_.size(); }
  cplx operator[](std::size_t j) const { return samples_[j]; }
  cplx& operator[](std::size_t j) { return samples_[j]; }

  /// dx * sum |f_j|
  double l1_norm() const;
  double l2_norm() const;
  double sup_norm() const;
  double max_imag() const;

  GridSignal& operator+=(const GridSignal& o);
  GridSignal& operator-=(const GridSignal& o);
  GridSignal& operator*=(cplx s);
  friend GridSignal operator+(GridSignal a, const GridSignal& b) { return a += b; }
  friend GridSignal operator-(GridSignal a, const GridSignal& b) { return a -= b; }
  friend GridSignal operator*(cplx s, GridSignal a) { return a *= s; }

 private:
  GridSpec grid_;
  std::vector<cplx> samples_;
};

/// Riemann approximation of f^(s_k) = int f(x) exp(-i s_k x) dx at every bin.
std::vector<cplx> spectrum(const GridSignal& f);

/// Inverse of `spectrum`.
GridSignal from_spectrum(const GridSpec& grid, std::vector<cplx> values);

/// Multiplies the bin spectrum by m(s_k): the exact action of a Fourier
/// multiplier on the trigonometric polynomial the samples represent.
GridSignal apply_multiplier(const GridSignal& f, const std::function<cplx(double)>& m);
GridSignal apply_multiplier(const GridSignal& f, std::span<const cplx> bin_multiplier);

/// Zeroes every bin whose frequency is outside `keep`.
GridSignal spectral_projection(const GridSignal& f, const std::function<bool(double)>& keep);

/// Linear convolution dx * sum_i f_i g_{j-i} computed with zero-padded FFTs.
///
/// The result lives on origin f.origin + g.origin with length Lf + Lg - 1.
/// Throws GridMismatchError for unequal spacings, WindowOverflowError if the
/// result exceeds `max_length`.
GridSignal convolve_grid(const GridSignal& f, const GridSignal& g,
                         std::optional<std::size_t> max_length = std::nullopt);

/// Direct O(Lf * Lg) convolution; reference path for tests and small inputs.
GridSignal convolve_grid_direct(const GridSignal& f, const GridSignal& g);

/// Rows "x,re,im".
void write_signal_csv(std::ostream& os, const GridSignal& f);

}  // namespace lpt
