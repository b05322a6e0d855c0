#include "lptrans/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "lptrans/errors.hpp"
#include "lptrans/fft.hpp"

namespace lpt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!a.compatible(b)) throw GridMismatchError("grid signals live on different grids");
}

}  // namespace

GridSpec GridSpec::centered(double spacing, double half_width) {
  const auto n = static_cast<std::size_t>(std::llround(2.0 * half_width / spacing));
  GridSpec g{-half_width, spacing, n};
  g.validate();
  return g;
}

GridSpec GridSpec::centered_length(double spacing, std::size_t length) {
  GridSpec g{-0.5 * spacing * static_cast<double>(length), spacing, length};
  g.validate();
  return g;
}

double GridSpec::nyquist() const { return std::numbers::pi / spacing; }

double GridSpec::resolution() const { return kTwoPi / window(); }

std::ptrdiff_t GridSpec::signed_bin(std::size_t k) const {
  const auto kk = static_cast<std::ptrdiff_t>(k);
  const auto n = static_cast<std::ptrdiff_t>(length);
  return kk < (n + 1) / 2 ? kk : kk - n;
}

double GridSpec::frequency(std::size_t k) const {
  return static_cast<double>(signed_bin(k)) * resolution();
}

void GridSpec::validate() const {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw PreconditionError("grid spacing must be positive");
  if (length == 0) throw PreconditionError("grid length must be positive");
  if (!std::isfinite(origin)) throw PreconditionError("grid origin must be finite");
}

bool GridSpec::compatible(const GridSpec& o) const {
  const double tol = 1e-12 * std::max(std::abs(spacing), std::abs(o.spacing));
  return length == o.length && std::abs(spacing - o.spacing) <= tol &&
         std::abs(origin - o.origin) <= 1e-9 * spacing;
}

GridSignal::GridSignal(GridSpec grid) : grid_(grid), samples_(grid.length) { grid_.validate(); }

GridSignal::GridSignal(GridSpec grid, std::vector<cplx> samples) : grid_(grid), samples_(std::move(samples)) {
  grid_.validate();
  if (samples_.size() != grid_.length) throw PreconditionError("GridSignal: sample count != grid length");
}

double GridSignal::l1_norm() const {
  double s = 0.0;
  for (const auto& v : samples_) s += std::abs(v);
  return s * grid_.spacing;
}

double GridSignal::l2_norm() const {
  double s = 0.0;
  for (const auto& v : samples_) s += std::norm(v);
  return std::sqrt(s * grid_.spacing);
}

double GridSignal::sup_norm() const {
  double s = 0.0;
  for (const auto& v : samples_) s = std::max(s, std::abs(v));
  return s;
}

double GridSignal::max_imag() const {
  double s = 0.0;
  for (const auto& v : samples_) s = std::max(s, std::abs(v.imag()));
  return s;
}

GridSignal& GridSignal::operator+=(const GridSignal& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] += o.samples_[j];
  return *this;
}

GridSignal& GridSignal::operator-=(const GridSignal& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] -= o.samples_[j];
  return *this;
}

GridSignal& GridSignal::operator*=(cplx s) {
  for (auto& v : samples_) v *= s;
  return *this;
}

std::vector<cplx> spectrum(const GridSignal& f) {
  const auto& g = f.grid();
  std::vector<cplx> out(f.samples().begin(), f.samples().end());
  fft::forward(out);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] *= g.spacing * std::polar(1.0, -g.frequency(k) * g.origin);
  }
  return out;
}

GridSignal from_spectrum(const GridSpec& grid, std::vector<cplx> values) {
  grid.validate();
  if (values.size() != grid.length) throw PreconditionError("from_spectrum: size != grid length");
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] *= std::polar(1.0, grid.frequency(k) * grid.origin);
  }
  fft::backward(values);
  const double scale = 1.0 / grid.window();
  for (auto& v : values) v *= scale;
  return GridSignal(grid, std::move(values));
}

GridSignal apply_multiplier(const GridSignal& f, std::span<const cplx> bin_multiplier) {
  if (bin_multiplier.size() != f.size()) throw PreconditionError("apply_multiplier: size mismatch");
  std::vector<cplx> data(f.samples().begin(), f.samples().end());
  fft::forward(data);
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= bin_multiplier[k];
  fft::backward(data);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
  return GridSignal(f.grid(), std::move(data));
}

GridSignal apply_multiplier(const GridSignal& f, const std::function<cplx(double)>& m) {
  std::vector<cplx> mult(f.size());
  for (std::size_t k = 0; k < mult.size(); ++k) mult[k] = m(f.grid().frequency(k));
  return apply_multiplier(f, mult);
}

GridSignal spectral_projection(const GridSignal& f, const std::function<bool(double)>& keep) {
  std::vector<cplx> mult(f.size());
  for (std::size_t k = 0; k < mult.size(); ++k) mult[k] = keep(f.grid().frequency(k)) ? 1.0 : 0.0;
  return apply_multiplier(f, mult);
}

GridSignal convolve_grid(const GridSignal& f, const GridSignal& g, std::optional<std::size_t> max_length) {
  const auto& gf = f.grid();
  const auto& gg = g.grid();
  if (std::abs(gf.spacing - gg.spacing) > 1e-12 * gf.spacing) {
    throw GridMismatchError("convolve_grid: spacings differ");
  }
  const std::size_t out_len = f.size() + g.size() - 1;
  if (max_length && out_len > *max_length) {
    throw WindowOverflowError("convolve_grid: result length " + std::to_string(out_len) +
                              " exceeds window " + std::to_string(*max_length));
  }
  const std::size_t padded = fft::next_pow2(std::max(out_len, 2 * std::max(f.size(), g.size())));
  std::vector<cplx> a(padded), b(padded);
  std::copy(f.samples().begin(), f.samples().end(), a.begin());
  std::copy(g.samples().begin(), g.samples().end(), b.begin());
  fft::forward(a);
  fft::forward(b);
  for (std::size_t k = 0; k < padded; ++k) a[k] *= b[k];
  fft::backward(a);
  const double scale = gf.spacing / static_cast<double>(padded);
  std::vector<cplx> out(out_len);
  for (std::size_t j = 0; j < out_len; ++j) out[j] = a[j] * scale;
  return GridSignal(GridSpec{gf.origin + gg.origin, gf.spacing, out_len}, std::move(out));
}

GridSignal convolve_grid_direct(const GridSignal& f, const GridSignal& g) {
  const auto& gf = f.grid();
  if (std::abs(gf.spacing - g.grid().spacing) > 1e-12 * gf.spacing) {
    throw GridMismatchError("convolve_grid_direct: spacings differ");
  }
  const std::size_t out_len = f.size() + g.size() - 1;
  std::vector<cplx> out(out_len);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) out[i + j] += f[i] * g[j];
  }
  for (auto& v : out) v *= gf.spacing;
  return GridSignal(GridSpec{gf.origin + g.grid().origin, gf.spacing, out_len}, std::move(out));
}

void write_signal_csv(std::ostream& os, const GridSignal& f) {
  const auto old_precision = os.precision(17);
  os << "x,re,im\n";
  for (std::size_t j = 0; j < f.size(); ++j) {
    os << f.grid().x(j) << ',' << f[j].real() << ',' << f[j].imag() << '\n';
  }
  os.precision(old_precision);
}

}  // namespace lpt
