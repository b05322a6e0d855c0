#pragma once

#include <cstdint>
#include <functional>

#include "lptrans/grid.hpp"
#include "lptrans/profile.hpp"

namespace lpt {

/// Fejér kernel (a/2 pi) (sin(ax/2)/(ax/2))^2, the inverse transform of
/// (1 - |s|/a)^+ under f(x) = (1/2 pi) int f^(s) exp(isx) ds.
double fejer_time(double a, double x);

/// weight * exp(i center x) k_a(x): inverse transform of a triangle of height
/// `weight` centred at `center` with half-width a.
cplx modulated_fejer_time(double center, double a, double weight, double x);

/// m_n(x) = exp(i 2^n x) k_{2^(n-1)}(x) + 1/2 exp(i 3 2^(n-1) x) k_{2^(n-1)}(x).
cplx mn_time(int n, double x);

/// Time samples obtained from the profile's values at the grid bins (the
/// periodization of the kernel over the window). Throws NyquistError when
/// the support reaches the Nyquist frequency.
GridSignal sample_profile_kernel(const FrequencyProfile& p, const GridSpec& grid);

/// Pointwise samples f(x_j).
GridSignal sample_function(const GridSpec& grid, const std::function<cplx(double)>& f);

/// Random H^1 test function: f^ is a raised-cosine envelope on
/// (band_lo, band_hi) times a sum of `packets` random modulations
/// exp(-i s x_k), so f is a superposition of wave packets centred in the
/// middle half of the window. No bin with s <= 0 carries energy; the result
/// is normalized to ||f||_1 = 1. Throws NyquistError / PreconditionError on
/// a band outside (0, nyquist) or narrower than two bins.
GridSignal make_h1_test(std::uint64_t seed, double band_lo, double band_hi, const GridSpec& grid,
                        int packets = 4);

}  // namespace lpt
