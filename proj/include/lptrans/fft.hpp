#pragma once

#include <complex>
#include <span>

namespace lpt::fft {

enum class Direction { forward, backward };

/// Unnormalized in-place transform: forward uses exp(-2 pi i jk/n),
/// backward exp(+2 pi i jk/n). Plans are cached per (n, direction) and
/// execution is safe from multiple threads.
void transform(std::span<std::complex<double>> data, Direction dir);

inline void forward(std::span<std::complex<double>> data) { transform(data, Direction::forward); }
inline void backward(std::span<std::complex<double>> data) { transform(data, Direction::backward); }

std::size_t next_pow2(std::size_t n);

}  // namespace lpt::fft
