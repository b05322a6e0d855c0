#include "lptrans/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace lpt::fft {

namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, Direction dir) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(n, dir);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // Planning scratch: FFTW_ESTIMATE does not touch the arrays, but the
    // plan needs an in-place buffer to record the in-place layout.
    std::vector<std::complex<double>> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf,
                                      dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, Direction>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(std::span<std::complex<double>> data, Direction dir) {
  if (data.size() <= 1) return;
  fftw_plan plan = cache().get(data.size(), dir);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace lpt::fft
