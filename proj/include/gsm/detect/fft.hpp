#pragma once

// Thin FFTW wrapper. Plans are created once per (size, direction) under a
// mutex and executed through the thread-safe new-array interface.

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "gsm/error.hpp"

namespace gsm::fft {

namespace detail {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find({n, sign});
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> in(n), out(n);
    fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw numerical_error("FFTW planning failed");
    plans_.emplace(std::make_pair(n, sign), plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

inline PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

inline void execute(std::vector<std::complex<double>>& data, int sign) {
  const int n = static_cast<int>(data.size());
  fftw_plan plan = plan_cache().get(n, sign);
  std::vector<std::complex<double>> out(data.size());
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data.data()), reinterpret_cast<fftw_complex*>(out.data()));
  data.swap(out);
}

}  // namespace detail

/// In-place forward DFT, X(k) = sum_n x(n) exp(-2 pi i k n / P).
inline void forward(std::vector<std::complex<double>>& data) { detail::execute(data, FFTW_FORWARD); }

/// In-place inverse DFT including the 1/P factor.
inline void inverse(std::vector<std::complex<double>>& data) {
  detail::execute(data, FFTW_BACKWARD);
  const double s = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= s;
}

}  // namespace gsm::fft
