#pragma once

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <new>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "si_euler/core/error.hpp"

namespace si_euler::fft {

using complex = std::complex<double>;

namespace detail {

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : data(fftw_alloc_real(n)) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~RealBuffer() { fftw_free(data); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* data;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* data;
};

// FFTW planning is not thread-safe, execution with new-array functions is.
// Plans are created once per (size, direction) on SIMD-aligned buffers and
// live for the process; FFTW_ESTIMATE keeps the chosen algorithm, and hence
// the bits of every result, independent of timing.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan r2c(std::size_t n) { return get(n, true); }
  fftw_plan c2r(std::size_t n) { return get(n, false); }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, bool forward) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(n, forward);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    RealBuffer real(n);
    ComplexBuffer spec(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE;
    const int ni = static_cast<int>(n);
    fftw_plan plan = forward ? fftw_plan_dft_r2c_1d(ni, real.data, spec.data, flags)
                             : fftw_plan_dft_c2r_1d(ni, spec.data, real.data, flags);
    if (plan == nullptr) throw NumericalError("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  std::mutex mutex_;
  std::map<std::pair<std::size_t, bool>, fftw_plan> plans_;
};

}  // namespace detail

/// Forward real transform normalized by 1/n: returns a_j, j = 0..n/2, with
/// x_k = Σ_j a_j e^{2πi jk/n} over the full conjugate-symmetric spectrum.
inline std::vector<complex> forward(const std::vector<double>& x) {
  const std::size_t n = x.size();
  const std::size_t h = n / 2 + 1;
  fftw_plan plan = detail::PlanCache::instance().r2c(n);
  detail::RealBuffer in(n);
  detail::ComplexBuffer spec(h);
  std::copy(x.begin(), x.end(), in.data);
  fftw_execute_dft_r2c(plan, in.data, spec.data);
  const double scale = 1.0 / static_cast<double>(n);
  std::vector<complex> out(h);
  for (std::size_t j = 0; j < h; ++j) out[j] = complex(spec.data[j][0], spec.data[j][1]) * scale;
  return out;
}

/// Inverse of forward() onto a grid of n points; the half spectrum may be
/// shorter than n/2 + 1 (zero padding) but not longer.
inline std::vector<double> inverse(const std::vector<complex>& half, std::size_t n) {
  if (half.size() > n / 2 + 1) {
    throw NumericalError("inverse FFT: spectrum longer than the target grid");
  }
  const std::size_t h = n / 2 + 1;
  fftw_plan plan = detail::PlanCache::instance().c2r(n);
  detail::ComplexBuffer spec(h);
  detail::RealBuffer re(n);
  for (std::size_t j = 0; j < h; ++j) {
    const complex v = j < half.size() ? half[j] : complex(0.0, 0.0);
    spec.data[j][0] = v.real();
    spec.data[j][1] = v.imag();
  }
  fftw_execute_dft_c2r(plan, spec.data, re.data);
  return std::vector<double>(re.data, re.data + n);
}

}  // namespace si_euler::fft
