#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <cstring>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>

namespace mfdf::detail {

// The FFTW planner is not re-entrant; plan execution is.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// Complex-to-complex FFT of one size with its own aligned buffers.
/// Plans use FFTW_ESTIMATE so the chosen algorithm, and therefore every bit
/// of the output, does not depend on timing.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    in_ = fftw_alloc_complex(n);
    out_ = fftw_alloc_complex(n);
    std::lock_guard lock(planner_mutex());
    const int size = static_cast<int>(n);
    forward_ = fftw_plan_dft_1d(size, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(size, in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(in_);
    fftw_free(out_);
  }

  std::size_t size() const noexcept { return n_; }

  /// out_k = sum_j in_j exp(-2 pi i jk/n)
  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    run(forward_, in, out);
  }
  /// out_j = sum_k in_k exp(+2 pi i jk/n)
  void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    run(backward_, in, out);
  }

 private:
  void run(fftw_plan plan, std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    std::memcpy(in_, in.data(), n_ * sizeof(fftw_complex));
    fftw_execute(plan);
    std::memcpy(static_cast<void*>(out.data()), out_, n_ * sizeof(fftw_complex));
  }

  std::size_t n_;
  fftw_complex* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

/// Per-thread plan cache, keyed by size.
inline FftPlan& plan_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::unique_ptr<FftPlan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

}  // namespace mfdf::detail
