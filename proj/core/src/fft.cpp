#include "besovlab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

#include "besovlab/errors.hpp"

namespace besovlab {

namespace detail {

void* fft_allocate(std::size_t bytes) {
  void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
  if (p == nullptr) throw std::bad_alloc();
  return p;
}

void fft_release(void* p) noexcept { fftw_free(p); }

}  // namespace detail

namespace {

// FFTW's planner is not thread-safe; execution through the new-array
// interface is. Plans are created once per size under a lock and reused.
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, plans] : plans_) {
      fftw_destroy_plan(plans.r2c);
      fftw_destroy_plan(plans.c2r);
    }
  }

  const PlanPair& get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    RealBuffer real(n);
    ComplexBuffer half(n / 2 + 1);
    auto* cplx = reinterpret_cast<fftw_complex*>(half.data());
    PlanPair plans;
    plans.r2c = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(), cplx, FFTW_ESTIMATE);
    plans.c2r = fftw_plan_dft_c2r_1d(static_cast<int>(n), cplx, real.data(), FFTW_ESTIMATE);
    if (plans.r2c == nullptr || plans.c2r == nullptr) {
      throw ConfigurationError("FFTW failed to plan a transform of size " + std::to_string(n));
    }
    return plans_.emplace(n, plans).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

bool aligned(const void* p) { return fftw_alignment_of(static_cast<double*>(const_cast<void*>(p))) == 0; }

}  // namespace

void forward_dft(std::span<const double> in, std::span<std::complex<double>> out) {
  const std::size_t n = in.size();
  if (out.size() != n / 2 + 1) throw InvalidArgument("forward_dft: output must hold N/2+1 coefficients");
  const PlanPair& plans = plan_cache().get(n);
  if (aligned(in.data()) && aligned(out.data())) {
    // Out-of-place r2c preserves its input.
    fftw_execute_dft_r2c(plans.r2c, const_cast<double*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
    return;
  }
  RealBuffer tmp_in(in.begin(), in.end());
  ComplexBuffer tmp_out(out.size());
  fftw_execute_dft_r2c(plans.r2c, tmp_in.data(), reinterpret_cast<fftw_complex*>(tmp_out.data()));
  std::copy(tmp_out.begin(), tmp_out.end(), out.begin());
}

void inverse_dft(std::span<const std::complex<double>> in, std::span<double> out) {
  const std::size_t n = out.size();
  if (in.size() != n / 2 + 1) throw InvalidArgument("inverse_dft: input must hold N/2+1 coefficients");
  const PlanPair& plans = plan_cache().get(n);
  // c2r overwrites its input, so always work on a copy.
  ComplexBuffer scratch(in.begin(), in.end());
  const double scale = 1.0 / static_cast<double>(n);
  if (aligned(out.data())) {
    fftw_execute_dft_c2r(plans.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
    for (double& v : out) v *= scale;
    return;
  }
  RealBuffer tmp(n);
  fftw_execute_dft_c2r(plans.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), tmp.data());
  for (std::size_t i = 0; i < n; ++i) out[i] = tmp[i] * scale;
}

}  // namespace besovlab
