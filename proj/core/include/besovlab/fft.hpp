#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <span>
#include <vector>

namespace besovlab {

namespace detail {
void* fft_allocate(std::size_t bytes);
void fft_release(void* p) noexcept;
}  // namespace detail

/// std::allocator replacement returning SIMD-aligned storage from FFTW.
template <class T>
struct FftAllocator {
  using value_type = T;
  FftAllocator() = default;
  template <class U>
  FftAllocator(const FftAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) { return static_cast<T*>(detail::fft_allocate(n * sizeof(T))); }
  void deallocate(T* p, std::size_t) noexcept { detail::fft_release(p); }
  template <class U>
  bool operator==(const FftAllocator<U>&) const noexcept { return true; }
};

using RealBuffer = std::vector<double, FftAllocator<double>>;
using ComplexBuffer = std::vector<std::complex<double>, FftAllocator<std::complex<double>>>;

/// Unnormalized real-to-half-complex DFT: out[k] = sum_i in[i] exp(-2 pi i k i / N), k = 0..N/2.
void forward_dft(std::span<const double> in, std::span<std::complex<double>> out);

/// Inverse of forward_dft including the 1/N factor. `in` is left untouched.
void inverse_dft(std::span<const std::complex<double>> in, std::span<double> out);

}  // namespace besovlab
