#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "besovlab/fft.hpp"
#include "besovlab/field.hpp"
#include "besovlab/grid.hpp"

namespace besovlab {

/// Half spectrum (k = 0..N/2) of a real field, unnormalized DFT convention.
class Spectrum {
 public:
  Spectrum(Grid grid, ComplexBuffer coeffs);
  explicit Spectrum(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const std::complex<double>> coefficients() const noexcept { return coeffs_; }
  std::span<std::complex<double>> coefficients() noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

 private:
  Grid grid_;
  ComplexBuffer coeffs_;
};

Spectrum to_spectrum(const Field& f);
Field to_field(const Spectrum& s);

/// Fourier multiplier m(xi_k) on a grid. Only k >= 0 is stored; negative
/// frequencies are implied by Hermitian symmetry m(-xi) = conj(m(xi)), which
/// keeps real fields real. Gains are held for the contiguous band
/// [first, first + gains.size()) and are zero outside it, so narrow dyadic
/// cutoffs cost memory proportional to their support.
class Multiplier {
 public:
  Multiplier(Grid grid, std::size_t first, std::vector<std::complex<double>> gains);

  /// Dense multiplier sampling `symbol` at every xi_k, k = 0..N/2.
  static Multiplier from_symbol(const Grid& grid, const std::function<std::complex<double>(double)>& symbol);
  /// Real multiplier restricted to xi_min <= xi_k <= xi_max (zero elsewhere).
  static Multiplier band(const Grid& grid, double xi_min, double xi_max,
                         const std::function<double(double)>& symbol);

  static Multiplier identity(const Grid& grid);
  /// i*xi, with the unpaired Nyquist mode set to zero.
  static Multiplier derivative(const Grid& grid);
  /// 1/(i*xi) on k != 0 and 0 on the mean mode.
  static Multiplier antiderivative(const Grid& grid);
  /// 1/(1 + xi^2), the symbol of (1 - d^2/dx^2)^{-1}.
  static Multiplier helmholtz_inverse(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t first() const noexcept { return first_; }
  std::size_t last() const noexcept { return first_ + gains_.size(); }
  std::span<const std::complex<double>> gains() const noexcept { return gains_; }
  std::complex<double> gain(std::size_t k) const noexcept {
    return (k >= first_ && k < last()) ? gains_[k - first_] : std::complex<double>{};
  }

 private:
  Grid grid_;
  std::size_t first_;
  std::vector<std::complex<double>> gains_;
};

Spectrum apply(const Spectrum& s, const Multiplier& m);
/// In-place multiply, zeroing every mode outside the multiplier band.
void apply_in_place(std::span<std::complex<double>> coeffs, const Multiplier& m);

Field apply_multiplier(const Field& f, const Multiplier& m);
Field derivative(const Field& f);

/// Largest retained index k for a keep fraction: modes with k > keep * N/2 are removed.
std::size_t dealias_cutoff(std::size_t points, double keep_fraction);
Field dealias(const Field& f, double keep_fraction);
void dealias_in_place(std::span<std::complex<double>> coeffs, std::size_t points, double keep_fraction);

/// Discrete L2 norm, (dx * sum |f_i|^2)^{1/2}, evaluated from a half spectrum by Parseval.
double parseval_l2_norm(std::span<const std::complex<double>> coeffs, const Grid& grid);

/// Fraction of spectral energy carried by modes with k > N/3.
double top_third_energy_fraction(const Spectrum& s);

}  // namespace besovlab
