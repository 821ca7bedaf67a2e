#include "besovlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "besovlab/errors.hpp"

namespace besovlab {

Spectrum::Spectrum(Grid grid, ComplexBuffer coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.spectral_size()) {
    throw InvalidArgument("spectrum must hold N/2+1 = " + std::to_string(grid_.spectral_size()) + " coefficients");
  }
}

Spectrum::Spectrum(const Grid& grid) : grid_(grid), coeffs_(grid.spectral_size()) {}

Spectrum to_spectrum(const Field& f) {
  Spectrum s(f.grid());
  forward_dft(f.values(), s.coefficients());
  return s;
}

Field to_field(const Spectrum& s) {
  RealBuffer values(s.grid().size());
  inverse_dft(s.coefficients(), values);
  return Field(s.grid(), std::move(values));
}

Multiplier::Multiplier(Grid grid, std::size_t first, std::vector<std::complex<double>> gains)
    : grid_(grid), first_(first), gains_(std::move(gains)) {
  if (first_ + gains_.size() > grid_.spectral_size()) {
    throw InvalidArgument("multiplier band exceeds the N/2+1 resolved frequencies");
  }
}

Multiplier Multiplier::from_symbol(const Grid& grid,
                                   const std::function<std::complex<double>(double)>& symbol) {
  std::vector<std::complex<double>> gains(grid.spectral_size());
  for (std::size_t k = 0; k < gains.size(); ++k) gains[k] = symbol(grid.frequency(static_cast<double>(k)));
  return Multiplier(grid, 0, std::move(gains));
}

Multiplier Multiplier::band(const Grid& grid, double xi_min, double xi_max,
                            const std::function<double(double)>& symbol) {
  const double step = grid.frequency(1.0);
  const auto top = static_cast<double>(grid.spectral_size() - 1);
  const double lo = std::clamp(std::ceil(std::max(xi_min, 0.0) / step), 0.0, top + 1.0);
  const double hi = std::clamp(std::floor(xi_max / step), -1.0, top);
  if (hi < lo) return Multiplier(grid, 0, {});
  const auto first = static_cast<std::size_t>(lo);
  const auto count = static_cast<std::size_t>(hi - lo) + 1;
  std::vector<std::complex<double>> gains(count);
  for (std::size_t i = 0; i < count; ++i) gains[i] = symbol(grid.frequency(static_cast<double>(first + i)));
  return Multiplier(grid, first, std::move(gains));
}

Multiplier Multiplier::identity(const Grid& grid) {
  return Multiplier(grid, 0, std::vector<std::complex<double>>(grid.spectral_size(), 1.0));
}

Multiplier Multiplier::derivative(const Grid& grid) {
  auto m = from_symbol(grid, [](double xi) { return std::complex<double>(0.0, xi); });
  m.gains_.back() = 0.0;
  return m;
}

Multiplier Multiplier::antiderivative(const Grid& grid) {
  auto m = from_symbol(grid, [](double xi) { return xi == 0.0 ? 0.0 : 1.0 / std::complex<double>(0.0, xi); });
  m.gains_.back() = 0.0;
  return m;
}

Multiplier Multiplier::helmholtz_inverse(const Grid& grid) {
  return from_symbol(grid, [](double xi) { return std::complex<double>(1.0 / (1.0 + xi * xi), 0.0); });
}

void apply_in_place(std::span<std::complex<double>> coeffs, const Multiplier& m) {
  const std::size_t first = m.first();
  const std::size_t last = m.last();
  const auto gains = m.gains();
  for (std::size_t k = 0; k < first; ++k) coeffs[k] = 0.0;
  for (std::size_t k = first; k < last; ++k) coeffs[k] *= gains[k - first];
  for (std::size_t k = last; k < coeffs.size(); ++k) coeffs[k] = 0.0;
}

Spectrum apply(const Spectrum& s, const Multiplier& m) {
  require_same_grid(s.grid(), m.grid(), "apply multiplier");
  Spectrum out = s;
  apply_in_place(out.coefficients(), m);
  return out;
}

Field apply_multiplier(const Field& f, const Multiplier& m) {
  require_same_grid(f.grid(), m.grid(), "apply_multiplier");
  Spectrum s = to_spectrum(f);
  apply_in_place(s.coefficients(), m);
  return to_field(s);
}

Field derivative(const Field& f) { return apply_multiplier(f, Multiplier::derivative(f.grid())); }

std::size_t dealias_cutoff(std::size_t points, double keep_fraction) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw InvalidArgument("dealias keep fraction must lie in (0, 1], got " + std::to_string(keep_fraction));
  }
  // Exact for the 2/3 and 1/2 rules on power-of-two grids up to rounding of the product.
  const double limit = keep_fraction * static_cast<double>(points / 2);
  return static_cast<std::size_t>(std::floor(limit + 1e-9));
}

void dealias_in_place(std::span<std::complex<double>> coeffs, std::size_t points, double keep_fraction) {
  const std::size_t keep = dealias_cutoff(points, keep_fraction);
  for (std::size_t k = keep + 1; k < coeffs.size(); ++k) coeffs[k] = 0.0;
}

Field dealias(const Field& f, double keep_fraction) {
  dealias_cutoff(f.size(), keep_fraction);  // validates before paying for a transform
  Spectrum s = to_spectrum(f);
  dealias_in_place(s.coefficients(), f.size(), keep_fraction);
  return to_field(s);
}

double parseval_l2_norm(std::span<const std::complex<double>> coeffs, const Grid& grid) {
  const std::size_t n = grid.size();
  double sum = std::norm(coeffs[0]) + std::norm(coeffs[n / 2]);
  for (std::size_t k = 1; k < n / 2; ++k) sum += 2.0 * std::norm(coeffs[k]);
  // dx * (1/N) * sum_k |F_k|^2 over the full spectrum.
  return std::sqrt(grid.spacing() * sum / static_cast<double>(n));
}

double top_third_energy_fraction(const Spectrum& s) {
  const std::size_t n = s.grid().size();
  const auto c = s.coefficients();
  const std::size_t boundary = n / 3;
  double total = 0.0;
  double top = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double w = (k == 0 || k == n / 2) ? 1.0 : 2.0;
    const double e = w * std::norm(c[k]);
    total += e;
    if (k > boundary) top += e;
  }
  return total > 0.0 ? top / total : 0.0;
}

}  // namespace besovlab
