#include "besovlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "besovlab/errors.hpp"

namespace besovlab {

namespace {

void require_exponent(double p, const char* what) {
  if (!(p >= 1.0)) throw InvalidArgument(std::string(what) + " exponent must be >= 1, got " + std::to_string(p));
}

double lebesgue_norm_of(std::span<const double> values, double dx, double p) {
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  if (std::isinf(p) || peak == 0.0) return peak;
  double sum = 0.0;
  if (p == 2.0) {
    for (double v : values) sum += (v / peak) * (v / peak);
    return peak * std::sqrt(sum * dx);
  }
  for (double v : values) sum += std::pow(std::abs(v) / peak, p);
  return peak * std::pow(sum * dx, 1.0 / p);
}

// Parseval over the band of a multiplier: only modes where the gain is nonzero contribute.
double banded_l2_norm(std::span<const std::complex<double>> coeffs, const Multiplier& m, const Grid& grid) {
  const std::size_t n = grid.size();
  const auto gains = m.gains();
  double sum = 0.0;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    const std::size_t k = m.first() + i;
    const double w = (k == 0 || k == n / 2) ? 1.0 : 2.0;
    sum += w * std::norm(gains[i] * coeffs[k]);
  }
  return std::sqrt(grid.spacing() * sum / static_cast<double>(n));
}

}  // namespace

double lebesgue_norm(const Field& f, double p) {
  require_exponent(p, "Lebesgue");
  return lebesgue_norm_of(f.values(), f.grid().spacing(), p);
}

Field lp_block(const Field& f, int j, const CutoffSystem& cs) {
  require_same_grid(f.grid(), cs.grid(), "lp_block");
  if (j <= -2 || j > cs.max_block()) return Field::zeros(f.grid());
  return apply_multiplier(f, cs.block(j));
}

std::vector<double> block_norms(const Spectrum& spectrum, double p, const CutoffSystem& cs) {
  require_same_grid(spectrum.grid(), cs.grid(), "block_norms");
  require_exponent(p, "Besov integrability");
  const Grid& grid = cs.grid();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(cs.max_block()) + 2);
  Spectrum scratch(grid);
  RealBuffer values(grid.size());
  for (int j = -1; j <= cs.max_block(); ++j) {
    const Multiplier& m = cs.block(j);
    if (m.gains().empty()) {
      out.push_back(0.0);
    } else if (p == 2.0) {
      out.push_back(banded_l2_norm(spectrum.coefficients(), m, grid));
    } else {
      const auto src = spectrum.coefficients();
      auto dst = scratch.coefficients();
      std::copy(src.begin(), src.end(), dst.begin());
      apply_in_place(dst, m);
      inverse_dft(dst, values);
      out.push_back(lebesgue_norm_of(values, grid.spacing(), p));
    }
  }
  return out;
}

std::vector<double> block_norms(const Field& f, double p, const CutoffSystem& cs) {
  require_same_grid(f.grid(), cs.grid(), "block_norms");
  return block_norms(to_spectrum(f), p, cs);
}

double besov_from_blocks(std::span<const double> blocks, double s, double r) {
  if (std::isinf(r)) throw UnsupportedConfiguration("r=inf out of scope: Besov norms are supported for 1 <= r < inf");
  require_exponent(r, "Besov summability");
  // Accumulate relative to the largest weighted block to avoid overflow for large s.
  std::vector<double> weighted(blocks.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const int j = static_cast<int>(i) - 1;
    weighted[i] = std::exp2(s * j) * blocks[i];
    peak = std::max(peak, weighted[i]);
  }
  if (peak == 0.0) return 0.0;
  double sum = 0.0;
  for (double w : weighted) sum += std::pow(w / peak, r);
  return peak * std::pow(sum, 1.0 / r);
}

double besov_norm(const Field& f, const BesovIndex& idx, const CutoffSystem& cs) {
  if (std::isinf(idx.r)) {
    throw UnsupportedConfiguration("r=inf out of scope: Besov norms are supported for 1 <= r < inf");
  }
  return besov_from_blocks(block_norms(f, idx.p, cs), idx.s, idx.r);
}

double lipschitz_norm(const Field& f) { return max_abs(f) + max_abs(derivative(f)); }

}  // namespace besovlab
