#pragma once

#include <cstddef>
#include <numbers>

namespace besovlab {

/// Uniform periodic grid on [-L, L) standing in for the real line.
///
/// Sample points are x_i = -L + i*dx, and the discrete frequencies are
/// xi_k = k*pi/L for k in {-N/2, ..., N/2-1}. Real fields only need the
/// non-negative half k = 0..N/2, which is what spectra store.
class Grid {
 public:
  /// Throws InvalidArgument unless L > 0 and N is even with N >= 16.
  Grid(double half_length, std::size_t points);

  double half_length() const noexcept { return half_length_; }
  std::size_t size() const noexcept { return points_; }
  double spacing() const noexcept { return spacing_; }
  std::size_t spectral_size() const noexcept { return points_ / 2 + 1; }

  double x(std::size_t i) const noexcept { return -half_length_ + static_cast<double>(i) * spacing_; }
  double frequency(double k) const noexcept { return k * std::numbers::pi / half_length_; }
  /// Largest resolved |xi|, i.e. the Nyquist frequency N*pi/(2L).
  double nyquist() const noexcept { return frequency(static_cast<double>(points_ / 2)); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double half_length_;
  std::size_t points_;
  double spacing_;
};

Grid make_grid(double half_length, long long points);

/// Throws InvalidArgument when two operands live on different grids.
void require_same_grid(const Grid& a, const Grid& b, const char* context);

}  // namespace besovlab
