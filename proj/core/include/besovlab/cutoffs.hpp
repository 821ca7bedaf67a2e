#pragma once

#include <optional>
#include <vector>

#include "besovlab/grid.hpp"
#include "besovlab/spectral.hpp"

namespace besovlab {

/// The fixed smooth cutoff recipe. With psi(t) = exp(-1/t) for t > 0 (else 0)
/// and h(t) = psi(t) / (psi(t) + psi(1 - t)):
///
///   envelope_hat(xi) = h(2 - 4|xi|)              1 on |xi| <= 1/4, 0 on |xi| >= 1/2
///   low_pass(xi)     = h((4/3 - |xi|) / (7/12))  1 on |xi| <= 3/4, 0 on |xi| >= 4/3
///   annulus(xi)      = low_pass(xi/2) - low_pass(xi)
///
/// annulus is supported in 3/4 <= |xi| <= 8/3 and equals 1 on 4/3 <= |xi| <= 3/2.
namespace cutoff {

double smooth_step(double t);
double envelope_hat(double xi);
double low_pass(double xi);
double annulus(double xi);

inline constexpr double kLowPassSupport = 4.0 / 3.0;
inline constexpr double kAnnulusInner = 3.0 / 4.0;
inline constexpr double kAnnulusOuter = 8.0 / 3.0;
inline constexpr double kPlateauInner = 4.0 / 3.0;
inline constexpr double kPlateauOuter = 3.0 / 2.0;
inline constexpr double kEnvelopeFlat = 0.25;
inline constexpr double kEnvelopeSupport = 0.5;

}  // namespace cutoff

/// Regularity/integrability triple (s, p, r) with an optional auxiliary sigma.
/// p or r may be +infinity at the type level; the Besov evaluator refuses r = infinity.
struct BesovIndex {
  double s = 1.2;
  double p = 2.0;
  double r = 2.0;
  std::optional<double> sigma;

  /// s > 1, 1 <= p < inf, 1 <= r < inf. Throws InvalidArgument naming the violated bound.
  void require_theorem_regime() const;
};

/// Tabulated chi, phi(2^-j .) for j = 0..max_block(), and envelope_hat on one grid.
class CutoffSystem {
 public:
  const Grid& grid() const noexcept { return grid_; }
  int max_block() const noexcept { return static_cast<int>(annuli_.size()) - 1; }

  const Multiplier& low_pass() const noexcept { return low_pass_; }
  const Multiplier& annulus(int j) const { return annuli_.at(static_cast<std::size_t>(j)); }
  /// j = -1 gives chi; 0 <= j <= max_block() gives phi(2^-j .).
  const Multiplier& block(int j) const { return j < 0 ? low_pass_ : annulus(j); }
  const Multiplier& envelope_hat() const noexcept { return envelope_hat_; }

 private:
  friend CutoffSystem build_cutoffs(const Grid& grid);
  CutoffSystem(Grid grid, Multiplier low_pass, std::vector<Multiplier> annuli, Multiplier envelope_hat);

  Grid grid_;
  Multiplier low_pass_;
  std::vector<Multiplier> annuli_;
  Multiplier envelope_hat_;
};

/// Blocks run to j_max = ceil(log2(N*pi / (L*3/4))), past which every
/// annulus lies beyond Nyquist. Throws ConfigurationError if N*pi/L < 8/3.
CutoffSystem build_cutoffs(const Grid& grid);

}  // namespace besovlab
