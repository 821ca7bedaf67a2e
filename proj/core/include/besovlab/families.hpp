#pragma once

#include <cstddef>
#include <filesystem>
#include <utility>

#include "besovlab/cutoffs.hpp"
#include "besovlab/field.hpp"
#include "besovlab/nonlocal.hpp"

namespace besovlab {

inline constexpr double kCarrierRatio = 17.0 / 12.0;
inline constexpr std::size_t kDefaultGridCap = std::size_t{1} << 22;
inline constexpr std::size_t kLargeGridCap = std::size_t{1} << 24;

/// Parameters of the high/low frequency data pair.
///   CH:      high = 2^{-n(s+1/2)} phi(2^{-delta n} x) sin(17/12 2^n x),  low = 2^{-n}   phi(2^{-delta n} x), delta = p/2
///   Novikov: high = 2^{-n(s+1/3)} phi(2^{-delta n} x) sin(17/12 2^n x),  low = 2^{-n/2} phi(2^{-delta n} x), delta = p/3
struct FamilyParams {
  int n = 3;
  double s = 1.2;
  double p = 2.0;
  double delta = 1.0;
  EquationKind kind = EquationKind::CamassaHolm;

  static FamilyParams for_kind(EquationKind kind, int n, double s, double p);

  double carrier() const;
  /// Envelope dilation 2^{delta n}.
  double width() const;
  double high_amplitude() const;
  double low_amplitude() const;
  /// n >= 3, p in [1, inf), delta > 0.
  void validate() const;
};

/// phi sampled on a grid, synthesized from the fixed transform envelope_hat.
/// Requires at least 32 modes with 0 <= xi_k < 1/2 and |phi(-L)| <= 1e-10 phi(0);
/// throws ConfigurationError otherwise.
Field synthesize_envelope(const Grid& grid, const CutoffSystem& cs);

/// phi(x / width) on the grid, built from its transform width * envelope_hat(width * xi).
/// No domain checks; the result is the periodization of the dilated envelope.
Field dilated_envelope(const Grid& grid, double width);

/// Smallest x with |phi(y)| <= tol * phi(0) for all y >= x, measured from a
/// high-accuracy synthesis of phi. Valid for 1e-13 <= tol < 1.
double envelope_half_width(double tol);

/// Smallest power-of-two grid whose half length clears the dilated envelope
/// tail and whose Nyquist exceeds (degree + 1) times the carrier. L is a
/// multiple of 3 pi so the carrier falls on a grid frequency.
/// Throws ResourceError (carrying n) when N would exceed max_points.
Grid recommend_grid(const FamilyParams& params, double tail_tol, std::size_t max_points = kDefaultGridCap);

/// sin(17/12 2^n x) (or cos), phase-exact when the carrier is a grid frequency.
Field carrier_wave(const FamilyParams& params, const Grid& grid, bool cosine = false);

struct FamilyPair {
  Field high;
  Field low;
};

/// Builds (high, low) and checks their spectral containment to 1e-8 relative
/// energy; throws ConfigurationError on failure.
FamilyPair make_family(const FamilyParams& params, const Grid& grid, const CutoffSystem& cs);

/// Fraction of spectral energy of `high` outside 33/24 2^n <= |xi| <= 35/24 2^n.
double high_leakage(const Field& high, const FamilyParams& params);
/// Fraction of spectral energy of `low` outside |xi| <= 2^{-1-delta n}.
double low_leakage(const Field& low, const FamilyParams& params);

/// Writes <stem>.csv (x,value), <stem>.f64 (raw little-endian doubles) and
/// <stem>.json (n, s, p, delta, L, N).
void export_field(const Field& f, const FamilyParams& params, const std::filesystem::path& stem);

}  // namespace besovlab
