#include "besovlab/cutoffs.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "besovlab/errors.hpp"

namespace besovlab {

namespace cutoff {

namespace {
double bump_tail(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = bump_tail(t);
  const double b = bump_tail(1.0 - t);
  return a / (a + b);
}

double envelope_hat(double xi) { return smooth_step(2.0 - 4.0 * std::abs(xi)); }

double low_pass(double xi) { return smooth_step((kLowPassSupport - std::abs(xi)) / (7.0 / 12.0)); }

double annulus(double xi) { return low_pass(0.5 * xi) - low_pass(xi); }

}  // namespace cutoff

void BesovIndex::require_theorem_regime() const {
  if (!(s > 1.0)) throw InvalidArgument("regularity s must exceed 1 (got s=" + std::to_string(s) + ")");
  if (!(p >= 1.0 && std::isfinite(p))) {
    throw InvalidArgument("integrability p must satisfy 1 <= p < inf (got p=" + std::to_string(p) + ")");
  }
  if (!(r >= 1.0 && std::isfinite(r))) {
    throw InvalidArgument("summability r must satisfy 1 <= r < inf (got r=" + std::to_string(r) + ")");
  }
}

CutoffSystem::CutoffSystem(Grid grid, Multiplier low_pass, std::vector<Multiplier> annuli, Multiplier envelope_hat)
    : grid_(grid), low_pass_(std::move(low_pass)), annuli_(std::move(annuli)), envelope_hat_(std::move(envelope_hat)) {}

CutoffSystem build_cutoffs(const Grid& grid) {
  const double span = static_cast<double>(grid.size()) * std::numbers::pi / grid.half_length();
  if (span < cutoff::kAnnulusOuter) {
    throw ConfigurationError("grid too coarse for the j=0 annulus: N*pi/L = " + std::to_string(span) +
                             " < 8/3");
  }
  const int j_max = static_cast<int>(std::ceil(std::log2(span / cutoff::kAnnulusInner)));

  Multiplier chi = Multiplier::band(grid, 0.0, cutoff::kLowPassSupport, cutoff::low_pass);
  std::vector<Multiplier> annuli;
  annuli.reserve(static_cast<std::size_t>(j_max) + 1);
  for (int j = 0; j <= j_max; ++j) {
    const double scale = std::ldexp(1.0, j);
    annuli.push_back(Multiplier::band(grid, cutoff::kAnnulusInner * scale, cutoff::kAnnulusOuter * scale,
                                      [scale](double xi) { return cutoff::annulus(xi / scale); }));
  }
  Multiplier envelope = Multiplier::band(grid, 0.0, cutoff::kEnvelopeSupport, cutoff::envelope_hat);
  return CutoffSystem(grid, std::move(chi), std::move(annuli), std::move(envelope));
}

}  // namespace besovlab
