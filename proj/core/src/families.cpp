#include "besovlab/families.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "besovlab/errors.hpp"
#include "besovlab/report_io.hpp"

namespace besovlab {

namespace {

constexpr double kContainmentTolerance = 1e-8;
constexpr double kEnvelopeTailTolerance = 1e-10;
constexpr std::size_t kMinEnvelopeModes = 32;
// phi decays like exp(-c sqrt|x|); on this domain the periodization error is below 1e-15 phi(0).
constexpr double kReferenceHalfLength = 3.0 * std::numbers::pi * 512.0;
constexpr std::size_t kReferencePoints = std::size_t{1} << 14;

double band_energy_fraction_outside(const Field& f, double xi_lo, double xi_hi) {
  const Spectrum s = to_spectrum(f);
  const auto c = s.coefficients();
  const Grid& g = f.grid();
  const std::size_t half = g.size() / 2;
  double total = 0.0;
  double outside = 0.0;
  for (std::size_t k = 0; k <= half; ++k) {
    const double w = (k == 0 || k == half) ? 1.0 : 2.0;
    const double e = w * std::norm(c[k]);
    const double xi = g.frequency(static_cast<double>(k));
    total += e;
    if (xi < xi_lo || xi > xi_hi) outside += e;
  }
  return total > 0.0 ? outside / total : 0.0;
}

}  // namespace

FamilyParams FamilyParams::for_kind(EquationKind kind, int n, double s, double p) {
  FamilyParams f;
  f.n = n;
  f.s = s;
  f.p = p;
  f.kind = kind;
  f.delta = kind == EquationKind::CamassaHolm ? p / 2.0 : p / 3.0;
  return f;
}

double FamilyParams::carrier() const { return kCarrierRatio * std::ldexp(1.0, n); }
double FamilyParams::width() const { return std::exp2(delta * n); }

double FamilyParams::high_amplitude() const {
  const double shift = kind == EquationKind::CamassaHolm ? 0.5 : 1.0 / 3.0;
  return std::exp2(-n * (s + shift));
}

double FamilyParams::low_amplitude() const {
  return kind == EquationKind::CamassaHolm ? std::exp2(-n) : std::exp2(-0.5 * n);
}

void FamilyParams::validate() const {
  if (n < 3) throw InvalidArgument("family: n must be at least 3, got " + std::to_string(n));
  if (!(p >= 1.0 && std::isfinite(p))) throw InvalidArgument("family: p must lie in [1, inf)");
  if (!(delta > 0.0 && std::isfinite(delta))) throw InvalidArgument("family: delta must be positive");
  if (!std::isfinite(s)) throw InvalidArgument("family: s must be finite");
}

Field dilated_envelope(const Grid& grid, double width) {
  ComplexBuffer coeffs(grid.spectral_size());
  const double scale = static_cast<double>(grid.size()) / (2.0 * grid.half_length()) * width;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double g = cutoff::envelope_hat(width * grid.frequency(static_cast<double>(k)));
    if (g == 0.0) break;
    coeffs[k] = (k % 2 == 0 ? scale : -scale) * g;
  }
  return to_field(Spectrum(grid, std::move(coeffs)));
}

Field synthesize_envelope(const Grid& grid, const CutoffSystem& cs) {
  require_same_grid(grid, cs.grid(), "synthesize_envelope");
  const double spacing = grid.frequency(1.0);
  const auto modes = static_cast<std::size_t>(std::ceil(cutoff::kEnvelopeSupport / spacing));
  if (modes < kMinEnvelopeModes || grid.nyquist() < cutoff::kEnvelopeSupport) {
    throw ConfigurationError("envelope: fewer than " + std::to_string(kMinEnvelopeModes) +
                             " frequencies inside |xi| < 1/2 (increase L)");
  }
  Field phi = dilated_envelope(grid, 1.0);
  const double peak = phi[grid.size() / 2];
  if (std::abs(phi[0]) > kEnvelopeTailTolerance * peak) {
    throw ConfigurationError("envelope: |phi(+-L)| exceeds 1e-10 phi(0) (increase L)");
  }
  return phi;
}

double envelope_half_width(double tol) {
  if (!(tol >= 1e-13 && tol < 1.0)) throw InvalidArgument("envelope tail tolerance must lie in [1e-13, 1)");
  const Grid grid(kReferenceHalfLength, kReferencePoints);
  const Field phi = dilated_envelope(grid, 1.0);
  const std::size_t centre = grid.size() / 2;
  const double threshold = tol * phi[centre];
  for (std::size_t i = grid.size() - 1; i > centre; --i) {
    if (std::abs(phi[i]) > threshold) return grid.x(i + 1 < grid.size() ? i + 1 : i);
  }
  return grid.spacing();
}

Grid recommend_grid(const FamilyParams& params, double tail_tol, std::size_t max_points) {
  params.validate();
  if (!(tail_tol > 0.0 && tail_tol <= 1e-6)) throw InvalidArgument("recommend_grid: tail tolerance must lie in (0, 1e-6]");
  const double period = 3.0 * std::numbers::pi;
  const double half_width = params.width() * envelope_half_width(std::max(tail_tol, 1e-13));
  const double half_length = period * std::ceil(half_width / period);
  const double factor = nonlinearity_degree(params.kind) + 1;
  const double min_points = 2.0 * factor * params.carrier() * half_length / std::numbers::pi;
  if (!(min_points < 0x1p62)) {
    throw ResourceError("recommend_grid: grid for n = " + std::to_string(params.n) + " is beyond any cap", params.n);
  }
  const std::size_t points = std::bit_ceil(std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(min_points))));
  if (points > max_points) {
    throw ResourceError("recommend_grid: n = " + std::to_string(params.n) + " needs N = " + std::to_string(points) +
                            " points, above the cap " + std::to_string(max_points),
                        params.n);
  }
  return Grid(half_length, points);
}

double high_leakage(const Field& high, const FamilyParams& params) {
  const double scale = std::ldexp(1.0, params.n);
  return band_energy_fraction_outside(high, 33.0 / 24.0 * scale, 35.0 / 24.0 * scale);
}

double low_leakage(const Field& low, const FamilyParams& params) {
  return band_energy_fraction_outside(low, 0.0, std::exp2(-1.0 - params.delta * params.n));
}

Field carrier_wave(const FamilyParams& params, const Grid& grid, bool cosine) {
  // With k_c L / pi = m an integer, k_c x_i = -m pi + 2 pi (m i mod N) / N exactly.
  const double kc = params.carrier();
  const double m = kc * grid.half_length() / std::numbers::pi;
  const bool aligned = std::abs(m - std::round(m)) <= 1e-9 * m && m < 0x1p52;
  const std::size_t n = grid.size();
  RealBuffer wave(n);
  if (!aligned) {
    for (std::size_t i = 0; i < n; ++i) wave[i] = cosine ? std::cos(kc * grid.x(i)) : std::sin(kc * grid.x(i));
    return Field(grid, std::move(wave));
  }
  const auto mi = static_cast<unsigned long long>(std::llround(m));
  const double sign = (mi % 2 == 0) ? 1.0 : -1.0;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  const unsigned long long m_mod = mi % n;  // n <= 2^32 keeps m_mod * i inside 64 bits
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned long long r = (m_mod * i) % n;
    const double phase = step * static_cast<double>(r);
    wave[i] = sign * (cosine ? std::cos(phase) : std::sin(phase));
  }
  return Field(grid, std::move(wave));
}

FamilyPair make_family(const FamilyParams& params, const Grid& grid, const CutoffSystem& cs) {
  params.validate();
  require_same_grid(grid, cs.grid(), "make_family");
  const Field envelope = dilated_envelope(grid, params.width());

  const Field carrier = carrier_wave(params, grid);
  const std::size_t n = grid.size();
  RealBuffer high(n);
  RealBuffer low(n);
  const double amp_high = params.high_amplitude();
  const double amp_low = params.low_amplitude();
  for (std::size_t i = 0; i < n; ++i) {
    high[i] = amp_high * envelope[i] * carrier[i];
    low[i] = amp_low * envelope[i];
  }
  FamilyPair pair{Field(grid, std::move(high)), Field(grid, std::move(low))};
  const double lh = high_leakage(pair.high, params);
  const double ll = low_leakage(pair.low, params);
  if (lh > kContainmentTolerance || ll > kContainmentTolerance) {
    throw ConfigurationError("make_family: spectral containment fails at n = " + std::to_string(params.n) +
                             " (high leakage " + format_double(lh) + ", low leakage " + format_double(ll) +
                             ", tolerance 1e-8)");
  }
  return pair;
}

void export_field(const Field& f, const FamilyParams& params, const std::filesystem::path& stem) {
  const Grid& g = f.grid();
  {
    std::ofstream csv(stem.string() + ".csv");
    CsvWriter w(csv, "besovlab.field.v1", {"x", "value"});
    for (std::size_t i = 0; i < f.size(); ++i) w.row({g.x(i), f[i]});
  }
  {
    std::ofstream bin(stem.string() + ".f64", std::ios::binary);
    write_f64_le(bin, f.values());
  }
  nlohmann::ordered_json side;
  side["n"] = params.n;
  side["s"] = params.s;
  side["p"] = params.p;
  side["delta"] = params.delta;
  side["kind"] = std::string(to_string(params.kind));
  side["L"] = g.half_length();
  side["N"] = g.size();
  side["dtype"] = "float64-le";
  std::ofstream js(stem.string() + ".json");
  js << side.dump(2) << '\n';
}

}  // namespace besovlab
