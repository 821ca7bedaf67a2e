#include "besovlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "besovlab/errors.hpp"
#include "besovlab/integrator.hpp"
#include "besovlab/norms.hpp"
#include "besovlab/regression.hpp"
#include "besovlab/report_io.hpp"

#ifndef BESOVLAB_DATA_DIR
#define BESOVLAB_DATA_DIR "data"
#endif
#ifndef BESOVLAB_INSTALL_DATA_DIR
#define BESOVLAB_INSTALL_DATA_DIR "share/besovlab"
#endif

namespace besovlab {

namespace {

constexpr double kBlockTolerance = 1e-8;
constexpr double kSlopeTolerance = 0.05;
constexpr double kStabilizationTolerance = 0.02;
constexpr double kLowNormRatio = 0.7578582832551990;  // 2^{-0.4}
constexpr double kRemainderSlope = 1.8;

ReportRow make_row(std::string check, std::string quantity, RowKey key, double measured) {
  ReportRow r;
  r.check = std::move(check);
  r.quantity = std::move(quantity);
  r.key = key;
  r.measured = measured;
  return r;
}

std::vector<double> as_doubles(const std::vector<int>& v) { return {v.begin(), v.end()}; }

double slope_or_nan(const std::vector<double>& x, const std::vector<double>& y) {
  try {
    return fit_log2_rate(x, y).slope;
  } catch (const InvalidArgument&) {
    return std::nan("");
  }
}

double loglog_or_nan(const std::vector<double>& x, const std::vector<double>& y) {
  try {
    return fit_loglog(x, y).slope;
  } catch (const InvalidArgument&) {
    return std::nan("");
  }
}

BesovIndex shifted(const BesovIndex& idx, double ds) {
  BesovIndex out = idx;
  out.s = idx.s + ds;
  return out;
}

void add_rate_rows(std::vector<ReportRow>& rows, std::map<std::string, double>& constants, const std::string& check,
                   const std::string& quantity, const std::vector<double>& ns, const std::vector<double>& values,
                   double predicted, double tolerance) {
  double constant = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    rows.push_back(info_row(check, quantity, at_n(static_cast<int>(ns[i])), values[i], std::exp2(predicted * ns[i])));
    constant = std::max(constant, values[i] / std::exp2(predicted * ns[i]));
  }
  constants["C_" + check] = constant;
  rows.push_back(within_row(check, quantity + "_slope", RowKey{}, slope_or_nan(ns, values), predicted, tolerance));
}

std::string kind_prefix(EquationKind kind) { return std::string(to_string(kind)); }

}  // namespace

std::string_view to_string(CheckRule rule) noexcept {
  switch (rule) {
    case CheckRule::Info: return "info";
    case CheckRule::Within: return "within";
    case CheckRule::AtMost: return "at_most";
    case CheckRule::AtLeast: return "at_least";
  }
  return "info";
}

ReportRow info_row(std::string check, std::string quantity, RowKey key, double measured,
                   double reference) {
  ReportRow r = make_row(std::move(check), std::move(quantity), key, measured);
  r.reference = reference;
  r.rule = CheckRule::Info;
  r.pass = true;
  return r;
}

ReportRow within_row(std::string check, std::string quantity, RowKey key, double measured,
                     double reference, double tolerance) {
  ReportRow r = make_row(std::move(check), std::move(quantity), key, measured);
  r.reference = reference;
  r.tolerance = tolerance;
  r.rule = CheckRule::Within;
  r.pass = std::abs(measured - reference) <= tolerance;
  return r;
}

ReportRow at_most_row(std::string check, std::string quantity, RowKey key, double measured,
                      double reference, double threshold) {
  ReportRow r = make_row(std::move(check), std::move(quantity), key, measured);
  r.reference = reference;
  r.threshold = threshold;
  r.rule = CheckRule::AtMost;
  r.pass = measured <= threshold;
  return r;
}

ReportRow at_least_row(std::string check, std::string quantity, RowKey key, double measured,
                       double reference, double threshold) {
  ReportRow r = make_row(std::move(check), std::move(quantity), key, measured);
  r.reference = reference;
  r.threshold = threshold;
  r.rule = CheckRule::AtLeast;
  r.pass = measured >= threshold;
  return r;
}

bool LemmaReport::passed() const {
  return complete && std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

std::vector<const ReportRow*> LemmaReport::find(std::string_view check) const {
  std::vector<const ReportRow*> out;
  for (const auto& r : rows) {
    if (r.check == check) out.push_back(&r);
  }
  return out;
}

bool GapReport::passed() const {
  return complete && std::all_of(checks.begin(), checks.end(), [](const ReportRow& r) { return r.pass; });
}

// ---------------------------------------------------------------------------
// Oracle constants

std::string index_key(const BesovIndex& idx) {
  return "s=" + format_double(idx.s) + ",p=" + format_double(idx.p) + ",r=" + format_double(idx.r);
}

std::optional<double> OracleConstants::oscillation(double p, EquationKind kind) const {
  const auto& table = kind == EquationKind::CamassaHolm ? oscillation_limit : cubic_oscillation_limit;
  const auto it = table.find(format_double(p));
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::optional<double> OracleConstants::separation_constant(EquationKind kind, const BesovIndex& idx) const {
  const auto it = separation.find(kind_prefix(kind) + ":" + index_key(idx));
  if (it == separation.end()) return std::nullopt;
  return it->second;
}

double OracleConstants::drift_law(EquationKind kind) const {
  return kind == EquationKind::CamassaHolm ? drift_law_ch : drift_law_novikov;
}

std::filesystem::path default_oracle_path() {
  if (const char* env = std::getenv("BESOVLAB_ORACLE_FILE"); env && *env) return env;
  const std::filesystem::path source = std::filesystem::path(BESOVLAB_DATA_DIR) / "oracle_constants.json";
  if (std::filesystem::exists(source)) return source;
  return std::filesystem::path(BESOVLAB_INSTALL_DATA_DIR) / "oracle_constants.json";
}

OracleConstants load_oracle_constants(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("oracle constants not found: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  OracleConstants c;
  c.source = path;
  c.sha256 = sha256_file(path);
  try {
    const auto table = [&j](const char* key) { return j.value(key, nlohmann::json::object()); };
    const auto oscillation = table("oscillation_limit");
    for (const auto& [k, v] : oscillation.items()) c.oscillation_limit[k] = v.get<double>();
    const auto cubic = table("cubic_oscillation_limit");
    for (const auto& [k, v] : cubic.items()) c.cubic_oscillation_limit[k] = v.get<double>();
    const auto separation = table("separation");
    for (const auto& [k, v] : separation.items()) c.separation[k] = v.get<double>();
    const auto apriori = j.value("apriori", nlohmann::json::object());
    c.apriori_c1 = apriori.value("c1", 0.0);
    c.apriori_c2 = apriori.value("c2", 0.0);
    const auto drift = j.value("drift_law", nlohmann::json::object());
    c.drift_law_ch = drift.value("ch", 0.0);
    c.drift_law_novikov = drift.value("novikov", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Configuration and scheduling

void ExperimentConfig::validate() const {
  idx.require_theorem_regime();
  if (n_list.empty()) throw InvalidArgument("experiment: n list is empty");
  for (int n : n_list) {
    if (n < 3) throw InvalidArgument("experiment: every n must be at least 3");
  }
  if (!std::is_sorted(n_list.begin(), n_list.end()) ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end()) {
    throw InvalidArgument("experiment: n list must be strictly increasing");
  }
  if (t_list.empty()) throw InvalidArgument("experiment: t list is empty");
  if (!std::is_sorted(t_list.begin(), t_list.end()) ||
      std::adjacent_find(t_list.begin(), t_list.end()) != t_list.end()) {
    throw InvalidArgument("experiment: t list must be strictly increasing");
  }
  if (t_list.front() < 0.0 || t_list.back() > 1.0 || t_list.back() <= 0.0) {
    throw InvalidArgument("experiment: times must lie in [0, 1] with a positive maximum");
  }
  if (!(tail_tol > 0.0 && tail_tol <= 1e-6)) throw InvalidArgument("experiment: tail tolerance must lie in (0, 1e-6]");
  if (refinement == 0 || !std::has_single_bit(refinement)) {
    throw InvalidArgument("experiment: refinement must be a power of two");
  }
  if (!(cfl > 0.0 && cfl <= 1.0)) throw InvalidArgument("experiment: cfl must lie in (0, 1]");
}

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BESOVLAB_THREADS"); env && *env) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), count));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Grid experiment_grid(const FamilyParams& params, const ExperimentConfig& cfg) {
  const Grid base = recommend_grid(params, cfg.tail_tol, cfg.grid_cap);
  if (cfg.refinement == 1) return base;
  if (base.size() * cfg.refinement > cfg.grid_cap) {
    throw ResourceError("refined grid for n = " + std::to_string(params.n) + " needs " +
                            std::to_string(base.size() * cfg.refinement) + " points, above the cap of " +
                            std::to_string(cfg.grid_cap),
                        params.n);
  }
  return Grid(base.half_length(), base.size() * cfg.refinement);
}

double besov_sup_norm(const Field& f, double s, double p, const CutoffSystem& cs) {
  const auto blocks = block_norms(f, p, cs);
  double sup = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    sup = std::max(sup, std::exp2(s * (static_cast<double>(i) - 1.0)) * blocks[i]);
  }
  return sup;
}

// ---------------------------------------------------------------------------
// Oscillation limit

double oscillatory_envelope_norm(int power, double lambda, double p) {
  if (power < 1) throw InvalidArgument("oscillatory norm: power must be positive");
  if (!(lambda > 0.0) || !(p >= 1.0)) throw InvalidArgument("oscillatory norm: need lambda > 0 and p >= 1");
  const double period = 3.0 * std::numbers::pi;
  const double half_length = period * std::ceil(envelope_half_width(1e-8) / period);
  // |phi^k cos|^2 is band-limited, so 4 samples per carrier period integrate it exactly;
  // other exponents produce kinks at the zeros of cos and need finer sampling.
  const double per_period = (p == 2.0) ? 4.0 : 32.0;
  const double wanted = per_period * lambda * half_length / std::numbers::pi;
  if (!(wanted <= 0x1p24)) {
    throw ResourceError("oscillatory norm: lambda = " + format_double(lambda) + " needs more than 2^24 points", 0);
  }
  const std::size_t points = std::bit_ceil(std::max<std::size_t>(1024, static_cast<std::size_t>(std::ceil(wanted))));
  const Grid grid(half_length, points);
  const Field phi = dilated_envelope(grid, 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double v = std::pow(phi[i], power) * std::cos(lambda * grid.x(i));
    sum += std::pow(std::abs(v), p);
  }
  return std::pow(sum * grid.spacing(), 1.0 / p);
}

LemmaReport run_oscillation_limit(double p, const std::vector<int>& n_list, const OracleConstants& oracle) {
  if (n_list.empty()) throw InvalidArgument("oscillation limit: n list is empty");
  if (!(p >= 1.0 && std::isfinite(p))) throw InvalidArgument("oscillation limit: p must lie in [1, inf)");
  LemmaReport report;
  report.lemma_id = "oscillation_limit";
  const std::optional<double> limit = oracle.oscillation(p, EquationKind::CamassaHolm);
  const double reference = limit.value_or(std::nan(""));

  std::vector<double> values(n_list.size());
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const double lambda = kCarrierRatio * std::exp2((1.0 + p / 2.0) * n_list[i]);
    values[i] = oscillatory_envelope_norm(2, lambda, p);
    report.rows.push_back(info_row("value", "norm_phi2_cos", at_n(n_list[i]), values[i], reference));
    report.rows.push_back(info_row("lambda", "frequency", at_n(n_list[i]), lambda));
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double change = std::abs(values[i] - values[i - 1]) / values[i - 1];
    report.rows.push_back(
        at_most_row("stabilization", "relative_change", at_n(n_list[i]), change, 0.0, kStabilizationTolerance));
  }
  for (std::size_t i = 2; i < values.size(); ++i) {
    if (n_list[i - 1] < 4) continue;
    const double prev = std::abs(values[i - 1] - values[i - 2]);
    const double curr = std::abs(values[i] - values[i - 1]);
    // Differences below the quadrature resolution count as zero; for integer p the
    // exact sequence is constant, so only quadrature noise remains.
    const double floor = (p == 2.0 ? 1e-12 : 1e-6) * values[i];
    report.rows.push_back(at_most_row("monotone", "abs_change", at_n(n_list[i]), curr, prev, prev + floor));
  }
  report.rows.push_back(
      at_least_row("limit", "final_value", at_n(n_list.back()), values.back(), reference, 0.5 * reference));
  if (limit) {
    report.rows.push_back(info_row("limit_deviation", "relative_deviation", at_n(n_list.back()),
                                   std::abs(values.back() - reference) / reference));
  } else {
    report.complete = false;
    report.failure = "no stored oscillation limit for p = " + format_double(p);
  }
  report.constants["M_hat"] = reference;
  return report;
}

// ---------------------------------------------------------------------------
// Family suite

namespace {

struct FamilyMeasure {
  GridInfo grid;
  double high_linf = 0.0;
  double high_dx_linf = 0.0;
  double high_besov_sigma = 0.0;
  double low_linf = 0.0;
  double low_dx_linf = 0.0;
  double low_besov_sigma = 0.0;
  double high_leakage = 0.0;
  double low_leakage = 0.0;
  double high_block_self = 0.0;
  double high_block_other = 0.0;
  double low_block = 0.0;
  double product_block_self = 0.0;
  double product_block_other = 0.0;
  double product_sup = 0.0;
  double correction = 0.0;
};

double relative_block_error(const Field& f, int j, const CutoffSystem& cs, double p) {
  const double norm = lebesgue_norm(f, p);
  if (norm == 0.0) return 0.0;
  return lebesgue_norm(lp_block(f, j, cs) - f, p) / norm;
}

double max_other_block(const std::vector<double>& blocks, int keep, double scale) {
  double m = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (static_cast<int>(i) - 1 != keep) m = std::max(m, blocks[i]);
  }
  return scale > 0.0 ? m / scale : 0.0;
}

FamilyMeasure measure_family(const ExperimentConfig& cfg, int n) {
  const BesovIndex& idx = cfg.idx;
  const FamilyParams params = FamilyParams::for_kind(cfg.kind, n, idx.s, idx.p);
  const Grid grid = experiment_grid(params, cfg);
  const CutoffSystem cs = build_cutoffs(grid);
  const FamilyPair pair = make_family(params, grid, cs);
  const double sigma = idx.sigma.value_or(idx.s + 1.0);
  const double p = idx.p;

  FamilyMeasure m;
  m.grid = {n, grid.half_length(), grid.size()};
  const Field high_dx = derivative(pair.high);
  m.high_linf = max_abs(pair.high);
  m.high_dx_linf = max_abs(high_dx);
  const auto high_blocks = block_norms(pair.high, p, cs);
  m.high_besov_sigma = besov_from_blocks(high_blocks, sigma, idx.r);
  m.low_linf = max_abs(pair.low);
  m.low_dx_linf = max_abs(derivative(pair.low));
  const auto low_blocks = block_norms(pair.low, p, cs);
  m.low_besov_sigma = besov_from_blocks(low_blocks, sigma, idx.r);
  m.high_leakage = high_leakage(pair.high, params);
  m.low_leakage = low_leakage(pair.low, params);

  m.high_block_self = relative_block_error(pair.high, n, cs, p);
  m.high_block_other = max_other_block(high_blocks, n, lebesgue_norm(pair.high, p));
  double low_max = 0.0;
  for (std::size_t i = 1; i < low_blocks.size(); ++i) low_max = std::max(low_max, low_blocks[i]);
  m.low_block = low_max / lebesgue_norm(pair.low, p);

  // g f_x for CH, g^2 f_x for Novikov.
  const int low_power = cfg.kind == EquationKind::CamassaHolm ? 1 : 2;
  Field weight = pair.low;
  if (low_power == 2) weight = pointwise_product(pair.low, pair.low);
  const Field product = pointwise_product(weight, high_dx);
  const auto product_blocks = block_norms(product, p, cs);
  m.product_block_self = relative_block_error(product, n, cs, p);
  m.product_block_other = max_other_block(product_blocks, n, lebesgue_norm(product, p));
  m.product_sup = 0.0;
  for (std::size_t i = 0; i < product_blocks.size(); ++i) {
    m.product_sup = std::max(m.product_sup, std::exp2(idx.s * (static_cast<double>(i) - 1.0)) * product_blocks[i]);
  }

  // Leading part: amplitude * carrier * envelope^{low_power + 1} * cos(k_c x); the rest is the correction.
  const Field envelope = dilated_envelope(grid, params.width());
  const Field cosine = carrier_wave(params, grid, true);
  const double lead_amp = std::pow(params.low_amplitude(), low_power) * params.high_amplitude() * params.carrier();
  RealBuffer correction(grid.size());
  const double scale = std::exp2(n * idx.s);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lead = lead_amp * std::pow(envelope[i], low_power + 1) * cosine[i];
    correction[i] = scale * (product[i] - lead);
  }
  m.correction = lebesgue_norm(Field(grid, std::move(correction)), p);
  return m;
}

}  // namespace

LemmaReport run_family_suite(const ExperimentConfig& cfg, const OracleConstants& oracle) {
  cfg.validate();
  const bool ch = cfg.kind == EquationKind::CamassaHolm;
  LemmaReport report;
  report.lemma_id = ch ? "family_ch" : "family_novikov";
  const double s = cfg.idx.s;
  const double p = cfg.idx.p;
  const double sigma = cfg.idx.sigma.value_or(s + 1.0);
  const double delta = ch ? p / 2.0 : p / 3.0;

  std::vector<FamilyMeasure> ms(cfg.n_list.size());
  try {
    parallel_for(cfg.n_list.size(), cfg.threads, [&](std::size_t i) { ms[i] = measure_family(cfg, cfg.n_list[i]); });
  } catch (const std::exception& e) {
    report.complete = false;
    report.failure = std::string("family suite: ") + e.what();
    return report;
  }
  const std::vector<double> ns = as_doubles(cfg.n_list);
  auto column = [&](double FamilyMeasure::*field) {
    std::vector<double> v;
    for (const auto& m : ms) v.push_back(m.*field);
    return v;
  };
  for (const auto& m : ms) report.grids.push_back(m.grid);

  auto& rows = report.rows;
  auto& k = report.constants;
  const double high_shift = ch ? 0.5 : 1.0 / 3.0;
  add_rate_rows(rows, k, "m1", "high_linf", ns, column(&FamilyMeasure::high_linf), -(s + high_shift), kSlopeTolerance);
  add_rate_rows(rows, k, "m2", "high_dx_linf", ns, column(&FamilyMeasure::high_dx_linf), -(s + high_shift - 1.0),
                kSlopeTolerance);
  add_rate_rows(rows, k, "m3", "high_besov_sigma", ns, column(&FamilyMeasure::high_besov_sigma), sigma - s,
                kSlopeTolerance);
  add_rate_rows(rows, k, "m4", "low_linf", ns, column(&FamilyMeasure::low_linf), -0.5, kSlopeTolerance);
  add_rate_rows(rows, k, "m5", "low_besov_sigma", ns, column(&FamilyMeasure::low_besov_sigma), ch ? -0.5 : -1.0 / 6.0,
                kSlopeTolerance);
  if (!ch) {
    // Only an upper bound is stated for the low-frequency derivative.
    const auto v = column(&FamilyMeasure::low_dx_linf);
    const double slope = slope_or_nan(ns, v);
    for (std::size_t i = 0; i < ns.size(); ++i) rows.push_back(info_row("m4_dx", "low_dx_linf", at_n(static_cast<int>(ns[i])), v[i]));
    rows.push_back(at_most_row("m4_dx", "low_dx_linf_slope", RowKey{}, slope, -0.5, -0.5 + kSlopeTolerance));
  }

  for (std::size_t i = 0; i < ms.size(); ++i) {
    const int n = cfg.n_list[i];
    const auto& m = ms[i];
    rows.push_back(at_most_row("z1", "high_out_of_annulus_energy", at_n(n), m.high_leakage, 0.0, kBlockTolerance));
    rows.push_back(at_most_row("z2", "low_out_of_band_energy", at_n(n), m.low_leakage, 0.0, kBlockTolerance));
    rows.push_back(at_most_row("block_high_self", "rel_lp_delta_n_minus_f", at_n(n), m.high_block_self, 0.0,
                               kBlockTolerance));
    rows.push_back(at_most_row("block_high_other", "rel_max_lp_delta_j_f", at_n(n), m.high_block_other, 0.0,
                               kBlockTolerance));
    rows.push_back(at_most_row("block_low", "rel_max_lp_delta_j_g", at_n(n), m.low_block, 0.0, kBlockTolerance));
    rows.push_back(at_most_row("block_product_self", "rel_lp_delta_n_product_minus_product", at_n(n),
                               m.product_block_self, 0.0, kBlockTolerance));
    rows.push_back(at_most_row("block_product_other", "rel_max_lp_delta_j_product", at_n(n), m.product_block_other, 0.0,
                               kBlockTolerance));
  }

  const std::optional<double> limit = oracle.oscillation(p, cfg.kind);
  const double target = kCarrierRatio * limit.value_or(std::nan(""));
  double min_sup = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    min_sup = std::min(min_sup, ms[i].product_sup);
    if (cfg.n_list[i] >= 5) {
      rows.push_back(within_row("m6", "product_besov_sup", at_n(static_cast<int>(ns[i])), ms[i].product_sup, target,
                                kOracleSlack * target));
    } else {
      rows.push_back(info_row("m6", "product_besov_sup", at_n(static_cast<int>(ns[i])), ms[i].product_sup, target));
    }
  }
  rows.push_back(at_least_row("m6_min", "min_product_besov_sup", RowKey{}, min_sup, target, 0.5 * target));
  if (!limit) {
    report.complete = false;
    report.failure = "no stored oscillation limit for p = " + format_double(p);
  }

  const auto corr = column(&FamilyMeasure::correction);
  for (std::size_t i = 0; i < ns.size(); ++i) rows.push_back(info_row("correction", "lp_correction", at_n(static_cast<int>(ns[i])), corr[i]));
  const double corr_rate = -(1.0 + delta);
  rows.push_back(within_row("correction", "lp_correction_slope", RowKey{}, slope_or_nan(ns, corr), corr_rate,
                            0.1 * std::abs(corr_rate)));
  return report;
}

// ---------------------------------------------------------------------------
// Approximation suite

namespace {

struct ApproxMeasure {
  GridInfo grid;
  std::vector<double> linf;
  std::vector<double> besov;
  std::vector<double> besov_up;
  std::vector<double> drift_ratio;
  double bound_scale = 0.0;
};

SolveConfig solve_config(const ExperimentConfig& cfg) {
  SolveConfig sc;
  sc.final_time = cfg.t_list.back();
  sc.step_mode = StepMode::Cfl;
  sc.cfl = cfg.cfl;
  sc.snapshot_times = cfg.t_list;
  return sc;
}

ApproxMeasure measure_approx(const ExperimentConfig& cfg, int n) {
  const BesovIndex& idx = cfg.idx;
  const FamilyParams params = FamilyParams::for_kind(cfg.kind, n, idx.s, idx.p);
  const Grid grid = experiment_grid(params, cfg);
  const CutoffSystem cs = build_cutoffs(grid);
  const FamilyPair pair = make_family(params, grid, cs);
  const SolveResult res = solve(cfg.kind, pair.high, solve_config(cfg), cs, idx);

  ApproxMeasure m;
  m.grid = {n, grid.half_length(), grid.size()};
  const double lip = lipschitz_norm(pair.high);
  const double lip_power = std::pow(lip, nonlinearity_degree(cfg.kind));
  for (double t : cfg.t_list) {
    const Field diff = res.at(t) - pair.high;
    m.linf.push_back(max_abs(diff));
    m.besov.push_back(besov_norm(diff, idx, cs));
    m.besov_up.push_back(besov_norm(diff, shifted(idx, 1.0), cs));
    m.drift_ratio.push_back(t > 0.0 ? max_abs(diff) / (t * lip_power) : 0.0);
  }
  const double b1 = besov_norm(pair.high, shifted(idx, 1.0), cs);
  const double linf = max_abs(pair.high);
  m.bound_scale = b1 * (lip * lip + linf) + lip;
  return m;
}

}  // namespace

LemmaReport run_approx_suite(const ExperimentConfig& cfg, const OracleConstants& oracle) {
  cfg.validate();
  const bool ch = cfg.kind == EquationKind::CamassaHolm;
  LemmaReport report;
  report.lemma_id = ch ? "approx_ch" : "approx_novikov";
  std::vector<ApproxMeasure> ms(cfg.n_list.size());
  try {
    parallel_for(cfg.n_list.size(), cfg.threads, [&](std::size_t i) { ms[i] = measure_approx(cfg, cfg.n_list[i]); });
  } catch (const std::exception& e) {
    report.complete = false;
    report.failure = std::string("approx suite: ") + e.what();
    return report;
  }
  for (const auto& m : ms) report.grids.push_back(m.grid);
  const double s = cfg.idx.s;
  const std::vector<double> ns = as_doubles(cfg.n_list);
  auto& rows = report.rows;

  std::vector<std::size_t> positive;
  for (std::size_t j = 0; j < cfg.t_list.size(); ++j) {
    if (cfg.t_list[j] > 0.0) positive.push_back(j);
  }
  const double c_drift = oracle.drift_law(cfg.kind);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& m = ms[i];
    for (std::size_t j = 0; j < cfg.t_list.size(); ++j) {
      const double t = cfg.t_list[j];
      rows.push_back(info_row("err_linf", "linf_S_t_minus_id", at_nt(cfg.n_list[i], t), m.linf[j]));
      rows.push_back(info_row("err_besov", "besov_S_t_minus_id", at_nt(cfg.n_list[i], t), m.besov[j], t * m.bound_scale));
      rows.push_back(info_row("err_besov_up", "besov_up_S_t_minus_id", at_nt(cfg.n_list[i], t), m.besov_up[j]));
    }
    double ratio = 0.0;
    for (double r : m.drift_ratio) ratio = std::max(ratio, r);
    rows.push_back(at_most_row("drift_law", "linf_drift_ratio", at_n(static_cast<int>(ns[i])), ratio, c_drift, (1.0 + kOracleSlack) * c_drift));

    std::vector<double> ts, es;
    for (std::size_t j : positive) {
      ts.push_back(cfg.t_list[j]);
      es.push_back(m.besov[j]);
    }
    if (ts.size() >= 2) {
      rows.push_back(within_row("linear_t", "loglog_slope_in_t", at_n(static_cast<int>(ns[i])), loglog_or_nan(ts, es), 1.0, 0.1));
    }
  }

  // Decay in n at the time closest to 0.05.
  std::size_t ref = positive.empty() ? 0 : positive.front();
  for (std::size_t j : positive) {
    if (std::abs(cfg.t_list[j] - 0.05) < std::abs(cfg.t_list[ref] - 0.05)) ref = j;
  }
  if (ms.size() >= 2) {
    std::vector<double> es;
    for (const auto& m : ms) es.push_back(m.besov[ref]);
    const double exponent = ch ? std::min(s - 0.5, 2.0 * (s - 1.0)) : 2.0 * s - 4.0 / 3.0;
    const double slope = slope_or_nan(ns, es);
    rows.push_back(at_most_row("decay_n", "log2_slope_in_n", at_t(cfg.t_list[ref]), slope, -exponent, -(exponent - 0.1)));
  }
  report.constants["drift_law_C"] = c_drift;
  return report;
}

// ---------------------------------------------------------------------------
// Gap experiment

namespace {

struct CrossTerm {
  std::string name;
  double rate;
};

struct GapMeasure {
  GridInfo grid;
  std::vector<GapCell> cells;
  std::vector<double> cross;
  double composite = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double energy_drift = 0.0;
  double drift_ratio = 0.0;
};

std::vector<CrossTerm> cross_terms(EquationKind kind, double s) {
  if (kind == EquationKind::CamassaHolm) {
    return {{"f_fx", -(s - 0.5)}, {"f_gx", -1.0}, {"g_gx", -1.0}};
  }
  return {{"f2_fx", -(2.0 * s - 1.0 / 3.0)},
          {"f_g_fx", -(s - 1.0 / 6.0)},
          {"f2_gx", -(s + 1.5)},
          {"f_g_gx", -5.0 / 3.0},
          {"g2_gx", -11.0 / 6.0}};
}

std::vector<Field> cross_fields(EquationKind kind, const FamilyPair& pair) {
  const Field fx = derivative(pair.high);
  const Field gx = derivative(pair.low);
  const Field& f = pair.high;
  const Field& g = pair.low;
  if (kind == EquationKind::CamassaHolm) {
    return {pointwise_product(f, fx), pointwise_product(f, gx), pointwise_product(g, gx)};
  }
  const Field ff = pointwise_product(f, f);
  const Field fg = pointwise_product(f, g);
  const Field gg = pointwise_product(g, g);
  return {pointwise_product(ff, fx), pointwise_product(fg, fx), pointwise_product(ff, gx), pointwise_product(fg, gx),
          pointwise_product(gg, gx)};
}

GapMeasure measure_gap(const ExperimentConfig& cfg, int n) {
  const BesovIndex& idx = cfg.idx;
  const FamilyParams params = FamilyParams::for_kind(cfg.kind, n, idx.s, idx.p);
  const Grid grid = experiment_grid(params, cfg);
  const CutoffSystem cs = build_cutoffs(grid);
  const FamilyPair pair = make_family(params, grid, cs);
  const Field u0 = pair.high + pair.low;
  const SolveConfig sc = solve_config(cfg);
  const SolveResult full = solve(cfg.kind, u0, sc, cs, idx);
  const SolveResult high_only = solve(cfg.kind, pair.high, sc, cs, idx);

  GapMeasure m;
  m.grid = {n, grid.half_length(), grid.size()};
  const Field v0 = drift(cfg.kind, u0);
  const Field full_rhs = rhs(cfg.kind, u0);
  const double drift_norm = besov_norm(v0, idx, cs);
  const double low_norm = besov_norm(pair.low, idx, cs);
  for (double t : cfg.t_list) {
    GapCell c;
    c.n = n;
    c.t = t;
    const Field& st_full = full.at(t);
    const Field& st_high = high_only.at(t);
    c.sep = besov_norm(st_full - st_high, idx, cs);
    c.drift_norm = drift_norm;
    c.low_norm = low_norm;
    c.fn_err = besov_norm(st_high - pair.high, idx, cs);
    c.w_norm = besov_norm(st_full - u0 - t * v0, idx, cs);
    c.w_source_corrected = besov_norm(st_full - u0 - t * full_rhs, idx, cs);
    c.sep_over_t = t > 0.0 ? c.sep / t : std::nan("");
    c.triangle_lower = t * c.drift_norm - c.low_norm - c.fn_err - c.w_norm;
    m.cells.push_back(c);
  }
  for (const Field& term : cross_fields(cfg.kind, pair)) m.cross.push_back(besov_norm(term, idx, cs));

  const double lip = lipschitz_norm(u0);
  const double linf = max_abs(u0);
  const double b1 = besov_norm(u0, shifted(idx, 1.0), cs);
  const double b2 = besov_norm(u0, shifted(idx, 2.0), cs);
  m.composite = b1 * lip * lip + linf * b2 * (lip * lip + linf);

  for (const SolveResult* r : {&full, &high_only}) {
    const AprioriMonitor mon = apriori_monitor(*r);
    m.c1 = std::max(m.c1, mon.c1);
    m.c2 = std::max(m.c2, mon.c2);
    m.energy_drift = std::max(m.energy_drift, mon.energy_drift);
  }
  m.drift_ratio = std::max(linf_drift_ratio(u0, full), linf_drift_ratio(pair.high, high_only));
  return m;
}

}  // namespace

GapReport run_gap(const ExperimentConfig& cfg, const OracleConstants& oracle) {
  cfg.validate();
  GapReport report;
  report.kind = cfg.kind;
  report.idx = cfg.idx;
  std::vector<std::optional<GapMeasure>> ms(cfg.n_list.size());
  std::vector<std::string> errors(cfg.n_list.size());
  parallel_for(cfg.n_list.size(), cfg.threads, [&](std::size_t i) {
    try {
      ms[i] = measure_gap(cfg, cfg.n_list[i]);
    } catch (const std::exception& e) {
      errors[i] = "n = " + std::to_string(cfg.n_list[i]) + ": " + e.what();
    }
  });
  std::vector<double> ns;
  std::vector<const GapMeasure*> done;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (!ms[i]) {
      report.complete = false;
      report.failure += (report.failure.empty() ? "" : "; ") + errors[i];
      continue;
    }
    ns.push_back(cfg.n_list[i]);
    done.push_back(&*ms[i]);
    report.grids.push_back(ms[i]->grid);
    report.composite[cfg.n_list[i]] = ms[i]->composite;
    for (const auto& c : ms[i]->cells) report.cells.push_back(c);
  }

  auto& checks = report.checks;
  const bool ch = cfg.kind == EquationKind::CamassaHolm;

  // (i) low-frequency data shrink with n.
  std::vector<double> lows;
  for (const auto* m : done) lows.push_back(m->cells.front().low_norm);
  for (std::size_t i = 1; i < lows.size(); ++i) {
    const double ratio = std::pow(lows[i] / lows[i - 1], 1.0 / (ns[i] - ns[i - 1]));
    checks.push_back(at_most_row("low_norm_ratio", "per_unit_n_ratio", at_n(static_cast<int>(ns[i])), ratio, ch ? std::sqrt(0.5) : std::exp2(-1.0 / 6.0),
                                 kLowNormRatio));
  }
  if (lows.size() >= 2) {
    checks.push_back(info_row("low_norm_rate", "log2_slope_in_n", RowKey{}, slope_or_nan(ns, lows),
                              ch ? -0.5 : -1.0 / 6.0));
  }

  // (ii) separation stays of order t.
  const std::optional<double> c0 = oracle.separation_constant(cfg.kind, cfg.idx);
  const double c0v = c0.value_or(std::nan(""));
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& c : report.cells) {
    if (c.t <= 0.0) continue;
    min_ratio = std::min(min_ratio, c.sep_over_t);
    checks.push_back(at_least_row("sep_over_t", "sep_over_t", at_nt(c.n, c.t), c.sep_over_t, c0v,
                                  (1.0 - kOracleSlack) * c0v));
  }
  checks.push_back(info_row("sep_over_t_min", "min_sep_over_t", RowKey{}, min_ratio, c0v));
  if (!c0) {
    report.complete = false;
    report.failure += std::string(report.failure.empty() ? "" : "; ") + "no stored separation constant for " +
                      std::string(to_string(cfg.kind)) + " at " + index_key(cfg.idx);
  }

  // (iii) triangle consistency and the t = 0 identity.
  for (const auto& c : report.cells) {
    const double slack = 1e-12 * (c.t * c.drift_norm + c.low_norm + c.fn_err + c.w_norm);
    checks.push_back(at_least_row("triangle", "sep", at_nt(c.n, c.t), c.sep, c.triangle_lower,
                                  c.triangle_lower - slack));
    if (c.t == 0.0) {
      checks.push_back(within_row("t0_identity", "sep_minus_low_norm", at_n(c.n), c.sep - c.low_norm, 0.0,
                                  1e-12 * c.low_norm));
    }
  }

  // (iv) cross terms of the drift decay.
  const auto terms = cross_terms(cfg.kind, cfg.idx.s);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    std::vector<double> v;
    for (std::size_t i = 0; i < done.size(); ++i) {
      v.push_back(done[i]->cross[k]);
      checks.push_back(info_row("cross_" + terms[k].name, "besov_norm", at_n(static_cast<int>(ns[i])), done[i]->cross[k]));
    }
    if (v.size() >= 2) {
      checks.push_back(at_most_row("cross_" + terms[k].name, "log2_slope_in_n", RowKey{}, slope_or_nan(ns, v),
                                   terms[k].rate, terms[k].rate + kSlopeTolerance));
    }
  }

  // Second-order remainder and solver monitors, per n.
  const double c_drift = oracle.drift_law(cfg.kind);
  for (std::size_t i = 0; i < done.size(); ++i) {
    const auto& m = *done[i];
    std::vector<double> ts, raw, corrected;
    for (const auto& c : m.cells) {
      if (c.t <= 0.0) continue;
      ts.push_back(c.t);
      raw.push_back(c.w_norm);
      corrected.push_back(c.w_source_corrected);
    }
    if (ts.size() >= 2) {
      checks.push_back(info_row("remainder_raw", "loglog_slope_in_t", at_n(static_cast<int>(ns[i])), loglog_or_nan(ts, raw), 2.0));
      checks.push_back(at_least_row("remainder", "loglog_slope_in_t", at_n(static_cast<int>(ns[i])), loglog_or_nan(ts, corrected), 2.0,
                                    kRemainderSlope));
    }
    checks.push_back(info_row("composite", "E_u0", at_n(static_cast<int>(ns[i])), m.composite));
    checks.push_back(
        at_most_row("drift_law", "linf_drift_ratio", at_n(static_cast<int>(ns[i])), m.drift_ratio, c_drift, (1.0 + kOracleSlack) * c_drift));
    checks.push_back(at_most_row("apriori_c1", "c1", at_n(static_cast<int>(ns[i])), m.c1, oracle.apriori_c1,
                                 (1.0 + kOracleSlack) * oracle.apriori_c1));
    checks.push_back(at_most_row("apriori_c2", "c2", at_n(static_cast<int>(ns[i])), m.c2, oracle.apriori_c2,
                                 (1.0 + kOracleSlack) * oracle.apriori_c2));
    checks.push_back(info_row("energy_drift", "relative_h1_drift", at_n(static_cast<int>(ns[i])), m.energy_drift));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Serialization

void write_checks_csv(std::ostream& out, std::string_view suite, const std::vector<ReportRow>& rows) {
  CsvWriter csv(out, "besovlab.checks.v1",
                {"suite", "check", "quantity", "n", "t", "measured", "reference", "threshold", "tolerance",
                 "rule", "pass"});
  for (const auto& r : rows) {
    const CsvValue n = r.key.n ? CsvValue(std::int64_t{*r.key.n}) : CsvValue(std::string());
    const CsvValue t = r.key.t ? CsvValue(*r.key.t) : CsvValue(std::string());
    csv.row({std::string(suite), r.check, r.quantity, n, t, r.measured, r.reference, r.threshold,
             r.tolerance, std::string(to_string(r.rule)), std::string(r.pass ? "pass" : "fail")});
  }
}

void write_gap_cells_csv(std::ostream& out, const GapReport& report) {
  CsvWriter csv(out, "besovlab.gap.v1",
                {"kind", "s", "p", "r", "n", "t", "sep", "drift_norm", "low_norm", "fn_err", "w_norm",
                 "w_source_corrected", "sep_over_t", "triangle_lower"});
  const std::string kind(to_string(report.kind));
  for (const auto& c : report.cells) {
    csv.row({kind, report.idx.s, report.idx.p, report.idx.r, std::int64_t{c.n}, c.t, c.sep, c.drift_norm, c.low_norm,
             c.fn_err, c.w_norm, c.w_source_corrected, c.sep_over_t, c.triangle_lower});
  }
}

}  // namespace besovlab
