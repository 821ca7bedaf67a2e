#include "besovlab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "besovlab/errors.hpp"
#include "besovlab/norms.hpp"
#include "besovlab/report_io.hpp"

namespace besovlab {

namespace {

constexpr int kMaxConsecutiveRejections = 30;
constexpr double kCflSlack = 1.5;

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Per-step diagnostics from one forward transform and one inverse.
class DiagnosticProbe {
 public:
  DiagnosticProbe(const CutoffSystem& cs, const BesovIndex& idx, bool track_besov)
      : cs_(cs), idx_(idx), track_besov_(track_besov), spectrum_(cs.grid()), scratch_(cs.grid().spectral_size()),
        u_x_(cs.grid().size()) {}

  StepDiagnostics measure(std::span<const double> u, double t, double dt) {
    const Grid& g = cs_.grid();
    auto coeffs = spectrum_.coefficients();
    forward_dft(u, coeffs);
    const std::size_t half = g.size() / 2;
    double energy = 0.0;
    for (std::size_t k = 0; k <= half; ++k) {
      const double xi = g.frequency(static_cast<double>(k));
      const double w = (k == 0 || k == half) ? 1.0 : 2.0;
      energy += w * (1.0 + xi * xi) * std::norm(coeffs[k]);
      scratch_[k] = (k == half) ? 0.0 : std::complex<double>(0.0, xi) * coeffs[k];
    }
    energy *= g.spacing() / static_cast<double>(g.size());
    inverse_dft(scratch_, u_x_);
    StepDiagnostics d;
    d.t = t;
    d.dt = dt;
    d.energy = energy;
    d.linf = max_abs(u);
    d.lipschitz = d.linf + max_abs(u_x_);
    if (track_besov_) d.besov = besov_from_blocks(block_norms(spectrum_, idx_.p, cs_), idx_.s, idx_.r);
    return d;
  }

 private:
  const CutoffSystem& cs_;
  BesovIndex idx_;
  bool track_besov_;
  Spectrum spectrum_;
  ComplexBuffer scratch_;
  RealBuffer u_x_;
};

}  // namespace

void SolveConfig::validate() const {
  if (!(final_time > 0.0 && final_time <= 1.0)) {
    throw InvalidArgument("solve: final time T must satisfy 0 < T <= 1, got " + std::to_string(final_time));
  }
  if (step_mode == StepMode::Fixed && !(fixed_dt > 0.0 && std::isfinite(fixed_dt))) {
    throw InvalidArgument("solve: fixed dt must be positive");
  }
  if (step_mode == StepMode::Cfl && !(cfl > 0.0 && cfl <= 1.0)) {
    throw InvalidArgument("solve: cfl number must lie in (0, 1]");
  }
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end())) {
    throw InvalidArgument("solve: snapshot times must be sorted");
  }
  for (double t : snapshot_times) {
    if (!(t >= 0.0 && t <= final_time)) throw InvalidArgument("solve: snapshot time outside [0, T]");
  }
  if (dealias && !(*dealias > 0.0 && *dealias <= 1.0)) throw InvalidArgument("solve: dealias fraction must lie in (0, 1]");
  if (!(blowup_factor > 1.0)) throw InvalidArgument("solve: blow-up factor must exceed 1");
  if (!(resolution_tolerance > 0.0)) throw InvalidArgument("solve: resolution tolerance must be positive");
}

const Field& SolveResult::at(double t) const {
  for (const auto& s : snapshots) {
    if (same_time(s.t, t)) return s.u;
  }
  throw InvalidArgument("no snapshot at t = " + format_double(t));
}

const Field& SolveResult::final_state() const {
  if (snapshots.empty()) throw InvalidArgument("solve result holds no snapshots");
  return snapshots.back().u;
}

double h1_energy(const Field& u) {
  const Grid& g = u.grid();
  const Spectrum s = to_spectrum(u);
  const auto c = s.coefficients();
  const std::size_t half = g.size() / 2;
  double energy = 0.0;
  for (std::size_t k = 0; k <= half; ++k) {
    const double xi = g.frequency(static_cast<double>(k));
    const double w = (k == 0 || k == half) ? 1.0 : 2.0;
    energy += w * (1.0 + xi * xi) * std::norm(c[k]);
  }
  return energy * g.spacing() / static_cast<double>(g.size());
}

SolveResult solve(EquationKind kind, const Field& u0, const SolveConfig& cfg, const CutoffSystem& cs,
                  const BesovIndex& idx) {
  cfg.validate();
  require_same_grid(u0.grid(), cs.grid(), "solve");
  const Grid& grid = u0.grid();
  const std::size_t n = grid.size();

  if (top_third_energy_fraction(to_spectrum(u0)) > cfg.resolution_tolerance) {
    throw ResolutionError("solve: initial data is under-resolved (top-third spectral energy above " +
                          format_double(cfg.resolution_tolerance) + ")");
  }

  RhsEvaluator eval(kind, grid, cfg.dealias.value_or(dealias_fraction(kind)));
  DiagnosticProbe probe(cs, idx, cfg.track_besov);

  RealBuffer u(u0.values().begin(), u0.values().end());
  RealBuffer trial(n), stage(n), k1(n), k2(n), k3(n), k4(n);

  SolveResult result;
  result.kind = kind;
  result.initial = probe.measure(u, 0.0, 0.0);
  const double initial_linf = result.initial.linf;
  const double degree_power = nonlinearity_degree(kind) - 1;
  auto allowed_dt = [&](double linf) {
    if (cfg.step_mode == StepMode::Fixed) return cfg.fixed_dt;
    const double speed = std::pow(linf, degree_power);
    return cfg.cfl * grid.spacing() / std::max(1.0, speed);
  };

  auto snap = cfg.snapshot_times.begin();
  auto record_snapshots = [&](double t) {
    while (snap != cfg.snapshot_times.end() && same_time(*snap, t)) {
      result.snapshots.push_back({*snap, Field(grid, u)});
      ++snap;
    }
  };

  double t = 0.0;
  record_snapshots(t);
  double dt_next = allowed_dt(initial_linf);
  int rejections = 0;

  while (!same_time(t, cfg.final_time) && t < cfg.final_time) {
    const double target = (snap != cfg.snapshot_times.end()) ? std::min(*snap, cfg.final_time) : cfg.final_time;
    double dt = dt_next;
    bool lands = false;
    if (t + dt >= target || same_time(t + dt, target)) {
      dt = target - t;
      lands = true;
    }

    eval.evaluate(u, k1);
    for (std::size_t i = 0; i < n; ++i) stage[i] = u[i] + 0.5 * dt * k1[i];
    eval.evaluate(stage, k2);
    for (std::size_t i = 0; i < n; ++i) stage[i] = u[i] + 0.5 * dt * k2[i];
    eval.evaluate(stage, k3);
    for (std::size_t i = 0; i < n; ++i) stage[i] = u[i] + dt * k3[i];
    eval.evaluate(stage, k4);
    for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    const bool finite = all_finite(trial);
    const double trial_linf = finite ? max_abs(trial) : 0.0;
    if (finite && initial_linf > 0.0 && trial_linf > cfg.blowup_factor * initial_linf) {
      throw BlowUpError("solve: ||u||_inf grew beyond " + format_double(cfg.blowup_factor) +
                            "x its initial value after t = " + format_double(t),
                        t);
    }
    const double allowed = finite ? allowed_dt(trial_linf) : 0.0;
    if (!finite || (cfg.step_mode == StepMode::Cfl && dt > kCflSlack * allowed)) {
      ++result.rejected_steps;
      if (++rejections > kMaxConsecutiveRejections) {
        throw BlowUpError("solve: step size collapsed after t = " + format_double(t), t);
      }
      dt_next = finite ? allowed : 0.5 * dt;
      continue;
    }
    rejections = 0;
    u.swap(trial);
    t = lands ? target : t + dt;
    ++result.accepted_steps;
    result.diagnostics.push_back(probe.measure(u, t, dt));
    record_snapshots(t);
    dt_next = allowed;
  }
  return result;
}

Remainder drift_remainder(EquationKind kind, const Field& u0, double t, const SolveResult& result,
                          const BesovIndex& idx, const CutoffSystem& cs) {
  if (t == 0.0) return {Field::zeros(u0.grid()), 0.0};
  const Field& st = result.at(t);
  Field w = st - u0 - t * drift(kind, u0);
  const double norm = besov_norm(w, idx, cs);
  return {std::move(w), norm};
}

AprioriMonitor apriori_monitor(const SolveResult& result) {
  AprioriMonitor m;
  const StepDiagnostics& d0 = result.initial;
  double lip_integral = 0.0;
  double grad_integral = 0.0;
  StepDiagnostics prev = d0;
  for (const auto& d : result.diagnostics) {
    lip_integral += 0.5 * d.dt * (prev.lipschitz + d.lipschitz);
    grad_integral += 0.5 * d.dt * ((prev.lipschitz - prev.linf) + (d.lipschitz - d.linf));
    if (d0.besov > 0.0 && d.besov > 0.0 && lip_integral > 0.0) {
      m.c1 = std::max(m.c1, std::log(d.besov / d0.besov) / lip_integral);
    }
    if (d0.lipschitz > 0.0 && grad_integral > 0.0) {
      m.c2 = std::max(m.c2, std::log(d.lipschitz / d0.lipschitz) / grad_integral);
    }
    if (d0.energy > 0.0) m.energy_drift = std::max(m.energy_drift, std::abs(d.energy - d0.energy) / d0.energy);
    prev = d;
  }
  return m;
}

double linf_drift_ratio(const Field& u0, const SolveResult& result) {
  const double scale = std::pow(lipschitz_norm(u0), nonlinearity_degree(result.kind));
  double ratio = 0.0;
  for (const auto& s : result.snapshots) {
    if (s.t <= 0.0 || scale == 0.0) continue;
    ratio = std::max(ratio, max_abs_difference(s.u, u0) / (s.t * scale));
  }
  return ratio;
}

void write_diagnostics_csv(const SolveResult& result, std::ostream& out) {
  CsvWriter csv(out, "besovlab.diagnostics.v1", {"t", "dt", "energy", "linf", "lipschitz", "besov"});
  auto row = [&](const StepDiagnostics& d) { csv.row({d.t, d.dt, d.energy, d.linf, d.lipschitz, d.besov}); };
  row(result.initial);
  for (const auto& d : result.diagnostics) row(d);
}

}  // namespace besovlab
