#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "besovlab/cutoffs.hpp"
#include "besovlab/field.hpp"
#include "besovlab/nonlocal.hpp"

namespace besovlab {

enum class StepMode { Fixed, Cfl };

struct SolveConfig {
  double final_time = 0.1;
  StepMode step_mode = StepMode::Cfl;
  double fixed_dt = 1e-3;
  double cfl = 0.5;
  std::vector<double> snapshot_times;
  /// Overrides the per-equation dealias fraction when set.
  std::optional<double> dealias;
  /// Growth of ||u||_inf beyond this multiple of the initial value aborts the run.
  double blowup_factor = 10.0;
  /// Initial data with more than this fraction of energy in k > N/3 is rejected.
  double resolution_tolerance = 1e-6;
  /// Evaluate the Besov norm at every accepted step (one extra FFT per step).
  bool track_besov = true;

  /// 0 < T <= 1, fixed dt > 0, cfl in (0, 1], snapshots sorted inside [0, T].
  void validate() const;
};

struct StepDiagnostics {
  double t = 0.0;
  double dt = 0.0;
  double energy = 0.0;
  double linf = 0.0;
  double lipschitz = 0.0;
  double besov = 0.0;
};

struct Snapshot {
  double t;
  Field u;
};

struct SolveResult {
  EquationKind kind = EquationKind::CamassaHolm;
  StepDiagnostics initial;
  std::vector<Snapshot> snapshots;
  /// One row per accepted step, recorded after the step.
  std::vector<StepDiagnostics> diagnostics;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  /// Snapshot at time t. Throws InvalidArgument if t was not a requested snapshot time.
  const Field& at(double t) const;
  const Field& final_state() const;
};

/// H^1 energy: integral of u^2 + u_x^2.
double h1_energy(const Field& u);

/// Classical RK4 for the transport form of the chosen equation.
SolveResult solve(EquationKind kind, const Field& u0, const SolveConfig& cfg, const CutoffSystem& cs,
                  const BesovIndex& idx);

struct Remainder {
  Field w;
  double norm;
};

/// w = S_t(u0) - u0 - t * drift(u0) together with its B^s_{p,r} norm.
Remainder drift_remainder(EquationKind kind, const Field& u0, double t, const SolveResult& result,
                          const BesovIndex& idx, const CutoffSystem& cs);

/// Smallest constants making the a-priori growth inequalities hold along a run:
///   log(B(t)/B(0)) <= c1 * int_0^t ||u||_{C^{0,1}}
///   log(L(t)/L(0)) <= c2 * int_0^t ||u_x||_inf
/// (B the Besov norm, L the Lipschitz norm), trapezoid rule in time.
struct AprioriMonitor {
  double c1 = 0.0;
  double c2 = 0.0;
  double energy_drift = 0.0;
};
AprioriMonitor apriori_monitor(const SolveResult& result);

/// max over positive snapshot times of ||S_t(u0) - u0||_inf / (t ||u0||_{C^{0,1}}^degree).
double linf_drift_ratio(const Field& u0, const SolveResult& result);

/// Writes t,dt,energy,linf,lipschitz,besov rows (initial state first).
void write_diagnostics_csv(const SolveResult& result, std::ostream& out);

}  // namespace besovlab
