#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "besovlab/cutoffs.hpp"
#include "besovlab/experiments.hpp"
#include "besovlab/integrator.hpp"
#include "besovlab/nonlocal.hpp"

namespace besovlab {

enum class RunMode { Default, Large };

/// Initial data for the `solve` command.
enum class InitialData { Family, FamilyHigh, Constant, Bump, Sine };

/// Every parameter a CLI command can take. Defaults mirror the shipped experiments.
struct RunConfig {
  std::string command;
  EquationKind kind = EquationKind::CamassaHolm;
  BesovIndex idx;
  std::optional<std::vector<int>> n_list;
  std::vector<double> t_list{0.0125, 0.025, 0.05, 0.1};
  double tail_tol = 1e-6;
  RunMode mode = RunMode::Default;
  std::size_t refinement = 1;
  unsigned threads = 0;
  std::filesystem::path output_dir = "besovlab-out";
  std::filesystem::path oracle_file;  // empty: default_oracle_path()
  bool svg = true;

  // solve
  double final_time = 0.1;
  StepMode step_mode = StepMode::Cfl;
  double fixed_dt = 1e-3;
  double cfl = 0.5;
  std::vector<double> snapshots;
  InitialData initial = InitialData::Family;
  double constant = 0.3;
  double amplitude = 0.2;
  int family_n = 3;
  double half_length = 16.0 * 3.14159265358979323846;
  std::size_t points = 1024;

  // report
  std::vector<std::filesystem::path> inputs;

  /// n values after applying the mode default ({3..6}, or {3..7} in large mode).
  std::vector<int> resolved_n_list() const;
  std::size_t grid_cap() const;
  ExperimentConfig experiment() const;
  SolveConfig solve_config() const;

  /// Throws UnsupportedConfiguration for r = inf and InvalidArgument naming the
  /// violated invariant otherwise.
  void validate() const;
};

/// Parses a JSON config. Missing keys keep their defaults; unknown keys are rejected.
/// Throws NotFoundError, ParseError (with line/field) or InvalidArgument.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");

InitialData parse_initial_data(const std::string& text);
std::string_view to_string(InitialData d) noexcept;
std::string_view to_string(RunMode m) noexcept;

/// JSON echo of the effective configuration (written into manifests).
std::string config_to_json(const RunConfig& cfg);

}  // namespace besovlab
