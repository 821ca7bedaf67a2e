#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "besovlab/cutoffs.hpp"
#include "besovlab/families.hpp"
#include "besovlab/field.hpp"
#include "besovlab/nonlocal.hpp"

namespace besovlab {

/// How a report row turns its measured value into a pass flag.
enum class CheckRule {
  Info,      // always passes
  Within,    // |measured - reference| <= tolerance
  AtMost,    // measured <= threshold
  AtLeast,   // measured >= threshold
};

std::string_view to_string(CheckRule rule) noexcept;

/// Cell coordinates of a row; fits over n or t leave the fitted coordinate empty.
struct RowKey {
  std::optional<int> n;
  std::optional<double> t;
};

inline RowKey at_n(int n) { return {n, std::nullopt}; }
inline RowKey at_t(double t) { return {std::nullopt, t}; }
inline RowKey at_nt(int n, double t) { return {n, t}; }

struct ReportRow {
  std::string check;     // short id, e.g. "m1" or "sep_over_t"
  std::string quantity;  // what was measured
  RowKey key;
  double measured = 0.0;
  double reference = 0.0;  // predicted rate, oracle value or bound
  double threshold = 0.0;  // value compared against for AtMost/AtLeast
  double tolerance = 0.0;  // half-width for Within
  CheckRule rule = CheckRule::Info;
  bool pass = true;
};

ReportRow info_row(std::string check, std::string quantity, RowKey key, double measured,
                   double reference = 0.0);
ReportRow within_row(std::string check, std::string quantity, RowKey key, double measured,
                     double reference, double tolerance);
ReportRow at_most_row(std::string check, std::string quantity, RowKey key, double measured,
                      double reference, double threshold);
ReportRow at_least_row(std::string check, std::string quantity, RowKey key, double measured,
                       double reference, double threshold);

struct GridInfo {
  int n = 0;
  double half_length = 0.0;
  std::size_t points = 0;
};

struct LemmaReport {
  std::string lemma_id;
  std::vector<ReportRow> rows;
  std::map<std::string, double> constants;
  std::vector<GridInfo> grids;
  bool complete = true;
  std::string failure;

  bool passed() const;
  /// Rows whose check id equals `check`.
  std::vector<const ReportRow*> find(std::string_view check) const;
};

struct GapCell {
  int n = 0;
  double t = 0.0;
  double sep = 0.0;
  double drift_norm = 0.0;
  double low_norm = 0.0;
  double fn_err = 0.0;
  double w_norm = 0.0;
  /// ||S_t(u0) - u0 - t rhs(u0)||: the remainder with the nonlocal source term removed.
  double w_source_corrected = 0.0;
  double sep_over_t = 0.0;
  /// t*drift_norm - low_norm - fn_err - w_norm.
  double triangle_lower = 0.0;
};

struct GapReport {
  EquationKind kind = EquationKind::CamassaHolm;
  BesovIndex idx;
  std::vector<GapCell> cells;
  std::vector<ReportRow> checks;
  std::vector<GridInfo> grids;
  /// Composite size E(u0) = ||u0||_{B^{s+1}} ||u0||_{C^{0,1}}^2 + ||u0||_inf ||u0||_{B^{s+2}} (||u0||_{C^{0,1}}^2 + ||u0||_inf), per n.
  std::map<int, double> composite;
  bool complete = true;
  std::string failure;

  bool passed() const;
};

/// Stored reference constants produced by the calibration run.
struct OracleConstants {
  std::filesystem::path source;
  std::string sha256;
  /// Limit of ||phi^2 cos(lambda x)||_{L^p} as lambda -> inf, keyed by format_double(p).
  std::map<std::string, double> oscillation_limit;
  /// Same for phi^3 (the cubic analog).
  std::map<std::string, double> cubic_oscillation_limit;
  /// Minimum of sep/t over the calibration cells, keyed by "<kind>:<index_key>".
  std::map<std::string, double> separation;
  double apriori_c1 = 0.0;
  double apriori_c2 = 0.0;
  double drift_law_ch = 0.0;
  double drift_law_novikov = 0.0;

  std::optional<double> oscillation(double p, EquationKind kind) const;
  std::optional<double> separation_constant(EquationKind kind, const BesovIndex& idx) const;
  double drift_law(EquationKind kind) const;
};

/// "s=1.2,p=2,r=2".
std::string index_key(const BesovIndex& idx);

/// BESOVLAB_ORACLE_FILE if set, else the source-tree data file, else the installed copy.
std::filesystem::path default_oracle_path();
OracleConstants load_oracle_constants(const std::filesystem::path& path);

/// Relative slack applied to every comparison against a stored oracle constant.
inline constexpr double kOracleSlack = 0.10;

struct ExperimentConfig {
  EquationKind kind = EquationKind::CamassaHolm;
  BesovIndex idx;
  std::vector<int> n_list{3, 4, 5, 6};
  std::vector<double> t_list{0.0125, 0.025, 0.05, 0.1};
  double tail_tol = 1e-6;
  std::size_t grid_cap = kDefaultGridCap;
  /// Multiplies the recommended N (calibration runs use 2).
  std::size_t refinement = 1;
  double cfl = 0.5;
  /// 0 selects the hardware concurrency, capped by BESOVLAB_THREADS.
  unsigned threads = 0;

  void validate() const;
};

/// Worker count after applying the BESOVLAB_THREADS cap.
unsigned resolve_threads(unsigned requested);

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
/// written to per-index slots; the first exception (lowest index) is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Grid for a family configuration, honouring refinement.
Grid experiment_grid(const FamilyParams& params, const ExperimentConfig& cfg);

/// sup_j 2^{sj} ||Delta_j f||_{L^p}, the B^s_{p,inf} functional.
double besov_sup_norm(const Field& f, double s, double p, const CutoffSystem& cs);

/// ||phi^k(x) cos(lambda x)||_{L^p} on a grid fine enough to resolve lambda.
double oscillatory_envelope_norm(int power, double lambda, double p);

LemmaReport run_oscillation_limit(double p, const std::vector<int>& n_list, const OracleConstants& oracle);
LemmaReport run_family_suite(const ExperimentConfig& cfg, const OracleConstants& oracle);
LemmaReport run_approx_suite(const ExperimentConfig& cfg, const OracleConstants& oracle);
GapReport run_gap(const ExperimentConfig& cfg, const OracleConstants& oracle);

/// One row per check: suite,check,quantity,n,t,measured,reference,threshold,tolerance,rule,pass.
void write_checks_csv(std::ostream& out, std::string_view suite, const std::vector<ReportRow>& rows);
/// One row per (n, t) cell.
void write_gap_cells_csv(std::ostream& out, const GapReport& report);

}  // namespace besovlab
