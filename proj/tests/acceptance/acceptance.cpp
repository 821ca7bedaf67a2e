// Acceptance gate. One line per criterion:
//
//   criterion <k> PASS|FAIL <title>: <summary>
//
// Usage: besovlab-acceptance [--criterion k]... [--work dir]
// Every criterion also writes its rows to <work>/criterion_<k>.csv.

#include <besovlab/cutoffs.hpp>
#include <besovlab/experiments.hpp>
#include <besovlab/families.hpp>
#include <besovlab/integrator.hpp>
#include <besovlab/norms.hpp>
#include <besovlab/regression.hpp>
#include <besovlab/report_io.hpp>
#include <besovlab/spectral.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "corpus.hpp"

namespace bl = besovlab;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kSpectralTolerance = 1e-12;
constexpr double kEnergyDriftTolerance = 1e-8;
constexpr double kOrderTarget = 4.0;
constexpr double kOrderTolerance = 0.2;
constexpr double kRuntimeLimitSeconds = 30 * 60;

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<bl::ReportRow> rows;
};

struct Criterion {
  int id;
  std::string title;
  std::function<Outcome()> run;
};

const bl::OracleConstants& oracle() {
  static const bl::OracleConstants c = bl::load_oracle_constants(bl::default_oracle_path());
  return c;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

std::string describe(const bl::ReportRow& r) {
  std::string key;
  if (r.key.n) key += " n=" + std::to_string(*r.key.n);
  if (r.key.t) key += " t=" + fmt(*r.key.t);
  std::string bound;
  switch (r.rule) {
    case bl::CheckRule::Within: bound = fmt(r.reference) + "±" + fmt(r.tolerance); break;
    case bl::CheckRule::AtMost: bound = "<= " + fmt(r.threshold); break;
    case bl::CheckRule::AtLeast: bound = ">= " + fmt(r.threshold); break;
    case bl::CheckRule::Info: bound = "info"; break;
  }
  return r.check + key + " " + fmt(r.measured) + " vs " + bound;
}

// Keeps the rows whose check id is in `ids` (all non-info rows when empty) and
// summarizes them: "k/m pass; failed: ...".
Outcome judge(const std::vector<bl::ReportRow>& rows, const std::set<std::string>& ids, const std::string& prefix = "") {
  Outcome o;
  std::size_t total = 0;
  std::vector<std::string> failed;
  for (auto r : rows) {
    if (r.rule == bl::CheckRule::Info) continue;
    if (!ids.empty() && !ids.count(r.check)) continue;
    r.check = prefix + r.check;
    ++total;
    if (!r.pass) failed.push_back(describe(r));
    o.rows.push_back(std::move(r));
  }
  o.pass = failed.empty() && total > 0;
  o.summary = std::to_string(total - failed.size()) + "/" + std::to_string(total) + " checks pass";
  if (total == 0) o.summary += " (no rows)";
  if (!failed.empty()) {
    o.summary += "; failed:";
    for (const auto& f : failed) o.summary += " [" + f + "]";
  }
  return o;
}

void merge(Outcome& into, Outcome part) {
  into.pass = into.pass && part.pass;
  into.summary += (into.summary.empty() ? "" : " | ") + part.summary;
  for (auto& r : part.rows) into.rows.push_back(std::move(r));
}

bl::ExperimentConfig experiment(bl::EquationKind kind, std::vector<int> ns) {
  bl::ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.n_list = std::move(ns);
  return cfg;
}

std::string kind_name(bl::EquationKind k) { return std::string(bl::to_string(k)); }

// sin or cos of xi_m x at the nodes, with the phase reduced exactly mod N.
// Sampling sin(xi * x) directly loses ~1e-11 at xi * x ~ 1e5.
bl::Field mode(const bl::Grid& g, std::size_t m, bool cosine) {
  const std::size_t n = g.size();
  bl::RealBuffer v(n);
  const double sign = m % 2 ? -1.0 : 1.0;  // x_0 = -L contributes a phase of -m pi
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>((m * k) % n) / static_cast<double>(n);
    v[k] = sign * (cosine ? std::cos(theta) : std::sin(theta));
  }
  return bl::Field(g, std::move(v));
}

// ---------------------------------------------------------------------------

Outcome spectral_substrate() {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  double parseval = 0.0, eigen = 0.0, partition = 0.0;

  for (auto [L, N] : {std::pair{std::numbers::pi, std::size_t{64}}, {10.0, 1000}, {16 * std::numbers::pi, 1024},
                      {3 * std::numbers::pi * 255, std::size_t{1} << 16}}) {
    const bl::Grid g(L, N);
    const bl::Field f = bl::Field::sample(g, [&](double) { return normal(rng); });
    double direct = 0.0;
    for (double v : f.values()) direct += v * v;
    direct = std::sqrt(direct * g.spacing());
    const double fast = bl::parseval_l2_norm(bl::to_spectrum(f).coefficients(), g);
    parseval = std::max(parseval, std::abs(fast - direct) / direct);

    for (std::size_t m : {std::size_t{1}, std::size_t{5}, N / 3}) {
      const double xi = g.frequency(static_cast<double>(m));
      const bl::Field s = mode(g, m, false);
      const bl::Field c = mode(g, m, true);
      // Relative to the operator norm: FFT round-off is scaled by the largest symbol.
      eigen = std::max(eigen, bl::max_abs_difference(bl::derivative(s), xi * c) / g.nyquist());
      const bl::Field h = bl::apply_multiplier(c, bl::Multiplier::helmholtz_inverse(g));
      eigen = std::max(eigen, bl::max_abs_difference(h, (1.0 / (1.0 + xi * xi)) * c));
    }
  }
  std::vector<bl::Grid> grids{bl::Grid(std::numbers::pi, 64), bl::Grid(16 * std::numbers::pi, 1024)};
  for (auto kind : {bl::EquationKind::CamassaHolm, bl::EquationKind::Novikov}) {
    for (int n : {3, 6}) grids.push_back(bl::recommend_grid(bl::FamilyParams::for_kind(kind, n, 1.2, 2.0), 1e-6));
  }
  for (const auto& g : grids) {
    const bl::CutoffSystem cs = bl::build_cutoffs(g);
    for (std::size_t k = 0; k < g.spectral_size(); ++k) {
      double sum = 0.0;
      for (int j = -1; j <= cs.max_block(); ++j) sum += cs.block(j).gain(k).real();
      partition = std::max(partition, std::abs(sum - 1.0));
    }
  }
  std::vector<bl::ReportRow> rows{
      bl::at_most_row("parseval", "max_relative_error", {}, parseval, 0.0, kSpectralTolerance),
      bl::at_most_row("eigenfunction", "max_error", {}, eigen, 0.0, kSpectralTolerance),
      bl::at_most_row("partition_of_unity", "max_abs_residual", {}, partition, 0.0, kSpectralTolerance),
  };
  Outcome o = judge(rows, {});
  o.summary += " (parseval " + fmt(parseval) + ", eigen " + fmt(eigen) + ", partition " + fmt(partition) + ")";
  return o;
}

Outcome block_locality() {
  Outcome o;
  o.summary.clear();
  const std::set<std::string> ids{"z1", "z2", "block_high_self", "block_high_other", "block_low", "block_product_self",
                                  "block_product_other"};
  for (auto kind : {bl::EquationKind::CamassaHolm, bl::EquationKind::Novikov}) {
    const bl::LemmaReport r = bl::run_family_suite(experiment(kind, {3, 4, 5, 6}), oracle());
    Outcome part = judge(r.rows, ids, kind_name(kind) + ".");
    double worst = 0.0;
    for (const auto& row : part.rows) worst = std::max(worst, row.measured);
    part.summary = kind_name(kind) + ": " + part.summary + " (worst " + fmt(worst) + ")";
    merge(o, std::move(part));
  }
  return o;
}

Outcome rate_regressions() {
  Outcome o;
  for (auto kind : {bl::EquationKind::CamassaHolm, bl::EquationKind::Novikov}) {
    bl::ExperimentConfig cfg = experiment(kind, {3, 4, 5, 6, 7});
    cfg.grid_cap = bl::kLargeGridCap;
    const bl::LemmaReport r = bl::run_family_suite(cfg, oracle());
    Outcome part = judge(r.rows, {"m1", "m2", "m3", "m4", "m5", "m4_dx"}, kind_name(kind) + ".");
    part.summary = kind_name(kind) + ": " + part.summary;
    if (!r.complete) {
      part.pass = false;
      part.summary += " incomplete: " + r.failure;
    }
    merge(o, std::move(part));
  }
  return o;
}

Outcome oscillation_limit() {
  Outcome o;
  for (double p : {2.0, 1.0}) {
    const bl::LemmaReport r = bl::run_oscillation_limit(p, {3, 4, 5, 6}, oracle());
    Outcome part = judge(r.rows, {}, "p" + bl::format_double(p) + ".");
    part.summary = "limit p=" + bl::format_double(p) + ": " + part.summary;
    merge(o, std::move(part));
  }
  for (auto kind : {bl::EquationKind::CamassaHolm, bl::EquationKind::Novikov}) {
    const bl::LemmaReport r = bl::run_family_suite(experiment(kind, {3, 4, 5, 6}), oracle());
    Outcome part = judge(r.rows, {"m6", "m6_min"}, kind_name(kind) + ".");
    double lo = INFINITY, hi = 0.0;
    for (const auto& row : part.rows) {
      if (row.check.ends_with("m6")) {
        lo = std::min(lo, row.measured / row.reference);
        hi = std::max(hi, row.measured / row.reference);
      }
    }
    part.summary = kind_name(kind) + " product: " + part.summary + " (measured/target in [" + fmt(lo) + ", " + fmt(hi) + "])";
    merge(o, std::move(part));
  }
  return o;
}

Outcome solver_validity() {
  std::vector<bl::ReportRow> rows;
  const bl::Grid grid = corpus::smooth_grid();
  const bl::CutoffSystem cs = bl::build_cutoffs(grid);
  const bl::BesovIndex idx;
  const double c1 = oracle().apriori_c1, c2 = oracle().apriori_c2;
  for (const auto& c : corpus::smooth_cases()) {
    const bl::Field u0 = corpus::smooth_data(c, grid);
    const bl::SolveResult r = bl::solve(c.kind, u0, corpus::smooth_solve_config(), cs, idx);
    const bl::AprioriMonitor mon = bl::apriori_monitor(r);
    rows.push_back(bl::at_most_row("energy_drift:" + c.name, "relative_h1_drift", bl::at_t(0.2), mon.energy_drift, 0.0,
                                   kEnergyDriftTolerance));
    rows.push_back(bl::at_most_row("apriori_c1:" + c.name, "c1", {}, mon.c1, c1, (1.0 + bl::kOracleSlack) * c1));
    rows.push_back(bl::at_most_row("apriori_c2:" + c.name, "c2", {}, mon.c2, c2, (1.0 + bl::kOracleSlack) * c2));
  }
  for (auto kind : {bl::EquationKind::CamassaHolm, bl::EquationKind::Novikov}) {
    const bl::Field u0 = corpus::smooth_data({"order", kind, 1.0, false}, grid);
    const auto run = [&](double dt) {
      bl::SolveConfig sc = corpus::smooth_solve_config();
      sc.snapshot_times = {sc.final_time};
      sc.step_mode = bl::StepMode::Fixed;
      sc.fixed_dt = dt;
      sc.track_besov = false;
      return bl::solve(kind, u0, sc, cs, idx).final_state();
    };
    const bl::Field reference = run(0.0025);
    const std::vector<double> dts{0.04, 0.02, 0.01};
    std::vector<double> errs;
    for (double dt : dts) errs.push_back(bl::max_abs_difference(run(dt), reference));
    const double order = bl::fit_loglog(dts, errs).slope;
    rows.push_back(bl::within_row("rk4_order:" + kind_name(kind), "loglog_slope_in_dt", {}, order, kOrderTarget, kOrderTolerance));
  }
  Outcome o = judge(rows, {});
  double drift = 0.0;
  for (const auto& r : rows) {
    if (r.check.starts_with("energy_drift")) drift = std::max(drift, r.measured);
  }
  o.summary += " (max energy drift " + fmt(drift) + ", orders";
  for (const auto& r : rows) {
    if (r.check.starts_with("rk4_order")) o.summary += " " + fmt(r.measured);
  }
  o.summary += ")";
  return o;
}

Outcome drift_laws() {
  Outcome o;
  std::vector<bl::ReportRow> smooth;
  const bl::Grid grid = corpus::smooth_grid();
  const bl::CutoffSystem cs = bl::build_cutoffs(grid);
  for (const auto& c : corpus::smooth_cases()) {
    const bl::Field u0 = corpus::smooth_data(c, grid);
    const bl::SolveResult r = bl::solve(c.kind, u0, corpus::smooth_solve_config(), cs, bl::BesovIndex{});
    const double C = oracle().drift_law(c.kind);
    smooth.push_back(bl::at_most_row("drift_law:" + c.name, "linf_drift_ratio", {}, bl::linf_drift_ratio(u0, r), C,
                                     (1.0 + bl::kOracleSlack) * C));
  }
  Outcome part = judge(smooth, {});
  part.summary = "smooth corpus: " + part.summary;
  merge(o, std::move(part));
  for (auto kind : {bl::EquationKind::CamassaHolm, bl::EquationKind::Novikov}) {
    const bl::LemmaReport approx = bl::run_approx_suite(experiment(kind, {3, 4, 5, 6}), oracle());
    Outcome a = judge(approx.rows, {"drift_law"}, kind_name(kind) + ".approx.");
    a.summary = kind_name(kind) + " families: " + a.summary;
    if (!approx.complete) {
      a.pass = false;
      a.summary += " incomplete: " + approx.failure;
    }
    merge(o, std::move(a));
    const bl::GapReport gap = bl::run_gap(experiment(kind, {3, 4, 5, 6}), oracle());
    Outcome g = judge(gap.checks, {"drift_law", "remainder"}, kind_name(kind) + ".gap.");
    double slope = INFINITY;
    for (const auto& r : g.rows) {
      if (r.check.ends_with("remainder")) slope = std::min(slope, r.measured);
    }
    g.summary = kind_name(kind) + " data pairs: " + g.summary + " (min remainder slope " + fmt(slope) + ")";
    if (!gap.complete) {
      g.pass = false;
      g.summary += " incomplete: " + gap.failure;
    }
    merge(o, std::move(g));
  }
  return o;
}

Outcome gap_experiment(bl::EquationKind kind) {
  const auto t0 = std::chrono::steady_clock::now();
  const bl::GapReport r = bl::run_gap(experiment(kind, {3, 4, 5, 6}), oracle());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::vector<bl::ReportRow> rows = r.checks;
  rows.push_back(bl::at_most_row("runtime", "seconds", {}, seconds, 0.0, kRuntimeLimitSeconds));
  Outcome o = judge(rows, {"low_norm_ratio", "sep_over_t", "triangle", "runtime"});
  double min_ratio = INFINITY;
  for (const auto& c : r.cells) {
    if (c.t > 0.0) min_ratio = std::min(min_ratio, c.sep_over_t);
  }
  const auto c0 = oracle().separation_constant(kind, bl::BesovIndex{});
  o.summary += " (min sep/t " + fmt(min_ratio) + ", c0 " + (c0 ? fmt(*c0) : std::string("missing")) + ", " +
               fmt(seconds) + " s)";
  if (!r.complete) {
    o.pass = false;
    o.summary += " incomplete: " + r.failure;
  }
  return o;
}

Outcome determinism(const fs::path& work) {
  const std::vector<std::vector<std::string>> commands{
      {"cutoffs"},
      {"families", "--n", "3,4", "--export"},
      {"lemmas", "--n", "3,4"},
      {"solve", "--kind", "novikov", "--initial", "bump", "--amplitude", "0.4", "--T", "0.2"},
      {"approx", "--kind", "ch", "--n", "3,4", "--t", "0.0125,0.025"},
      {"gap", "--n", "3,4", "--t", "0,0.0125,0.025"},
      {"novikov-gap", "--n", "3,4", "--t", "0,0.0125,0.025"},
  };
  // Both passes write to the same paths so their configs match exactly; each
  // pass is moved aside afterwards.
  std::vector<bl::ReportRow> rows;
  const fs::path live = work / "run";
  for (int pass = 0; pass < 2; ++pass) {
    fs::remove_all(live);
    std::vector<std::string> dirs;
    for (const auto& command : commands) {
      const fs::path out = live / command[0];
      std::vector<std::string> args{"besovlab"};
      args.insert(args.end(), command.begin(), command.end());
      args.insert(args.end(), {"--out", out.string()});
      const int code = bl::cli::cli_main(args);
      if (pass == 0) rows.push_back(bl::info_row("exit:" + command[0], "exit_code", {}, code));
      dirs.push_back(out.string());
    }
    std::vector<std::string> args{"besovlab", "report"};
    args.insert(args.end(), dirs.begin(), dirs.end());
    args.insert(args.end(), {"--out", (live / "report").string()});
    bl::cli::cli_main(args);
    const fs::path kept = work / ("run" + std::to_string(pass));
    fs::remove_all(kept);
    fs::rename(live, kept);
  }
  std::size_t files = 0, differing = 0;
  std::string first_diff;
  for (const auto& entry : fs::recursive_directory_iterator(work / "run0")) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    const fs::path rel = fs::relative(entry.path(), work / "run0");
    const fs::path other = work / "run1" / rel;
    const auto read = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::stringstream s;
      s << in.rdbuf();
      return s.str();
    };
    ++files;
    const bool same = fs::exists(other) && read(entry.path()) == read(other);
    if (!same) {
      ++differing;
      if (first_diff.empty()) first_diff = rel.string();
    }
    rows.push_back(bl::at_most_row("identical:" + rel.string(), "bytes_differ", {}, same ? 0.0 : 1.0, 0.0, 0.0));
  }
  const double expected = static_cast<double>(commands.size() + 1);
  rows.push_back(bl::at_least_row("csv_files", "count", {}, static_cast<double>(files), expected, expected));
  Outcome o = judge(rows, {});
  o.summary = std::to_string(files - differing) + "/" + std::to_string(files) + " CSV files byte-identical across two runs";
  if (!first_diff.empty()) o.summary += "; first difference: " + first_diff;
  o.pass = differing == 0 && files >= commands.size() + 1;
  return o;
}

void write_rows(const fs::path& path, int id, const std::vector<bl::ReportRow>& rows) {
  std::ofstream out(path);
  bl::write_checks_csv(out, "criterion_" + std::to_string(id), rows);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  fs::path work = fs::current_path() / "acceptance-work";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      selected.insert(std::stoi(argv[++i]));
    } else if (a == "--work" && i + 1 < argc) {
      work = argv[++i];
    } else {
      std::cerr << "usage: besovlab-acceptance [--criterion k]... [--work dir]\n";
      return 2;
    }
  }
  fs::create_directories(work);

  const std::vector<Criterion> criteria{
      {1, "spectral substrate", spectral_substrate},
      {2, "block locality", block_locality},
      {3, "rate regressions", rate_regressions},
      {4, "oscillation limit", oscillation_limit},
      {5, "solver validity", solver_validity},
      {6, "drift laws", drift_laws},
      {7, "Camassa-Holm separation experiment", [] { return gap_experiment(bl::EquationKind::CamassaHolm); }},
      {8, "Novikov separation experiment", [] { return gap_experiment(bl::EquationKind::Novikov); }},
      {9, "determinism", [&work] { return determinism(work / "determinism"); }},
  };

  bool all = true;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("error: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_rows(work / ("criterion_" + std::to_string(c.id) + ".csv"), c.id, o.rows);
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << " " << c.title << ": " << o.summary
              << " [" << fmt(seconds) << " s]" << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
