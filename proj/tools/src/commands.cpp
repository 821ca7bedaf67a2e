#include "commands.hpp"

#include <besovlab/cutoffs.hpp>
#include <besovlab/errors.hpp>
#include <besovlab/experiments.hpp>
#include <besovlab/families.hpp>
#include <besovlab/integrator.hpp>
#include <besovlab/norms.hpp>
#include <besovlab/report_io.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include "output.hpp"

namespace besovlab::cli {

namespace {

bool is_experiment(const std::string& command) {
  static const std::set<std::string> names{"families", "lemmas", "approx", "gap", "novikov-gap"};
  return names.count(command) > 0;
}

bool needs_oracle(const std::string& command) {
  return command == "lemmas" || command == "approx" || command == "gap" || command == "novikov-gap";
}

bool family_initial(const RunConfig& cfg) {
  return cfg.initial == InitialData::Family || cfg.initial == InitialData::FamilyHigh;
}

std::filesystem::path oracle_path(const RunConfig& cfg) {
  return cfg.oracle_file.empty() ? default_oracle_path() : cfg.oracle_file;
}

FamilyParams family_params(const RunConfig& cfg, int n) { return FamilyParams::for_kind(cfg.kind, n, cfg.idx.s, cfg.idx.p); }

Grid solve_grid(const RunConfig& cfg) {
  if (family_initial(cfg)) return recommend_grid(family_params(cfg, cfg.family_n), cfg.tail_tol, cfg.grid_cap());
  return Grid(cfg.half_length, cfg.points);
}

void write_checks(RunOutput& out, const std::string& file, const std::string& suite, const std::vector<ReportRow>& rows) {
  auto stream = out.open(file);
  write_checks_csv(stream, suite, rows);
  out.record_checks(suite, rows);
}

void maybe_chart(RunOutput& out, const RunConfig& cfg, const std::string& file, std::string_view title,
                 std::string_view x_label, std::string_view y_label, const std::vector<SvgSeries>& series, bool log_y) {
  if (!cfg.svg) return;
  write_svg_chart(out.reserve(file), title, x_label, y_label, series, log_y);
}

std::vector<SvgSeries> series_by_n(const std::vector<ReportRow>& rows, const std::string& check) {
  std::map<int, SvgSeries> by_n;
  for (const auto& r : rows) {
    if (r.check != check || !r.key.n || !r.key.t) continue;
    auto& s = by_n[*r.key.n];
    s.label = "n=" + std::to_string(*r.key.n);
    s.x.push_back(*r.key.t);
    s.y.push_back(r.measured);
  }
  std::vector<SvgSeries> out;
  for (auto& [n, s] : by_n) out.push_back(std::move(s));
  return out;
}

SvgSeries series_over_n(const std::vector<ReportRow>& rows, const std::string& check, const std::string& label) {
  SvgSeries s{label, {}, {}};
  for (const auto& r : rows) {
    if (r.check != check || !r.key.n || r.key.t) continue;
    s.x.push_back(*r.key.n);
    s.y.push_back(r.measured);
  }
  return s;
}

}  // namespace

void preflight(const RunConfig& cfg) {
  cfg.validate();
  if (is_experiment(cfg.command)) {
    const ExperimentConfig exp = cfg.experiment();
    for (int n : exp.n_list) experiment_grid(family_params(cfg, n), exp);
  }
  if (cfg.command == "solve") solve_grid(cfg);
  if (cfg.command == "cutoffs") build_cutoffs(Grid(cfg.half_length, cfg.points));
  if (needs_oracle(cfg.command)) load_oracle_constants(oracle_path(cfg));
  if (cfg.command == "report") {
    for (const auto& in : cfg.inputs) {
      if (!std::filesystem::exists(in / "manifest.json")) throw NotFoundError("no manifest.json in " + in.string());
    }
  }
}

Field solve_initial_data(const RunConfig& cfg) {
  const Grid grid = solve_grid(cfg);
  switch (cfg.initial) {
    case InitialData::Family:
    case InitialData::FamilyHigh: {
      const FamilyPair pair = make_family(family_params(cfg, cfg.family_n), grid, build_cutoffs(grid));
      return cfg.initial == InitialData::Family ? pair.high + pair.low : pair.high;
    }
    case InitialData::Constant:
      return Field::constant(grid, cfg.constant);
    case InitialData::Bump:
      return Field::sample(grid, [a = cfg.amplitude](double x) { return a / std::cosh(x); });
    case InitialData::Sine: {
      // Lowest grid frequency at or above 1, so the wave is periodic on the grid.
      const double m = std::max(1.0, std::round(grid.half_length() / std::numbers::pi));
      const double k = grid.frequency(m);
      return Field::sample(grid, [a = cfg.amplitude, k](double x) { return a * std::sin(k * x); });
    }
  }
  throw InvalidArgument("unknown initial data");
}

// ---------------------------------------------------------------------------

int run_cutoffs(const RunConfig& cfg) {
  RunOutput out(cfg);
  const auto t0 = std::chrono::steady_clock::now();

  double partition_table = 0.0, flat = 0.0, support = 0.0, plateau = 0.0, annulus_support = 0.0;
  {
    auto csv = out.open("symbols.csv");
    CsvWriter w(csv, "besovlab.cutoffs.v1", {"xi", "envelope_hat", "low_pass", "annulus", "partition_sum"});
    for (int i = 0; i <= 4000; ++i) {
      const double xi = i / 1000.0;
      double sum = cutoff::low_pass(xi);
      for (int j = 0; j <= 12; ++j) sum += cutoff::annulus(std::ldexp(xi, -j));
      const double env = cutoff::envelope_hat(xi), ann = cutoff::annulus(xi);
      w.row({xi, env, cutoff::low_pass(xi), ann, sum});
      partition_table = std::max(partition_table, std::abs(sum - 1.0));
      if (xi <= cutoff::kEnvelopeFlat) flat = std::max(flat, std::abs(env - 1.0));
      if (xi >= cutoff::kEnvelopeSupport) support = std::max(support, std::abs(env));
      if (xi >= cutoff::kPlateauInner && xi <= cutoff::kPlateauOuter) plateau = std::max(plateau, std::abs(ann - 1.0));
      if (xi <= cutoff::kAnnulusInner || xi >= cutoff::kAnnulusOuter) annulus_support = std::max(annulus_support, std::abs(ann));
    }
  }

  const Grid grid(cfg.half_length, cfg.points);
  const CutoffSystem cs = build_cutoffs(grid);
  out.record_grid(0, grid);
  double partition_grid = 0.0;
  {
    auto csv = out.open("blocks.csv");
    CsvWriter w(csv, "besovlab.blocks.v1", {"j", "first_k", "last_k", "xi_first", "xi_last"});
    for (int j = -1; j <= cs.max_block(); ++j) {
      const Multiplier& m = cs.block(j);
      const bool empty = m.last() == m.first();
      const double nan = std::nan("");
      w.row(std::vector<CsvValue>{static_cast<std::int64_t>(j), static_cast<std::int64_t>(m.first()),
                                  static_cast<std::int64_t>(m.last()),
                                  empty ? nan : grid.frequency(static_cast<double>(m.first())),
                                  empty ? nan : grid.frequency(static_cast<double>(m.last()) - 1.0)});
    }
    for (std::size_t k = 0; k < grid.spectral_size(); ++k) {
      double sum = 0.0;
      for (int j = -1; j <= cs.max_block(); ++j) sum += cs.block(j).gain(k).real();
      partition_grid = std::max(partition_grid, std::abs(sum - 1.0));
    }
  }

  const std::vector<ReportRow> rows{
      at_most_row("partition_table", "max_abs_partition_residual", {}, partition_table, 0.0, 1e-12),
      at_most_row("partition_grid", "max_abs_partition_residual", {}, partition_grid, 0.0, 1e-12),
      at_most_row("envelope_flat", "max_abs_envelope_hat_minus_1", {}, flat, 0.0, 0.0),
      at_most_row("envelope_support", "max_abs_envelope_hat_outside", {}, support, 0.0, 0.0),
      at_most_row("annulus_plateau", "max_abs_annulus_minus_1", {}, plateau, 0.0, 1e-15),
      at_most_row("annulus_support", "max_abs_annulus_outside", {}, annulus_support, 0.0, 0.0),
  };
  write_checks(out, "checks.csv", "cutoffs", rows);

  if (cfg.svg) {
    std::vector<SvgSeries> series{{"envelope_hat", {}, {}}, {"low_pass", {}, {}}, {"annulus", {}, {}}};
    for (int i = 0; i <= 400; ++i) {
      const double xi = i / 100.0;
      for (auto& s : series) s.x.push_back(xi);
      series[0].y.push_back(cutoff::envelope_hat(xi));
      series[1].y.push_back(cutoff::low_pass(xi));
      series[2].y.push_back(cutoff::annulus(xi));
    }
    maybe_chart(out, cfg, "symbols.svg", "cutoff symbols", "xi", "value", series, false);
  }
  out.record_time("cutoffs", seconds_since(t0));
  return out.finish();
}

int run_families(const RunConfig& cfg, bool export_fields) {
  RunOutput out(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ReportRow> rows;
  auto csv = out.open("families.csv");
  CsvWriter w(csv, "besovlab.families.v1",
              {"n", "delta", "L", "N", "carrier", "high_amplitude", "low_amplitude", "high_linf", "low_linf",
               "high_leakage", "low_leakage"});
  const ExperimentConfig exp = cfg.experiment();
  for (int n : exp.n_list) {
    const FamilyParams params = family_params(cfg, n);
    const Grid grid = experiment_grid(params, exp);
    out.record_grid(n, grid);
    const CutoffSystem cs = build_cutoffs(grid);
    try {
      const FamilyPair pair = make_family(params, grid, cs);
      const double hl = high_leakage(pair.high, params);
      const double ll = low_leakage(pair.low, params);
      w.row(std::vector<CsvValue>{static_cast<std::int64_t>(n), params.delta, grid.half_length(), static_cast<std::int64_t>(grid.size()),
             params.carrier(), params.high_amplitude(), params.low_amplitude(), max_abs(pair.high), max_abs(pair.low), hl,
             ll});
      rows.push_back(at_most_row("high_leakage", "energy_outside_carrier_band", at_n(n), hl, 0.0, 1e-8));
      rows.push_back(at_most_row("low_leakage", "energy_outside_low_band", at_n(n), ll, 0.0, 1e-8));
      if (export_fields) {
        const std::string stem = "fields/" + std::string(to_string(cfg.kind)) + "_n" + std::to_string(n);
        for (const char* part : {"_high", "_low"}) {
          const std::string base = stem + part;
          for (const char* ext : {".csv", ".f64", ".json"}) out.reserve(base + ext);
          export_field(part[1] == 'h' ? pair.high : pair.low, params, out.dir() / base);
        }
      }
    } catch (const ConfigurationError& e) {
      out.record_failure("n = " + std::to_string(n) + ": " + e.what());
    }
  }
  csv.close();
  write_checks(out, "checks.csv", "families", rows);
  out.record_time("families", seconds_since(t0));
  return out.finish();
}

int run_lemmas(const RunConfig& cfg) {
  const OracleConstants oracle = load_oracle_constants(oracle_path(cfg));
  RunOutput out(cfg);
  out.record_oracle(oracle);
  const ExperimentConfig exp = cfg.experiment();

  auto t0 = std::chrono::steady_clock::now();
  const LemmaReport osc = run_oscillation_limit(cfg.idx.p, exp.n_list, oracle);
  out.record_time("oscillation_limit", seconds_since(t0));
  write_checks(out, "oscillation.csv", "oscillation", osc.rows);

  t0 = std::chrono::steady_clock::now();
  const LemmaReport fam = run_family_suite(exp, oracle);
  out.record_time("family_suite", seconds_since(t0));
  write_checks(out, "family_suite.csv", "families", fam.rows);
  out.record_grids(fam.grids);
  for (const auto* r : {&osc, &fam}) {
    for (const auto& [k, v] : r->constants) out.record_constant(r->lemma_id + "." + k, v);
    if (!r->complete) out.record_failure(r->lemma_id + ": " + r->failure);
  }

  std::vector<SvgSeries> rates;
  for (const char* check : {"m1", "m2", "m3", "m4", "m5"}) rates.push_back(series_over_n(fam.rows, check, check));
  maybe_chart(out, cfg, "rates.svg", "family norms", "n", "log10 norm", rates, true);
  return out.finish();
}

int run_solve(const RunConfig& cfg) {
  RunOutput out(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const Field u0 = solve_initial_data(cfg);
  const Grid& grid = u0.grid();
  out.record_grid(family_initial(cfg) ? cfg.family_n : 0, grid);
  const CutoffSystem cs = build_cutoffs(grid);
  const SolveConfig sc = cfg.solve_config();

  std::optional<SolveResult> result;
  try {
    result = solve(cfg.kind, u0, sc, cs, cfg.idx);
  } catch (const BlowUpError& e) {
    out.record_failure(std::string(e.what()) + " (last good t = " + format_double(e.last_good_time()) + ")");
  } catch (const ResolutionError& e) {
    out.record_failure(e.what());
  }
  out.record_time("solve", seconds_since(t0));
  if (!result) return out.finish();

  {
    auto csv = out.open("diagnostics.csv");
    write_diagnostics_csv(*result, csv);
  }
  nlohmann::ordered_json side;
  side["schema"] = "besovlab.snapshots.v1";
  side["L"] = grid.half_length();
  side["N"] = grid.size();
  side["endianness"] = "little";
  side["snapshots"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < result->snapshots.size(); ++i) {
    const auto& snap = result->snapshots[i];
    const std::string name = "snapshot_" + std::to_string(i) + ".f64";
    auto bin = out.open(name, true);
    write_f64_le(bin, snap.u.values());
    side["snapshots"].push_back({{"t", snap.t}, {"file", name}});
  }
  out.open("snapshots.json") << side.dump(2) << "\n";

  const AprioriMonitor mon = apriori_monitor(*result);
  const double sup_change = max_abs_difference(result->final_state(), u0);
  std::vector<ReportRow> rows{
      at_most_row("energy_drift", "max_relative_h1_energy_drift", {}, mon.energy_drift, 0.0, 1e-8),
      info_row("apriori_c1", "c1", {}, mon.c1),
      info_row("apriori_c2", "c2", {}, mon.c2),
      info_row("drift_ratio", "linf_drift_ratio", {}, linf_drift_ratio(u0, *result)),
      info_row("sup_change", "linf_S_T_minus_u0", at_t(sc.final_time), sup_change),
      info_row("steps", "accepted_steps", {}, static_cast<double>(result->accepted_steps)),
      info_row("rejected", "rejected_steps", {}, static_cast<double>(result->rejected_steps)),
  };
  if (cfg.initial == InitialData::Constant) {
    rows.push_back(at_most_row("flat", "linf_S_T_minus_u0", at_t(sc.final_time), sup_change, 0.0, 0.0));
  }
  write_checks(out, "checks.csv", "solve", rows);

  if (cfg.svg) {
    SvgSeries linf{"linf", {}, {}}, lip{"lipschitz", {}, {}}, besov{"besov", {}, {}};
    const auto push = [&](const StepDiagnostics& d) {
      for (auto* s : {&linf, &lip, &besov}) s->x.push_back(d.t);
      linf.y.push_back(d.linf);
      lip.y.push_back(d.lipschitz);
      besov.y.push_back(d.besov);
    };
    push(result->initial);
    for (const auto& d : result->diagnostics) push(d);
    maybe_chart(out, cfg, "norms.svg", "solution norms", "t", "norm", {linf, lip, besov}, false);
  }
  return out.finish();
}

int run_approx(const RunConfig& cfg) {
  const OracleConstants oracle = load_oracle_constants(oracle_path(cfg));
  RunOutput out(cfg);
  out.record_oracle(oracle);
  const auto t0 = std::chrono::steady_clock::now();
  const LemmaReport rep = run_approx_suite(cfg.experiment(), oracle);
  out.record_time("approx_suite", seconds_since(t0));
  out.record_grids(rep.grids);
  for (const auto& [k, v] : rep.constants) out.record_constant(k, v);
  if (!rep.complete) out.record_failure(rep.failure);
  write_checks(out, "approx.csv", "approx", rep.rows);
  maybe_chart(out, cfg, "approx.svg", "B^s distance to the data", "t", "log10 norm",
              series_by_n(rep.rows, "err_besov"), true);
  return out.finish();
}

int run_gap_command(const RunConfig& cfg) {
  const OracleConstants oracle = load_oracle_constants(oracle_path(cfg));
  RunOutput out(cfg);
  out.record_oracle(oracle);
  const auto t0 = std::chrono::steady_clock::now();
  const GapReport rep = run_gap(cfg.experiment(), oracle);
  out.record_time("gap", seconds_since(t0));
  out.record_grids(rep.grids);
  if (!rep.complete) out.record_failure(rep.failure);
  if (const auto c0 = oracle.separation_constant(cfg.kind, cfg.idx)) out.record_constant("separation_c0", *c0);
  for (const auto& [n, e] : rep.composite) out.record_constant("composite_n" + std::to_string(n), e);
  {
    auto csv = out.open("gap_cells.csv");
    write_gap_cells_csv(csv, rep);
  }
  const std::string suite = cfg.kind == EquationKind::CamassaHolm ? "gap" : "novikov_gap";
  write_checks(out, "checks.csv", suite, rep.checks);

  if (cfg.svg) {
    std::map<int, SvgSeries> by_n;
    SvgSeries low{"low_norm", {}, {}};
    for (const auto& c : rep.cells) {
      if (low.x.empty() || low.x.back() != c.n) {
        low.x.push_back(c.n);
        low.y.push_back(c.low_norm);
      }
      if (c.t <= 0.0) continue;
      auto& s = by_n[c.n];
      s.label = "n=" + std::to_string(c.n);
      s.x.push_back(c.t);
      s.y.push_back(c.sep_over_t);
    }
    std::vector<SvgSeries> sep;
    for (auto& [n, s] : by_n) sep.push_back(std::move(s));
    maybe_chart(out, cfg, "sep_over_t.svg", "separation over t", "t", "sep/t", sep, false);
    maybe_chart(out, cfg, "low_norm.svg", "low-frequency data norm", "n", "log10 norm", {low}, true);
  }
  return out.finish();
}

int run_report(const RunConfig& cfg) {
  struct Entry {
    std::string input, command, status, failures;
    std::int64_t total = 0, failed = 0;
  };
  std::vector<Entry> entries;
  for (const auto& in : cfg.inputs) {
    std::ifstream f(in / "manifest.json");
    if (!f) throw NotFoundError("no manifest.json in " + in.string());
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError((in / "manifest.json").string() + ": " + e.what());
    }
    Entry e;
    e.input = in.lexically_normal().string();
    e.command = j.value("command", "");
    e.status = j.value("status", "fail");
    if (j.contains("checks")) {
      e.total = j["checks"].value("total", std::int64_t{0});
      e.failed = j["checks"].value("failed", std::int64_t{0});
    }
    for (const auto& list : {"failed_checks", "failures"}) {
      for (const auto& s : j.value(list, nlohmann::json::array())) {
        e.failures += (e.failures.empty() ? "" : "; ") + s.get<std::string>();
      }
    }
    entries.push_back(std::move(e));
  }

  RunOutput out(cfg);
  {
    auto csv = out.open("report.csv");
    CsvWriter w(csv, "besovlab.report.v1", {"input", "command", "status", "checks_total", "checks_failed", "failures"});
    for (const auto& e : entries) w.row(std::vector<CsvValue>{e.input, e.command, e.status, e.total, e.failed, e.failures});
  }
  for (const auto& e : entries) {
    if (e.status != "pass") out.record_failure(e.input + " (" + e.command + ") did not pass");
  }
  return out.finish();
}

}  // namespace besovlab::cli
