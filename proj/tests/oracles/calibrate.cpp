// Produces data/oracle_constants.json.
//
//   besovlab-calibrate [output.json]
//
// Oscillation limits come from the quadrature oracle. Separation, a-priori
// and drift-law constants come from the experiment pipeline run at twice the
// recommended resolution, over the family cells and the smooth corpus.

#include <besovlab/cutoffs.hpp>
#include <besovlab/experiments.hpp>
#include <besovlab/integrator.hpp>
#include <besovlab/report_io.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include "corpus.hpp"
#include "oracles.hpp"

namespace bl = besovlab;

namespace {

struct Corpus {
  double c1 = 0.0;
  double c2 = 0.0;
  double drift_ch = 0.0;
  double drift_novikov = 0.0;

  void drift(bl::EquationKind kind, double v) {
    double& slot = kind == bl::EquationKind::CamassaHolm ? drift_ch : drift_novikov;
    slot = std::max(slot, v);
  }
};

double max_measured(const std::vector<bl::ReportRow>& rows, const std::string& check) {
  double m = 0.0;
  for (const auto& r : rows) {
    if (r.check == check && std::isfinite(r.measured)) m = std::max(m, r.measured);
  }
  return m;
}

void log(const std::string& what, std::chrono::steady_clock::time_point t0) {
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "[" << bl::format_double(std::round(s * 10) / 10) << "s] " << what << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_path = argc > 1 ? argv[1] : "oracle_constants.json";
  const auto t0 = std::chrono::steady_clock::now();
  nlohmann::ordered_json j;

  for (double p : {1.0, 2.0}) {
    j["oscillation_limit"][bl::format_double(p)] = oracle::oscillation_limit(2, p);
    j["cubic_oscillation_limit"][bl::format_double(p)] = oracle::oscillation_limit(3, p);
    log("oscillation p=" + bl::format_double(p), t0);
  }

  Corpus corpus;
  const bl::OracleConstants empty;
  for (double s : {1.2, 2.0}) {
    for (auto kind : {bl::EquationKind::CamassaHolm, bl::EquationKind::Novikov}) {
      bl::ExperimentConfig cfg;
      cfg.kind = kind;
      cfg.idx.s = s;
      cfg.refinement = 2;
      cfg.grid_cap = bl::kLargeGridCap;
      cfg.threads = 1;
      const bl::GapReport gap = bl::run_gap(cfg, empty);
      // The missing separation constant is what this run produces; only missing cells are fatal.
      if (gap.cells.size() != cfg.n_list.size() * cfg.t_list.size()) {
        std::cerr << "calibration gap run failed: " << gap.failure << "\n";
        return 1;
      }
      double c0 = std::numeric_limits<double>::infinity();
      for (const auto& c : gap.cells) {
        if (c.t > 0.0) c0 = std::min(c0, c.sep_over_t);
      }
      const std::string key = std::string(bl::to_string(kind)) + ":" + bl::index_key(cfg.idx);
      j["separation"][key] = c0;
      corpus.c1 = std::max(corpus.c1, max_measured(gap.checks, "apriori_c1"));
      corpus.c2 = std::max(corpus.c2, max_measured(gap.checks, "apriori_c2"));
      corpus.drift(kind, max_measured(gap.checks, "drift_law"));
      log("gap " + key, t0);

      if (s == 1.2) {
        const bl::LemmaReport approx = bl::run_approx_suite(cfg, empty);
        if (!approx.complete) {
          std::cerr << "calibration approx run failed: " << approx.failure << "\n";
          return 1;
        }
        corpus.drift(kind, max_measured(approx.rows, "drift_law"));
        log("approx " + std::string(bl::to_string(kind)), t0);
      }
    }
  }

  const bl::Grid grid = corpus::smooth_grid();
  const bl::CutoffSystem cs = bl::build_cutoffs(grid);
  const bl::BesovIndex idx;
  for (const auto& c : corpus::smooth_cases()) {
    const bl::Field u0 = corpus::smooth_data(c, grid);
    const bl::SolveResult r = bl::solve(c.kind, u0, corpus::smooth_solve_config(), cs, idx);
    const bl::AprioriMonitor mon = bl::apriori_monitor(r);
    corpus.c1 = std::max(corpus.c1, mon.c1);
    corpus.c2 = std::max(corpus.c2, mon.c2);
    corpus.drift(c.kind, bl::linf_drift_ratio(u0, r));
    log("smooth " + c.name, t0);
  }

  j["apriori"]["c1"] = corpus.c1;
  j["apriori"]["c2"] = corpus.c2;
  j["drift_law"]["ch"] = corpus.drift_ch;
  j["drift_law"]["novikov"] = corpus.drift_novikov;

  std::ofstream out(out_path);
  out << j.dump(2) << "\n";
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return 1;
  }
  log("wrote " + out_path, t0);
  return 0;
}
