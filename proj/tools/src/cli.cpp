#include "cli.hpp"

#include <besovlab/config.hpp>
#include <besovlab/errors.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "commands.hpp"

namespace besovlab::cli {

namespace {

using Setter = std::function<void(RunConfig&)>;

double parse_real(const std::string& text, const std::string& name) {
  if (text == "inf" || text == "infinity" || text == "Infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw InvalidArgument("--" + name + " expects a number or inf, got '" + text + "'");
  return v;
}

struct Flags {
  std::vector<Setter> setters;
  std::string config_path;
  bool dt_given = false;
  bool dt_mode_given = false;
  bool constant_given = false;
  bool initial_given = false;
  bool export_fields = false;

  template <class T, class Fn>
  CLI::Option* add(CLI::App* sub, const std::string& name, const std::string& help, Fn set) {
    return sub->add_option_function<T>(
        name, [this, set](const T& v) { setters.push_back([set, v](RunConfig& c) { set(c, v); }); }, help);
  }
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON config file; flags override its values");
  f.add<std::string>(sub, "--out", "output directory", [](RunConfig& c, const std::string& v) { c.output_dir = v; });
  f.add<unsigned>(sub, "--threads", "worker threads (0: all cores, capped by BESOVLAB_THREADS)",
                  [](RunConfig& c, unsigned v) { c.threads = v; });
  sub->add_flag_callback("--no-svg", [&f] { f.setters.push_back([](RunConfig& c) { c.svg = false; }); },
                         "skip SVG charts");
}

void add_oracle(CLI::App* sub, Flags& f) {
  f.add<std::string>(sub, "--oracle", "oracle constants file", [](RunConfig& c, const std::string& v) { c.oracle_file = v; });
}

void add_kind(CLI::App* sub, Flags& f) {
  f.add<std::string>(sub, "--kind", "equation: ch or novikov",
                     [](RunConfig& c, const std::string& v) { c.kind = parse_equation_kind(v); });
}

void add_index(CLI::App* sub, Flags& f) {
  f.add<double>(sub, "--s", "regularity s (> 1)", [](RunConfig& c, double v) { c.idx.s = v; });
  f.add<std::string>(sub, "--p", "integrability p in [1, inf)",
                     [](RunConfig& c, const std::string& v) { c.idx.p = parse_real(v, "p"); });
  f.add<std::string>(sub, "--r", "summability r in [1, inf)",
                     [](RunConfig& c, const std::string& v) { c.idx.r = parse_real(v, "r"); });
  f.add<double>(sub, "--sigma", "auxiliary regularity for the low-data norms (default s + 1)",
                [](RunConfig& c, double v) { c.idx.sigma = v; });
}

void add_sweep(CLI::App* sub, Flags& f, bool with_t) {
  f.add<std::vector<int>>(sub, "--n", "comma-separated n values", [](RunConfig& c, const std::vector<int>& v) {
     c.n_list = v;
   })->delimiter(',');
  if (with_t) {
    f.add<std::vector<double>>(sub, "--t", "comma-separated snapshot times",
                               [](RunConfig& c, const std::vector<double>& v) { c.t_list = v; })
        ->delimiter(',');
  }
  f.add<double>(sub, "--tail-tol", "envelope tail tolerance for grid sizing", [](RunConfig& c, double v) { c.tail_tol = v; });
  f.add<std::string>(sub, "--mode", "default or large", [](RunConfig& c, const std::string& v) {
    if (v == "default") c.mode = RunMode::Default;
    else if (v == "large") c.mode = RunMode::Large;
    else throw InvalidArgument("--mode must be default or large");
  });
  f.add<std::size_t>(sub, "--refinement", "multiply the recommended N (power of two)",
                     [](RunConfig& c, std::size_t v) { c.refinement = v; });
}

void add_solve(CLI::App* sub, Flags& f) {
  f.add<double>(sub, "--T", "final time in (0, 1]", [](RunConfig& c, double v) { c.final_time = v; });
  f.add<std::string>(sub, "--dt-mode", "cfl or fixed", [&f](RunConfig& c, const std::string& v) {
    if (v == "cfl") c.step_mode = StepMode::Cfl;
    else if (v == "fixed") c.step_mode = StepMode::Fixed;
    else throw InvalidArgument("--dt-mode must be cfl or fixed");
  })->each([&f](const std::string&) { f.dt_mode_given = true; });
  f.add<double>(sub, "--dt", "fixed step (implies --dt-mode fixed)", [](RunConfig& c, double v) { c.fixed_dt = v; })
      ->each([&f](const std::string&) { f.dt_given = true; });
  f.add<double>(sub, "--cfl", "CFL number in (0, 1]", [](RunConfig& c, double v) { c.cfl = v; });
  f.add<std::vector<double>>(sub, "--snapshots", "comma-separated snapshot times",
                             [](RunConfig& c, const std::vector<double>& v) { c.snapshots = v; })
      ->delimiter(',');
  f.add<std::string>(sub, "--initial", "family, family-high, constant, bump or sine",
                     [](RunConfig& c, const std::string& v) { c.initial = parse_initial_data(v); })
      ->each([&f](const std::string&) { f.initial_given = true; });
  f.add<double>(sub, "--constant", "value of constant data (implies --initial constant)",
                [](RunConfig& c, double v) { c.constant = v; })
      ->each([&f](const std::string&) { f.constant_given = true; });
  f.add<double>(sub, "--amplitude", "amplitude of bump and sine data", [](RunConfig& c, double v) { c.amplitude = v; });
  f.add<int>(sub, "--family-n", "n of family data", [](RunConfig& c, int v) { c.family_n = v; });
  f.add<std::string>(sub, "--mode", "default or large (grid cap for family data)", [](RunConfig& c, const std::string& v) {
    if (v == "default") c.mode = RunMode::Default;
    else if (v == "large") c.mode = RunMode::Large;
    else throw InvalidArgument("--mode must be default or large");
  });
  f.add<double>(sub, "--tail-tol", "envelope tail tolerance for family grids", [](RunConfig& c, double v) { c.tail_tol = v; });
}

void add_grid(CLI::App* sub, Flags& f) {
  f.add<double>(sub, "--L", "half length of [-L, L)", [](RunConfig& c, double v) { c.half_length = v; });
  f.add<std::size_t>(sub, "--N", "grid points (even, >= 16)", [](RunConfig& c, std::size_t v) { c.points = v; });
}

int dispatch(const RunConfig& cfg, const Flags& f) {
  const std::string& c = cfg.command;
  if (c == "cutoffs") return run_cutoffs(cfg);
  if (c == "families") return run_families(cfg, f.export_fields);
  if (c == "lemmas") return run_lemmas(cfg);
  if (c == "solve") return run_solve(cfg);
  if (c == "approx") return run_approx(cfg);
  if (c == "gap" || c == "novikov-gap") return run_gap_command(cfg);
  if (c == "report") return run_report(cfg);
  throw InvalidArgument("unknown command " + c);
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Littlewood-Paley and Besov-norm experiments for the Camassa-Holm and Novikov equations", "besovlab"};
  app.set_version_flag("--version", BESOVLAB_VERSION);
  app.require_subcommand(1);
  Flags f;

  auto* cutoffs = app.add_subcommand("cutoffs", "tabulate the cutoff symbols and check the partition of unity");
  add_common(cutoffs, f);
  add_grid(cutoffs, f);

  auto* families = app.add_subcommand("families", "build the high/low frequency data and check their supports");
  add_common(families, f);
  add_kind(families, f);
  add_index(families, f);
  add_sweep(families, f, false);
  families->add_flag("--export", f.export_fields, "write every field as csv, f64 and a json sidecar");

  auto* lemmas = app.add_subcommand("lemmas", "oscillation limit and family rate suites");
  add_common(lemmas, f);
  add_oracle(lemmas, f);
  add_kind(lemmas, f);
  add_index(lemmas, f);
  add_sweep(lemmas, f, false);

  auto* solve = app.add_subcommand("solve", "integrate one trajectory and record diagnostics");
  add_common(solve, f);
  add_kind(solve, f);
  add_index(solve, f);
  add_solve(solve, f);
  add_grid(solve, f);

  auto* approx = app.add_subcommand("approx", "distance of S_t(f_n) to the data over an (n, t) grid");
  add_common(approx, f);
  add_oracle(approx, f);
  add_kind(approx, f);
  add_index(approx, f);
  add_sweep(approx, f, true);

  auto* gap = app.add_subcommand("gap", "non-uniform dependence experiment for Camassa-Holm");
  add_common(gap, f);
  add_oracle(gap, f);
  add_index(gap, f);
  add_sweep(gap, f, true);

  auto* novikov = app.add_subcommand("novikov-gap", "non-uniform dependence experiment for Novikov");
  add_common(novikov, f);
  add_oracle(novikov, f);
  add_index(novikov, f);
  add_sweep(novikov, f, true);

  auto* report = app.add_subcommand("report", "merge the manifests of earlier runs");
  report->add_option("--config", f.config_path, "JSON config file; flags override its values");
  f.add<std::string>(report, "--out", "output directory", [](RunConfig& c, const std::string& v) { c.output_dir = v; });
  f.add<std::vector<std::string>>(report, "inputs", "output directories of earlier runs",
                                  [](RunConfig& c, const std::vector<std::string>& v) {
                                    c.inputs.assign(v.begin(), v.end());
                                  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "besovlab: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.front()->help());
    return kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg = f.config_path.empty() ? RunConfig{} : load_config(f.config_path);
    cfg.command = command;
    for (const auto& set : f.setters) set(cfg);
    if (f.dt_given && !f.dt_mode_given) cfg.step_mode = StepMode::Fixed;
    if (f.constant_given && !f.initial_given) cfg.initial = InitialData::Constant;
    if (command == "gap") cfg.kind = EquationKind::CamassaHolm;
    if (command == "novikov-gap") cfg.kind = EquationKind::Novikov;
    preflight(cfg);
    return dispatch(cfg, f);
  } catch (const UnsupportedConfiguration& e) {
    std::cerr << "besovlab " << command << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceError& e) {
    std::cerr << "besovlab " << command << ": " << e.what() << " (limiting n = " << e.limiting_n() << ")\n";
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "besovlab " << command << ": invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "besovlab " << command << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const NotFoundError& e) {
    std::cerr << "besovlab " << command << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigurationError& e) {
    std::cerr << "besovlab " << command << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "besovlab " << command << ": " << e.what() << "\n";
    return kExitFail;
  }
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<std::string> storage = args;
  if (storage.empty() || storage.front().empty() || storage.front()[0] == '-' ||
      storage.front() != "besovlab") {
    storage.insert(storage.begin(), "besovlab");
  }
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  argv.push_back(nullptr);
  return cli_main(static_cast<int>(storage.size()), argv.data());
}

}  // namespace besovlab::cli
