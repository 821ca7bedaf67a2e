#include "besovlab/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "besovlab/errors.hpp"
#include "besovlab/families.hpp"

namespace besovlab {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "command", "kind",     "s",         "p",        "r",        "sigma",      "n",      "t",      "tail_tol",
      "mode",    "refinement", "threads", "output_dir", "oracle_file", "svg",    "T",      "dt_mode", "dt",
      "cfl",     "snapshots", "initial",  "constant", "amplitude", "family_n",  "L",      "N",      "inputs"};
  return keys;
}

template <class T>
T field(const json& j, const std::string& key, const std::string& origin) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(origin + ": field '" + key + "' has the wrong type (" + e.what() + ")");
  }
}

double parse_number_or_inf(const json& v, const std::string& key, const std::string& origin) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return std::numeric_limits<double>::infinity();
    throw ParseError(origin + ": field '" + key + "' must be a number or \"inf\"");
  }
  if (!v.is_number()) throw ParseError(origin + ": field '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

InitialData parse_initial_data(const std::string& text) {
  if (text == "family") return InitialData::Family;
  if (text == "family-high") return InitialData::FamilyHigh;
  if (text == "constant") return InitialData::Constant;
  if (text == "bump") return InitialData::Bump;
  if (text == "sine") return InitialData::Sine;
  throw InvalidArgument("unknown initial data '" + text + "' (expected family, family-high, constant, bump, sine)");
}

std::string_view to_string(InitialData d) noexcept {
  switch (d) {
    case InitialData::Family: return "family";
    case InitialData::FamilyHigh: return "family-high";
    case InitialData::Constant: return "constant";
    case InitialData::Bump: return "bump";
    case InitialData::Sine: return "sine";
  }
  return "family";
}

std::string_view to_string(RunMode m) noexcept { return m == RunMode::Large ? "large" : "default"; }

std::vector<int> RunConfig::resolved_n_list() const {
  if (n_list) return *n_list;
  if (mode == RunMode::Large) return {3, 4, 5, 6, 7};
  return {3, 4, 5, 6};
}

std::size_t RunConfig::grid_cap() const { return mode == RunMode::Large ? kLargeGridCap : kDefaultGridCap; }

ExperimentConfig RunConfig::experiment() const {
  ExperimentConfig e;
  e.kind = kind;
  e.idx = idx;
  e.n_list = resolved_n_list();
  e.t_list = t_list;
  e.tail_tol = tail_tol;
  e.grid_cap = grid_cap();
  e.refinement = refinement;
  e.cfl = cfl;
  e.threads = threads;
  return e;
}

SolveConfig RunConfig::solve_config() const {
  SolveConfig sc;
  sc.final_time = final_time;
  sc.step_mode = step_mode;
  sc.fixed_dt = fixed_dt;
  sc.cfl = cfl;
  sc.snapshot_times = snapshots;
  if (sc.snapshot_times.empty() || sc.snapshot_times.back() != final_time) sc.snapshot_times.push_back(final_time);
  return sc;
}

void RunConfig::validate() const {
  if (std::isinf(idx.r)) {
    throw UnsupportedConfiguration(
        "r=∞ out of scope: only 1 <= r < inf is supported (the sup functional is used internally for lower bounds)");
  }
  idx.require_theorem_regime();
  if (idx.sigma && !std::isfinite(*idx.sigma)) throw InvalidArgument("sigma must be finite");
  const auto ns = resolved_n_list();
  if (ns.empty()) throw InvalidArgument("n list must not be empty");
  for (int n : ns) {
    if (n < 3) throw InvalidArgument("every n must be at least 3 (carrier must sit inside the annulus plateau)");
  }
  if (!(tail_tol > 0.0 && tail_tol <= 1e-6)) throw InvalidArgument("tail_tol must lie in (0, 1e-6]");
  if (refinement == 0 || (refinement & (refinement - 1)) != 0) throw InvalidArgument("refinement must be a power of two");
  if (command == "solve") {
    solve_config().validate();
    if (initial == InitialData::Family || initial == InitialData::FamilyHigh) {
      if (family_n < 3) throw InvalidArgument("family_n must be at least 3");
    } else {
      if (!(half_length > 0.0) || points < 16 || points % 2 != 0) {
        throw InvalidArgument("solve grid needs L > 0 and an even N >= 16");
      }
    }
  } else if (command == "gap" || command == "novikov-gap" || command == "approx") {
    experiment().validate();
  } else if (command == "report") {
    if (inputs.empty()) throw InvalidArgument("report needs at least one input directory");
  }
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.what() carries "line L, column C".
    throw ParseError(origin + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(origin + ": top level must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known_keys().count(key)) throw ParseError(origin + ": unknown field '" + key + "'");
  }
  RunConfig c;
  if (j.contains("command")) c.command = field<std::string>(j, "command", origin);
  if (j.contains("kind")) c.kind = parse_equation_kind(field<std::string>(j, "kind", origin));
  if (j.contains("s")) c.idx.s = field<double>(j, "s", origin);
  if (j.contains("p")) c.idx.p = parse_number_or_inf(j["p"], "p", origin);
  if (j.contains("r")) c.idx.r = parse_number_or_inf(j["r"], "r", origin);
  if (j.contains("sigma")) c.idx.sigma = field<double>(j, "sigma", origin);
  if (j.contains("n")) c.n_list = field<std::vector<int>>(j, "n", origin);
  if (j.contains("t")) c.t_list = field<std::vector<double>>(j, "t", origin);
  if (j.contains("tail_tol")) c.tail_tol = field<double>(j, "tail_tol", origin);
  if (j.contains("mode")) {
    const auto m = field<std::string>(j, "mode", origin);
    if (m == "default") c.mode = RunMode::Default;
    else if (m == "large") c.mode = RunMode::Large;
    else throw ParseError(origin + ": field 'mode' must be \"default\" or \"large\"");
  }
  if (j.contains("refinement")) c.refinement = field<std::size_t>(j, "refinement", origin);
  if (j.contains("threads")) c.threads = field<unsigned>(j, "threads", origin);
  if (j.contains("output_dir")) c.output_dir = field<std::string>(j, "output_dir", origin);
  if (j.contains("oracle_file")) c.oracle_file = field<std::string>(j, "oracle_file", origin);
  if (j.contains("svg")) c.svg = field<bool>(j, "svg", origin);
  if (j.contains("T")) c.final_time = field<double>(j, "T", origin);
  if (j.contains("dt_mode")) {
    const auto m = field<std::string>(j, "dt_mode", origin);
    if (m == "cfl") c.step_mode = StepMode::Cfl;
    else if (m == "fixed") c.step_mode = StepMode::Fixed;
    else throw ParseError(origin + ": field 'dt_mode' must be \"cfl\" or \"fixed\"");
  }
  if (j.contains("dt")) {
    c.fixed_dt = field<double>(j, "dt", origin);
    if (!j.contains("dt_mode")) c.step_mode = StepMode::Fixed;
  }
  if (j.contains("cfl")) c.cfl = field<double>(j, "cfl", origin);
  if (j.contains("snapshots")) c.snapshots = field<std::vector<double>>(j, "snapshots", origin);
  if (j.contains("initial")) c.initial = parse_initial_data(field<std::string>(j, "initial", origin));
  if (j.contains("constant")) {
    c.constant = field<double>(j, "constant", origin);
    if (!j.contains("initial")) c.initial = InitialData::Constant;
  }
  if (j.contains("amplitude")) c.amplitude = field<double>(j, "amplitude", origin);
  if (j.contains("family_n")) c.family_n = field<int>(j, "family_n", origin);
  if (j.contains("L")) c.half_length = field<double>(j, "L", origin);
  if (j.contains("N")) c.points = field<std::size_t>(j, "N", origin);
  if (j.contains("inputs")) {
    for (const auto& s : field<std::vector<std::string>>(j, "inputs", origin)) c.inputs.emplace_back(s);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("config file not found: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

std::string config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["kind"] = std::string(to_string(c.kind));
  j["s"] = c.idx.s;
  j["p"] = c.idx.p;
  j["r"] = c.idx.r;
  if (c.idx.sigma) j["sigma"] = *c.idx.sigma;
  j["n"] = c.resolved_n_list();
  j["t"] = c.t_list;
  j["tail_tol"] = c.tail_tol;
  j["mode"] = std::string(to_string(c.mode));
  j["refinement"] = c.refinement;
  j["output_dir"] = c.output_dir.string();
  if (c.command == "solve") {
    j["T"] = c.final_time;
    j["dt_mode"] = c.step_mode == StepMode::Cfl ? "cfl" : "fixed";
    j["dt"] = c.fixed_dt;
    j["cfl"] = c.cfl;
    j["snapshots"] = c.snapshots;
    j["initial"] = std::string(to_string(c.initial));
    j["constant"] = c.constant;
    j["amplitude"] = c.amplitude;
    j["family_n"] = c.family_n;
    j["L"] = c.half_length;
    j["N"] = c.points;
  }
  if (!c.inputs.empty()) {
    std::vector<std::string> in;
    for (const auto& p : c.inputs) in.push_back(p.string());
    j["inputs"] = in;
  }
  return j.dump(2);
}

}  // namespace besovlab
