#include "output.hpp"

#include <besovlab/errors.hpp>
#include <besovlab/report_io.hpp>

#include <nlohmann/json.hpp>

#include <cmath>

#include "cli.hpp"

namespace besovlab::cli {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunOutput::RunOutput(const RunConfig& cfg)
    : cfg_(cfg), dir_(cfg.output_dir), start_(std::chrono::steady_clock::now()) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw NotFoundError("cannot create output directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path RunOutput::reserve(const std::string& name) {
  const auto path = dir_ / name;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  outputs_.push_back(name);
  return path;
}

std::ofstream RunOutput::open(const std::string& name, bool binary) {
  const auto path = reserve(name);
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw NotFoundError("cannot write " + path.string());
  return out;
}

void RunOutput::record_checks(const std::string& suite, const std::vector<ReportRow>& rows) {
  for (const auto& r : rows) {
    ++total_;
    if (r.pass) continue;
    ++failed_;
    std::string id = suite + "/" + r.check;
    if (r.key.n) id += " n=" + std::to_string(*r.key.n);
    if (r.key.t) id += " t=" + format_double(*r.key.t);
    failed_checks_.push_back(id);
  }
}

void RunOutput::record_grids(const std::vector<GridInfo>& grids) { grids_.insert(grids_.end(), grids.begin(), grids.end()); }

void RunOutput::record_grid(int n, const Grid& grid) { grids_.push_back({n, grid.half_length(), grid.size()}); }

void RunOutput::record_oracle(const OracleConstants& oracle) {
  oracle_file_ = oracle.source.string();
  oracle_sha_ = oracle.sha256;
}

void RunOutput::record_constant(const std::string& name, double value) { constants_[name] = value; }

void RunOutput::record_failure(const std::string& what) { failures_.push_back(what); }

void RunOutput::record_time(const std::string& stage, double seconds) { times_.emplace_back(stage, seconds); }

int RunOutput::finish() {
  nlohmann::ordered_json j;
  j["schema"] = "besovlab.manifest.v1";
  j["version"] = BESOVLAB_VERSION;
  j["command"] = cfg_.command;
  j["config"] = nlohmann::ordered_json::parse(config_to_json(cfg_));
  auto& grids = j["grids"] = nlohmann::ordered_json::array();
  for (const auto& g : grids_) grids.push_back({{"n", g.n}, {"L", g.half_length}, {"N", g.points}});
  if (!oracle_file_.empty()) {
    j["oracle"] = {{"file", oracle_file_}, {"sha256", oracle_sha_}};
  } else {
    j["oracle"] = nullptr;
  }
  auto& constants = j["constants"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : constants_) constants[k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
  auto& times = j["wall_time_s"] = nlohmann::ordered_json::object();
  for (const auto& [stage, s] : times_) times[stage] = s;
  times["total"] = seconds_since(start_);
  j["outputs"] = outputs_;
  j["checks"] = {{"total", total_}, {"failed", failed_}};
  j["failed_checks"] = failed_checks_;
  j["failures"] = failures_;
  j["status"] = passed() ? "pass" : "fail";

  std::ofstream out(dir_ / "manifest.json");
  out << j.dump(2) << "\n";
  if (!out) throw NotFoundError("cannot write manifest in " + dir_.string());
  return passed() ? kExitPass : kExitFail;
}

}  // namespace besovlab::cli
