#pragma once

#include <besovlab/config.hpp>
#include <besovlab/experiments.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace besovlab::cli {

/// One command's output directory: files, check tally and manifest.json.
class RunOutput {
 public:
  explicit RunOutput(const RunConfig& cfg);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  /// Opens <dir>/<name> for writing and records it in the manifest.
  std::ofstream open(const std::string& name, bool binary = false);
  std::filesystem::path reserve(const std::string& name);

  void record_checks(const std::string& suite, const std::vector<ReportRow>& rows);
  void record_grids(const std::vector<GridInfo>& grids);
  void record_grid(int n, const Grid& grid);
  void record_oracle(const OracleConstants& oracle);
  void record_constant(const std::string& name, double value);
  void record_failure(const std::string& what);
  void record_time(const std::string& stage, double seconds);

  bool passed() const noexcept { return failed_ == 0 && failures_.empty(); }
  /// Writes manifest.json and returns the exit code.
  int finish();

 private:
  RunConfig cfg_;
  std::filesystem::path dir_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> outputs_;
  std::vector<GridInfo> grids_;
  std::string oracle_file_;
  std::string oracle_sha_;
  std::map<std::string, double> constants_;
  std::vector<std::pair<std::string, double>> times_;
  std::vector<std::string> failed_checks_;
  std::vector<std::string> failures_;
  std::size_t total_ = 0;
  std::size_t failed_ = 0;
};

/// Seconds elapsed since `t0`.
double seconds_since(std::chrono::steady_clock::time_point t0);

}  // namespace besovlab::cli
