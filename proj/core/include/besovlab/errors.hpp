#pragma once

#include <stdexcept>
#include <string>

namespace besovlab {

/// Precondition violated by a caller-supplied value (odd N, grid mismatch, p < 1, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical configuration cannot satisfy a stated tolerance (grid too coarse, domain too short).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested configuration lies outside the supported scope (e.g. r = infinity).
class UnsupportedConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid sizing would exceed the configured point cap.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, int limiting_n)
      : std::runtime_error(what), limiting_n_(limiting_n) {}
  int limiting_n() const noexcept { return limiting_n_; }

 private:
  int limiting_n_;
};

/// Solution left the trusted regime: non-finite values or sup-norm growth beyond the guard.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double last_good_time)
      : std::runtime_error(what), last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

/// Spectrum not resolved by the grid (energy in the top third of modes).
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace besovlab
