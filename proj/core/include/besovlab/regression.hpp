#pragma once

#include <span>

namespace besovlab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line through (x_i, y_i). Throws InvalidArgument for fewer than two points.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Slope of log2(y) against x; y must be positive.
LineFit fit_log2_rate(std::span<const double> x, std::span<const double> y);

/// Slope of log(y) against log(x); both must be positive.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace besovlab
