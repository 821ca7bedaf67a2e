#include "besovlab/regression.hpp"

#include <cmath>
#include <vector>

#include "besovlab/errors.hpp"

namespace besovlab {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("fit: x and y differ in length");
  if (x.size() < 2) throw InvalidArgument("fit: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit: abscissae are all equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

LineFit fit_log2_rate(std::span<const double> x, std::span<const double> y) {
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) throw InvalidArgument("fit: log-rate needs positive values");
    ly[i] = std::log2(y[i]);
  }
  return fit_line(x, ly);
}

LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw InvalidArgument("fit: log-log needs positive abscissae");
    lx[i] = std::log(x[i]);
  }
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) throw InvalidArgument("fit: log-log needs positive values");
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

}  // namespace besovlab
