#include "besovlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "besovlab/errors.hpp"

namespace besovlab {

Field::Field(Grid grid, RealBuffer values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("field has " + std::to_string(values_.size()) + " samples but grid has " +
                          std::to_string(grid_.size()) + " points");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidArgument("field sample " + std::to_string(i) + " is not finite");
    }
  }
}

Field Field::zeros(const Grid& grid) { return Field(grid, RealBuffer(grid.size(), 0.0)); }

Field Field::constant(const Grid& grid, double value) { return Field(grid, RealBuffer(grid.size(), value)); }

namespace {

template <class Op>
Field combine(const Field& a, const Field& b, const char* context, Op op) {
  require_same_grid(a.grid(), b.grid(), context);
  RealBuffer out(a.size());
  const auto x = a.values();
  const auto y = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(x[i], y[i]);
  return Field(a.grid(), std::move(out));
}

}  // namespace

Field operator+(const Field& a, const Field& b) {
  return combine(a, b, "field addition", [](double x, double y) { return x + y; });
}

Field operator-(const Field& a, const Field& b) {
  return combine(a, b, "field subtraction", [](double x, double y) { return x - y; });
}

Field operator*(double c, const Field& a) {
  RealBuffer out(a.size());
  const auto x = a.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * x[i];
  return Field(a.grid(), std::move(out));
}

Field pointwise_product(const Field& a, const Field& b) {
  return combine(a, b, "pointwise product", [](double x, double y) { return x * y; });
}

Field shift(const Field& f, long long offset) {
  const auto n = static_cast<long long>(f.size());
  const long long s = ((offset % n) + n) % n;
  RealBuffer out(f.size());
  const auto x = f.values();
  for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>((i + s) % n)] = x[static_cast<std::size_t>(i)];
  return Field(f.grid(), std::move(out));
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_difference(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "max_abs_difference");
  double m = 0.0;
  const auto x = a.values();
  const auto y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

double mean(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s / static_cast<double>(f.size());
}

}  // namespace besovlab
