#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "besovlab/fft.hpp"
#include "besovlab/grid.hpp"

namespace besovlab {

/// Real samples of a function on a Grid. Immutable once constructed; every
/// constructor rejects non-finite samples.
class Field {
 public:
  Field(Grid grid, RealBuffer values);

  static Field zeros(const Grid& grid);
  static Field constant(const Grid& grid, double value);

  template <class Fn>
  static Field sample(const Grid& grid, Fn&& fn) {
    RealBuffer values(grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = fn(grid.x(i));
    return Field(grid, std::move(values));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  Grid grid_;
  RealBuffer values_;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double c, const Field& a);

/// Pointwise (physical-space) product. No dealiasing.
Field pointwise_product(const Field& a, const Field& b);

/// Cyclic shift by `offset` grid points: result[i] = f[i - offset].
Field shift(const Field& f, long long offset);

double max_abs(const Field& f);
double max_abs_difference(const Field& a, const Field& b);
double mean(const Field& f);

}  // namespace besovlab
