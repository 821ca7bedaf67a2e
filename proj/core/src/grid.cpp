#include "besovlab/grid.hpp"

#include <cmath>
#include <string>

#include "besovlab/errors.hpp"

namespace besovlab {

Grid::Grid(double half_length, std::size_t points)
    : half_length_(half_length), points_(points), spacing_(0.0) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw InvalidArgument("grid half-length must be positive and finite, got " + std::to_string(half_length));
  }
  if (points < 16 || points % 2 != 0) {
    throw InvalidArgument("grid point count must be even and >= 16, got " + std::to_string(points));
  }
  spacing_ = 2.0 * half_length / static_cast<double>(points);
}

Grid make_grid(double half_length, long long points) {
  if (points <= 0) throw InvalidArgument("grid point count must be positive, got " + std::to_string(points));
  return Grid(half_length, static_cast<std::size_t>(points));
}

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (!(a == b)) {
    throw InvalidArgument(std::string(context) + ": operands live on different grids (L=" +
                          std::to_string(a.half_length()) + ", N=" + std::to_string(a.size()) + " vs L=" +
                          std::to_string(b.half_length()) + ", N=" + std::to_string(b.size()) + ")");
  }
}

}  // namespace besovlab
