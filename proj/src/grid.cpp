#include "nsmlimit/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nsmlimit {

void Grid::validate() const {
  if (dims < 1 || dims > 3) throw std::invalid_argument("grid dims must be 1, 2 or 3");
  if (points < 8 || (points & (points - 1)) != 0)
    throw std::invalid_argument("grid points must be a power of two >= 8, got " + std::to_string(points));
  if (!(period > 0.0) || !std::isfinite(period)) throw std::invalid_argument("grid period must be positive");
}

std::size_t Grid::size() const noexcept {
  std::size_t n = 1;
  for (int a = 0; a < dims; ++a) n *= static_cast<std::size_t>(points);
  return n;
}

double Grid::volume() const noexcept { return std::pow(period, dims); }

double Grid::k0() const noexcept { return 2.0 * std::numbers::pi / period; }

}  // namespace nsmlimit
