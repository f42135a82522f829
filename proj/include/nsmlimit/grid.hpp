#pragma once

#include <array>
#include <cstddef>

namespace nsmlimit {

/// Periodic torus discretization. The first `dims` axes carry `points`
/// samples each; the remaining axes are collapsed to a single point, so
/// fields keep three vector components while varying along 1-3 axes.
struct Grid {
  int dims = 1;
  int points = 64;
  double period = 6.283185307179586;

  /// Throws std::invalid_argument unless dims in {1,2,3}, points >= 8 is a
  /// power of two and period > 0.
  void validate() const;

  bool active(int axis) const noexcept { return axis >= 0 && axis < dims; }
  int extent(int axis) const noexcept { return active(axis) ? points : 1; }
  std::array<int, 3> shape() const noexcept { return {extent(0), extent(1), extent(2)}; }
  std::size_t size() const noexcept;
  double spacing() const noexcept { return period / points; }
  double volume() const noexcept;
  /// Fundamental wavenumber 2π/period.
  double k0() const noexcept;
  double coordinate(int index) const noexcept { return index * spacing(); }

  friend bool operator==(const Grid&, const Grid&) = default;
};

}  // namespace nsmlimit
