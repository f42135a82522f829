#pragma once

#include <array>
#include <functional>
#include <vector>

#include "nsmlimit/grid.hpp"

namespace nsmlimit {

/// Real samples of a scalar function on a Grid, stored row-major with the
/// z index fastest. Arithmetic is pointwise.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double value = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  /// Samples f(x, y, z) at the grid points; collapsed axes sit at coordinate 0.
  static ScalarField sample(const Grid& grid, const std::function<double(double, double, double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  double min() const;
  double max() const;
  double max_abs() const;
  double mean() const;
  /// ∫ f dx over the torus (rectangle rule, exact for band-limited f).
  double integral() const;
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(const ScalarField& o);
  ScalarField& operator*=(double s);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
  friend ScalarField operator*(ScalarField a, double s) { return a *= s; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }
  friend ScalarField operator-(ScalarField a) { return a *= -1.0; }

  /// Pointwise a / b.
  friend ScalarField operator/(ScalarField a, const ScalarField& b);
  ScalarField map(const std::function<double(double)>& f) const;

 private:
  Grid grid_{};
  std::vector<double> values_;
};

/// Three-component vector field; all components share one grid.
struct VectorField {
  std::array<ScalarField, 3> c;

  VectorField() = default;
  explicit VectorField(const Grid& grid) : c{ScalarField(grid), ScalarField(grid), ScalarField(grid)} {}
  VectorField(ScalarField x, ScalarField y, ScalarField z);

  const Grid& grid() const noexcept { return c[0].grid(); }
  ScalarField& operator[](int i) noexcept { return c[i]; }
  const ScalarField& operator[](int i) const noexcept { return c[i]; }

  double max_abs() const;
  bool all_finite() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  /// Multiply every component pointwise by a scalar field.
  VectorField& operator*=(const ScalarField& s);

  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(VectorField a, double s) { return a *= s; }
  friend VectorField operator*(double s, VectorField a) { return a *= s; }
  friend VectorField operator*(const ScalarField& s, VectorField a) { return a *= s; }
  friend VectorField operator*(VectorField a, const ScalarField& s) { return a *= s; }
  friend VectorField operator-(VectorField a) { return a *= -1.0; }
  friend VectorField operator/(VectorField a, const ScalarField& s);
};

ScalarField dot(const VectorField& a, const VectorField& b);
VectorField cross(const VectorField& a, const VectorField& b);
/// Pointwise Euclidean magnitude.
ScalarField magnitude(const VectorField& a);

/// Grid inner product ∫ a·b dx.
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);
double l2_norm(const ScalarField& a);
double l2_norm(const VectorField& a);

}  // namespace nsmlimit
