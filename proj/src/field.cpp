#include "nsmlimit/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nsmlimit/errors.hpp"

namespace nsmlimit {

ScalarField::ScalarField(const Grid& grid, double value) : grid_(grid), values_(grid.size(), value) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw GridMismatch();
}

ScalarField ScalarField::sample(const Grid& grid, const std::function<double(double, double, double)>& f) {
  ScalarField out(grid);
  const auto s = grid.shape();
  std::size_t idx = 0;
  for (int i = 0; i < s[0]; ++i)
    for (int j = 0; j < s[1]; ++j)
      for (int k = 0; k < s[2]; ++k) out.values_[idx++] = f(grid.coordinate(i), grid.coordinate(j), grid.coordinate(k));
  return out;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double ScalarField::integral() const { return mean() * grid_.volume(); }

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw GridMismatch();
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw GridMismatch();
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw GridMismatch();
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator/(ScalarField a, const ScalarField& b) {
  if (!(a.grid_ == b.grid_)) throw GridMismatch();
  for (std::size_t i = 0; i < a.values_.size(); ++i) a.values_[i] /= b.values_[i];
  return a;
}

ScalarField ScalarField::map(const std::function<double(double)>& f) const {
  ScalarField out = *this;
  for (double& v : out.values_) v = f(v);
  return out;
}

VectorField::VectorField(ScalarField x, ScalarField y, ScalarField z) : c{std::move(x), std::move(y), std::move(z)} {
  if (!(c[0].grid() == c[1].grid()) || !(c[0].grid() == c[2].grid())) throw GridMismatch();
}

double VectorField::max_abs() const { return std::max({c[0].max_abs(), c[1].max_abs(), c[2].max_abs()}); }

bool VectorField::all_finite() const { return c[0].all_finite() && c[1].all_finite() && c[2].all_finite(); }

VectorField& VectorField::operator+=(const VectorField& o) {
  for (int i = 0; i < 3; ++i) c[i] += o.c[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& x : c) x *= s;
  return *this;
}

VectorField& VectorField::operator*=(const ScalarField& s) {
  for (auto& x : c) x *= s;
  return *this;
}

VectorField operator/(VectorField a, const ScalarField& s) {
  for (auto& x : a.c) x = x / s;
  return a;
}

ScalarField dot(const VectorField& a, const VectorField& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

VectorField cross(const VectorField& a, const VectorField& b) {
  return VectorField(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

ScalarField magnitude(const VectorField& a) {
  return dot(a, a).map([](double v) { return std::sqrt(v); });
}

double inner(const ScalarField& a, const ScalarField& b) { return (a * b).integral(); }

double inner(const VectorField& a, const VectorField& b) { return dot(a, b).integral(); }

double l2_norm(const ScalarField& a) { return std::sqrt(inner(a, a)); }

double l2_norm(const VectorField& a) { return std::sqrt(inner(a, a)); }

}  // namespace nsmlimit
