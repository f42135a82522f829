#pragma once

#include "nsmlimit/field.hpp"

namespace nsmlimit {

/// Unknowns of the κ-scaled two-fluid system. The current is carried as
/// J = κ·j̃ (the variable the error estimates are stated in); j̃ = J/κ.
struct FullState {
  ScalarField n;
  VectorField u;
  VectorField J;
  VectorField E;
  VectorField B;

  const Grid& grid() const { return n.grid(); }
  VectorField specific_current(double kappa) const { return J * (1.0 / kappa); }
  bool all_finite() const;

  FullState& operator+=(const FullState& o);
  FullState& operator*=(double s);
  friend FullState operator+(FullState a, const FullState& b) { return a += b; }
  friend FullState operator*(double s, FullState a) { return a *= s; }
};

/// Unknowns of the one-fluid compressible Navier-Stokes limit.
struct LimitState {
  ScalarField n0;
  VectorField u0;

  const Grid& grid() const { return n0.grid(); }
  bool all_finite() const;

  LimitState& operator+=(const LimitState& o);
  LimitState& operator*=(double s);
  friend LimitState operator+(LimitState a, const LimitState& b) { return a += b; }
  friend LimitState operator*(double s, LimitState a) { return a *= s; }
};

/// Unknowns of the unscaled two-fluid system: common density, electron and
/// ion velocities, and the (unscaled) electromagnetic field.
struct TwoFluidState {
  ScalarField n;
  VectorField ue;
  VectorField ui;
  VectorField E;
  VectorField B;

  const Grid& grid() const { return n.grid(); }
};

}  // namespace nsmlimit
