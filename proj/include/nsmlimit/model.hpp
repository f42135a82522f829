#pragma once

#include "nsmlimit/params.hpp"
#include "nsmlimit/state.hpp"

namespace nsmlimit {

/// Pointwise P(n). Throws VacuumError when min n <= 0.
ScalarField pressure(const ScalarField& n, const PressureLaw& law);
/// h(ρ) = ∫₁^ρ P'(s)/s ds.
double enthalpy_h(double rho, const PressureLaw& law);

/// Σ_k ∂_k (n a_k b_i), with every flux component dealiased before the
/// divergence is taken.
VectorField flux_divergence(const ScalarField& n, const VectorField& a, const VectorField& b);

// -- conservative-form rates -------------------------------------------------

/// (∂t n, ∂t(nu), ∂t(nJ), ∂t E, ∂t B) of the κ-scaled system.
struct FullRates {
  ScalarField n;
  VectorField mom;
  VectorField cur;
  VectorField E;
  VectorField B;
};

/// (∂t n, ∂t(n u_e), ∂t(n u_i), ∂t E, ∂t B) of the unscaled two-fluid system.
struct TwoFluidRates {
  ScalarField n;
  VectorField mom_e;
  VectorField mom_i;
  VectorField E;
  VectorField B;
};

/// (∂t n, ∂t(nu), κ∂t(n j̃), ∂t E, ∂t B) of the reformulated system with
/// u = u_i + εu_e and j̃ = j/n, for arbitrary Maxwell scalings α, β.
struct ReformedRates {
  ScalarField n;
  VectorField mom;
  VectorField cur;
  VectorField E;
  VectorField B;
};

/// Throws VacuumError when min n <= 0 and ConstraintDrift when
/// ‖div E‖∞ or ‖div B‖∞ exceeds 1e-10·max(1, ‖E‖∞, ‖B‖∞).
void check_full_state(const FullState& s);

FullRates full_conservative_rates(const FullState& s, const Params& p);
/// Time derivative of the κ-scaled state in primitive variables (n, u, J, E, B).
FullState rhs_full(const FullState& s, const Params& p);

/// Time derivative of the limit system in primitive variables.
LimitState rhs_limit(const LimitState& s, const Params& p);

/// Maxwell scalings of the unscaled system: α = κ², β = α².
double maxwell_alpha(const Params& p);
double maxwell_beta(const Params& p);

TwoFluidRates twofluid_conservative_rates(const TwoFluidState& s, const Params& p);
/// Direct evaluation of the unscaled two-fluid system (P_e = εP, P_i = P).
TwoFluidState rhs_twofluid(const TwoFluidState& s, const Params& p);

ReformedRates reformed_rates(const ScalarField& n, const VectorField& u, const VectorField& jt, const VectorField& E,
                             const VectorField& B, const Params& p, double alpha, double beta);

/// Relative discrepancies between independent evaluations of the same
/// physics. All entries are nonnegative and should sit at roundoff.
struct ReformulationReport {
  // two-fluid balance laws combined vs. reformulated system (same scaling)
  double continuity = 0.0;
  double momentum = 0.0;
  double current = 0.0;
  double electric = 0.0;
  double magnetic = 0.0;
  // reformulated system with α=κ², β=α², E→κE, B→κ²B vs. the κ-scaled rates
  double scaled_continuity = 0.0;
  double scaled_momentum = 0.0;
  double scaled_current = 0.0;
  double scaled_electric = 0.0;
  double scaled_magnetic = 0.0;
  /// ‖div j‖ / ‖∇j‖: zero when electron and ion continuity agree.
  double current_divergence = 0.0;

  double max_residual() const;
};

ReformulationReport reformulation_check(const TwoFluidState& s, const Params& p);

/// Relative L2 discrepancy ‖a-b‖ / max(‖a‖, ‖b‖); zero when both vanish.
double relative_l2(const ScalarField& a, const ScalarField& b);
double relative_l2(const VectorField& a, const VectorField& b);

}  // namespace nsmlimit
