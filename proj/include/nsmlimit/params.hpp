#pragma once

namespace nsmlimit {

/// γ-law pressure P(n) = A·n^γ.
struct PressureLaw {
  double amplitude = 1.0;
  double gamma = 5.0 / 3.0;

  double pressure(double n) const;
  double dpressure(double n) const;
  /// h(ρ) = ∫₁^ρ P'(s)/s ds in closed form. Throws VacuumError for ρ <= 0.
  double enthalpy(double rho) const;
  /// h'(ρ) = P'(ρ)/ρ.
  double denthalpy(double rho) const;

  void validate() const;
};

/// Physical and scaling constants of the two-fluid model.
struct Params {
  double kappa = 0.1;     ///< singular parameter κ
  double epsilon = 0.1;   ///< electron/ion mass ratio ε
  double mu = 0.1;        ///< shear viscosity
  double lambda = 0.0;    ///< second viscosity
  double tau = 1.0;       ///< ion-neutral collision time
  double eta = 1.0;       ///< thermal-energy measure
  double kappa_ei = 1.0;  ///< electron-ion collision strength
  double K_rate = 1.0;    ///< collision rate constant
  PressureLaw pressure{};

  /// Throws ConfigError unless mu > 0, 2mu + 3lambda > 0, kappa and
  /// epsilon in (0, 1], and tau, eta, kappa_ei, K_rate positive.
  void validate() const;

  /// Coefficient (1+ε)η/τ of ∇P in the momentum equations.
  double pressure_coefficient() const { return (1.0 + epsilon) * eta / tau; }
  /// Coefficient (1+ε)/(τε) of nE in the current equation.
  double field_coupling() const { return (1.0 + epsilon) / (tau * epsilon); }
};

}  // namespace nsmlimit
