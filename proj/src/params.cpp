#include "nsmlimit/params.hpp"

#include <cmath>

#include "nsmlimit/errors.hpp"

namespace nsmlimit {

double PressureLaw::pressure(double n) const { return amplitude * std::pow(n, gamma); }

double PressureLaw::dpressure(double n) const { return amplitude * gamma * std::pow(n, gamma - 1.0); }

double PressureLaw::enthalpy(double rho) const {
  if (!(rho > 0.0)) throw VacuumError();
  if (std::abs(gamma - 1.0) < 1e-14) return amplitude * std::log(rho);
  return amplitude * gamma / (gamma - 1.0) * (std::pow(rho, gamma - 1.0) - 1.0);
}

double PressureLaw::denthalpy(double rho) const {
  if (!(rho > 0.0)) throw VacuumError();
  return dpressure(rho) / rho;
}

void PressureLaw::validate() const {
  if (!(amplitude > 0.0)) throw ConfigError("pressure amplitude must be positive");
  if (!(gamma >= 1.0)) throw ConfigError("adiabatic exponent must be >= 1");
}

void Params::validate() const {
  if (!(mu > 0.0)) throw ConfigError("mu must be positive");
  if (!(2.0 * mu + 3.0 * lambda > 0.0)) throw ConfigError("2*mu + 3*lambda must be positive");
  if (!(kappa > 0.0 && kappa <= 1.0)) throw ConfigError("kappa must lie in (0, 1]");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  if (!(kappa_ei > 0.0)) throw ConfigError("kappa_ei must be positive");
  if (!(K_rate > 0.0)) throw ConfigError("K must be positive");
  pressure.validate();
}

}  // namespace nsmlimit
