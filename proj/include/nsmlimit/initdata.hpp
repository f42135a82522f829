#pragma once

#include <cstdint>

#include "nsmlimit/state.hpp"

namespace nsmlimit {

/// Highest mode number kept in generated perturbations.
inline constexpr int kPerturbationBand = 4;

/// n0 = 1 + amplitude·φ/max|φ| for a smooth zero-mean φ, and a smooth u0 with
/// max |u0_i| = velocity_scale. Throws std::invalid_argument("vacuum risk")
/// when amplitude >= 1.
LimitState make_limit_data(std::uint64_t seed, double amplitude, const Grid& grid, double velocity_scale = 0.1);

struct WellPreparedSpec {
  LimitState base;
  std::uint64_t seed = 0;
  double C0 = 1.0;
  double kappa = 0.1;
  double l = 4.0;
  // Which of (δn, δu, δj, δE, δB) are nonzero.
  bool perturb_n = true;
  bool perturb_u = true;
  bool perturb_j = true;
  bool perturb_E = true;
  bool perturb_B = true;
  /// Perturbations of size C0 rather than C0·κ. Exploratory only.
  bool ill_prepared = false;
};

/// n = n0 + κδn, u = u0 + κδu, J = κδj, E = κδE, B = κδB with band-limited
/// perturbations (δj, δE, δB solenoidal), normalized so that the hypothesis
/// norm ‖(N, U, J, E, B)‖_l equals C0·κ. Throws VacuumError if min n <= 0.
FullState make_well_prepared(const WellPreparedSpec& spec);

/// (‖n-n0‖²_l + ‖u-u0‖²_l + ‖J‖²_l + ‖E‖²_l + ‖B‖²_l)^{1/2}.
double hypothesis_norm(const FullState& s, const LimitState& base, double l);

/// Band-limited two-fluid state whose current n(u_i - u_e)/κ is exactly
/// solenoidal, with solenoidal E and B. Used to exercise the reformulation.
TwoFluidState make_twofluid_sample(std::uint64_t seed, const Grid& grid, double kappa);

}  // namespace nsmlimit
