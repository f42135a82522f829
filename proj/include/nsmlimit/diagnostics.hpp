#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "nsmlimit/params.hpp"
#include "nsmlimit/state.hpp"

namespace nsmlimit {

/// W = (N, U, J, E, B) with N = n − n0, U = u − u0, J = κj̃. The magnetic
/// error is the field B itself (the limit carries no field).
struct ErrorState {
  ScalarField N;
  VectorField U;
  VectorField J;
  VectorField E;
  VectorField B;

  const Grid& grid() const { return N.grid(); }
};

/// Throws GridMismatch for different grids and VacuumError when min n <= 0.
ErrorState error_state(const FullState& full, const LimitState& limit);

struct ComponentNorms {
  double N = 0.0, U = 0.0, J = 0.0, E = 0.0, B = 0.0;
};
/// H^l norms of the five components.
ComponentNorms component_norms(const ErrorState& e, double l);
/// Γ = ‖N‖²_l + ‖U‖²_l + ‖J‖²_l + ‖E‖²_l + ‖B‖²_l.
double gamma_norm(const ErrorState& e, double l);

/// ∫ ∫₀^N [h(s + n0) − h(n0)] ds dx. The inner integral uses composite
/// 8-node Gauss-Legendre panels, doubled until the relative change is
/// below 1e-10.
double enthalpy_functional(const ErrorState& e, const LimitState& limit, const PressureLaw& law);

/// Σ_{1≤|α|≤l} ∫ h′(n)/n |∂^α N|² dx with n = N + n0, one term per
/// multi-index over the active axes.
double weighted_high_norm(const ErrorState& e, const LimitState& limit, const PressureLaw& law, int l);

/// μ‖∇v‖² + (μ+λ)‖div v‖².
double dissipation(const VectorField& v, const Params& p);

/// One row of the run record. norm_* are H^l norms; divE and divB are
/// ‖div·‖∞ / (1 + ‖E‖∞ + ‖B‖∞); mass_err is the larger relative drift of ∫n
/// and ∫n0 from their initial values.
struct EnergyLedger {
  double t = 0.0;
  double gamma = 0.0;
  double norm_N = 0.0, norm_U = 0.0, norm_J = 0.0, norm_E = 0.0, norm_B = 0.0;
  double enthalpy_fn = 0.0;
  double weighted_high = 0.0;
  double diss_U = 0.0, diss_J = 0.0;
  double divE = 0.0, divB = 0.0;
  double mass_err = 0.0;
};

struct MassReference {
  double full = 1.0;
  double limit = 1.0;
};

EnergyLedger energy_ledger(double t, const FullState& full, const LimitState& limit, const Params& p, int l,
                           const MassReference& mass0);

// -- zero-order energy identity ------------------------------------------------

struct AuditSnapshot {
  double t = 0.0;
  FullState full;
  LimitState limit;
};

enum class AuditTerm { none, pressure, continuity, convection, current_convection, lorentz, viscous_density,
                       current_compression };

/// Both sides of
///   d/dt ½∫n|U|² + μ‖∇U‖² + (μ+λ)‖div U‖² = Σ terms
/// at one interior snapshot, the time derivative by centered difference.
struct AuditPoint {
  double t = 0.0;
  double kinetic_rate = 0.0;  ///< d/dt ½∫n|U|²
  double dissipation = 0.0;
  std::array<double, 7> terms{};  ///< indexed like AuditTerm minus one
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  ///< |lhs − rhs| / (sum of magnitudes), 0 if all vanish
};

struct AuditReport {
  std::vector<AuditPoint> points;
  double max_residual = 0.0;
};

/// Requires at least three snapshots at uniform spacing (std::invalid_argument
/// "nonuniform snapshot spacing" otherwise). `omit` drops one right-hand-side
/// term, for checking that the audit notices.
AuditReport energy_identity_audit(const std::vector<AuditSnapshot>& window, const Params& p,
                                  AuditTerm omit = AuditTerm::none);

// -- uniform bound -------------------------------------------------------------

/// Fit of Γ(t) ≤ Ĉ κ² e^{ĉ t}: ĉ is the least-squares slope of log(Γ/κ²)
/// and Ĉ the smallest constant making the bound hold at every sample.
struct BoundVerdict {
  double sup_ratio = 0.0;  ///< sup Γ/κ²
  double C_hat = 0.0;
  double c_hat = 0.0;
  bool trivial = false;  ///< Γ ≡ 0
  bool within_hypothesis = true;  ///< sup Γ/κ² finite
};

/// samples are (t, Γ) pairs. Throws std::invalid_argument("empty record").
BoundVerdict bound_monitor(const std::vector<std::pair<double, double>>& samples, double C0, double kappa);

/// True when Ĉ and the growth factor e^{ĉT} agree within `tolerance`
/// (relative to the largest) across all verdicts.
bool bounds_stable(const std::vector<BoundVerdict>& verdicts, double T, double tolerance = 0.2);

// -- Moser-type inequalities -----------------------------------------------------

/// Largest observed ratios
///   ‖∂^α(fg)‖ / (‖f‖∞‖D^s g‖ + ‖g‖∞‖D^s f‖)
///   ‖∂^α(fg) − f∂^α g‖ / (‖Df‖∞‖D^{s−1}g‖ + ‖g‖∞‖D^s f‖)
/// over |α| ≤ s and `pairs` seeded random pairs.
struct MoserConstants {
  double product = 0.0;
  double commutator = 0.0;
};

MoserConstants moser_suite(std::uint64_t seed, int pairs, int s, const Grid& grid, double decay = 0.7);

/// All multi-indices over the active axes of `grid` with order in [lo, hi].
std::vector<std::array<int, 3>> multi_indices(const Grid& grid, int lo, int hi);

}  // namespace nsmlimit
