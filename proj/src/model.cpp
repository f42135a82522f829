#include "nsmlimit/model.hpp"

#include <algorithm>
#include <cmath>

#include "nsmlimit/errors.hpp"
#include "nsmlimit/spectral.hpp"

namespace nsmlimit {
namespace {

void require_positive(const ScalarField& n) {
  if (!(n.min() > 0.0)) throw VacuumError();
}

// ∇P(n) with P(n) dealiased first, shared by every momentum equation.
VectorField pressure_gradient(const ScalarField& n, const PressureLaw& law) {
  return gradient(dealias(pressure(n, law)));
}

// μΔv + (μ+λ)∇div v
VectorField viscous(const VectorField& v, double mu, double lambda) {
  return mu * laplacian(v) + (mu + lambda) * grad_div(v);
}

// D(n·v) for a pointwise product.
VectorField dealiased_product(const ScalarField& n, const VectorField& v) { return dealias(n * v); }

// Conservative to primitive: ∂t v = (∂t(n v) - v ∂t n) / n.
VectorField to_primitive(const VectorField& cons_rate, const VectorField& v, const ScalarField& n_rate,
                         const ScalarField& n) {
  return dealias((cons_rate - v * n_rate) / n);
}

}  // namespace

ScalarField pressure(const ScalarField& n, const PressureLaw& law) {
  require_positive(n);
  return n.map([&law](double v) { return law.pressure(v); });
}

double enthalpy_h(double rho, const PressureLaw& law) { return law.enthalpy(rho); }

VectorField flux_divergence(const ScalarField& n, const VectorField& a, const VectorField& b) {
  const Grid& g = n.grid();
  const VectorField na = n * a;
  VectorField out(g);
  for (int i = 0; i < 3; ++i) {
    const VectorField row(na[0] * b[i], na[1] * b[i], na[2] * b[i]);
    out[i] = divergence(dealias(row));
  }
  return out;
}

void check_full_state(const FullState& s) {
  require_positive(s.n);
  const double tol = 1e-10 * std::max({1.0, s.E.max_abs(), s.B.max_abs()});
  if (divergence(s.E).max_abs() > tol) throw ConstraintDrift("constraint drift: div E");
  if (divergence(s.B).max_abs() > tol) throw ConstraintDrift("constraint drift: div B");
}

FullRates full_conservative_rates(const FullState& s, const Params& p) {
  check_full_state(s);
  const double c1 = 1.0 / (1.0 + p.epsilon);
  const double eps = p.epsilon;
  const double kappa = p.kappa;
  const double a = p.field_coupling();
  const ScalarField& n = s.n;

  FullRates r;
  r.n = -c1 * divergence(dealiased_product(n, s.u));

  // Same operation order as the limit system, so that J = E = B = 0
  // reproduces it bit for bit.
  const VectorField flux_jj = flux_divergence(n, s.J, s.J);
  r.mom = -c1 * flux_divergence(n, s.u, s.u) + viscous(s.u, p.mu, p.lambda) -
          p.pressure_coefficient() * pressure_gradient(n, p.pressure);
  r.mom += -(c1 * eps) * flux_jj;
  r.mom += (kappa / p.tau) * dealiased_product(n, cross(s.J, s.B));

  r.cur = -(c1 * (eps - 1.0)) * flux_jj - c1 * (flux_divergence(n, s.u, s.J) + flux_divergence(n, s.J, s.u)) +
          viscous(s.J, p.mu, p.lambda) + a * dealiased_product(n, s.E) +
          (kappa / (p.tau * eps)) * dealiased_product(n, cross(s.u, s.B)) +
          ((eps - 1.0) * kappa / (p.tau * eps)) * dealiased_product(n, cross(s.J, s.B)) -
          (a * p.kappa_ei * p.K_rate * kappa * kappa) * dealiased_product(n * n, s.J);

  r.E = (1.0 / kappa) * curl(s.B) - leray_project(dealiased_product(n, s.J));
  r.B = (-1.0 / kappa) * curl(s.E);
  return r;
}

FullState rhs_full(const FullState& s, const Params& p) {
  FullRates r = full_conservative_rates(s, p);
  FullState d;
  d.u = to_primitive(r.mom, s.u, r.n, s.n);
  d.J = to_primitive(r.cur, s.J, r.n, s.n);
  d.n = std::move(r.n);
  d.E = std::move(r.E);
  d.B = std::move(r.B);
  return d;
}

LimitState rhs_limit(const LimitState& s, const Params& p) {
  require_positive(s.n0);
  const double c1 = 1.0 / (1.0 + p.epsilon);
  const ScalarField& n = s.n0;
  LimitState d;
  d.n0 = -c1 * divergence(dealiased_product(n, s.u0));
  const VectorField mom = -c1 * flux_divergence(n, s.u0, s.u0) + viscous(s.u0, p.mu, p.lambda) -
                          p.pressure_coefficient() * pressure_gradient(n, p.pressure);
  d.u0 = to_primitive(mom, s.u0, d.n0, n);
  return d;
}

double maxwell_alpha(const Params& p) { return p.kappa * p.kappa; }

double maxwell_beta(const Params& p) { return maxwell_alpha(p) * maxwell_alpha(p); }

TwoFluidRates twofluid_conservative_rates(const TwoFluidState& s, const Params& p) {
  require_positive(s.n);
  const double eps = p.epsilon;
  const double kappa = p.kappa;
  const double alpha = maxwell_alpha(p);
  const double beta = maxwell_beta(p);
  const double friction = p.kappa_ei * beta / (kappa * kappa) * p.K_rate;
  const ScalarField& n = s.n;
  const ScalarField n2 = n * n;
  const ScalarField P = pressure(n, p.pressure);

  TwoFluidRates r;
  r.n = -1.0 * divergence(dealiased_product(n, s.ui));

  // τε(∂t(n u_e) + div(n u_e⊗u_e) - μΔu_e - (μ+λ)∇div u_e) + η∇P_e
  //   = -κ⁻¹ n(E + u_e×B) - (κ_ei β/κ²) K n²(u_e - u_i)
  const VectorField force_e = (-1.0 / kappa) * dealiased_product(n, s.E + cross(s.ue, s.B)) -
                              friction * dealiased_product(n2, s.ue - s.ui);
  r.mom_e = -1.0 * flux_divergence(n, s.ue, s.ue) + viscous(s.ue, p.mu, p.lambda) +
            (1.0 / (p.tau * eps)) * (force_e - p.eta * gradient(dealias(eps * P)));

  const VectorField force_i = (1.0 / kappa) * dealiased_product(n, s.E + cross(s.ui, s.B)) -
                              friction * dealiased_product(n2, s.ui - s.ue);
  r.mom_i = -1.0 * flux_divergence(n, s.ui, s.ui) + viscous(s.ui, p.mu, p.lambda) +
            (1.0 / p.tau) * (force_i - p.eta * gradient(dealias(P)));

  // α∂t E - ∇×B = -βj with κj = n(u_i - u_e)
  const VectorField j = (1.0 / kappa) * dealiased_product(n, s.ui - s.ue);
  r.E = (1.0 / alpha) * (curl(s.B) - beta * leray_project(j));
  r.B = -1.0 * curl(s.E);
  return r;
}

TwoFluidState rhs_twofluid(const TwoFluidState& s, const Params& p) {
  TwoFluidRates r = twofluid_conservative_rates(s, p);
  TwoFluidState d;
  d.ue = to_primitive(r.mom_e, s.ue, r.n, s.n);
  d.ui = to_primitive(r.mom_i, s.ui, r.n, s.n);
  d.n = std::move(r.n);
  d.E = std::move(r.E);
  d.B = std::move(r.B);
  return d;
}

ReformedRates reformed_rates(const ScalarField& n, const VectorField& u, const VectorField& jt, const VectorField& E,
                             const VectorField& B, const Params& p, double alpha, double beta) {
  require_positive(n);
  const double eps = p.epsilon;
  const double kappa = p.kappa;
  const double c1 = 1.0 / (1.0 + eps);
  const double te = p.tau * eps;
  const VectorField flux_jj = flux_divergence(n, jt, jt);

  ReformedRates r;
  r.n = -c1 * divergence(dealiased_product(n, u));
  r.mom = -c1 * (flux_divergence(n, u, u) + (eps * kappa * kappa) * flux_jj) + viscous(u, p.mu, p.lambda) -
          p.pressure_coefficient() * pressure_gradient(n, p.pressure) + (1.0 / p.tau) * dealiased_product(n, cross(jt, B));
  r.cur = -(c1 * (eps - 1.0) * kappa * kappa) * flux_jj -
          (c1 * kappa) * (flux_divergence(n, u, jt) + flux_divergence(n, jt, u)) +
          kappa * viscous(jt, p.mu, p.lambda) + ((1.0 + eps) / (te * kappa)) * dealiased_product(n, E) +
          (1.0 / (te * kappa)) * dealiased_product(n, cross(u, B)) +
          ((eps - 1.0) / te) * dealiased_product(n, cross(jt, B)) -
          ((1.0 + eps) / (te * kappa) * p.kappa_ei * p.K_rate * beta) * dealiased_product(n * n, jt);
  r.E = (1.0 / alpha) * (curl(B) - beta * leray_project(dealiased_product(n, jt)));
  r.B = -1.0 * curl(E);
  return r;
}

double relative_l2(const ScalarField& a, const ScalarField& b) {
  const double scale = std::max(l2_norm(a), l2_norm(b));
  return scale == 0.0 ? 0.0 : l2_norm(a - b) / scale;
}

double relative_l2(const VectorField& a, const VectorField& b) {
  const double scale = std::max(l2_norm(a), l2_norm(b));
  return scale == 0.0 ? 0.0 : l2_norm(a - b) / scale;
}

double ReformulationReport::max_residual() const {
  return std::max({continuity, momentum, current, electric, magnetic, scaled_continuity, scaled_momentum,
                   scaled_current, scaled_electric, scaled_magnetic});
}

ReformulationReport reformulation_check(const TwoFluidState& s, const Params& p) {
  const double eps = p.epsilon;
  const double kappa = p.kappa;
  const double alpha = maxwell_alpha(p);
  const double beta = maxwell_beta(p);

  // u = u_i + εu_e, j̃ = n(u_i - u_e)/(κn)
  const VectorField u = s.ui + eps * s.ue;
  const VectorField jt = (1.0 / kappa) * (s.ui - s.ue);

  const TwoFluidRates tf = twofluid_conservative_rates(s, p);
  const ReformedRates rf = reformed_rates(s.n, u, jt, s.E, s.B, p, alpha, beta);

  ReformulationReport rep;
  rep.continuity = relative_l2(tf.n, rf.n);
  // (1/τ)(electron balance) + (1/τ)(ion balance)
  rep.momentum = relative_l2(eps * tf.mom_e + tf.mom_i, rf.mom);
  // -(1/(τε))(electron balance) + (1/τ)(ion balance)
  rep.current = relative_l2(tf.mom_i - tf.mom_e, rf.cur);
  rep.electric = relative_l2(tf.E, rf.E);
  rep.magnetic = relative_l2(tf.B, rf.B);

  // B → κ²B, E → κE: the scaled unknowns are E' = E/κ, B' = B/κ².
  FullState scaled;
  scaled.n = s.n;
  scaled.u = u;
  scaled.J = kappa * jt;
  scaled.E = (1.0 / kappa) * s.E;
  scaled.B = (1.0 / (kappa * kappa)) * s.B;
  const FullRates fr = full_conservative_rates(scaled, p);
  rep.scaled_continuity = relative_l2(rf.n, fr.n);
  rep.scaled_momentum = relative_l2(rf.mom, fr.mom);
  rep.scaled_current = relative_l2(rf.cur, fr.cur);
  rep.scaled_electric = relative_l2((1.0 / kappa) * rf.E, fr.E);
  rep.scaled_magnetic = relative_l2((1.0 / (kappa * kappa)) * rf.B, fr.B);

  const VectorField j = s.n * jt;
  // ‖∇j‖² = ‖j‖²_1 - ‖j‖²_0
  const double h1 = sobolev_norm(j, 1.0), l2 = sobolev_norm(j, 0.0);
  const double grad_scale = std::sqrt(std::max(0.0, h1 * h1 - l2 * l2));
  rep.current_divergence = grad_scale == 0.0 ? 0.0 : l2_norm(divergence(j)) / grad_scale;
  return rep;
}

}  // namespace nsmlimit
