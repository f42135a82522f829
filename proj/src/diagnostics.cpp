#include "nsmlimit/diagnostics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "nsmlimit/errors.hpp"
#include "nsmlimit/spectral.hpp"

namespace nsmlimit {
namespace {

double sq(double v) { return v * v; }

void require_positive(const ScalarField& n) {
  if (!(n.min() > 0.0)) throw VacuumError();
}

// ∫₀^N g(s) ds by composite 8-node Gauss-Legendre with panel doubling.
template <class F>
double composite_gauss(F g, double upper) {
  using Rule = boost::math::quadrature::gauss<double, 8>;
  if (upper == 0.0) return 0.0;
  double prev = Rule::integrate(g, 0.0, upper);
  for (int panels = 2; panels <= (1 << 20); panels *= 2) {
    const double w = upper / panels;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) sum += Rule::integrate(g, i * w, (i + 1) * w);
    if (std::abs(sum - prev) <= 1e-10 * std::abs(sum)) return sum;
    prev = sum;
  }
  return prev;
}

// (v·∇)w
VectorField advect(const VectorField& v, const VectorField& w) {
  return VectorField(dot(v, gradient(w[0])), dot(v, gradient(w[1])), dot(v, gradient(w[2])));
}

double grad_norm_sq(const VectorField& v) { return sq(sobolev_norm(v, 1.0)) - sq(sobolev_norm(v, 0.0)); }

double kinetic(const AuditSnapshot& s) {
  const VectorField U = s.full.u - s.limit.u0;
  return 0.5 * inner(s.full.n * U, U);
}

double derivative_norm(const ScalarField& f, const std::vector<std::array<int, 3>>& alphas) {
  double sum = 0.0;
  for (const auto& a : alphas) sum += sq(l2_norm(derivative(f, a)));
  return std::sqrt(sum);
}

}  // namespace

ErrorState error_state(const FullState& full, const LimitState& limit) {
  if (!(full.grid() == limit.grid())) throw GridMismatch();
  require_positive(full.n);
  return ErrorState{full.n - limit.n0, full.u - limit.u0, full.J, full.E, full.B};
}

ComponentNorms component_norms(const ErrorState& e, double l) {
  return ComponentNorms{sobolev_norm(e.N, l), sobolev_norm(e.U, l), sobolev_norm(e.J, l), sobolev_norm(e.E, l),
                        sobolev_norm(e.B, l)};
}

double gamma_norm(const ErrorState& e, double l) {
  const ComponentNorms c = component_norms(e, l);
  return sq(c.N) + sq(c.U) + sq(c.J) + sq(c.E) + sq(c.B);
}

double enthalpy_functional(const ErrorState& e, const LimitState& limit, const PressureLaw& law) {
  require_positive(limit.n0);
  require_positive(e.N + limit.n0);
  double sum = 0.0;
  for (std::size_t i = 0; i < e.N.size(); ++i) {
    const double n0 = limit.n0[i];
    const double h0 = law.enthalpy(n0);
    sum += composite_gauss([&](double s) { return law.enthalpy(s + n0) - h0; }, e.N[i]);
  }
  return sum * e.grid().volume() / static_cast<double>(e.N.size());
}

std::vector<std::array<int, 3>> multi_indices(const Grid& grid, int lo, int hi) {
  std::vector<std::array<int, 3>> out;
  const int m1 = grid.active(1) ? hi : 0, m2 = grid.active(2) ? hi : 0;
  for (int order = lo; order <= hi; ++order)
    for (int a = order; a >= 0; --a)
      for (int b = std::min(order - a, m1); b >= 0; --b) {
        const int c = order - a - b;
        if (c > m2) continue;
        out.push_back({a, b, c});
      }
  return out;
}

double weighted_high_norm(const ErrorState& e, const LimitState& limit, const PressureLaw& law, int l) {
  const ScalarField n = e.N + limit.n0;
  require_positive(n);
  const ScalarField weight = n.map([&law](double v) { return law.denthalpy(v) / v; });
  double sum = 0.0;
  for (const auto& a : multi_indices(e.grid(), 1, l)) {
    const ScalarField d = derivative(e.N, a);
    sum += inner(weight * d, d);
  }
  return sum;
}

double dissipation(const VectorField& v, const Params& p) {
  return p.mu * grad_norm_sq(v) + (p.mu + p.lambda) * sq(l2_norm(divergence(v)));
}

EnergyLedger energy_ledger(double t, const FullState& full, const LimitState& limit, const Params& p, int l,
                           const MassReference& mass0) {
  const ErrorState e = error_state(full, limit);
  const ComponentNorms c = component_norms(e, l);
  EnergyLedger r;
  r.t = t;
  r.norm_N = c.N, r.norm_U = c.U, r.norm_J = c.J, r.norm_E = c.E, r.norm_B = c.B;
  r.gamma = sq(c.N) + sq(c.U) + sq(c.J) + sq(c.E) + sq(c.B);
  r.enthalpy_fn = enthalpy_functional(e, limit, p.pressure);
  r.weighted_high = weighted_high_norm(e, limit, p.pressure, l);
  r.diss_U = dissipation(e.U, p);
  r.diss_J = dissipation(e.J, p);
  const double scale = 1.0 + full.E.max_abs() + full.B.max_abs();
  r.divE = divergence(full.E).max_abs() / scale;
  r.divB = divergence(full.B).max_abs() / scale;
  r.mass_err = std::max(std::abs(full.n.integral() - mass0.full) / mass0.full,
                        std::abs(limit.n0.integral() - mass0.limit) / mass0.limit);
  return r;
}

AuditReport energy_identity_audit(const std::vector<AuditSnapshot>& window, const Params& p, AuditTerm omit) {
  if (window.size() < 3) throw std::invalid_argument("energy audit needs at least three snapshots");
  const double dt = window[1].t - window[0].t;
  for (std::size_t i = 1; i < window.size(); ++i)
    if (!(std::abs((window[i].t - window[i - 1].t) - dt) <= 1e-9 * std::abs(dt)) || !(dt > 0.0))
      throw std::invalid_argument("nonuniform snapshot spacing");

  const double c1 = 1.0 / (1.0 + p.epsilon);
  AuditReport rep;
  for (std::size_t k = 1; k + 1 < window.size(); ++k) {
    const AuditSnapshot& s = window[k];
    const ScalarField& n = s.full.n;
    const ScalarField& n0 = s.limit.n0;
    require_positive(n);
    require_positive(n0);
    const VectorField& u = s.full.u;
    const VectorField& u0 = s.limit.u0;
    const VectorField& J = s.full.J;
    const VectorField U = u - u0;
    const VectorField nU = n * U;

    AuditPoint pt;
    pt.t = s.t;
    pt.kinetic_rate = (kinetic(window[k + 1]) - kinetic(window[k - 1])) / (2.0 * dt);
    pt.dissipation = dissipation(U, p);

    const ScalarField dh = n.map([&](double v) { return p.pressure.enthalpy(v); }) -
                           n0.map([&](double v) { return p.pressure.enthalpy(v); });
    const ScalarField ndot = -c1 * divergence(n * u);
    const VectorField visc0 = p.mu * laplacian(u0) + (p.mu + p.lambda) * grad_div(u0);
    const ScalarField inv_diff = ScalarField(n.grid(), 1.0) / n - ScalarField(n.grid(), 1.0) / n0;

    pt.terms[0] = p.pressure_coefficient() * inner(dh, divergence(nU));
    pt.terms[1] = 0.5 * inner(ndot, dot(U, U));
    pt.terms[2] = -c1 * inner(advect(u, U) + advect(U, u0), nU);
    pt.terms[3] = -c1 * p.epsilon * inner(advect(J, J), nU);
    pt.terms[4] = (p.kappa / p.tau) * inner(cross(J, s.full.B), nU);
    pt.terms[5] = inner(inv_diff * visc0, nU);
    pt.terms[6] = -c1 * p.epsilon * inner(divergence(n * J) * J, U);

    pt.lhs = pt.kinetic_rate + pt.dissipation;
    double scale = std::abs(pt.kinetic_rate) + std::abs(pt.dissipation);
    for (std::size_t i = 0; i < pt.terms.size(); ++i) {
      scale += std::abs(pt.terms[i]);
      if (omit != AuditTerm::none && static_cast<std::size_t>(omit) == i + 1) continue;
      pt.rhs += pt.terms[i];
    }
    pt.residual = scale == 0.0 ? 0.0 : std::abs(pt.lhs - pt.rhs) / scale;
    rep.max_residual = std::max(rep.max_residual, pt.residual);
    rep.points.push_back(pt);
  }
  return rep;
}

BoundVerdict bound_monitor(const std::vector<std::pair<double, double>>& samples, double C0, double kappa) {
  if (samples.empty()) throw std::invalid_argument("empty record");
  BoundVerdict v;
  const double k2 = kappa * kappa;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& [t, g] : samples) {
    v.sup_ratio = std::max(v.sup_ratio, g / k2);
    if (g > 0.0) {
      const double y = std::log(g / k2);
      sx += t, sy += y, sxx += t * t, sxy += t * y, ++m;
    }
  }
  if (m == 0) {
    v.trivial = true;
    return v;
  }
  const double den = m * sxx - sx * sx;
  v.c_hat = (m >= 2 && den > 0.0) ? (m * sxy - sx * sy) / den : 0.0;
  for (const auto& [t, g] : samples) v.C_hat = std::max(v.C_hat, g / (k2 * std::exp(v.c_hat * t)));
  v.within_hypothesis = std::isfinite(v.sup_ratio) && std::isfinite(C0);
  return v;
}

bool bounds_stable(const std::vector<BoundVerdict>& verdicts, double T, double tolerance) {
  auto spread_ok = [tolerance](const std::vector<double>& xs) {
    if (xs.empty()) return true;
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    return *hi == 0.0 || (*hi - *lo) <= tolerance * *hi;
  };
  std::vector<double> C, growth;
  for (const auto& v : verdicts) {
    if (v.trivial) continue;
    C.push_back(v.C_hat);
    growth.push_back(std::exp(v.c_hat * T));
  }
  return spread_ok(C) && spread_ok(growth);
}

MoserConstants moser_suite(std::uint64_t seed, int pairs, int s, const Grid& grid, double decay) {
  if (s < 1) throw std::invalid_argument("moser order must be >= 1");
  const auto top = multi_indices(grid, s, s);
  const auto below = multi_indices(grid, s - 1, s - 1);
  const auto all = multi_indices(grid, 0, s);
  std::mt19937_64 rng(seed);
  MoserConstants out;
  for (int i = 0; i < pairs; ++i) {
    const std::uint64_t sf = rng(), sg = rng();
    const ScalarField f = random_smooth_field(sf, decay, grid);
    const ScalarField g = random_smooth_field(sg, decay, grid);
    const ScalarField fg = f * g;
    const double f_inf = f.max_abs(), g_inf = g.max_abs();
    const double df_inf = magnitude(gradient(f)).max();
    const double Dsf = derivative_norm(f, top), Dsg = derivative_norm(g, top), Ds1g = derivative_norm(g, below);
    const double den1 = f_inf * Dsg + g_inf * Dsf;
    const double den2 = df_inf * Ds1g + g_inf * Dsf;
    for (const auto& a : all) {
      const ScalarField dfg = derivative(fg, a);
      out.product = std::max(out.product, l2_norm(dfg) / den1);
      out.commutator = std::max(out.commutator, l2_norm(dfg - f * derivative(g, a)) / den2);
    }
  }
  return out;
}

}  // namespace nsmlimit
