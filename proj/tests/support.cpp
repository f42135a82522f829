#include "support.hpp"

#include <cmath>

#include "nsmlimit/initdata.hpp"
#include "nsmlimit/spectral.hpp"

namespace nsmtest {
namespace {

constexpr double kOmega = 3.0;

VectorField solenoidal(std::uint64_t seed, const Grid& g, double size) {
  const VectorField v = leray_project(band_limit(random_smooth_vector(seed, 0.5, g), 3));
  return (size / v.max_abs()) * v;
}

ScalarField zero_mean(std::uint64_t seed, const Grid& g, double size) {
  ScalarField f = band_limit(random_smooth_field(seed, 0.5, g), 3);
  f -= ScalarField(g, f.mean());
  return (size / f.max_abs()) * f;
}

template <class State, class Stepper, class Rhs>
OrderStudy study(const State& qa, const State& qb, Stepper make, Rhs rhs, double T) {
  auto exact = [&](double t) { return qa + std::sin(kOmega * t) * qb; };
  OrderStudy out;
  for (int n : {10, 20, 40}) {
    auto stepper = make();
    stepper.set_forcing([&](double t) {
      State f = (kOmega * std::cos(kOmega * t)) * qb;
      State r = rhs(exact(t));
      r *= -1.0;
      f += r;
      return f;
    });
    const double dt = T / n;
    State q = qa;
    for (int i = 0; i < n; ++i) q = stepper.step(q, i * dt, dt);
    out.errors.push_back(state_distance(q, exact(T)));
  }
  for (std::size_t i = 0; i + 1 < out.errors.size(); ++i)
    out.orders.push_back(std::log2(out.errors[i] / out.errors[i + 1]));
  return out;
}

}  // namespace

double state_distance(const FullState& a, const FullState& b) {
  const double dn = l2_norm(a.n - b.n), du = l2_norm(a.u - b.u), dj = l2_norm(a.J - b.J);
  const double de = l2_norm(a.E - b.E), db = l2_norm(a.B - b.B);
  return std::sqrt(dn * dn + du * du + dj * dj + de * de + db * db);
}

double state_distance(const LimitState& a, const LimitState& b) {
  const double dn = l2_norm(a.n0 - b.n0), du = l2_norm(a.u0 - b.u0);
  return std::sqrt(dn * dn + du * du);
}

OrderStudy full_manufactured_order(const Params& p, const Grid& g, std::uint64_t seed, double T) {
  const LimitState base = make_limit_data(seed, 0.2, g, 0.3);
  FullState qa{base.n0, base.u0, solenoidal(seed + 1, g, 0.2), solenoidal(seed + 2, g, 0.2),
               solenoidal(seed + 3, g, 0.2)};
  FullState qb{zero_mean(seed + 4, g, 0.1), solenoidal(seed + 5, g, 0.1), solenoidal(seed + 6, g, 0.1),
               solenoidal(seed + 7, g, 0.1), solenoidal(seed + 8, g, 0.1)};
  qb.u[0] += zero_mean(seed + 9, g, 0.1);  // compressive part
  const double n_mean = qa.n.mean();
  return study(
      qa, qb, [&] { return FullStepper(p, n_mean); }, [&](const FullState& q) { return rhs_full(q, p); }, T);
}

OrderStudy limit_manufactured_order(const Params& p, const Grid& g, std::uint64_t seed, double T) {
  const LimitState qa = make_limit_data(seed, 0.2, g, 0.3);
  LimitState qb{zero_mean(seed + 4, g, 0.1), solenoidal(seed + 5, g, 0.1)};
  qb.u0[0] += zero_mean(seed + 9, g, 0.1);
  const double n_mean = qa.n0.mean();
  return study(
      qa, qb, [&] { return LimitStepper(p, n_mean); }, [&](const LimitState& q) { return rhs_limit(q, p); }, T);
}

}  // namespace nsmtest

namespace nsmtest {

std::vector<AuditSnapshot> audit_window(const Params& p, double dt, double t_center, std::uint64_t seed) {
  const Grid g{1, 64, 2 * 3.14159265358979323846};
  WellPreparedSpec spec;
  spec.base = make_limit_data(seed, 0.1, g);
  spec.kappa = p.kappa;
  spec.seed = seed;
  PairedState s{make_well_prepared(spec), spec.base};
  PairedStepper st(p, s.full.n.mean());
  const long first = std::lround(t_center / dt) - 1;
  std::vector<AuditSnapshot> out;
  for (long i = 0; i <= first + 2; ++i) {
    if (i >= first) out.push_back(AuditSnapshot{i * dt, s.full, s.limit});
    if (i < first + 2) s = st.step(s, i * dt, dt);
  }
  return out;
}

}  // namespace nsmtest
