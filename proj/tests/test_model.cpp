#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "nsmlimit/errors.hpp"
#include "nsmlimit/initdata.hpp"
#include "nsmlimit/model.hpp"
#include "nsmlimit/spectral.hpp"

using namespace nsmlimit;
using std::numbers::pi;

namespace {

Grid line(int n = 64) { return Grid{1, n, 2 * pi}; }

FullState rest_state(const Grid& g, double density = 1.0) {
  FullState s;
  s.n = ScalarField(g, density);
  s.u = s.J = s.E = s.B = VectorField(g);
  return s;
}

ScalarField wave(const Grid& g, double amp) {
  return ScalarField::sample(g, [amp](double x, double, double) { return 1.0 + amp * std::sin(x); });
}

}  // namespace

TEST_CASE("enthalpy of the gamma law") {
  PressureLaw law;
  CHECK(law.enthalpy(1.0) == 0.0);
  CHECK(PressureLaw{1.0, 1.0}.enthalpy(1.0) == 0.0);

  const PressureLaw quadratic{1.0, 2.0};
  CHECK(quadratic.enthalpy(2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(quadratic.enthalpy(0.5) == doctest::Approx(-1.0).epsilon(1e-15));

  // Quadrature oracle for ∫₁^ρ P'(s)/s ds with P'(s)/s = Aγ s^{γ-2}.
  for (double rho : {0.3, 0.9, 1.7, 4.0}) {
    const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double s) { return law.amplitude * law.gamma * std::pow(s, law.gamma - 2.0); }, 1.0, rho, 10, 1e-14);
    CHECK(std::abs(law.enthalpy(rho) - oracle) <= 1e-10);
  }

  // h' = P'/ρ > 0 so h is increasing
  CHECK(law.enthalpy(1.1) > law.enthalpy(1.0));
  CHECK(law.denthalpy(2.0) == doctest::Approx(law.dpressure(2.0) / 2.0));
}

TEST_CASE("nonpositive density is a vacuum state") {
  PressureLaw law;
  CHECK_THROWS_WITH_AS(law.enthalpy(0.0), "vacuum state", VacuumError);
  CHECK_THROWS_WITH_AS(enthalpy_h(-1.0, law), "vacuum state", VacuumError);
  FullState s = rest_state(line());
  s.n[3] = 0.0;
  CHECK_THROWS_WITH_AS(rhs_full(s, Params{}), "vacuum state", VacuumError);
  LimitState l{s.n, s.u};
  CHECK_THROWS_AS(rhs_limit(l, Params{}), VacuumError);
}

TEST_CASE("uniform equilibrium is a fixed point") {
  for (const Grid& g : {line(), Grid{3, 8, 2 * pi}}) {
    const FullState d = rhs_full(rest_state(g, 1.3), Params{});
    CHECK(d.n.max_abs() == 0.0);
    CHECK(d.u.max_abs() == 0.0);
    CHECK(d.J.max_abs() == 0.0);
    CHECK(d.E.max_abs() == 0.0);
    CHECK(d.B.max_abs() == 0.0);

    const LimitState dl = rhs_limit(LimitState{ScalarField(g, 1.0), VectorField(g)}, Params{});
    CHECK(dl.n0.max_abs() == 0.0);
    CHECK(dl.u0.max_abs() == 0.0);

    TwoFluidState t{ScalarField(g, 1.0), VectorField(g), VectorField(g), VectorField(g), VectorField(g)};
    const TwoFluidState dt = rhs_twofluid(t, Params{});
    CHECK(dt.n.max_abs() == 0.0);
    CHECK(dt.ue.max_abs() == 0.0);
    CHECK(dt.ui.max_abs() == 0.0);
  }
}

TEST_CASE("magnetic field drives the electric field through its curl") {
  // ∇×(0,0,sin x) = (0,-cos x,0)
  const Grid g = line();
  Params p;
  p.kappa = 0.25;
  FullState s = rest_state(g);
  s.B[2] = ScalarField::sample(g, [](double x, double, double) { return std::sin(x); });
  const FullState d = rhs_full(s, p);
  const auto cosx = ScalarField::sample(g, [](double x, double, double) { return std::cos(x); });
  CHECK(d.E[0].max_abs() < 1e-14);
  CHECK((d.E[1] + (1.0 / p.kappa) * cosx).max_abs() < 1e-12);
  CHECK(d.E[2].max_abs() < 1e-14);
  CHECK(d.B.max_abs() < 1e-14);
  CHECK(d.n.max_abs() == 0.0);
  CHECK(d.u.max_abs() < 1e-14);
  CHECK(d.J.max_abs() < 1e-14);
}

TEST_CASE("pressure-only acceleration matches the pointwise formula") {
  const Grid g = line();
  Params p;
  p.epsilon = 0.2;
  p.eta = 1.5;
  p.tau = 0.8;
  const double amp = 0.1;
  FullState s = rest_state(g);
  s.n = wave(g, amp);
  // ∂t u = -((1+ε)η/τ) P'(n) n_x / n with n_x = amp cos x
  const auto expected = ScalarField::sample(g, [&](double x, double, double) {
    const double n = 1.0 + amp * std::sin(x);
    return -(1.0 + p.epsilon) * p.eta / p.tau * p.pressure.dpressure(n) * amp * std::cos(x) / n;
  });
  const FullState d = rhs_full(s, p);
  CHECK((d.u[0] - expected).max_abs() < 1e-12);
  CHECK(d.u[1].max_abs() == 0.0);
  CHECK(d.n.max_abs() == 0.0);

  const LimitState dl = rhs_limit(LimitState{s.n, s.u}, p);
  CHECK((dl.u0[0] - expected).max_abs() < 1e-12);
}

TEST_CASE("full system without current and fields reproduces the limit system exactly") {
  const Grid g{2, 32, 2 * pi};
  const LimitState base = make_limit_data(3, 0.2, g, 0.3);
  FullState s = rest_state(g);
  s.n = base.n0;
  s.u = base.u0;
  const Params p;
  const FullState d = rhs_full(s, p);
  const LimitState dl = rhs_limit(base, p);
  CHECK(d.n.values() == dl.n0.values());
  for (int i = 0; i < 3; ++i) CHECK(d.u[i].values() == dl.u0[i].values());
}

TEST_CASE("continuity rate has zero mean") {
  const Grid g{2, 32, 2 * pi};
  WellPreparedSpec spec;
  spec.base = make_limit_data(5, 0.3, g, 0.5);
  spec.kappa = 0.5;
  const FullState s = make_well_prepared(spec);
  const FullState d = rhs_full(s, Params{});
  CHECK(std::abs(d.n.mean()) < 1e-15);
  CHECK(d.n.max_abs() > 1e-3);
}

TEST_CASE("with no electromagnetic field the Maxwell rates reduce to the current source") {
  const Grid g{2, 32, 2 * pi};
  WellPreparedSpec spec;
  spec.base = make_limit_data(8, 0.2, g);
  spec.kappa = 0.3;
  spec.perturb_E = spec.perturb_B = false;
  const FullState s = make_well_prepared(spec);
  const FullState d = rhs_full(s, Params{});
  CHECK(d.B.max_abs() == 0.0);
  const VectorField source = leray_project(dealias(s.n * s.J));
  CHECK((d.E + source).max_abs() < 1e-15);
  CHECK(d.J.max_abs() > 0.0);
}

TEST_CASE("constraint drift is detected") {
  const Grid g = line();
  FullState s = rest_state(g);
  s.E[0] = ScalarField::sample(g, [](double x, double, double) { return std::sin(x); });
  CHECK_THROWS_WITH_AS(rhs_full(s, Params{}), doctest::Contains("constraint drift"), ConstraintDrift);
  s.E[0] = ScalarField(g, 2.0);  // constant fields are divergence-free
  CHECK_NOTHROW(rhs_full(s, Params{}));
}

TEST_CASE("limit system transports density with the scaled velocity") {
  // Without viscosity and pressure, constant u0 gives ∂t n0 = -u0·∇n0/(1+ε).
  const Grid g = line();
  Params p;
  p.mu = p.lambda = 0.0;
  p.pressure.amplitude = 0.0;
  LimitState s{wave(g, 0.2), VectorField(g)};
  s.u0[0] = ScalarField(g, 0.7);
  const LimitState d = rhs_limit(s, p);
  const auto expected = ScalarField::sample(
      g, [&](double x, double, double) { return -0.7 / (1.0 + p.epsilon) * 0.2 * std::cos(x); });
  CHECK((d.n0 - expected).max_abs() < 1e-14);
  CHECK(d.u0.max_abs() < 1e-14);
}

TEST_CASE("friction between equal species velocities vanishes") {
  const Grid g{2, 32, 2 * pi};
  TwoFluidState s = make_twofluid_sample(4, g, 0.2);
  s.ue = s.ui;
  Params weak, strong;
  strong.kappa_ei = 7.0;
  strong.K_rate = 3.0;
  const TwoFluidState a = rhs_twofluid(s, weak);
  const TwoFluidState b = rhs_twofluid(s, strong);
  for (int i = 0; i < 3; ++i) {
    CHECK(a.ue[i].values() == b.ue[i].values());
    CHECK(a.ui[i].values() == b.ui[i].values());
  }
}

TEST_CASE("reformulation residuals") {
  Params p;
  p.kappa = 0.2;
  p.epsilon = 0.3;
  p.lambda = 0.05;
  p.tau = 0.7;
  p.eta = 1.3;
  p.kappa_ei = 0.9;
  p.K_rate = 1.1;

  SUBCASE("zero-velocity uniform state") {
    const Grid g = line();
    const TwoFluidState s{ScalarField(g, 1.0), VectorField(g), VectorField(g), VectorField(g), VectorField(g)};
    const ReformulationReport r = reformulation_check(s, p);
    CHECK(r.max_residual() == 0.0);
    CHECK(r.current_divergence == 0.0);
  }
  SUBCASE("band-limited states on a 64x64 grid") {
    const Grid g{2, 64, 2 * pi};
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const ReformulationReport r = reformulation_check(make_twofluid_sample(seed, g, p.kappa), p);
      CHECK(r.max_residual() <= 1e-10);
      CHECK(r.current_divergence <= 1e-12);
    }
  }
  SUBCASE("three dimensions") {
    const Grid g{3, 16, 2 * pi};
    const ReformulationReport r = reformulation_check(make_twofluid_sample(11, g, p.kappa), p);
    CHECK(r.max_residual() <= 1e-10);
  }
  SUBCASE("a compressive current is flagged") {
    // Electron and ion continuity disagree when div j ≠ 0, which shows up
    // in the continuity residual and the divergence monitor.
    const Grid g = line();
    TwoFluidState s = make_twofluid_sample(2, g, p.kappa);
    s.ue[0] += ScalarField::sample(g, [](double x, double, double) { return 0.1 * std::sin(2 * x); });
    const ReformulationReport r = reformulation_check(s, p);
    CHECK(r.continuity > 1e-4);
    CHECK(r.current_divergence > 1e-3);
  }
}

TEST_CASE("relative discrepancy") {
  const Grid g = line(16);
  CHECK(relative_l2(ScalarField(g), ScalarField(g)) == 0.0);
  CHECK(relative_l2(ScalarField(g, 1.0), ScalarField(g, 1.5)) == doctest::Approx(1.0 / 3.0));
}
