#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "nsmlimit/initdata.hpp"
#include "nsmlimit/integrator.hpp"
#include "nsmlimit/model.hpp"
#include "nsmlimit/spectral.hpp"
#include "support.hpp"

using namespace nsmlimit;
using nsmtest::state_distance;
using std::numbers::pi;

namespace {

Grid line(int n = 32) { return Grid{1, n, 2 * pi}; }

FullState rest_state(const Grid& g) {
  return FullState{ScalarField(g, 1.0), VectorField(g), VectorField(g), VectorField(g), VectorField(g)};
}

FullState well_prepared(const Grid& g, double kappa, std::uint64_t seed = 1) {
  WellPreparedSpec spec;
  spec.base = make_limit_data(seed, 0.1, g);
  spec.kappa = kappa;
  spec.seed = seed;
  return make_well_prepared(spec);
}

double em_energy(const FullState& s) { return inner(s.E, s.E) + inner(s.B, s.B); }

}  // namespace

TEST_CASE("stiff operator at the zero mode couples only current and field") {
  // For k = 0 each component obeys J' = aE - fJ, E' = -n̄J, B' = 0, whose
  // exponential is e^{-fh/2}[cos(ωh) I + sin(ωh)/ω (M + f/2 I)] with
  // ω² = a n̄ - f²/4.
  Params p;
  p.kappa = 0.5;
  const double n_mean = 1.2, h = 0.3;
  const StiffOperator op = build_stiff_operator(line(), p, n_mean, h);
  const double a = p.field_coupling();
  const double f = a * p.kappa_ei * p.K_rate * p.kappa * p.kappa * n_mean;
  const double w = std::sqrt(a * n_mean - 0.25 * f * f);
  const double damp = std::exp(-0.5 * f * h), c = std::cos(w * h), s = std::sin(w * h) / w;
  const double jj = damp * (c + s * (-f + 0.5 * f)), je = damp * s * a;
  const double ej = damp * s * (-n_mean), ee = damp * (c + s * 0.5 * f);

  const auto& P = op.propagator(0);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(P(i, i) - jj) < 1e-13);
    CHECK(std::abs(P(i, 3 + i) - je) < 1e-13);
    CHECK(std::abs(P(3 + i, i) - ej) < 1e-13);
    CHECK(std::abs(P(3 + i, 3 + i) - ee) < 1e-13);
    CHECK(std::abs(P(6 + i, 6 + i) - 1.0) < 1e-15);
  }
  CHECK((op.viscous_propagator(0) - Eigen::Matrix3d::Identity()).norm() == 0.0);
}

TEST_CASE("Maxwell block is skew and its exponential is a rotation") {
  Params p;
  p.kappa = 1.0;
  const Grid g = line();
  const StiffOperator op = build_stiff_operator(g, p, 1.0, 0.1);
  const ModeTable& t = *ModeTable::of(g);
  const std::int64_t idx = t.index_of({1, 0, 0});
  REQUIRE(idx >= 0);
  const Eigen::Matrix<std::complex<double>, 6, 6> M = op.generator(idx).block<6, 6>(3, 3);
  // Drop the current coupling: the remaining E-B block must be skew-Hermitian.
  CHECK((M + M.adjoint()).norm() < 1e-15);
  const Eigen::Matrix<std::complex<double>, 6, 6> R = (0.1 * M).exp();
  CHECK((R.adjoint() * R - decltype(R)::Identity()).norm() < 1e-13);

  Eigen::Matrix<std::complex<double>, 6, 1> q;
  q << 0, 0.3, std::complex<double>(0.1, 0.2), 0, -0.4, 0.5;
  const double n0 = q.norm();
  for (int i = 0; i < 100; ++i) q = R * q;
  CHECK(std::abs(q.norm() - n0) < 1e-12);
}

TEST_CASE("propagator tends to the identity linearly in the step") {
  Params p;
  p.kappa = 0.05;
  const Grid g = line();
  double prev = 0.0;
  for (double h : {1e-4, 5e-5, 2.5e-5}) {
    const StiffOperator op = build_stiff_operator(g, p, 1.0, h);
    double worst = 0.0;
    for (std::size_t i = 0; i < op.modes(); ++i)
      worst = std::max(worst, (op.propagator(i) - StiffOperator::Block::Identity()).norm());
    if (prev > 0.0) CHECK(prev / worst == doctest::Approx(2.0).epsilon(0.01));
    prev = worst;
  }
}

TEST_CASE("stiff generator is the linear part of the full right-hand side") {
  // About (n̄, 0, 0, 0, 0) the residual rhs_full(q) - Lq is quadratic in the
  // amplitude of q. Continuity is explicit, so its rate is left out.
  const Grid g{2, 16, 2 * pi};
  Params p;
  p.kappa = 0.3;
  p.lambda = 0.05;
  const double n_mean = 1.1;
  const StiffOperator op = build_stiff_operator(g, p, n_mean, 0.01);
  const FullState shape = well_prepared(g, 1.0);
  double prev = 0.0;
  for (double amp : {1e-2, 1e-3}) {
    FullState q = shape;
    q.n = ScalarField(g, n_mean);
    q.u *= amp, q.J *= amp, q.E *= amp, q.B *= amp;
    const FullState lin = op.apply(q);
    FullState r = rhs_full(q, p);
    r.n = ScalarField(g);
    const double res = state_distance(r, lin);
    const double size = state_distance(lin, rest_state(g));
    CHECK(res < 1e-3 * size);
    if (prev > 0.0) CHECK(prev / res == doctest::Approx(100.0).epsilon(0.05));
    prev = res;
  }
}

TEST_CASE("uniform equilibrium is unchanged by a step") {
  const Grid g = line();
  const FullState s = rest_state(g);
  for (double dt : {1e-3, 0.1, 1.0}) {
    const FullState r = step_full(s, Params{}, 0.0, dt);
    CHECK(state_distance(r, s) < 1e-15);
    const LimitState l{s.n, s.u};
    CHECK(state_distance(step_limit(l, Params{}, 0.0, dt), l) < 1e-15);
  }
}

TEST_CASE("electromagnetic waves keep their energy when the fluid is decoupled") {
  // τ → ∞ removes the current response a = (1+ε)/(τε), leaving the exact
  // Maxwell rotation.
  const Grid g{2, 16, 2 * pi};
  Params p;
  p.kappa = 1.0;
  p.tau = 1e12;
  FullState s = rest_state(g);
  s.E = leray_project(band_limit(random_smooth_vector(3, 0.5, g), 4));
  s.B = leray_project(band_limit(random_smooth_vector(4, 0.5, g), 4));
  const double w0 = em_energy(s);
  FullStepper st(p, 1.0);
  for (int i = 0; i < 100; ++i) s = st.step(s, i * 0.05, 0.05);
  CHECK(std::abs(em_energy(s) - w0) <= 1e-8 * w0);
  CHECK(s.u.max_abs() < 1e-12);
}

TEST_CASE("without a stiff part the step is plain SSP-RK2") {
  const Grid g = line();
  Params p;
  p.kappa = 0.8;
  const FullState s = well_prepared(g, 0.5);
  const double dt = 1e-3;
  FullStepper st(p, s.n.mean(), false);
  const FullState got = st.step(s, 0.0, dt);

  const FullState q1 = s + dt * rhs_full(s, p);
  FullState q2 = 0.5 * s + 0.5 * (q1 + dt * rhs_full(q1, p));
  q2.E = leray_project(q2.E);
  q2.B = leray_project(q2.B);
  CHECK(state_distance(got, q2) <= 1e-14 * state_distance(s, rest_state(g)));
}

TEST_CASE("manufactured solutions converge at second order") {
  Params p;
  p.kappa = 1.0;
  const Grid g = line();
  const auto full = nsmtest::full_manufactured_order(p, g, 7, 0.5);
  for (double q : full.orders) CHECK((q >= 1.8 && q <= 2.2));
  const auto limit = nsmtest::limit_manufactured_order(p, g, 7, 0.5);
  for (double q : limit.orders) CHECK((q >= 1.8 && q <= 2.2));
}

TEST_CASE("limit step against an analytic source") {
  // n = 1 + 0.1 sin(x+t), u = (0.1 cos x e^{-t}, 0, 0) with γ = 2; the
  // source is the hand-computed defect of the limit system.
  Params p;
  p.pressure.gamma = 2.0;
  p.lambda = 0.02;
  const Grid g = line(64);
  const double c1 = 1.0 / (1.0 + p.epsilon), cp = p.pressure_coefficient();
  const double visc = 2.0 * p.mu + p.lambda;

  auto exact = [&](double t) {
    LimitState s{ScalarField::sample(g, [t](double x, double, double) { return 1.0 + 0.1 * std::sin(x + t); }),
                 VectorField(g)};
    s.u0[0] = ScalarField::sample(g, [t](double x, double, double) { return 0.1 * std::cos(x) * std::exp(-t); });
    return s;
  };
  auto source = [&](double t) {
    LimitState f{ScalarField(g), VectorField(g)};
    f.n0 = ScalarField::sample(g, [&](double x, double, double) {
      const double n = 1.0 + 0.1 * std::sin(x + t), nx = 0.1 * std::cos(x + t);
      const double u = 0.1 * std::cos(x) * std::exp(-t), ux = -0.1 * std::sin(x) * std::exp(-t);
      return nx - (-c1 * (nx * u + n * ux));
    });
    f.u0[0] = ScalarField::sample(g, [&](double x, double, double) {
      const double n = 1.0 + 0.1 * std::sin(x + t), nx = 0.1 * std::cos(x + t);
      const double u = 0.1 * std::cos(x) * std::exp(-t), ux = -0.1 * std::sin(x) * std::exp(-t), uxx = -u;
      const double ndot = -c1 * (nx * u + n * ux);
      const double mdot = -c1 * (nx * u * u + 2.0 * n * u * ux) + visc * uxx - cp * 2.0 * n * nx;
      return -u - (mdot - u * ndot) / n;
    });
    return f;
  };

  double prev = 0.0;
  for (double dt : {0.02, 0.01, 0.005}) {
    LimitStepper st(p, 1.0);
    st.set_forcing(source);
    const double t0 = 0.3;
    const double err = state_distance(st.step(exact(t0), t0, dt), exact(t0 + dt));
    if (prev > 0.0) CHECK(prev / err >= 6.0);
    prev = err;
  }
  CHECK(prev < 1e-7);
}

TEST_CASE("acoustic oscillation frequency") {
  // Linearizing about (1, 0): n_tt = (η P'(1)/τ) n_xx, so sin x oscillates
  // at ω = sqrt(η P'(1)/τ).
  Params p;
  p.mu = p.lambda = 0.0;
  const Grid g = line(32);
  const double omega = std::sqrt(p.eta * p.pressure.dpressure(1.0) / p.tau);
  const auto sinx = ScalarField::sample(g, [](double x, double, double) { return std::sin(x); });
  LimitState s{ScalarField(g, 1.0) + 1e-4 * sinx, VectorField(g)};
  LimitStepper st(p, 1.0);
  const double dt = 0.01;
  const int steps = static_cast<int>(6 * 2 * pi / omega / dt);
  std::vector<double> a;
  for (int i = 0; i < steps; ++i) {
    a.push_back(inner(s.n0 - ScalarField(g, 1.0), sinx) / pi);
    s = st.step(s, i * dt, dt);
  }
  // Hann-windowed DFT magnitude scanned on a fine frequency grid.
  double best = 0.0, best_w = 0.0;
  for (double w = 0.5; w < 2.5; w += 1e-4) {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double win = 0.5 - 0.5 * std::cos(2 * pi * i / (steps - 1));
      acc += win * a[i] * std::exp(std::complex<double>(0.0, -w * i * dt));
    }
    if (std::abs(acc) > best) best = std::abs(acc), best_w = w;
  }
  CHECK(best_w == doctest::Approx(omega).epsilon(0.02));
}

TEST_CASE("one step transports density at the scaled velocity") {
  // With no pressure or viscosity and constant u0, n0(x, t) = n0(x - u0 t/(1+ε)).
  Params p;
  p.mu = p.lambda = 0.0;
  p.pressure.amplitude = 0.0;
  const Grid g = line(64);
  const double c = 0.7, speed = c / (1.0 + p.epsilon);
  auto profile = [&](double t) {
    return ScalarField::sample(g, [&](double x, double, double) { return 1.0 + 0.2 * std::sin(x - speed * t); });
  };
  double prev = 0.0;
  for (double dt : {0.04, 0.02}) {
    LimitState s{profile(0.0), VectorField(g)};
    s.u0[0] = ScalarField(g, c);
    const LimitState r = step_limit(s, p, 0.0, dt);
    const double err = (r.n0 - profile(dt)).max_abs();
    CHECK(err < dt * dt);
    if (prev > 0.0) CHECK(prev / err >= 6.0);
    prev = err;
  }
}

TEST_CASE("evolve") {
  const Grid g = line();
  Params p;
  p.kappa = 0.1;
  const FullState s0 = well_prepared(g, p.kappa);
  FullStepper st(p, s0.n.mean());

  SUBCASE("zero end time returns the initial state without observations") {
    StepControl sc;
    sc.t_end = 0.0;
    int calls = 0;
    const auto tr = evolve(s0, sc, st, [&](const FullState&, double, std::size_t) { ++calls; });
    CHECK(calls == 0);
    CHECK(tr.steps == 0);
    CHECK(state_distance(tr.state, s0) == 0.0);
  }
  SUBCASE("stride and final time") {
    StepControl sc;
    sc.dt = 0.003;
    sc.t_end = 0.05;
    sc.stride = 4;
    std::vector<double> times;
    const auto tr = evolve(s0, sc, st, [&](const FullState&, double t, std::size_t) { times.push_back(t); });
    CHECK(tr.steps == 17);
    CHECK(tr.t == 0.05);
    REQUIRE(times.size() == 5);
    CHECK(times.back() == 0.05);
    CHECK(times[0] == doctest::Approx(0.012));
  }
  SUBCASE("identical inputs give identical states") {
    StepControl sc;
    sc.dt = 0.002;
    sc.t_end = 0.02;
    FullStepper other(p, s0.n.mean());
    const auto a = evolve(s0, sc, st, [](const FullState&, double, std::size_t) {});
    const auto b = evolve(s0, sc, other, [](const FullState&, double, std::size_t) {});
    CHECK(a.state.J[1].values() == b.state.J[1].values());
    CHECK(a.state.n.values() == b.state.n.values());
  }
  SUBCASE("halving dt shrinks the difference four-fold") {
    StepControl sc;
    sc.t_end = 0.2;
    std::vector<FullState> finals;
    for (double dt : {0.02, 0.01, 0.005}) {
      sc.dt = dt;
      FullStepper fresh(p, s0.n.mean());
      finals.push_back(evolve(s0, sc, fresh, [](const FullState&, double, std::size_t) {}).state);
    }
    const double d1 = state_distance(finals[0], finals[1]), d2 = state_distance(finals[1], finals[2]);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.1));
  }
  SUBCASE("adaptive mode respects the advective limit") {
    StepControl sc;
    sc.mode = StepMode::adaptive;
    sc.dt = 1.0;
    sc.cfl = 0.5;
    sc.t_end = 0.3;
    const auto tr = evolve(s0, sc, st, [](const FullState&, double, std::size_t) {});
    CHECK(tr.steps >= static_cast<std::size_t>(0.3 / (0.5 * g.spacing())));
  }
}

TEST_CASE("runs are stable uniformly in kappa and keep the invariants") {
  const Grid g = line(64);
  StepControl sc;
  sc.dt = 2e-3;
  sc.t_end = 0.1;
  for (double kappa : {1.0, 0.1, 0.01}) {
    Params p;
    p.kappa = kappa;
    const FullState s0 = well_prepared(g, kappa);
    FullStepper st(p, s0.n.mean());
    const double mass0 = s0.n.integral();
    double worst_div = 0.0, worst_mass = 0.0;
    const auto tr = evolve(s0, sc, st, [&](const FullState& s, double, std::size_t) {
      const double tol = 1.0 + s.E.max_abs() + s.B.max_abs();
      worst_div = std::max({worst_div, divergence(s.E).max_abs() / tol, divergence(s.B).max_abs() / tol});
      worst_mass = std::max(worst_mass, std::abs(s.n.integral() - mass0) / mass0);
    });
    CHECK(tr.state.all_finite());
    CHECK(worst_div <= 1e-10);
    CHECK(worst_mass <= 1e-10);
    CHECK(hypothesis_norm(tr.state, LimitState{s0.n, s0.u}, 4.0) < 10.0);
  }
}

TEST_CASE("non-finite values are reported as blow-up") {
  const Grid g = line();
  FullState s = rest_state(g);
  s.u[0][5] = std::nan("");
  CHECK_THROWS_WITH_AS(step_full(s, Params{}, 0.25, 0.01), doctest::Contains("blow-up detected at t"), BlowUp);
}

TEST_CASE("step control validation") {
  StepControl sc;
  CHECK_NOTHROW(sc.validate());
  sc.dt = 0.0;
  CHECK_THROWS_AS(sc.validate(), ConfigError);
  sc.dt = 1e-3;
  sc.cfl = 1.5;
  CHECK_THROWS_AS(sc.validate(), ConfigError);
}
